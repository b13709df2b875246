#pragma once

// Words in the genus-2 surface group <a,b,c,d | [a,b][c,d]>.  Letters are
// a,b,c,d with uppercase meaning inverse.  The single relator of length 8
// satisfies the C'(1/6)-style small cancellation property surface relators
// enjoy, so Dehn's algorithm (replace any subword that is more than half of
// a cyclic rotation of the relator or its inverse) solves the word problem:
// a word represents the identity iff it Dehn-reduces to the empty word.

#include <algorithm>
#include <set>
#include <string>
#include <vector>

namespace g2c {

using Word = std::string;

inline constexpr std::string_view LETTERS = "abcdABCD";
inline constexpr std::string_view RELATOR = "abABcdCD";

inline char inv_letter(char ch) {
    return (ch >= 'a' && ch <= 'z') ? (char)(ch - 'a' + 'A') : (char)(ch - 'A' + 'a');
}

inline bool is_letter(char ch) {
    return LETTERS.find(ch) != std::string_view::npos;
}

inline Word free_reduce(const Word& w) {
    Word out;
    out.reserve(w.size());
    for (char ch : w) {
        if (!out.empty() && out.back() == inv_letter(ch))
            out.pop_back();
        else
            out.push_back(ch);
    }
    return out;
}

inline Word inv_word(const Word& w) {
    Word out;
    out.reserve(w.size());
    for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(inv_letter(*it));
    return out;
}

// the 16 cyclic rotations of the relator and of its inverse
inline const std::vector<Word>& relator_rotations() {
    static const std::vector<Word> rots = [] {
        std::vector<Word> v;
        Word r{RELATOR};
        Word ri = inv_word(r);
        for (int i = 0; i < 8; ++i) {
            v.push_back(r.substr(i) + r.substr(0, i));
            v.push_back(ri.substr(i) + ri.substr(0, i));
        }
        return v;
    }();
    return rots;
}

inline Word dehn_reduce(Word w) {
    w = free_reduce(w);
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t m : {7u, 6u, 5u}) {
            if (w.size() < m) continue;
            for (const Word& rho : relator_rotations()) {
                size_t i = w.find(rho.substr(0, m));
                if (i != Word::npos) {
                    // replace the long piece by the inverse of the complement
                    w = free_reduce(w.substr(0, i) + inv_word(rho.substr(m)) + w.substr(i + m));
                    changed = true;
                    break;
                }
            }
            if (changed) break;
        }
    }
    return w;
}

inline bool same_element(const Word& u, const Word& v) {
    return dehn_reduce(inv_word(u) + v).empty();
}

// cyclically free-reduced form
inline Word cyc_free(Word w) {
    w = free_reduce(w);
    while (w.size() >= 2 && w.front() == inv_letter(w.back())) {
        w = free_reduce(w.substr(1, w.size() - 2));
    }
    return w;
}

// cyclic Dehn reduction: also collapse relator pieces that wrap around
inline Word cyc_dehn(Word w) {
    w = cyc_free(w);
    bool changed = true;
    while (changed && !w.empty()) {
        changed = false;
        size_t n = w.size();
        Word dw = w + w;
        for (size_t m : {7u, 6u, 5u}) {
            if (n < m) continue;
            for (const Word& rho : relator_rotations()) {
                Word pre = rho.substr(0, m);
                for (size_t i = 0; i < n && !changed; ++i) {
                    if (dw.compare(i, m, pre) == 0) {
                        Word rest = dw.substr(i + m, n - m);
                        w = cyc_free(rest + inv_word(rho.substr(m)));
                        changed = true;
                    }
                }
                if (changed) break;
            }
            if (changed) break;
        }
    }
    return w;
}

// Canonical conjugacy key: lexicographically smallest word in the closure of
// the cyclically-Dehn-reduced word under rotation, inversion (classes are
// unoriented) and half-relator swaps, restarting whenever a shorter word
// appears.  Two words are conjugate (up to inversion) iff keys match.
inline Word class_key(const Word& w_in) {
    Word w = cyc_dehn(w_in);
    if (w.empty()) return "";
    std::set<Word> seen;
    std::vector<Word> frontier{w};
    size_t best_len = w.size();
    while (!frontier.empty()) {
        std::vector<Word> next;
        for (const Word& u : frontier) {
            if (seen.count(u)) continue;
            if (u.size() < best_len) return class_key(u);
            seen.insert(u);
            size_t n = u.size();
            for (size_t i = 0; i < n; ++i) {
                Word r = u.substr(i) + u.substr(0, i);
                if (!seen.count(r)) next.push_back(r);
            }
            Word iu = inv_word(u);
            if (!seen.count(iu)) next.push_back(iu);
            if (n >= 4) {
                Word du = u + u;
                for (const Word& rho : relator_rotations()) {
                    Word pre = rho.substr(0, 4);
                    for (size_t i = 0; i < n; ++i) {
                        if (du.compare(i, 4, pre) == 0) {
                            Word v = cyc_free(du.substr(i + 4, n - 4) + inv_word(rho.substr(4)));
                            if (!seen.count(v)) next.push_back(v);
                        }
                    }
                }
            }
        }
        frontier = std::move(next);
    }
    return *seen.begin();
}

// smallest cyclic period of w (primitive root of a class word)
inline Word prim_word(const Word& w) {
    for (size_t p = 1; p <= w.size(); ++p) {
        if (w.size() % p) continue;
        bool ok = true;
        for (size_t i = p; i < w.size() && ok; ++i)
            if (w[i] != w[i - p]) ok = false;
        if (ok) return w.substr(0, p);
    }
    return w;
}

} // namespace g2c
