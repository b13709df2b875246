#pragma once

// BFS enumeration of group elements and conjugacy classes, with the on-disk
// element cache.  Deduplication is by rounded canonical matrix entries: the
// group is discrete and cocompact, so distinct elements at desk depths are
// separated far beyond the 1e-6 rounding grid (validated against a free-group
// BFS oracle at small depth).

#include "mobius.hpp"
#include "presentation.hpp"
#include "words.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <optional>
#include <unordered_map>
#include <vector>

namespace g2c {

struct GroupElement {
    Word word;         // Dehn-reduced (geodesic) spelling
    MobiusMap matrix;  // canonical-sign product of generator matrices
};

struct ConjClass {
    Word cyclic_word;         // canonical: lex-min over rotations + inversion
    GroupElement representative;
    double length = 0;        // translation length
    Geodesic axis;
};

struct MatKey {
    int64_t a, b, c, d;
    bool operator==(const MatKey&) const = default;
};

struct MatKeyHash {
    size_t operator()(const MatKey& k) const {
        uint64_t h = 1469598103934665603ull;
        for (int64_t v : {k.a, k.b, k.c, k.d}) {
            h ^= (uint64_t)v;
            h *= 1099511628211ull;
        }
        return (size_t)h;
    }
};

inline MatKey mat_key(const MobiusMap& m) {
    return {std::llround(m.a * 1e6), std::llround(m.b * 1e6),
            std::llround(m.c * 1e6), std::llround(m.d * 1e6)};
}

// Flat BFS table: elems[0] is the identity; level_end[n] is one past the last
// element of word length n, so a depth-d slice is elems[0..level_end[d]).
struct ElementTable {
    std::vector<GroupElement> elems;
    std::vector<size_t> level_end;
    uint64_t presentation_hash = 0;

    int depth() const { return (int)level_end.size() - 1; }
    size_t count(int d) const { return level_end.at(d); }
};

inline ElementTable build_element_table(const GroupPresentation& P, int max_len) {
    ElementTable T;
    T.presentation_hash = P.hash();
    T.elems.push_back({"", identity_map()});
    T.level_end.push_back(1);
    std::unordered_map<MatKey, size_t, MatKeyHash> seen;
    seen.emplace(mat_key(identity_map()), 0);
    size_t lo = 0, hi = 1;
    for (int n = 1; n <= max_len; ++n) {
        for (size_t i = lo; i < hi; ++i) {
            for (char ch : LETTERS) {
                const Word& w = T.elems[i].word;
                if (!w.empty() && w.back() == inv_letter(ch)) continue;
                Word w2 = dehn_reduce(w + ch);
                MobiusMap m = compose(T.elems[i].matrix, P.g(ch));
                MatKey k = mat_key(m);
                if (seen.emplace(k, T.elems.size()).second)
                    T.elems.push_back({std::move(w2), m});
            }
        }
        lo = hi;
        hi = T.elems.size();
        T.level_end.push_back(hi);
    }
    return T;
}

// ---------------------------------------------------------------- cache ----

// Versioned binary cache: little-endian header (magic, version, presentation
// hash, depth, element count) followed by length-prefixed words and raw
// matrix entries.  Invalidated whenever hash or version mismatch, or when a
// deeper table is requested than was stored.
inline constexpr uint32_t CACHE_VERSION = 1;
inline constexpr char CACHE_MAGIC[8] = {'G', '2', 'C', 'E', 'L', 'E', 'M', '\0'};

inline bool save_element_cache(const std::filesystem::path& path, const ElementTable& T) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    FILE* f = std::fopen(tmp.string().c_str(), "wb");
    if (!f) return false;
    auto put = [&](const void* p, size_t n) { std::fwrite(p, 1, n, f); };
    put(CACHE_MAGIC, 8);
    uint32_t ver = CACHE_VERSION;
    put(&ver, 4);
    put(&T.presentation_hash, 8);
    uint32_t depth = (uint32_t)T.depth();
    put(&depth, 4);
    uint64_t count = T.elems.size();
    put(&count, 8);
    for (size_t e : T.level_end) {
        uint64_t v = e;
        put(&v, 8);
    }
    for (const auto& ge : T.elems) {
        uint8_t len = (uint8_t)ge.word.size();
        put(&len, 1);
        put(ge.word.data(), len);
        double m[4] = {ge.matrix.a, ge.matrix.b, ge.matrix.c, ge.matrix.d};
        put(m, 32);
    }
    bool ok = std::fclose(f) == 0;
    if (!ok) return false;
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);  // atomic publish
    return !ec;
}

inline std::optional<ElementTable> load_element_cache(const std::filesystem::path& path,
                                                      const GroupPresentation& P,
                                                      int min_depth) {
    FILE* f = std::fopen(path.string().c_str(), "rb");
    if (!f) return std::nullopt;
    auto fail = [&]() {
        std::fclose(f);
        return std::optional<ElementTable>{};
    };
    auto get = [&](void* p, size_t n) { return std::fread(p, 1, n, f) == n; };
    char magic[8];
    uint32_t ver = 0, depth = 0;
    uint64_t hash = 0, count = 0;
    if (!get(magic, 8) || std::memcmp(magic, CACHE_MAGIC, 8) != 0) return fail();
    if (!get(&ver, 4) || ver != CACHE_VERSION) return fail();
    if (!get(&hash, 8) || hash != P.hash()) return fail();
    if (!get(&depth, 4) || (int)depth < min_depth) return fail();
    if (!get(&count, 8)) return fail();
    ElementTable T;
    T.presentation_hash = hash;
    T.level_end.resize(depth + 1);
    for (auto& e : T.level_end) {
        uint64_t v;
        if (!get(&v, 8)) return fail();
        e = (size_t)v;
    }
    T.elems.reserve(count);
    for (uint64_t i = 0; i < count; ++i) {
        uint8_t len;
        if (!get(&len, 1)) return fail();
        Word w(len, ' ');
        if (len && !get(w.data(), len)) return fail();
        double m[4];
        if (!get(m, 32)) return fail();
        T.elems.push_back({std::move(w), MobiusMap{m[0], m[1], m[2], m[3]}});
    }
    std::fclose(f);
    if (T.level_end.back() != T.elems.size()) return std::nullopt;
    return T;
}

// Table with optional disk-backed reuse; empty cache path disables the cache.
inline ElementTable element_table(const GroupPresentation& P, int max_len,
                                  const std::filesystem::path& cache_path = {}) {
    if (!cache_path.empty()) {
        if (auto T = load_element_cache(cache_path, P, max_len)) return std::move(*T);
        ElementTable T = build_element_table(P, max_len);
        save_element_cache(cache_path, T);
        return T;
    }
    return build_element_table(P, max_len);
}

// ------------------------------------------------------------ public API ----

inline std::vector<GroupElement> enumerate_elements(const GroupPresentation& P, int max_len) {
    return std::move(build_element_table(P, max_len).elems);
}

inline std::vector<ConjClass> conjugacy_classes_from_table(const GroupPresentation& P,
                                                           const ElementTable& T,
                                                           int max_len) {
    std::vector<ConjClass> out;
    std::unordered_map<Word, bool> seen;
    size_t end = T.count(std::min(max_len, T.depth()));
    for (size_t i = 1; i < end; ++i) {
        Word k = class_key(T.elems[i].word);
        if (k.empty() || (int)k.size() > max_len) continue;
        if (!seen.emplace(k, true).second) continue;
        ConjClass c;
        c.cyclic_word = k;
        c.representative = {k, word_to_matrix(k, P)};
        c.length = translation_length(c.representative.matrix);
        c.axis = axis(c.representative.matrix);
        out.push_back(std::move(c));
    }
    return out;
}

inline std::vector<ConjClass> enumerate_conjugacy_classes(const GroupPresentation& P, int max_len) {
    ElementTable T = build_element_table(P, max_len);
    return conjugacy_classes_from_table(P, T, max_len);
}

} // namespace g2c
