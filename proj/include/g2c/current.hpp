#pragma once

// Discrete geodesic currents: weighted conjugacy classes, the induced
// quasi-metric d_eta, intersection numbers, and the filling probe.
//
// The core primitive counts distinct translates of a class axis crossing a
// hyperbolic segment [x,y].  Strategy:
//   * cover the segment with unit-step midpoint samples and locate each in
//     the Dirichlet tessellation (tile word B);
//   * keep a stabilized basis of translates of the axis passing within
//     BASIS_RHO of the origin; every crossing lift is B*(basis translate)
//     for some sample tile B;
//   * decide crossing by the sign of s = sinh(signed distance) from each
//     endpoint to the lift, evaluated by point transport s(p, g.A) =
//     s(g^{-1} p, A) against the fixed representative-axis pole, which keeps
//     the rounding error at DBL_EPS * cosh d(p, g.o);
//   * when an endpoint signal is inside the refine band, re-derive both
//     signals in quad precision from the words (the construction is radicals
//     over Q, so no trig is needed);
//   * deduplicate candidates exactly: coarse buckets in signed-log2 signal
//     space, then a word-level stabilizer test (the group is torsion-free,
//     so Stab(axis) = <primitive root> and equal lifts give identical
//     signal pairs).

#include "enumerate.hpp"
#include "geometry.hpp"
#include "mobius.hpp"
#include "presentation.hpp"
#include "quad.hpp"
#include "words.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <unordered_map>
#include <vector>

namespace g2c {

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};
struct NonPositiveWeight : std::runtime_error {
    explicit NonPositiveWeight(const std::string& what) : std::runtime_error(what) {}
};
struct EmptyCurrent : std::runtime_error {
    explicit EmptyCurrent(const std::string& what) : std::runtime_error(what) {}
};
struct PruningNotConverged : std::runtime_error {
    explicit PruningNotConverged(const std::string& what) : std::runtime_error(what) {}
};

struct CurrentAtom {
    double weight = 0;
    ConjClass cls;
};

struct Current {
    std::vector<CurrentAtom> atoms;  // sorted by cyclic_word, weights > 0
};

struct LiftSet {
    std::vector<std::pair<Geodesic, double>> geodesics;  // deduplicated
};

// sampling step along segments and the translate-basis radius: a crossing
// lift passes within half a step of some sample, so it lies within
// R_F + H_STEP/2 (+ slack) of that sample's tile center
inline constexpr double H_STEP = 1.0;
inline const double BASIS_RHO = std::acosh(3.0 + 2.0 * std::sqrt(2.0)) + H_STEP / 2 + 0.35;

// engine bands (see the decision record): the refine trigger is relative to
// the transport magnitude (it models double roundoff), while classification
// is absolute because s = sinh(true distance) is position-independent
inline constexpr double KERR = 1e-14;      // double roundoff per unit magnitude
inline constexpr double REFK = 1e3;        // refine within REFK of the error scale
inline constexpr double BOTH_ABS = 1e-9;   // both endpoints below: chord/hugging
inline constexpr double ON_ABS = 1e-9;     // one endpoint below: passage through it
inline constexpr double FBUCK = 0.01;      // dedupe bucket width (signed log2)

struct Translate {
    double t1 = 0, t2 = 0;  // transported axis endpoint angles
    Word w;
    MobiusMap mat;
};

struct TranslateBasis {
    std::vector<Translate> translates;
    int depth = 0;       // depth at which the set stabilized
    double att = 0, rep = 0;  // representative axis angles
    vec3 n_rep{};             // its pole
};

// ------------------------------------------------------------- workspace ----

struct Workspace {
    GroupPresentation P;
    ElementTable table;
    std::unordered_map<Word, TranslateBasis> bases;
    long long refines = 0;                         // quad re-evaluations
    std::vector<std::pair<Word, double>> nudges;   // degenerate-config log

    explicit Workspace(int depth = 7, const std::filesystem::path& cache = {})
        : P(standard_genus2()), table(element_table(P, depth, cache)) {}
};

// ------------------------------------------------------ translate basis ----

namespace detail {

struct GeodKey {
    int64_t a, b;
    bool operator==(const GeodKey&) const = default;
};
struct GeodKeyHash {
    size_t operator()(const GeodKey& k) const {
        return std::hash<int64_t>()(k.a * 1000003 + k.b);
    }
};

inline GeodKey geod_key(double t1, double t2) {
    if (t1 > t2) std::swap(t1, t2);
    return {std::llround(t1 * 1e7), std::llround(t2 * 1e7)};
}

} // namespace detail

inline const TranslateBasis& basis_for(Workspace& W, const Word& cword) {
    auto it = W.bases.find(cword);
    if (it != W.bases.end()) return it->second;

    auto [att, rep] = axis_fixed_angles(word_to_matrix(cword, W.P));
    std::unordered_map<detail::GeodKey, Translate, detail::GeodKeyHash> found;
    auto scan = [&](size_t lo, size_t hi) {
        size_t fresh = 0;
        for (size_t i = lo; i < hi; ++i) {
            const MobiusMap& M = W.table.elems[i].matrix;
            double a1 = boundary_apply(M, att);
            double a2 = boundary_apply(M, rep);
            if (dist_origin_geodesic(a1, a2) > BASIS_RHO) continue;
            if (found.emplace(detail::geod_key(a1, a2),
                              Translate{a1, a2, W.table.elems[i].word, M}).second)
                ++fresh;
        }
        return fresh;
    };

    const int lstart = 4;
    int maxd = W.table.depth();
    scan(0, W.table.count(std::min(lstart, maxd)));
    int stable = -1;
    for (int L = lstart; L < maxd; ++L) {
        if (scan(W.table.count(L), W.table.count(L + 1)) == 0) { stable = L; break; }
    }
    if (stable < 0)
        throw PruningNotConverged("translate basis for class " + cword +
                                  " still growing at depth " + std::to_string(maxd));
    TranslateBasis B;
    B.depth = stable;
    B.att = att;
    B.rep = rep;
    B.n_rep = pole(att, rep);
    B.translates.reserve(found.size());
    for (auto& [k, t] : found) B.translates.push_back(std::move(t));
    std::sort(B.translates.begin(), B.translates.end(),
              [](const Translate& x, const Translate& y) { return x.w < y.w; });
    return W.bases.emplace(cword, std::move(B)).first->second;
}

// ---------------------------------------------------------- quad refine ----

namespace detail {

struct QPole { qreal n0, n1, n2; };

inline void q_su(const qmat2& m, qcomplex& al, qcomplex& be) {
    al = {(m.a + m.d) / 2, (m.b - m.c) / 2};
    be = {(m.a - m.d) / 2, -(m.b + m.c) / 2};
}

// pole of the axis of hyperbolic R from its boundary fixed points, trig-free:
// conj(be) w^2 + (conj(al) - al) w - be = 0, roots pinned to |w| = 1
inline QPole q_axis_pole(const qmat2& R) {
    qcomplex al, be;
    q_su(R, al, be);
    qcomplex A = conj(be);
    qcomplex B = conj(al) - al;
    qcomplex C{-be.re, -be.im};
    qcomplex disc = qcsqrt(B * B - qcomplex{4, 0} * A * C);
    qcomplex twoA = A + A;
    qcomplex w1 = (qcomplex{-B.re, -B.im} + disc) / twoA;
    qcomplex w2 = (qcomplex{-B.re, -B.im} - disc) / twoA;
    qreal r1 = qsqrt(norm2(w1)), r2 = qsqrt(norm2(w2));
    w1 = {w1.re / r1, w1.im / r1};
    w2 = {w2.re / r2, w2.im / r2};
    qcomplex cw = w1 * conj(w2);
    qreal den = qreal(1) - cw.re;
    return {cw.im / den, (w1.im - w2.im) / den, (w2.re - w1.re) / den};
}

// sinh(signed dist) from x and y to g(axis of rep), all in quad precision
inline std::pair<double, double> refined_signed_dists(const GroupPresentation& P,
                                                      const Word& gword, const Word& rep,
                                                      cplx x, cplx y) {
    qmat2 g = word_to_qmat(gword, P);
    QPole n = q_axis_pole(word_to_qmat(rep, P));
    qmat2 gi = qinv(g);
    qcomplex al, be;
    q_su(gi, al, be);
    auto s_at = [&](cplx z) {
        qcomplex zz{z.real(), z.imag()};
        qcomplex w = (al * zz + be) / (conj(be) * zz + conj(al));
        qreal s = qreal(1) - norm2(w);
        qreal P0 = (qreal(1) + norm2(w)) / s;
        qreal P1 = (w.re + w.re) / s;
        qreal P2 = (w.im + w.im) / s;
        return (double)(P0 * n.n0 - P1 * n.n1 - P2 * n.n2);
    };
    return {s_at(x), s_at(y)};
}

// ------------------------------------------------------- candidate dedupe ----

inline int sbucket(double s) {
    if (s == 0.0) return 0;
    double f = std::copysign(std::fabs(s) > 1e-300 ? std::log2(std::fabs(s)) : -1000.0, s);
    return (int)std::lround(f / FBUCK);
}

struct BucketKey {
    int x, y;
    bool operator==(const BucketKey&) const = default;
};
struct BucketKeyHash {
    size_t operator()(const BucketKey& k) const {
        return std::hash<int64_t>()(((int64_t)k.x << 32) ^ (uint32_t)k.y);
    }
};

// lift candidates deduplicated exactly: coarse buckets in signed-log2 signal
// space narrow the search, then a word-level stabilizer test decides (u g1 =
// g2 on the axis  iff  g2^{-1} g1 commutes with the primitive root)
struct CandSet {
    Word prim;
    std::unordered_map<BucketKey, std::vector<size_t>, BucketKeyHash> grid;
    std::vector<Word> words;

    explicit CandSet(Word p) : prim(std::move(p)) {}

    bool add(double sx, double sy, const Word& gw) {
        BucketKey q{sbucket(sx), sbucket(sy)};
        for (int d1 = -1; d1 <= 1; ++d1) {
            for (int d2 = -1; d2 <= 1; ++d2) {
                auto it = grid.find(BucketKey{q.x + d1, q.y + d2});
                if (it == grid.end()) continue;
                for (size_t j : it->second) {
                    Word u = dehn_reduce(inv_word(words[j]) + gw);
                    if (dehn_reduce(u + prim + inv_word(u) + inv_word(prim)).empty())
                        return false;  // same geodesic reached along another path
                }
            }
        }
        grid[q].push_back(words.size());
        words.push_back(gw);
        return true;
    }
};

} // namespace detail

// ------------------------------------------------------- segment labels ----

struct TileLabel {
    MobiusMap B;
    Word bw;
};

// midpoint samples along [x,y] at step H_STEP, located in the tessellation
inline std::vector<TileLabel> segment_labels(const GroupPresentation& P, cplx x, cplx y) {
    std::vector<TileLabel> out;
    double d = dist(DiskPoint{x}, DiskPoint{y});
    MobiusMap B = identity_map();
    Word bw;
    if (d < 1e-15) {
        locate(x, P, B, bw);
        out.push_back({B, bw});
        return out;
    }
    vec3 X = hyperboloid(x), Y = hyperboloid(y);
    // interpolate between the endpoint lifts rather than flowing from one
    // end: the mixed form keeps both coefficients positive, so a sample near
    // either endpoint stays anchored to it and no cancellation occurs even
    // when the other lift has e^d-sized coordinates
    double shd = std::sinh(d);
    int n = std::max(1, (int)std::ceil(d / H_STEP));
    out.reserve(n);
    for (int k = 0; k < n; ++k) {
        double s = std::min((k + 0.5) * H_STEP, d);
        double u = std::sinh(d - s) / shd, v = std::sinh(s) / shd;
        vec3 Q{X[0] * u + Y[0] * v, X[1] * u + Y[1] * v, X[2] * u + Y[2] * v};
        locate(disk_from_hyp(Q), P, B, bw);
        out.push_back({B, bw});
    }
    return out;
}

// ------------------------------------------------------------ lift sweep ----

struct SweepResult {
    int hits = 0;
    bool boundary = false;  // some lift passed exactly through an endpoint
};

// count distinct translates of axis(cword) crossing [x,y]; the chord g_xy is
// excluded; inc_x/inc_y say whether exact endpoint passages count.  When
// `collect` is given, each counted lift's transported axis is appended.
inline SweepResult lift_sweep(Workspace& W, const Word& cword, cplx x, cplx y,
                              bool inc_x, bool inc_y,
                              const std::vector<TileLabel>* labels = nullptr,
                              std::vector<std::pair<Geodesic, double>>* collect = nullptr,
                              double weight = 1.0,
                              const Word* carrier_prim = nullptr) {
    const TranslateBasis& basis = basis_for(W, cword);
    const vec3& n_rep = basis.n_rep;
    const double att = basis.att, rep = basis.rep;

    std::vector<TileLabel> own;
    if (!labels) {
        own = segment_labels(W.P, x, y);
        labels = &own;
    }

    Word prim = prim_word(cword);
    Word prim_inv = inv_word(prim);
    detail::CandSet cands(prim);
    SweepResult res;
    for (const TileLabel& lab : *labels) {
        for (const Translate& t : basis.translates) {
            MobiusMap g = compose(lab.B, t.mat);
            MobiusMap gi = inverse(g);
            cplx zx = disk_apply(gi, x), zy = disk_apply(gi, y);
            vec3 Tx = hyperboloid(zx), Ty = hyperboloid(zy);
            double sx = mink(Tx, n_rep), sy = mink(Ty, n_rep);
            Word gw = lab.bw + t.w;
            // the segment's own carrier must be dropped by exact word
            // arithmetic: for long segments the far endpoint carries
            // cosh-amplified position noise that defeats any numeric band
            if (carrier_prim &&
                (std::fabs(sx) <= 1e-6 * Tx[0] || std::fabs(sy) <= 1e-6 * Ty[0])) {
                Word u = dehn_reduce(inv_word(gw) + *carrier_prim + gw);
                if (u == prim || u == prim_inv) continue;
            }
            if (std::fabs(sx) <= REFK * KERR * Tx[0] || std::fabs(sy) <= REFK * KERR * Ty[0]) {
                std::tie(sx, sy) = detail::refined_signed_dists(W.P, gw, cword, x, y);
                ++W.refines;
            }
            if (!cands.add(sx, sy, gw)) continue;
            double ax = std::fabs(sx), ay = std::fabs(sy);
            if (ax <= BOTH_ABS && ay <= BOTH_ABS) continue;  // the chord itself
            bool hit;
            if (ax <= ON_ABS) { res.boundary = true; hit = inc_x; }
            else if (ay <= ON_ABS) { res.boundary = true; hit = inc_y; }
            else hit = (sx > 0) != (sy > 0);
            if (hit) {
                ++res.hits;
                if (collect)
                    collect->push_back({Geodesic{boundary_apply(g, att), boundary_apply(g, rep)},
                                        weight});
            }
        }
    }
    return res;
}

// ------------------------------------------------------------ public ops ----

inline LiftSet lifts_crossing(const ConjClass& c, const Segment& s, Workspace& W) {
    if (dist(s.x, s.y) < 1e-15)
        throw std::invalid_argument("lifts_crossing: degenerate segment");
    LiftSet out;
    lift_sweep(W, c.cyclic_word, s.x.z, s.y.z, s.include_x, s.include_y,
               nullptr, &out.geodesics, 1.0);
    return out;
}

inline double d_eta(Workspace& W, const Current& eta, DiskPoint x, DiskPoint y) {
    if (eta.atoms.empty()) throw EmptyCurrent("d_eta with empty current");
    if (dist(x, y) < 1e-12) return 0.0;
    auto labels = segment_labels(W.P, x.z, y.z);
    double tot = 0;
    for (const CurrentAtom& a : eta.atoms)
        tot += a.weight * lift_sweep(W, a.cls.cyclic_word, x.z, y.z, true, true, &labels).hits;
    return tot;
}

// foot of the perpendicular from o to axis(cword), shifted by `offset`
// toward the attracting endpoint
inline cplx axis_point(const GroupPresentation& P, const Word& cword, double offset = 0.0) {
    auto [att, rep] = axis_fixed_angles(word_to_matrix(cword, P));
    vec3 n = pole(att, rep);
    vec3 O{1, 0, 0};
    double s = mink(O, n);
    vec3 F{O[0] + s * n[0], O[1] + s * n[1], O[2] + s * n[2]};
    double nf = std::sqrt(std::max(mink(F, F), 1e-300));
    for (auto& v : F) v /= nf;
    vec3 L{1, std::cos(att), std::sin(att)};
    double lf = mink(L, F);
    vec3 T{L[0] / lf - F[0], L[1] / lf - F[1], L[2] / lf - F[2]};
    double ch = std::cosh(offset), sh = std::sinh(offset);
    return disk_from_hyp({F[0] * ch + T[0] * sh, F[1] * ch + T[1] * sh, F[2] * ch + T[2] * sh});
}

// i(eta, c): weighted lift count over the half-open fundamental segment
// [x, gamma x) on the axis; x is nudged along the axis (and the retreat is
// logged) whenever some lift passes exactly through an endpoint
inline double intersection(Workspace& W, const Current& eta, const ConjClass& c) {
    if (eta.atoms.empty()) throw EmptyCurrent("intersection with empty current");
    MobiusMap M = c.representative.matrix;
    Word carrier = prim_word(c.cyclic_word);
    double off = 0.0;
    for (int attempt = 0; attempt < 10; ++attempt) {
        cplx x = axis_point(W.P, c.cyclic_word, off);
        cplx gx = disk_apply(M, x);
        auto labels = segment_labels(W.P, x, gx);
        double tot = 0;
        bool bad = false;
        for (const CurrentAtom& a : eta.atoms) {
            SweepResult r = lift_sweep(W, a.cls.cyclic_word, x, gx, true, false, &labels,
                                       nullptr, 1.0, &carrier);
            if (r.boundary) { bad = true; break; }
            tot += a.weight * r.hits;
        }
        if (!bad) return tot;
        off = 1e-6 * std::pow(2.0, attempt);
        W.nudges.push_back({c.cyclic_word, off});
    }
    throw PruningNotConverged("intersection: nudge ladder exhausted for " + c.cyclic_word);
}

inline ConjClass make_class(const GroupPresentation& P, const Word& w) {
    Word k = class_key(w);
    if (k.empty()) throw std::invalid_argument("identity has no conjugacy class");
    ConjClass c;
    c.cyclic_word = k;
    c.representative = {k, word_to_matrix(k, P)};
    c.length = translation_length(c.representative.matrix);
    c.axis = axis(c.representative.matrix);
    return c;
}

// ---------------------------------------------------------------- parsing ----

// the current carried by the class of u^n is n times the current of u's
// class (the curve runs n times around the same geodesic), so atoms are
// stored on primitive classes with multiplied weights
inline Current make_current(const GroupPresentation& P,
                            const std::vector<std::pair<double, Word>>& atoms) {
    std::map<Word, double> merged;
    for (const auto& [wgt, w] : atoms) {
        if (wgt <= 0) throw NonPositiveWeight("weight " + std::to_string(wgt));
        Word k = class_key(w);
        if (k.empty()) continue;
        Word u = prim_word(k);
        merged[class_key(u)] += wgt * (double)(k.size() / u.size());
    }
    if (merged.empty()) throw EmptyCurrent("current has no atoms");
    Current cur;
    for (const auto& [k, wgt] : merged) cur.atoms.push_back({wgt, make_class(P, k)});
    return cur;
}

inline double intersection_classes(Workspace& W, const ConjClass& c1, const ConjClass& c2) {
    return intersection(W, make_current(W.P, {{1.0, c1.cyclic_word}}), c2);
}

// file format: UTF-8 text, one atom per line `<weight> <word>`, letters
// a,b,c,d with uppercase meaning inverse, '#' starts a comment, blank lines
// ignored; duplicate classes merge by summing weights
inline Current parse_current(const std::string& text, const GroupPresentation& P) {
    std::vector<std::pair<double, Word>> atoms;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        std::istringstream ls(line);
        double wgt;
        std::string word, extra;
        if (!(ls >> wgt)) {
            ls.clear();       // failed extraction poisons the stream; reset it
            if (ls >> extra)  // non-numeric junk on a non-blank line
                throw ParseError("line " + std::to_string(lineno) + ": bad weight");
            continue;  // blank or comment-only
        }
        if (!(ls >> word))
            throw ParseError("line " + std::to_string(lineno) + ": missing word");
        if (ls >> extra)
            throw ParseError("line " + std::to_string(lineno) + ": trailing tokens");
        for (char ch : word)
            if (!is_letter(ch))
                throw ParseError("line " + std::to_string(lineno) +
                                 ": bad letter '" + std::string(1, ch) + "'");
        if (wgt <= 0)
            throw NonPositiveWeight("line " + std::to_string(lineno) + ": weight must be > 0");
        if (free_reduce(word).empty())
            throw ParseError("line " + std::to_string(lineno) + ": word is the identity");
        atoms.push_back({wgt, word});
    }
    if (atoms.empty()) throw EmptyCurrent("no atoms in current text");
    return make_current(P, atoms);
}

// ---------------------------------------------------------- filling probe ----

struct ProbeOutcome {
    bool passed = false;
    double epsilon = 0;  // minimal per-step d_eta accumulation when passed
    std::optional<Word> witness_class;       // class with zero intersection
    std::optional<std::pair<cplx, cplx>> witness_segment;
    uint64_t seed = 0;
};

// evidence, not proof: scan classes to `depth` for a zero-intersection
// witness; if none, check that d_eta accumulates along random geodesics in
// steps of length diameter+1
inline ProbeOutcome filling_probe(Workspace& W, const Current& eta, int depth,
                                  uint64_t seed = 1) {
    if (depth < 1) throw std::invalid_argument("filling_probe: depth must be >= 1");
    if (eta.atoms.empty()) throw EmptyCurrent("filling_probe with empty current");
    ProbeOutcome out;
    out.seed = seed;
    for (const ConjClass& c : conjugacy_classes_from_table(W.P, W.table, depth)) {
        if (intersection(W, eta, c) == 0.0) {
            out.witness_class = c.cyclic_word;
            return out;
        }
    }
    // properness probe along seeded random geodesics
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const double step = W.P.diameter + 1.0;
    double eps = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 8; ++trial) {
        double rr = std::tanh(uni(rng) * W.P.octagon_radius / 2);
        double ta = 2 * PI * uni(rng);
        cplx p = rr * cplx(std::cos(ta), std::sin(ta));  // random interior point
        double phi = 2 * PI * uni(rng);                  // random direction
        auto at = [&](double s) {                        // geodesic through p
            cplx q = std::tanh(s / 2) * cplx(std::cos(phi), std::sin(phi));
            return (q + p) / (1.0 + std::conj(p) * q);
        };
        for (int k = -2; k < 2; ++k) {
            cplx x = at(k * step), y = at((k + 1) * step);
            double v = d_eta(W, eta, DiskPoint{x}, DiskPoint{y});
            if (v <= 0) {
                out.witness_segment = {x, y};
                return out;
            }
            eps = std::min(eps, v);
        }
    }
    out.passed = true;
    out.epsilon = eps;
    return out;
}

} // namespace g2c
