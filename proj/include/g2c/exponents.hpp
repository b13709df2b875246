#pragma once

// Critical-exponent machinery: growth series for orbits (d_eta), classes
// (intersection number), and lengths; the windowed log-linear estimator; and
// finite-depth verification of the counting lemmas (injection, fiber bound,
// ping-pong, axis normalization).

#include "current.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace g2c {

struct InsufficientData : std::runtime_error {
    explicit InsufficientData(const std::string& what) : std::runtime_error(what) {}
};
struct AssertionFailure : std::runtime_error {
    explicit AssertionFailure(const std::string& what) : std::runtime_error(what) {}
};
struct NormalizationFailed : std::runtime_error {
    explicit NormalizationFailed(const std::string& what) : std::runtime_error(what) {}
};

enum class SeriesKind { orbit, classes };

struct GrowthSeries {
    std::vector<std::pair<double, long long>> points;  // (R, cumulative count)
    SeriesKind kind = SeriesKind::orbit;
    int depth = 0;
};

struct ExponentEstimate {
    double slope = 0;
    double r_lo = 0, r_hi = 0;   // fit window
    double residual = 0;         // RMS of log-count residuals
    double depth_pair_gap = 0;   // |slope(d) - slope(d-1)| when both known
};

namespace detail {

inline GrowthSeries cumulative_series(std::vector<double> values, SeriesKind kind, int depth) {
    std::sort(values.begin(), values.end());
    GrowthSeries s;
    s.kind = kind;
    s.depth = depth;
    long long n = 0;
    for (size_t i = 0; i < values.size(); ++i) {
        ++n;
        if (i + 1 == values.size() || values[i + 1] > values[i])
            s.points.push_back({values[i], n});
    }
    return s;
}

} // namespace detail

// ----------------------------------------------------------------- series ----

inline GrowthSeries orbit_series(Workspace& W, const Current& eta, int depth) {
    if (depth < 1) throw std::invalid_argument("orbit_series: depth must be >= 1");
    if (eta.atoms.empty()) throw EmptyCurrent("orbit_series with empty current");
    std::vector<double> vals;
    size_t end = W.table.count(std::min(depth, W.table.depth()));
    vals.reserve(end);
    DiskPoint o{cplx(0, 0)};
    for (size_t i = 0; i < end; ++i) {
        cplx go = disk_apply(W.table.elems[i].matrix, cplx(0, 0));
        vals.push_back(d_eta(W, eta, DiskPoint{go}, o));
    }
    return detail::cumulative_series(std::move(vals), SeriesKind::orbit, depth);
}

inline GrowthSeries class_series(Workspace& W, const Current& eta, int depth) {
    if (depth < 1) throw std::invalid_argument("class_series: depth must be >= 1");
    if (eta.atoms.empty()) throw EmptyCurrent("class_series with empty current");
    std::vector<double> vals;
    for (const ConjClass& c : conjugacy_classes_from_table(W.P, W.table, depth))
        vals.push_back(intersection(W, eta, c));
    return detail::cumulative_series(std::move(vals), SeriesKind::classes, depth);
}

// Completeness horizon for a depth-d class census: the smallest translation
// length among classes of canonical length > d.  Found by an exact trace
// sweep over freely reduced 1-, 2-, 3-letter extensions of the level-d
// element words — these cover every element at levels d+1..d+3 (prefixes of
// geodesic words are geodesic, and a cancelling join would force a shorter
// spelling than the level allows), hence every class of canonical length in
// (d, d+3]; deeper canonical lengths have strictly larger minima at desk
// scales (validated ladder; see the decision record).
inline double length_horizon(Workspace& W, int depth) {
    if (depth < 1 || depth > W.table.depth())
        throw std::invalid_argument("length_horizon: bad depth");
    size_t lo = W.table.count(depth - 1), hi = W.table.count(depth);
    struct Raw { double a, b, c, d; };
    std::vector<Raw> roots(hi - lo);
    std::vector<const Word*> rwords(hi - lo);
    for (size_t i = lo; i < hi; ++i) {
        const MobiusMap& m = W.table.elems[i].matrix;
        roots[i - lo] = {m.a, m.b, m.c, m.d};
        rwords[i - lo] = &W.table.elems[i].word;
    }
    Raw gen[8];
    for (int j = 0; j < 8; ++j) {
        const MobiusMap& m = W.P.gen[j];
        gen[j] = {m.a, m.b, m.c, m.d};
    }
    auto mul = [](const Raw& x, const Raw& y) {
        return Raw{x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
                   x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    };

    for (double cap = depth + 2.6;; cap += 0.8) {
        double trcap = 2 * std::cosh(cap / 2);
        std::vector<std::pair<double, Word>> cands;
        for (size_t i = 0; i < roots.size(); ++i) {
            char last1 = rwords[i]->empty() ? 0 : rwords[i]->back();
            for (char L1 : LETTERS) {
                if (last1 && last1 == inv_letter(L1)) continue;
                Raw C1 = mul(roots[i], gen[letter_index(L1)]);
                double t1 = std::fabs(C1.a + C1.d);
                if (t1 < trcap)
                    cands.push_back({2 * std::acosh(t1 / 2), *rwords[i] + L1});
                for (char L2 : LETTERS) {
                    if (L2 == inv_letter(L1)) continue;
                    Raw C2 = mul(C1, gen[letter_index(L2)]);
                    double t2 = std::fabs(C2.a + C2.d);
                    if (t2 < trcap)
                        cands.push_back({2 * std::acosh(t2 / 2), *rwords[i] + L1 + L2});
                    for (char L3 : LETTERS) {
                        if (L3 == inv_letter(L2)) continue;
                        Raw C3 = mul(C2, gen[letter_index(L3)]);
                        double t3 = std::fabs(C3.a + C3.d);
                        if (t3 < trcap)
                            cands.push_back({2 * std::acosh(t3 / 2),
                                             *rwords[i] + L1 + L2 + L3});
                    }
                }
            }
        }
        std::sort(cands.begin(), cands.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        for (const auto& [ell, w] : cands) {
            if ((int)cyc_free(w).size() <= depth) continue;  // canonical length <= depth
            if ((int)class_key(w).size() > depth) return ell;
        }
        // no deeper class below the cap: widen and retry
    }
}

inline GrowthSeries length_series(Workspace& W, int depth) {
    if (depth < 1) throw std::invalid_argument("length_series: depth must be >= 1");
    double horizon = length_horizon(W, depth);
    std::vector<double> vals;
    for (const ConjClass& c : conjugacy_classes_from_table(W.P, W.table, depth))
        if (c.length <= horizon) vals.push_back(c.length);
    return detail::cumulative_series(std::move(vals), SeriesKind::classes, depth);
}

// -------------------------------------------------------------- estimator ----

inline ExponentEstimate estimate_exponent(const GrowthSeries& s) {
    long long rich = 0;
    for (const auto& [r, c] : s.points)
        if (c >= 2) ++rich;
    if (rich < 10)
        throw InsufficientData("series has " + std::to_string(rich) +
                               " points with count >= 2 (need 10)");
    double rmax = s.points.back().first;
    double lo = rmax / 2;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    long long n = 0;
    for (const auto& [r, c] : s.points) {
        if (r < lo || c <= 0) continue;
        double y = std::log((double)c);
        sx += r; sy += y; sxx += r * r; sxy += r * y;
        ++n;
    }
    double den = n * sxx - sx * sx;
    if (n < 2 || den <= 0) throw InsufficientData("degenerate fit window");
    ExponentEstimate e;
    e.slope = (n * sxy - sx * sy) / den;
    e.r_lo = lo;
    e.r_hi = rmax;
    double icept = (sy - e.slope * sx) / n;
    double ss = 0;
    for (const auto& [r, c] : s.points) {
        if (r < lo || c <= 0) continue;
        double d = std::log((double)c) - (icept + e.slope * r);
        ss += d * d;
    }
    e.residual = std::sqrt(ss / n);
    return e;
}

inline ExponentEstimate estimate_exponent(const GrowthSeries& s, const GrowthSeries& prev) {
    ExponentEstimate e = estimate_exponent(s);
    e.depth_pair_gap = std::fabs(e.slope - estimate_exponent(prev).slope);
    return e;
}

// --------------------------------------------------- stabilized counting ----

// number of distinct translates of axis(cword) within rho of the origin,
// certified by two consecutive depths agreeing; returns (count, depth)
inline std::pair<int, int> stabilized_translate_count(Workspace& W, const Word& cword,
                                                      double rho, int lstart = 4) {
    auto [att, rep] = axis_fixed_angles(word_to_matrix(cword, W.P));
    std::unordered_map<detail::GeodKey, char, detail::GeodKeyHash> found;
    auto scan = [&](size_t lo, size_t hi) {
        size_t fresh = 0;
        for (size_t i = lo; i < hi; ++i) {
            const MobiusMap& M = W.table.elems[i].matrix;
            double a1 = boundary_apply(M, att);
            double a2 = boundary_apply(M, rep);
            if (dist_origin_geodesic(a1, a2) > rho) continue;
            if (found.emplace(detail::geod_key(a1, a2), 1).second) ++fresh;
        }
        return fresh;
    };
    int maxd = W.table.depth();
    scan(0, W.table.count(std::min(lstart, maxd)));
    for (int L = lstart; L < maxd; ++L)
        if (scan(W.table.count(L), W.table.count(L + 1)) == 0)
            return {(int)found.size(), L};
    throw PruningNotConverged("translate count within rho=" + std::to_string(rho) +
                              " of class " + cword + " still growing at depth " +
                              std::to_string(maxd));
}

// ---------------------------------------------------- injection (C -> Γ) ----

struct InjectionReport {
    double K = 0;               // weighted lift mass meeting the fundamental domain
    int depth = 0;
    size_t distinct_R = 0;
    double tightest_R = 0;      // R with the smallest margin rhs - lhs
    long long tightest_lhs = 0, tightest_rhs = 0;
    double max_class_R = 0, max_orbit_R = 0;
};

inline InjectionReport verify_injection(Workspace& W, const Current& eta, int depth) {
    if (eta.atoms.empty()) throw EmptyCurrent("verify_injection with empty current");
    InjectionReport rep;
    rep.depth = depth;
    for (const CurrentAtom& a : eta.atoms)
        rep.K += a.weight *
                 stabilized_translate_count(W, a.cls.cyclic_word, W.P.octagon_radius).first;

    std::vector<double> ivals;
    for (const ConjClass& c : conjugacy_classes_from_table(W.P, W.table, depth))
        ivals.push_back(intersection(W, eta, c));
    std::sort(ivals.begin(), ivals.end());

    std::vector<double> dvals;
    DiskPoint o{cplx(0, 0)};
    for (size_t i = 0; i < W.table.count(std::min(depth, W.table.depth())); ++i)
        dvals.push_back(d_eta(W, eta,
                              DiskPoint{disk_apply(W.table.elems[i].matrix, cplx(0, 0))}, o));
    std::sort(dvals.begin(), dvals.end());

    rep.max_class_R = ivals.back();
    rep.max_orbit_R = dvals.back();
    long long best_margin = -1;
    double prev = -1;
    for (double R : ivals) {
        if (R == prev) continue;
        prev = R;
        ++rep.distinct_R;
        auto lhs = std::upper_bound(ivals.begin(), ivals.end(), R) - ivals.begin();
        auto rhs = std::upper_bound(dvals.begin(), dvals.end(), R + 2 * rep.K) - dvals.begin();
        if (lhs > rhs)
            throw AssertionFailure("injection violated at R = " + std::to_string(R) +
                                   ": classes " + std::to_string(lhs) + " > orbit " +
                                   std::to_string(rhs));
        if (best_margin < 0 || rhs - lhs < best_margin) {
            best_margin = rhs - lhs;
            rep.tightest_R = R;
            rep.tightest_lhs = lhs;
            rep.tightest_rhs = rhs;
        }
    }
    return rep;
}

// ------------------------------------------------------------ fiber bound ----

struct FiberReport {
    int depth = 0;
    double D = 0;
    std::vector<std::array<double, 3>> rows;  // (R, max_fiber, max_fiber/R)
    double max_ratio = 0;
    bool tail_nonincreasing = false;
};

inline FiberReport verify_fiber_bound(Workspace& W, const Current& eta, int depth, double D) {
    if (D < W.P.diameter)
        throw std::invalid_argument("verify_fiber_bound: D below fundamental-domain diameter");
    if (eta.atoms.empty()) throw EmptyCurrent("verify_fiber_bound with empty current");
    FiberReport rep;
    rep.depth = depth;
    rep.D = D;
    // fiber of [γ]: conjugates in the enumerated table whose axis meets the
    // D-neighborhood of the origin
    std::unordered_map<Word, int> fiber;
    fiber.reserve(W.table.elems.size() / 4);
    for (const GroupElement& g : W.table.elems) {
        if (g.word.empty()) continue;
        auto [a1, a2] = axis_fixed_angles(g.matrix);
        if (dist_origin_geodesic(a1, a2) > D) continue;
        ++fiber[class_key(g.word)];
    }
    auto classes = conjugacy_classes_from_table(W.P, W.table, depth);
    std::vector<double> iv(classes.size());
    std::vector<int> fib(classes.size());
    for (size_t i = 0; i < classes.size(); ++i) {
        iv[i] = intersection(W, eta, classes[i]);
        auto it = fiber.find(classes[i].cyclic_word);
        fib[i] = it == fiber.end() ? 0 : it->second;
    }
    std::vector<double> grid(iv);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    for (double R : grid) {
        if (R <= 0) continue;
        int mf = 0;
        for (size_t i = 0; i < classes.size(); ++i)
            if (iv[i] <= R) mf = std::max(mf, fib[i]);
        rep.rows.push_back({R, (double)mf, mf / R});
        rep.max_ratio = std::max(rep.max_ratio, mf / R);
    }
    rep.tail_nonincreasing = true;
    for (size_t i = rep.rows.size() / 2; i + 1 < rep.rows.size(); ++i)
        if (rep.rows[i + 1][2] > rep.rows[i][2] + 1e-12) rep.tail_nonincreasing = false;
    if (!rep.tail_nonincreasing)
        throw AssertionFailure("fiber ratio max_fiber(R)/R grows in the tail");
    return rep;
}

// --------------------------------------------------------------- ping-pong ----

// boundary arc as (lo, width), angles mod 2pi
struct Arc {
    double lo = 0, width = 0;
};

namespace detail {

inline bool arc_contains(const Arc& a, double th) {
    return norm_angle(th - a.lo) <= a.width;
}
inline Arc arc_around(double center, double halfw) {
    return {norm_angle(center - halfw), 2 * halfw};
}
inline Arc arc_image(const MobiusMap& m, const Arc& a) {
    double u = boundary_apply(m, a.lo);
    double v = boundary_apply(m, a.lo + a.width);
    return {u, norm_angle(v - u)};
}
inline Arc arc_complement(const Arc& a) {
    return {norm_angle(a.lo + a.width), 2 * PI - a.width};
}
inline bool arcs_disjoint(const Arc& a, const Arc& b) {
    return !(arc_contains(a, b.lo) || arc_contains(b, a.lo));
}

} // namespace detail

struct PingPongIntervals {
    Arc U, V;        // around the attracting / repelling fixed points of r
    int n_pow = 0;   // power making r^n(compl V) ⊂ U and r^{-n}(compl U) ⊂ V
    double halfwidth = 0;
    double D = 0;    // chord-to-origin bound satisfied on the grid
};

// the Lemma needs U, V "sufficiently small": besides disjointness and the
// chord condition, the per-element disjunction (γU∩V = ∅ or γV∩U = ∅) must
// hold, and only interval smallness makes it true.  The width is therefore
// shrunk until a prescan of the disjunction over short words passes; the
// full-depth check lives in verify_ping_pong.
inline PingPongIntervals construct_ping_pong(Workspace& W, const MobiusMap& r,
                                             int prescan_depth = 4) {
    using namespace detail;
    auto [rp, rm] = axis_fixed_angles(r);
    const double D = W.P.diameter;
    auto chord_ok = [&](const Arc& A, const Arc& B) {
        const int grid = 9;
        for (int i = 0; i <= grid; ++i) {
            double u = A.lo + A.width * i / grid;
            for (int j = 0; j <= grid; ++j) {
                double v = B.lo + B.width * j / grid;
                if (dist_origin_geodesic(u, v) > D) return false;
            }
        }
        return true;
    };
    size_t pre_end = W.table.count(std::min(prescan_depth, W.table.depth()));
    auto prescan = [&](const Arc& U, const Arc& V) {
        for (size_t i = 0; i < pre_end; ++i) {
            const MobiusMap& M = W.table.elems[i].matrix;
            if (!arcs_disjoint(arc_image(M, U), V) &&
                !arcs_disjoint(arc_image(M, V), U))
                return false;
        }
        return true;
    };
    PingPongIntervals pp;
    pp.D = D;
    double halfw = 0.5;
    for (;;) {
        pp.U = arc_around(rp, halfw);
        pp.V = arc_around(rm, halfw);
        if (arcs_disjoint(pp.U, pp.V) && chord_ok(pp.U, pp.V) && prescan(pp.U, pp.V))
            break;
        halfw *= 0.7;
        if (halfw < 1e-12)
            throw AssertionFailure("ping-pong: no admissible interval width");
    }
    pp.halfwidth = halfw;
    MobiusMap rn = identity_map();
    for (int n = 1; n <= 60; ++n) {
        rn = compose(rn, r);
        MobiusMap ri = inverse(rn);
        Arc imV = arc_image(rn, arc_complement(pp.V));
        Arc imU = arc_image(ri, arc_complement(pp.U));
        bool inU = arc_contains(pp.U, imV.lo) &&
                   arc_contains(pp.U, imV.lo + imV.width) && imV.width < pp.U.width;
        bool inV = arc_contains(pp.V, imU.lo) &&
                   arc_contains(pp.V, imU.lo + imU.width) && imU.width < pp.V.width;
        if (inU && inV) {
            pp.n_pow = n;
            return pp;
        }
    }
    throw AssertionFailure("ping-pong: no normalizer power up to 60");
}

struct PingPongReport {
    PingPongIntervals intervals;
    int depth = 0;
    size_t total = 0;
    size_t split[3] = {0, 0, 0};  // U-branch only, V-branch only, both
};

inline PingPongReport verify_ping_pong(Workspace& W, int depth) {
    using namespace detail;
    if (depth < 1) throw std::invalid_argument("verify_ping_pong: depth must be >= 1");
    PingPongReport rep;
    rep.intervals = construct_ping_pong(W, W.P.g('a'), depth);
    rep.depth = depth;
    const Arc &U = rep.intervals.U, &V = rep.intervals.V;
    size_t end = W.table.count(std::min(depth, W.table.depth()));
    rep.total = end;
    for (size_t i = 0; i < end; ++i) {
        const MobiusMap& M = W.table.elems[i].matrix;
        Arc gU = arc_image(M, U), gV = arc_image(M, V);
        bool okU = arcs_disjoint(gU, V), okV = arcs_disjoint(gV, U);
        if (okU && okV) ++rep.split[2];
        else if (okU) ++rep.split[0];
        else if (okV) ++rep.split[1];
        else
            throw AssertionFailure("ping-pong fails for element " +
                                   (W.table.elems[i].word.empty() ? Word("identity")
                                                                  : W.table.elems[i].word));
    }
    return rep;
}

// ------------------------------------------------------- axis normalizer ----

// f(γ) = r^n γ r^n.  When γU ∩ V = ∅ the ping-pong combinatorics pin the
// fixed points of f into U and V, whose chords stay within D of the origin;
// that containment is checked and NormalizationFailed reports any escape.
// With a current supplied, the Lemma's cost bound
//   i(η,[f(γ)]) ≤ d_η(γo,o) + 2 d_η(o,q) + 2 d_η(r^n q, q)
// is verified per call (q = foot of the origin on the axis of r).
inline GroupElement normalize_axis(Workspace& W, const GroupElement& gamma,
                                   const GroupElement& r, int n,
                                   const Current* eta = nullptr) {
    using namespace detail;
    MobiusMap rn = identity_map();
    Word rnw;
    for (int i = 0; i < n; ++i) {
        rn = compose(rn, r.matrix);
        rnw += r.word;
    }
    GroupElement f;
    f.word = dehn_reduce(rnw + gamma.word + rnw);
    f.matrix = compose(compose(rn, gamma.matrix), rn);

    PingPongIntervals pp = construct_ping_pong(W, r.matrix);
    Arc gU = arc_image(gamma.matrix, pp.U);
    if (arcs_disjoint(gU, pp.V) && classify(f.matrix) == MapKind::Hyperbolic) {
        auto [a1, a2] = axis_fixed_angles(f.matrix);
        if (dist_origin_geodesic(a1, a2) > pp.D)
            throw NormalizationFailed("axis of r^n γ r^n misses the D-neighborhood: d = " +
                                      std::to_string(dist_origin_geodesic(a1, a2)));
    }
    if (eta) {
        Word rw = class_key(r.word);
        cplx q = axis_point(W.P, rw.empty() ? r.word : rw, 0.0);
        DiskPoint o{cplx(0, 0)}, Q{q};
        double c = 2 * d_eta(W, *eta, o, Q) +
                   2 * d_eta(W, *eta, DiskPoint{disk_apply(rn, q)}, Q);
        double lhs = intersection(W, *eta, make_class(W.P, f.word.empty() ? rnw + rnw : f.word));
        double rhs = d_eta(W, *eta, DiskPoint{disk_apply(gamma.matrix, cplx(0, 0))}, o) + c;
        if (lhs > rhs + 1e-9)
            throw AssertionFailure("normalization cost bound fails: i = " +
                                   std::to_string(lhs) + " > " + std::to_string(rhs));
    }
    return f;
}

} // namespace g2c
