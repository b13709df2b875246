#pragma once

// The concrete cocompact genus-2 group: side-pairing translations of the
// regular hyperbolic octagon centered at the origin with vertex angle pi/4.
// The sides are arcs of circles orthogonal to the unit circle through
// consecutive vertices rho_v e^{i(2j+1)pi/8}, rho_v = 2^{-1/4}; the pairing
// translation across one side is conjugated around by the pi/4 rotation to
// give all four generators:
//   a = s0,  b = s1^{-1},  c = s4,  d = s5^{-1},   s_k = R_k s_0 R_k^{-1},
// which satisfy the single relator a b a^{-1} b^{-1} c d c^{-1} d^{-1}.
//
// Everything here is radicals over Q, so the construction is carried out in
// quad precision (the refine path needs generator entries well below double
// roundoff) and rounded once to the double MobiusMap table.

#include "mobius.hpp"
#include "quad.hpp"
#include "words.hpp"

#include <array>
#include <cstdint>
#include <stdexcept>

namespace g2c {

struct ConstructionFailed : std::runtime_error {
    explicit ConstructionFailed(const std::string& what) : std::runtime_error(what) {}
};

inline int letter_index(char ch) {
    switch (ch) {
        case 'a': return 0; case 'b': return 1; case 'c': return 2; case 'd': return 3;
        case 'A': return 4; case 'B': return 5; case 'C': return 6; case 'D': return 7;
    }
    throw std::invalid_argument(std::string("not a generator letter: ") + ch);
}

struct GroupPresentation {
    std::array<MobiusMap, 8> gen;  // indexed by letter_index
    std::array<qmat2, 8> gen_q;    // quad twins for the refine path
    std::array<cplx, 8> gen_o;     // generator images of the origin
    Word relator{RELATOR};
    double octagon_radius = 0;     // circumradius R_F = d(o, vertex)
    double diameter = 0;           // fundamental-domain diameter 2 R_F
    DiskPoint base;                // o = 0

    const MobiusMap& g(char ch) const { return gen[letter_index(ch)]; }

    uint64_t hash() const {
        // FNV-1a over the rounded generator entries; keys the element cache
        uint64_t h = 1469598103934665603ull;
        auto mix = [&](double v) {
            int64_t r = (int64_t)std::llround(v * 1e9);
            for (int i = 0; i < 8; ++i) {
                h ^= (uint64_t)(r >> (8 * i)) & 0xff;
                h *= 1099511628211ull;
            }
        };
        for (const auto& m : gen) { mix(m.a); mix(m.b); mix(m.c); mix(m.d); }
        return h;
    }
};

namespace detail {

inline qmat2 q_from_su(qcomplex al, qcomplex be) {
    return {al.re + be.re, al.im - be.im, -(al.im + be.im), al.re - be.re};
}

inline MobiusMap round_map(const qmat2& m) {
    MobiusMap r{(double)m.a, (double)m.b, (double)m.c, (double)m.d};
    r.normalize();
    return r;
}

} // namespace detail

inline GroupPresentation standard_genus2() {
    using namespace detail;
    const qreal one = 1, two = 2;
    const qreal sq2 = qsqrt(two);
    const qreal cos8 = qsqrt(two + sq2) / 2;  // cos(pi/8)
    const qreal sin8 = qsqrt(two - sq2) / 2;  // sin(pi/8)
    const qreal rho_v = one / qsqrt(sq2);     // 2^{-1/4}, vertex radius

    // vertices adjacent to the side whose pairing we construct
    qcomplex u2{rho_v * sin8, rho_v * cos8};   // angle 3pi/8
    qcomplex w2{-rho_v * sin8, rho_v * cos8};  // angle 5pi/8

    // center m of the orthocircle through u2, w2: <m, v> = (1+|v|^2)/2
    qreal a11 = u2.re, a12 = u2.im, a21 = w2.re, a22 = w2.im;
    qreal r1 = (one + norm2(u2)) / 2, r2 = (one + norm2(w2)) / 2;
    qreal det = a11 * a22 - a12 * a21;
    qcomplex m{(r1 * a22 - r2 * a12) / det, (a11 * r2 - a21 * r1) / det};

    // the pairing translation across that side, as a disk-model map
    qreal t = one / qsqrt(norm2(m) - one);
    qcomplex ph{sq2 / 2, sq2 / 2};                       // e^{i pi/4}
    qcomplex i_ph{-ph.im, ph.re};                        // i e^{i pi/4}
    qcomplex al = i_ph * conj(m); al = {al.re * t, al.im * t};
    qcomplex be{i_ph.re * t, i_ph.im * t}; be = {-be.re, -be.im};
    qmat2 Ma = q_from_su(al, be);

    qmat2 R1{cos8, sin8, -sin8, cos8};                   // rot(pi/4) upstairs
    auto sig = [&](int k) {
        qmat2 R{1, 0, 0, 1};
        for (int i = 0; i < k; ++i) R = qmul(R, R1);
        return qmul(qmul(R, Ma), qinv(R));
    };

    GroupPresentation P;
    P.gen_q[0] = sig(0);
    P.gen_q[1] = qinv(sig(1));
    P.gen_q[2] = sig(4);
    P.gen_q[3] = qinv(sig(5));
    for (int i = 0; i < 4; ++i) P.gen_q[i + 4] = qinv(P.gen_q[i]);
    for (int i = 0; i < 8; ++i) P.gen[i] = round_map(P.gen_q[i]);
    for (int i = 0; i < 8; ++i) P.gen_o[i] = disk_apply(P.gen[i], cplx(0, 0));
    P.octagon_radius = 2 * std::atanh((double)rho_v);
    P.diameter = 2 * P.octagon_radius;

    // relator must evaluate to +-identity
    MobiusMap rel = identity_map();
    for (char ch : P.relator) rel = compose(rel, P.g(ch));
    if (!same_map(rel, identity_map(), 1e-6))
        throw ConstructionFailed("relator does not close up");

    // octagon closes up: the 8 vertex angles (between consecutive side
    // circles, measured through the radii) must sum to 2 pi
    double total = 0;
    for (int j = 0; j < 8; ++j) {
        auto vert = [&](int k) {
            double th = (2 * k + 1) * PI / 8;
            return cplx(std::cos(th), std::sin(th)) * (double)rho_v;
        };
        auto center = [&](int k) {
            // side k joins vert(1+k), vert(2+k); centers rotate with k
            double th = k * PI / 4;
            return cplx(std::cos(th), std::sin(th)) * cplx((double)m.re, (double)m.im);
        };
        cplx v = vert(j);
        cplx r1v = v - center(j - 2 < 0 ? j + 6 : j - 2);
        cplx r2v = v - center(j - 1 < 0 ? j + 7 : j - 1);
        double cosphi = (r1v.real() * r2v.real() + r1v.imag() * r2v.imag()) /
                        (std::abs(r1v) * std::abs(r2v));
        total += PI - std::acos(std::clamp(cosphi, -1.0, 1.0));
    }
    if (std::fabs(total - 2 * PI) > 1e-6)
        throw ConstructionFailed("vertex angles sum to " + std::to_string(total));

    return P;
}

inline MobiusMap word_to_matrix(const Word& w, const GroupPresentation& P) {
    MobiusMap m = identity_map();
    for (char ch : w) m = compose(m, P.g(ch));
    return m;
}

inline qmat2 word_to_qmat(const Word& w, const GroupPresentation& P) {
    qmat2 m;
    for (char ch : w) m = qmul(m, P.gen_q[letter_index(ch)]);
    return m;
}

// Greedy point location in the Dirichlet tessellation: returns the group
// word (and matrix) B with B^{-1} z inside the base octagon.  A warm start
// from a neighbouring point keeps segment walks cheap.
inline void locate(cplx z, const GroupPresentation& P, MobiusMap& B, Word& word) {
    cplx zz = disk_apply(inverse(B), z);
    for (int guard = 0;; ++guard) {
        double d0 = dist(DiskPoint{zz}, DiskPoint{cplx(0, 0)});
        int best = -1;
        double bestd = d0 - 1e-12;
        for (int i = 0; i < 8; ++i) {
            double dd = dist(DiskPoint{zz}, DiskPoint{P.gen_o[i]});
            if (dd < bestd) { best = i; bestd = dd; }
        }
        if (best < 0) return;
        B = compose(B, P.gen[best]);
        word.push_back(LETTERS[best]);
        zz = disk_apply(inverse(P.gen[best]), zz);
        if (guard > 200) throw std::runtime_error("locate: no convergence");
    }
}

} // namespace g2c
