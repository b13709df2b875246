#pragma once

// Minimal quad-precision kernel for the high-accuracy re-evaluation path.
// __float128 gives ~34 significant digits; the only transcendental the
// octagon construction needs is sqrt, which we get from a double seed plus
// two Newton steps (quadratically convergent, so 53 -> 106 -> 112 bits).
// No libquadmath dependency.

#include <cmath>
#include <cstdlib>

namespace g2c {

using qreal = __float128;

inline qreal qabs(qreal x) { return x < 0 ? -x : x; }

inline qreal qsqrt(qreal s) {
    if (s <= 0) return 0;
    qreal x = (qreal)std::sqrt((double)s);
    x = (x + s / x) / 2;
    x = (x + s / x) / 2;
    return x;
}

struct qcomplex {
    qreal re = 0, im = 0;
    qcomplex() = default;
    qcomplex(qreal r) : re(r) {}
    qcomplex(qreal r, qreal i) : re(r), im(i) {}
};

inline qcomplex operator+(qcomplex a, qcomplex b) { return {a.re + b.re, a.im + b.im}; }
inline qcomplex operator-(qcomplex a, qcomplex b) { return {a.re - b.re, a.im - b.im}; }
inline qcomplex operator*(qcomplex a, qcomplex b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline qcomplex operator*(qreal a, qcomplex b) { return {a * b.re, a * b.im}; }
inline qcomplex conj(qcomplex a) { return {a.re, -a.im}; }
inline qreal norm2(qcomplex a) { return a.re * a.re + a.im * a.im; }
inline qcomplex operator/(qcomplex a, qcomplex b) {
    qreal n = norm2(b);
    qcomplex c = a * conj(b);
    return {c.re / n, c.im / n};
}

// principal square root of a complex number, radicals only
inline qcomplex qcsqrt(qcomplex w) {
    qreal r = qsqrt(norm2(w));
    qreal u = qsqrt((r + w.re) / 2);
    qreal v = qsqrt((r - w.re) / 2);
    if (w.im < 0) v = -v;
    return {u, v};
}

// real 2x2 matrix in quad precision (SL(2,R) carriers for the refine path)
struct qmat2 {
    qreal a = 1, b = 0, c = 0, d = 1;
};

inline qmat2 qmul(const qmat2& m, const qmat2& n) {
    return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
            m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
}

inline qmat2 qinv(const qmat2& m) {
    qreal det = m.a * m.d - m.b * m.c;
    return {m.d / det, -m.b / det, -m.c / det, m.a / det};
}

} // namespace g2c
