#pragma once

// Hyperbolic plane primitives.  Isometries are real 2x2 matrices acting on
// the upper half-plane by linear fractional maps; everything user-facing is
// expressed in Poincaré disk coordinates through a fixed Cayley conjugation
//   half-plane w  <->  disk z = (w - i)/(w + i).
// The matrix entries are kept at det = 1 and the pair {M, -M} denotes one
// map, with the sign canonicalized by the trace.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace g2c {

inline constexpr double PI = 3.14159265358979323846;

// Boundary comparisons use this angular tolerance throughout.  The value is
// a modelling choice (no canonical scale exists for it); the CLI can widen
// or tighten it per run.
inline double angle_tol = 1e-9;

struct NotHyperbolic : std::runtime_error {
    explicit NotHyperbolic(const std::string& what) : std::runtime_error(what) {}
};

using cplx = std::complex<double>;

struct DiskPoint {
    cplx z{0.0, 0.0};
    DiskPoint() = default;
    DiskPoint(cplx p) : z(p) {}
    DiskPoint(double re, double im) : z(re, im) {}
    bool valid() const { return std::abs(z) < 1.0 - 1e-12; }
};

inline double norm_angle(double t) {
    t = std::fmod(t, 2 * PI);
    return t < 0 ? t + 2 * PI : t;
}

// unoriented complete geodesic: unordered pair of distinct boundary angles,
// stored sorted so equality is well defined
struct Geodesic {
    double t1 = 0, t2 = 0;
    Geodesic() = default;
    Geodesic(double a, double b) {
        a = norm_angle(a);
        b = norm_angle(b);
        if (a > b) std::swap(a, b);
        t1 = a;
        t2 = b;
    }
    double separation() const {
        double d = t2 - t1;
        return std::min(d, 2 * PI - d);
    }
};

struct Segment {
    DiskPoint x, y;
    bool include_x = true, include_y = true;
};

enum class MapKind { Identity, Elliptic, Parabolic, Hyperbolic };

struct MobiusMap {
    // real entries, det = 1, trace canonically >= 0 (tie broken on a, then b)
    double a = 1, b = 0, c = 0, d = 1;

    double tr() const { return a + d; }

    void normalize() {
        double det = a * d - b * c;
        double s = std::sqrt(std::fabs(det));
        a /= s; b /= s; c /= s; d /= s;
        double t = a + d;
        bool flip = t < 0;
        if (t == 0) flip = a < 0 || (a == 0 && b < 0);
        if (flip) { a = -a; b = -b; c = -c; d = -d; }
    }
};

inline MobiusMap identity_map() { return {}; }

inline MobiusMap compose(const MobiusMap& m, const MobiusMap& n) {
    MobiusMap r{m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
                m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
    r.normalize();
    return r;
}

inline MobiusMap inverse(const MobiusMap& m) {
    MobiusMap r{m.d, -m.b, -m.c, m.a}; // adjugate; det is already 1
    r.normalize();
    return r;
}

inline bool same_map(const MobiusMap& m, const MobiusMap& n, double tol = 1e-9) {
    // both are sign-canonicalized, so compare entries directly
    return std::fabs(m.a - n.a) <= tol && std::fabs(m.b - n.b) <= tol &&
           std::fabs(m.c - n.c) <= tol && std::fabs(m.d - n.d) <= tol;
}

inline MapKind classify(const MobiusMap& m) {
    double t = std::fabs(m.tr());
    if (std::fabs(m.b) <= 1e-9 && std::fabs(m.c) <= 1e-9 &&
        std::fabs(m.a - m.d) <= 1e-9 && std::fabs(t - 2) <= 1e-9)
        return MapKind::Identity;
    if (t > 2 + 1e-9) return MapKind::Hyperbolic;
    if (t < 2 - 1e-9) return MapKind::Elliptic;
    return MapKind::Parabolic;
}

inline double translation_length(const MobiusMap& m) {
    if (classify(m) != MapKind::Hyperbolic)
        throw NotHyperbolic("translation_length: |tr| = " + std::to_string(std::fabs(m.tr())));
    return 2 * std::acosh(std::fabs(m.tr()) / 2);
}

// ---- Cayley-conjugated action on the disk --------------------------------
// For M in SL(2,R) the conjugated disk map is z -> (al z + be)/(conj(be) z +
// conj(al)) with al = ((a+d) + (b-c)i)/2, be = ((a-d) - (b+c)i)/2.

inline void su_coeffs(const MobiusMap& m, cplx& al, cplx& be) {
    al = cplx((m.a + m.d) / 2, (m.b - m.c) / 2);
    be = cplx((m.a - m.d) / 2, -(m.b + m.c) / 2);
}

inline cplx disk_apply(const MobiusMap& m, cplx z) {
    cplx al, be;
    su_coeffs(m, al, be);
    return (al * z + be) / (std::conj(be) * z + std::conj(al));
}

inline DiskPoint apply(const MobiusMap& m, const DiskPoint& p) {
    return DiskPoint{disk_apply(m, p.z)};
}

inline double boundary_apply(const MobiusMap& m, double theta) {
    cplx al, be;
    su_coeffs(m, al, be);
    cplx w = std::polar(1.0, theta);
    cplx r = (al * w + be) / (std::conj(be) * w + std::conj(al));
    return norm_angle(std::arg(r));
}

// attracting and repelling boundary fixed angles of a hyperbolic map, from
// the real eigen-directions of the half-plane matrix
inline std::pair<double, double> axis_fixed_angles(const MobiusMap& m_in) {
    MobiusMap m = m_in;
    double t = m.tr();
    if (t < 0) { m.a = -m.a; m.b = -m.b; m.c = -m.c; m.d = -m.d; t = -t; }
    if (t <= 2)
        throw NotHyperbolic("axis: |tr| = " + std::to_string(t));
    double disc = std::sqrt(t * t - 4);
    auto fixed = [&](double lam) {
        // eigenvector of the larger/smaller eigenvalue, as a boundary point
        double v0a = m.b, v1a = lam - m.a;
        double v0b = lam - m.d, v1b = m.c;
        double v0, v1;
        if (std::max(std::fabs(v0a), std::fabs(v1a)) >=
            std::max(std::fabs(v0b), std::fabs(v1b))) {
            v0 = v0a; v1 = v1a;
        } else {
            v0 = v0b; v1 = v1b;
        }
        if (std::fabs(v1) < 1e-300 * std::fabs(v0)) return 0.0; // infinity -> angle 0
        double x = v0 / v1;
        cplx zb = (cplx(x, 0) - cplx(0, 1)) / (cplx(x, 0) + cplx(0, 1));
        return norm_angle(std::arg(zb));
    };
    return {fixed((t + disc) / 2), fixed((t - disc) / 2)};  // attracting, repelling
}

inline Geodesic axis(const MobiusMap& m) {
    auto [att, rep] = axis_fixed_angles(m);
    return Geodesic(att, rep);
}

// ---- distances -----------------------------------------------------------

inline double dist(const DiskPoint& p, const DiskPoint& q) {
    double num = std::abs(p.z - q.z);
    double den = std::abs(1.0 - std::conj(p.z) * q.z);
    return 2 * std::atanh(num / den);
}

inline bool ang_close(double a, double b, double tol) {
    double d = std::fabs(norm_angle(a) - norm_angle(b));
    return std::min(d, 2 * PI - d) <= tol;
}

// true iff the endpoints strictly interleave on the circle; any shared
// endpoint (within angle_tol) is declared non-transverse
inline bool cross(const Geodesic& g, const Geodesic& h) {
    if (ang_close(g.t1, h.t1, angle_tol) || ang_close(g.t1, h.t2, angle_tol) ||
        ang_close(g.t2, h.t1, angle_tol) || ang_close(g.t2, h.t2, angle_tol))
        return false;
    auto inside = [&](double t) {
        // strictly inside the arc (g.t1, g.t2) going counterclockwise
        double u = norm_angle(t - g.t1);
        double w = g.t2 - g.t1;
        return u > 0 && u < w;
    };
    return inside(h.t1) != inside(h.t2);
}

} // namespace g2c
