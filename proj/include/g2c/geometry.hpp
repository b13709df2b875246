#pragma once

// Hyperboloid-model helpers and the segment-crossing predicate.  A point of
// the disk embeds as P = ((1+|z|^2), 2 Re z, 2 Im z)/(1-|z|^2) on the
// hyperboloid <P,P> = 1 (signature +--), and a geodesic with boundary angles
// (t1, t2) has a unit spacelike pole n with <P, n> = sinh of the signed
// distance from P to the geodesic.  All crossing decisions reduce to signs
// of such products, which stay well conditioned where the angles do not.

#include "mobius.hpp"

#include <array>
#include <vector>

namespace g2c {

using vec3 = std::array<double, 3>;

inline vec3 hyperboloid(cplx z) {
    double s = 1 - std::norm(z);
    return {(1 + std::norm(z)) / s, 2 * z.real() / s, 2 * z.imag() / s};
}

inline cplx disk_from_hyp(const vec3& p) {
    return cplx(p[1], p[2]) / (1 + p[0]);
}

inline double mink(const vec3& p, const vec3& q) {
    return p[0] * q[0] - p[1] * q[1] - p[2] * q[2];
}

// unit spacelike pole of the geodesic with boundary angles t1, t2
inline vec3 pole(double t1, double t2) {
    double d = t1 - t2;
    double den = 1 - std::cos(d);
    return {std::sin(d) / den,
            (std::sin(t1) - std::sin(t2)) / den,
            (std::cos(t2) - std::cos(t1)) / den};
}

inline double dist_point_geodesic(const DiskPoint& p, const Geodesic& g) {
    vec3 n = pole(g.t1, g.t2);
    return std::asinh(std::fabs(mink(hyperboloid(p.z), n)));
}

inline double dist_origin_geodesic(double t1, double t2) {
    return std::asinh(std::fabs(pole(t1, t2)[0]));
}

// boundary angles of the complete geodesic through two distinct disk points
inline Geodesic chord(cplx x, cplx y) {
    vec3 X = hyperboloid(x), Y = hyperboloid(y);
    double c = mink(X, Y);
    double s = std::sqrt(c * c - 1);
    vec3 T{(Y[0] - c * X[0]) / s, (Y[1] - c * X[1]) / s, (Y[2] - c * X[2]) / s};
    vec3 lp{X[0] + T[0], X[1] + T[1], X[2] + T[2]};
    vec3 lm{X[0] - T[0], X[1] - T[1], X[2] - T[2]};
    return Geodesic(std::atan2(lp[2], lp[1]), std::atan2(lm[2], lm[1]));
}

// Does g meet the segment, under its endpoint-inclusion flags?  The chord
// through both endpoints never counts; passage exactly through an endpoint
// counts according to the flag.  "Exactly" is taken relative to the sinh
// scale of the endpoint signals.
inline bool crosses_segment(const Geodesic& g, const Segment& s) {
    Geodesic ch = chord(s.x.z, s.y.z);
    if (ang_close(g.t1, ch.t1, angle_tol) && ang_close(g.t2, ch.t2, angle_tol))
        return false;
    vec3 n = pole(g.t1, g.t2);
    vec3 px = hyperboloid(s.x.z), py = hyperboloid(s.y.z);
    double sx = mink(px, n), sy = mink(py, n);
    bool on_x = std::fabs(sx) <= angle_tol * px[0];
    bool on_y = std::fabs(sy) <= angle_tol * py[0];
    if (on_x && on_y) return false; // indistinguishable from the chord
    if (on_x) return s.include_x;
    if (on_y) return s.include_y;
    return (sx > 0) != (sy > 0);
}

// points spaced along [x,y] (hyperboloid arc-length parametrization)
inline void segment_samples(cplx x, cplx y, double step, std::vector<cplx>& out) {
    out.clear();
    double d = dist(DiskPoint{x}, DiskPoint{y});
    if (d < 1e-15) {
        out.push_back(x);
        return;
    }
    vec3 X = hyperboloid(x), Y = hyperboloid(y);
    // mixed interpolation form: both coefficients positive, so samples near
    // either endpoint stay anchored to it (no cancellation for far lifts)
    double shd = std::sinh(d);
    int n = std::max(1, (int)std::ceil(d / step));
    for (int k = 0; k < n; ++k) {
        double t = std::min((k + 0.5) * step, d);
        double u = std::sinh(d - t) / shd, v = std::sinh(t) / shd;
        vec3 p{X[0] * u + Y[0] * v, X[1] * u + Y[1] * v, X[2] * u + Y[2] * v};
        out.push_back(disk_from_hyp(p));
    }
}

} // namespace g2c
