#pragma once

// SVG 1.1 figure output: generator/current axes, lifts crossing a segment,
// and d_eta-ball orbit scatters, all drawn in the unit-disk model.  Output
// is deterministic: fixed sample counts and fixed-precision formatting.

#include "current.hpp"

#include <cstdio>
#include <string>
#include <vector>

namespace g2c {
namespace svg {

inline std::string num(double v) {
    char buf[32];
    // normalize -0.000000 so byte-identical output survives sign-of-zero noise
    std::snprintf(buf, sizeof buf, "%.6f", v == 0 ? 0.0 : v);
    return buf;
}

// disk points along the geodesic between boundary angles t1, t2
inline std::vector<cplx> sample_geodesic(double t1, double t2, int n = 64) {
    vec3 P = pole(t1, t2);
    // foot of the perpendicular from the origin: project O = (1,0,0) onto
    // the plane <X, P> = 0 and renormalize to the hyperboloid
    double s0 = P[0];
    double nrm = std::sqrt(1 + s0 * s0);
    vec3 X{(1 + s0 * P[0]) / nrm, s0 * P[1] / nrm, s0 * P[2] / nrm};
    // unit tangent at X aimed at the ideal endpoint t1
    vec3 L{1, std::cos(t1), std::sin(t1)};
    double xl = mink(X, L);
    vec3 T{L[0] / xl - X[0], L[1] / xl - X[1], L[2] / xl - X[2]};
    std::vector<cplx> out;
    out.reserve(n + 1);
    const double S = 7.0;
    for (int k = 0; k <= n; ++k) {
        double s = -S + 2 * S * k / n;
        vec3 Q{X[0] * std::cosh(s) + T[0] * std::sinh(s),
               X[1] * std::cosh(s) + T[1] * std::sinh(s),
               X[2] * std::cosh(s) + T[2] * std::sinh(s)};
        out.push_back(disk_from_hyp(Q));
    }
    return out;
}

inline std::string path(const std::vector<cplx>& pts, const char* stroke,
                        double width) {
    std::string d;
    for (size_t i = 0; i < pts.size(); ++i) {
        d += i ? " L " : "M ";
        d += num(pts[i].real()) + " " + num(-pts[i].imag());
    }
    return "<path d=\"" + d + "\" fill=\"none\" stroke=\"" + stroke +
           "\" stroke-width=\"" + num(width) + "\"/>\n";
}

inline std::string circle(cplx z, double r, const char* fill) {
    return "<circle cx=\"" + num(z.real()) + "\" cy=\"" + num(-z.imag()) +
           "\" r=\"" + num(r) + "\" fill=\"" + std::string(fill) + "\"/>\n";
}

inline std::string header(const std::string& desc) {
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
           "viewBox=\"-1.05 -1.05 2.10 2.10\" width=\"640\" height=\"640\">\n"
           "<desc>" + desc + "</desc>\n"
           "<rect x=\"-1.05\" y=\"-1.05\" width=\"2.10\" height=\"2.10\" "
           "fill=\"white\"/>\n"
           "<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"black\" "
           "stroke-width=\"0.004\"/>\n";
}

} // namespace svg

// axes of every atom class of the current, plus their images under the
// generators out to the given word length
inline std::string render_axes(Workspace& W, const Current& eta, int depth,
                               const std::string& desc) {
    static const char* colors[] = {"#c02020", "#2040c0", "#108030", "#806010",
                                   "#703090"};
    std::string out = svg::header(desc);
    size_t end = W.table.count(std::min(depth, W.table.depth()));
    for (size_t ai = 0; ai < eta.atoms.size(); ++ai) {
        const ConjClass& c = eta.atoms[ai].cls;
        const char* col = colors[ai % 5];
        for (size_t i = 0; i < end; ++i) {
            const MobiusMap& M = W.table.elems[i].matrix;
            double a1 = boundary_apply(M, c.axis.t1);
            double a2 = boundary_apply(M, c.axis.t2);
            if (dist_origin_geodesic(a1, a2) > 2.5) continue;
            out += svg::path(svg::sample_geodesic(a1, a2), col, 0.003);
        }
    }
    return out + "</svg>\n";
}

// the segment [x,y], every lift of the current crossing it, and the chord
inline std::string render_lifts(Workspace& W, const Current& eta, DiskPoint x,
                                DiskPoint y, const std::string& desc) {
    std::string out = svg::header(desc);
    Segment s{x, y};
    for (const CurrentAtom& a : eta.atoms) {
        LiftSet ls = lifts_crossing(a.cls, s, W);
        for (const auto& [g, w] : ls.geodesics)
            out += svg::path(svg::sample_geodesic(g.t1, g.t2), "#2040c0", 0.003);
    }
    std::vector<cplx> seg;
    for (int k = 0; k <= 32; ++k) {
        double t = k / 32.0;
        // hyperboloid linear interpolation projected back to the disk
        vec3 X = hyperboloid(x.z), Y = hyperboloid(y.z);
        vec3 Q{X[0] * (1 - t) + Y[0] * t, X[1] * (1 - t) + Y[1] * t,
               X[2] * (1 - t) + Y[2] * t};
        double nrm = std::sqrt(Q[0] * Q[0] - Q[1] * Q[1] - Q[2] * Q[2]);
        seg.push_back(disk_from_hyp({Q[0] / nrm, Q[1] / nrm, Q[2] / nrm}));
    }
    out += svg::path(seg, "#c02020", 0.006);
    out += svg::circle(x.z, 0.010, "#c02020");
    out += svg::circle(y.z, 0.010, "#c02020");
    return out + "</svg>\n";
}

// orbit points with d_eta(gamma o, o) <= R
inline std::string render_ball(Workspace& W, const Current& eta, double R,
                               int depth, const std::string& desc) {
    std::string out = svg::header(desc);
    DiskPoint o{cplx(0, 0)};
    size_t end = W.table.count(std::min(depth, W.table.depth()));
    for (size_t i = 0; i < end; ++i) {
        cplx go = disk_apply(W.table.elems[i].matrix, cplx(0, 0));
        double d = d_eta(W, eta, DiskPoint{go}, o);
        if (d <= R) out += svg::circle(go, 0.006, d <= R / 2 ? "#c02020" : "#2040c0");
    }
    return out + "</svg>\n";
}

} // namespace g2c
