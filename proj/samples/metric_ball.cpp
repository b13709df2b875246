// The current-induced quasi-metric, and a picture of one of its balls.
//
//   g++ -std=c++20 -O2 -I../include metric_ball.cpp -o metric_ball
//
// d_eta(x,y) counts lifts of eta's curves separating x from y (weighted).
// It is symmetric, satisfies the triangle inequality, and is Gamma-invariant
// but not positive: points in a common complementary tile have distance 0.
// The SVG shows which orbit points gamma.o land within d_eta-distance R of
// the origin, red for the inner half of the ball.

#include <g2c/render.hpp>

#include <cstdio>
#include <fstream>

using namespace g2c;

int main() {
    Workspace W(5);  // the sweep machinery needs at least a depth-5 table
    Current eta = make_current(W.P, {{1.0, "a"}, {1.0, "b"}, {1.0, "c"},
                                     {1.0, "d"}, {1.0, "abcd"}});

    DiskPoint o{cplx(0, 0)}, x{cplx(0.3, 0.1)}, y{cplx(-0.5, 0.4)};
    std::printf("d_eta(x, y) = %g\n", d_eta(W, eta, x, y));
    std::printf("d_eta(y, x) = %g   (symmetric)\n", d_eta(W, eta, y, x));
    std::printf("d_eta(o, o) = %g\n", d_eta(W, eta, o, o));

    // equivariance: moving both points by a group element changes nothing
    MobiusMap g = word_to_matrix("ab", W.P);
    std::printf("d_eta(gx, gy) = %g\n",
                d_eta(W, eta, DiskPoint{disk_apply(g, x.z)},
                      DiskPoint{disk_apply(g, y.z)}));

    std::ofstream("ball.svg") << render_ball(W, eta, 6.0, 4, "metric ball sample");
    std::printf("wrote ball.svg (orbit points within d_eta 6.0 of the origin)\n");
    return 0;
}
