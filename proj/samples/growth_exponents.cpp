// Critical-exponent estimation: the class-counting and orbit-counting growth
// rates of a filling current agree in the limit; this prints both estimates
// at increasing depth so the gap can be watched shrinking.
//
//   g++ -std=c++20 -O2 -I../include growth_exponents.cpp -o growth_exponents
//
// Depth 6 takes about a minute; pass a cache path to make reruns instant.

#include <g2c/exponents.hpp>

#include <cstdio>

using namespace g2c;

int main(int argc, char** argv) {
    Workspace W(6, argc > 1 ? argv[1] : "");

    Current eta = make_current(W.P, {{1.0, "a"}, {1.25, "b"}, {1.5, "c"},
                                     {0.75, "d"}, {2.0, "abcd"}});

    for (int depth = 5; depth <= 6; ++depth) {
        ExponentEstimate ec = estimate_exponent(class_series(W, eta, depth));
        ExponentEstimate eo = estimate_exponent(orbit_series(W, eta, depth));
        double gap = std::fabs(ec.slope - eo.slope);
        std::printf("depth %d: classes %.4f  orbit %.4f  gap %.4f (%.0f%%)\n",
                    depth, ec.slope, eo.slope, gap,
                    100 * gap / std::max(ec.slope, eo.slope));
    }

    // the unweighted analogue: growth of the number of classes by length,
    // whose exponent tends to the classical value 1
    ExponentEstimate el = estimate_exponent(length_series(W, 6));
    std::printf("length-growth exponent at depth 6: %.4f\n", el.slope);
    return 0;
}
