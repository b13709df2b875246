// Smallest useful program: intersection numbers between closed curves.
//
//   g++ -std=c++20 -O2 -I../include intersection_table.cpp -o intersection_table
//
// Prints the pairwise table for the four handle generators and the boundary
// word abcd, then a weighted-current example.

#include <g2c/current.hpp>

#include <cstdio>

using namespace g2c;

int main() {
    Workspace W(5);  // depth-5 element table, built in a few seconds

    const char* curves[] = {"a", "b", "c", "d", "abcd"};
    std::printf("%8s", "");
    for (const char* v : curves) std::printf("%8s", v);
    std::printf("\n");
    for (const char* u : curves) {
        std::printf("%8s", u);
        for (const char* v : curves)
            std::printf("%8g", intersection_classes(W, make_class(W.P, u),
                                                    make_class(W.P, v)));
        std::printf("\n");
    }

    // currents are weighted sums of classes; intersection is linear in them
    Current eta = make_current(W.P, {{1.0, "a"}, {2.5, "ab"}});
    std::printf("\ni(a + 2.5 ab, [b])    = %g\n",
                intersection(W, eta, make_class(W.P, "b")));
    std::printf("i(a + 2.5 ab, [abab]) = %g   (double of [ab], by homogeneity)\n",
                intersection(W, eta, make_class(W.P, "abab")));
    return 0;
}
