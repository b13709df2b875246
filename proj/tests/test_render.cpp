#include <g2c/render.hpp>

#include <catch2/catch_amalgamated.hpp>

using namespace g2c;

namespace {

Workspace& shared_workspace() {
    static Workspace W(5, std::filesystem::path(G2C_CACHE_DIR) / "g2c_d5.bin");
    return W;
}

size_t count_of(const std::string& hay, const std::string& needle) {
    size_t n = 0;
    for (size_t p = hay.find(needle); p != std::string::npos;
         p = hay.find(needle, p + needle.size()))
        ++n;
    return n;
}

} // namespace

TEST_CASE("svg number formatting is stable") {
    REQUIRE(svg::num(0.0) == "0.000000");
    REQUIRE(svg::num(-0.0) == "0.000000");  // sign-of-zero normalized
    REQUIRE(svg::num(1.5) == "1.500000");
    REQUIRE(svg::num(-0.25) == "-0.250000");
}

TEST_CASE("render_axes: well-formed, deterministic, one color per atom") {
    Workspace& W = shared_workspace();
    Current eta = make_current(W.P, {{1, "a"}, {1, "b"}});
    std::string s = render_axes(W, eta, 2, "axes probe");
    REQUIRE(s.rfind("<?xml", 0) == 0);
    REQUIRE(s.find("<svg ") != std::string::npos);
    REQUIRE(s.find("<desc>axes probe</desc>") != std::string::npos);
    REQUIRE(s.substr(s.size() - 7) == "</svg>\n");
    // both atom colors appear, and some translates are drawn for each
    REQUIRE(count_of(s, "#c02020") >= 2);
    REQUIRE(count_of(s, "#2040c0") >= 2);
    REQUIRE(s == render_axes(W, eta, 2, "axes probe"));
}

TEST_CASE("render_lifts: one path per crossing lift plus the segment") {
    Workspace& W = shared_workspace();
    Current eta = make_current(W.P, {{1, "ab"}, {1, "cd"}});
    DiskPoint x{axis_point(W.P, "cd", 0.2)};
    DiskPoint y{disk_apply(word_to_matrix("cd", W.P), x.z)};
    std::string s = render_lifts(W, eta, x, y, "lifts probe");

    size_t expect = 0;
    for (const CurrentAtom& a : eta.atoms)
        expect += lifts_crossing(a.cls, Segment{x, y}, W).geodesics.size();
    REQUIRE(count_of(s, "<path ") == expect + 1);  // + the red segment
    REQUIRE(count_of(s, "<circle ") == 2 + 1);     // endpoints + unit circle
    REQUIRE(s == render_lifts(W, eta, x, y, "lifts probe"));
}

TEST_CASE("render_ball: one dot per orbit point inside the ball") {
    Workspace& W = shared_workspace();
    Current eta = make_current(W.P, {{1, "a"}, {1, "b"}, {1, "c"}, {1, "d"}, {1, "abcd"}});
    const double R = 4.0;
    std::string s = render_ball(W, eta, R, 2, "ball probe");

    DiskPoint o{cplx(0, 0)};
    size_t expect = 0;
    for (size_t i = 0; i < W.table.count(2); ++i) {
        cplx go = disk_apply(W.table.elems[i].matrix, cplx(0, 0));
        if (d_eta(W, eta, DiskPoint{go}, o) <= R) ++expect;
    }
    REQUIRE(expect >= 10);  // the ball is not trivially empty
    REQUIRE(count_of(s, "<circle ") == expect + 1);  // + unit circle
    REQUIRE(s == render_ball(W, eta, R, 2, "ball probe"));
}
