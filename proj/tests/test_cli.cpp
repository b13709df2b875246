#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int code = -1;
    std::string out;
};

// run the tool with stderr dropped, capturing stdout and the exit code
RunResult run(const std::string& args) {
    std::string cmd = std::string(G2C_BIN) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    RunResult r;
    if (!p) return r;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    int st = pclose(p);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string fixture(const char* name) {
    return (fs::path(G2C_FIXTURES) / name).string();
}

// shared element cache keeps every invocation after the first fast
std::string cache_flag() {
    return "--cache " + (fs::path(G2C_CACHE_DIR) / "g2c_d5.bin").string();
}

std::string slurp_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

size_t count_of(const std::string& hay, const std::string& needle) {
    size_t n = 0;
    for (size_t p = hay.find(needle); p != std::string::npos;
         p = hay.find(needle, p + needle.size()))
        ++n;
    return n;
}

} // namespace

TEST_CASE("cli: intersect prints the intersection number") {
    RunResult r = run(cache_flag() + " intersect " + fixture("unit.cur") + " ab");
    REQUIRE(r.code == 0);
    REQUIRE(r.out == "2\n");
    REQUIRE(run(cache_flag() + " intersect " + fixture("unit.cur") + " abab").out == "4\n");
    REQUIRE(run(cache_flag() + " intersect " + fixture("unit.cur") + " AB").out == "2\n");
    // conjugation invariance through the word argument
    REQUIRE(run(cache_flag() + " intersect " + fixture("unit.cur") + " Cabc").out == "2\n");
}

TEST_CASE("cli: dist is symmetric and byte-stable") {
    std::string base = cache_flag() + " dist " + fixture("filling.cur") + " ";
    RunResult r1 = run(base + "0 0 0.9 0.1");
    RunResult r2 = run(base + "0.9 0.1 0 0");
    REQUIRE(r1.code == 0);
    REQUIRE(r1.out == r2.out);
    double v = std::stod(r1.out);
    REQUIRE(v >= 0.0);
    REQUIRE(run(base + "0 0 0.9 0.1").out == r1.out);  // determinism
}

TEST_CASE("cli: enumerate emits frozen counts") {
    RunResult r = run(cache_flag() + " --depth 4 enumerate");
    REQUIRE(r.code == 0);
    REQUIRE(count_of(r.out, "\n") == 5);  // header + one record per level
    REQUIRE(r.out.find("\"sphere\":8,\"ball\":9,\"classes\":4") != std::string::npos);
    REQUIRE(r.out.find("\"sphere\":56,\"ball\":65,\"classes\":16") != std::string::npos);
    REQUIRE(r.out.find("\"sphere\":392,\"ball\":457,\"classes\":60") != std::string::npos);
    REQUIRE(r.out.find("\"sphere\":2736,\"ball\":3193,\"classes\":306") != std::string::npos);
}

TEST_CASE("cli: exponent emits series and estimates") {
    RunResult r = run(cache_flag() + " --depth 4 exponent " + fixture("filling.cur"));
    REQUIRE(r.code == 0);
    REQUIRE(r.out.find("\"cmd\":\"exponent\"") != std::string::npos);
    REQUIRE(count_of(r.out, "\"series\":\"orbit\"") >= 10);
    REQUIRE(count_of(r.out, "\"series\":\"classes\"") >= 10);
    REQUIRE(count_of(r.out, "\"estimate\":") == 2);
    REQUIRE(r.out.find("\"theorem_gap\":") != std::string::npos);
    REQUIRE(r.out.find("\"rel_gap\":") != std::string::npos);
}

TEST_CASE("cli: verify passes and is byte-identical across runs") {
    std::string args = cache_flag() + " --depth 3 --seed 7 verify " + fixture("filling.cur");
    RunResult r1 = run(args);
    REQUIRE(r1.code == 0);
    REQUIRE(r1.out.find("\"summary\":\"pass\"") != std::string::npos);
    for (const char* check : {"filling_probe", "injection", "fiber_bound", "ping_pong",
                              "metric_axioms", "i_le_d", "homogeneity"}) {
        std::string want = std::string("\"check\":\"") + check + "\",\"pass\":true";
        INFO(check);
        REQUIRE(r1.out.find(want) != std::string::npos);
    }
    RunResult r2 = run(args);
    REQUIRE(r1.out == r2.out);
}

TEST_CASE("cli: verify reports a non-filling current") {
    RunResult r = run(cache_flag() + " --depth 3 verify " + fixture("single_a.cur"));
    REQUIRE(r.code == 0);  // the report itself succeeds
    REQUIRE(r.out.find("\"check\":\"filling_probe\",\"pass\":false") != std::string::npos);
    REQUIRE(r.out.find("\"witness_class\"") != std::string::npos);
    REQUIRE(r.out.find("\"summary\":\"fail\"") != std::string::npos);
}

TEST_CASE("cli: render writes SVG files atomically") {
    fs::path out = fs::path(G2C_CACHE_DIR) / "cli_axes_test.svg";
    fs::remove(out);
    RunResult r = run(cache_flag() + " --depth 2 --out " + out.string() + " render " +
                      fixture("unit.cur") + " axes");
    REQUIRE(r.code == 0);
    REQUIRE(fs::exists(out));
    std::string svg = slurp_file(out);
    REQUIRE(svg.rfind("<?xml", 0) == 0);
    REQUIRE(svg.find("</svg>") != std::string::npos);
    REQUIRE(!fs::exists(out.string() + ".tmp"));  // temp staging cleaned up

    // second run is byte-identical
    RunResult r2 = run(cache_flag() + " --depth 2 --out " + out.string() + " render " +
                       fixture("unit.cur") + " axes");
    REQUIRE(r2.code == 0);
    REQUIRE(slurp_file(out) == svg);
    fs::remove(out);
}

TEST_CASE("cli: config file supplies defaults, flags override") {
    fs::path conf = fs::path(G2C_CACHE_DIR) / "cli_test.conf";
    {
        std::ofstream f(conf);
        f << "depth=3\n";
    }
    RunResult by_conf = run(cache_flag() + " --config " + conf.string() + " enumerate");
    RunResult by_flag = run(cache_flag() + " --depth 3 enumerate");
    REQUIRE(by_conf.code == 0);
    REQUIRE(by_conf.out == by_flag.out);
    // explicit flag wins over the config value
    RunResult over = run(cache_flag() + " --config " + conf.string() + " --depth 2 enumerate");
    REQUIRE(over.out == run(cache_flag() + " --depth 2 enumerate").out);
    fs::remove(conf);
}

TEST_CASE("cli: malformed input exits 2") {
    REQUIRE(run("").code != 0);  // missing subcommand
    REQUIRE(run("frobnicate").code == 2);
    REQUIRE(run(cache_flag() + " intersect " + fixture("unit.cur")).code == 2);  // no word
    REQUIRE(run(cache_flag() + " intersect /nonexistent.cur ab").code == 2);
    REQUIRE(run(cache_flag() + " intersect " + fixture("unit.cur") + " axb").code == 2);
    REQUIRE(run(cache_flag() + " intersect " + fixture("unit.cur") + " aA").code == 2);
    REQUIRE(run(cache_flag() + " dist " + fixture("unit.cur") + " 0 0 2 0").code == 2);
    REQUIRE(run(cache_flag() + " render " + fixture("unit.cur") + " lifts").code == 2);
    REQUIRE(run(cache_flag() + " render " + fixture("unit.cur") + " nosuch").code == 2);
    REQUIRE(run(cache_flag() + " --depth 0 enumerate").code == 2);

    fs::path bad = fs::path(G2C_CACHE_DIR) / "bad.cur";
    {
        std::ofstream f(bad);
        f << "-1 a\n";
    }
    REQUIRE(run(cache_flag() + " intersect " + bad.string() + " ab").code == 2);
    fs::remove(bad);
}

TEST_CASE("cli: help exits 0") {
    REQUIRE(run("--help").code == 0);
    REQUIRE(run("intersect --help").code == 0);
}
