#include <g2c/enumerate.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>

using namespace g2c;

namespace {

// independent oracle: BFS over freely reduced words, merging those that map
// to the same matrix; no use of the library's dedup table
size_t ball_by_free_bfs(const GroupPresentation& P, int depth) {
    std::vector<std::pair<Word, MobiusMap>> frontier{{"", identity_map()}};
    std::vector<MobiusMap> all{identity_map()};
    auto known = [&](const MobiusMap& m) {
        for (const MobiusMap& k : all)
            if (same_map(k, m, 1e-6)) return true;
        return false;
    };
    for (int n = 1; n <= depth; ++n) {
        std::vector<std::pair<Word, MobiusMap>> next;
        for (const auto& [w, mat] : frontier) {
            for (char ch : LETTERS) {
                if (!w.empty() && w.back() == inv_letter(ch)) continue;
                MobiusMap m = compose(mat, P.g(ch));
                if (known(m)) continue;
                all.push_back(m);
                next.push_back({w + ch, m});
            }
        }
        frontier = std::move(next);
    }
    return all.size();
}

} // namespace

TEST_CASE("frozen sphere and ball counts") {
    GroupPresentation P = standard_genus2();
    ElementTable T = build_element_table(P, 5);
    // spheres: 1, 8, 56, 392, 2736, 19096
    const size_t spheres[] = {1, 8, 56, 392, 2736, 19096};
    size_t ball = 0;
    for (int d = 0; d <= 5; ++d) {
        ball += spheres[d];
        REQUIRE(T.count(d) == ball);
    }
    REQUIRE(T.count(5) == 22289);
    REQUIRE(T.depth() == 5);
}

TEST_CASE("table agrees with a free-group BFS oracle at small depth") {
    GroupPresentation P = standard_genus2();
    ElementTable T = build_element_table(P, 3);
    REQUIRE(T.count(3) == ball_by_free_bfs(P, 3));
}

TEST_CASE("every stored word is dehn-reduced and matches its matrix") {
    GroupPresentation P = standard_genus2();
    ElementTable T = build_element_table(P, 4);
    for (size_t i = 0; i < T.count(4); ++i) {
        const GroupElement& e = T.elems[i];
        REQUIRE(dehn_reduce(e.word) == e.word);
        REQUIRE(same_map(word_to_matrix(e.word, P), e.matrix, 1e-9));
    }
}

TEST_CASE("level slices partition by word length") {
    GroupPresentation P = standard_genus2();
    ElementTable T = build_element_table(P, 4);
    for (int d = 1; d <= 4; ++d)
        for (size_t i = T.count(d - 1); i < T.count(d); ++i)
            REQUIRE((int)T.elems[i].word.size() == d);
}

TEST_CASE("cache round-trips and rejects mismatches") {
    GroupPresentation P = standard_genus2();
    std::filesystem::path tmp =
        std::filesystem::temp_directory_path() / "g2c_test_cache.bin";
    std::filesystem::remove(tmp);

    ElementTable T = build_element_table(P, 3);
    REQUIRE(save_element_cache(tmp, T));
    auto L = load_element_cache(tmp, P, 3);
    REQUIRE(L.has_value());
    REQUIRE(L->elems.size() == T.elems.size());
    REQUIRE(L->level_end == T.level_end);
    for (size_t i = 0; i < T.elems.size(); ++i) {
        REQUIRE(L->elems[i].word == T.elems[i].word);
        REQUIRE(same_map(L->elems[i].matrix, T.elems[i].matrix, 1e-15));
    }
    // a deeper request than stored must miss
    REQUIRE_FALSE(load_element_cache(tmp, P, 4).has_value());
    std::filesystem::remove(tmp);
}

TEST_CASE("conjugacy classes: frozen counts per canonical length") {
    GroupPresentation P = standard_genus2();
    ElementTable T = build_element_table(P, 4);
    auto classes = conjugacy_classes_from_table(P, T, 4);
    size_t per_len[5] = {0, 0, 0, 0, 0};
    for (const ConjClass& c : classes) {
        REQUIRE(c.cyclic_word.size() <= 4);
        ++per_len[c.cyclic_word.size()];
    }
    REQUIRE(per_len[1] == 4);
    REQUIRE(per_len[2] == 16);
    REQUIRE(per_len[3] == 60);
    REQUIRE(per_len[4] == 306);
    REQUIRE(classes.size() == 386);
}

TEST_CASE("class data is consistent") {
    GroupPresentation P = standard_genus2();
    ElementTable T = build_element_table(P, 3);
    for (const ConjClass& c : conjugacy_classes_from_table(P, T, 3)) {
        REQUIRE(c.cyclic_word == class_key(c.cyclic_word));
        REQUIRE(c.length == Catch::Approx(translation_length(c.representative.matrix)));
        REQUIRE(c.length >= 2.2567679 - 1e-7);  // systole
        auto [att, rep] = axis_fixed_angles(c.representative.matrix);
        REQUIRE(c.axis.t1 == Catch::Approx(std::min(att, rep)));
        REQUIRE(c.axis.t2 == Catch::Approx(std::max(att, rep)));
    }
}

TEST_CASE("systole is the generator length") {
    GroupPresentation P = standard_genus2();
    ElementTable T = build_element_table(P, 3);
    double best = 1e9;
    for (const ConjClass& c : conjugacy_classes_from_table(P, T, 3))
        best = std::min(best, c.length);
    REQUIRE(best == Catch::Approx(2.2567679).margin(1e-7));
}
