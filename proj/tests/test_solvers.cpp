#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qlm/rng.hpp"
#include "qlm/solvers.hpp"

using namespace qlm;

namespace {

double welfare(const WeightMatrix& w, const Matching& m) {
    double s = 0;
    for (int i = 0; i < w.n; ++i) s += w.at(i, m.assignment[i]);
    return s;
}

WeightMatrix random_matrix(int n, std::uint64_t seed) {
    auto rng = make_rng(seed);
    WeightMatrix w(n);
    for (double& x : w.w) x = uniform01(rng);
    return w;
}

}  // namespace

TEST_CASE("hungarian on identity-favoring matrix") {
    WeightMatrix w(3);
    for (int i = 0; i < 3; ++i) w.at(i, i) = 1.0;
    const Matching m = hungarian_max_weight(w);
    m.validate();
    CHECK(m.assignment == std::vector<int>{0, 1, 2});
    CHECK(welfare(w, m) == doctest::Approx(3.0));
}

TEST_CASE("hungarian on uniform matrix: all matchings tie") {
    WeightMatrix w(4);
    for (double& x : w.w) x = 0.25;
    const Matching m = hungarian_max_weight(w);
    m.validate();
    CHECK(welfare(w, m) == doctest::Approx(1.0));
}

TEST_CASE("hungarian equals brute force on 200 random matrices per size") {
    for (int n = 2; n <= 7; ++n) {
        for (int rep = 0; rep < 200; ++rep) {
            const WeightMatrix w = random_matrix(n, 1000 * n + rep);
            const Matching h = hungarian_max_weight(w);
            const Matching b = brute_force_opt(w);
            h.validate();
            REQUIRE(std::fabs(welfare(w, h) - welfare(w, b)) <= kWelfareTol);
        }
    }
}

TEST_CASE("hungarian rejects non-square input") {
    WeightMatrix w(3);
    w.w.pop_back();
    CHECK_THROWS_AS(hungarian_max_weight(w), std::invalid_argument);
}

TEST_CASE("brute_force_opt basics") {
    WeightMatrix w1(1);
    w1.at(0, 0) = 0.7;
    CHECK(brute_force_opt(w1).assignment == std::vector<int>{0});

    WeightMatrix w2(2);
    w2.at(0, 0) = w2.at(1, 1) = 1.0;
    const Matching m = brute_force_opt(w2);
    CHECK(m.assignment == std::vector<int>{0, 1});
    CHECK(welfare(w2, m) == doctest::Approx(2.0));

    WeightMatrix big(11);
    CHECK_THROWS_AS(brute_force_opt(big), std::invalid_argument);
}

TEST_CASE("hopcroft-karp on complete and star graphs") {
    BipartiteGraph complete(3, 3);
    for (int u = 0; u < 3; ++u)
        for (int v = 0; v < 3; ++v) complete.add_edge(u, v);
    CHECK(max_cardinality_bipartite_size(complete) == 3);

    BipartiteGraph star(3, 3);
    for (int u = 0; u < 3; ++u) star.add_edge(u, 0);
    CHECK(max_cardinality_bipartite_size(star) == 1);
}

TEST_CASE("hopcroft-karp equals exhaustive search on random graphs") {
    for (int rep = 0; rep < 120; ++rep) {
        auto rng = make_rng(4000 + rep);
        const int nl = uniform_int(rng, 1, 8), nr = uniform_int(rng, 1, 8);
        BipartiteGraph g(nl, nr);
        for (int u = 0; u < nl; ++u)
            for (int v = 0; v < nr; ++v)
                if (uniform01(rng) < 0.4) g.add_edge(u, v);
        REQUIRE(max_cardinality_bipartite_size(g) == qlm::testing::brute_max_bipartite(g));
    }
}

TEST_CASE("hopcroft-karp size is monotone in added edges") {
    auto rng = make_rng(99);
    BipartiteGraph g(6, 6);
    int last = 0;
    for (int t = 0; t < 20; ++t) {
        g.add_edge(uniform_int(rng, 0, 5), uniform_int(rng, 0, 5));
        const int size = max_cardinality_bipartite_size(g);
        CHECK(size >= last);
        last = size;
    }
}

TEST_CASE("greedy matching basics") {
    EdgeWeightedGraph single;
    single.num_vertices = 2;
    single.edges = {{0, 1, 0.5}};
    const auto m1 = greedy_general_matching(single);
    REQUIRE(m1.size() == 1);
    CHECK(m1[0].w == doctest::Approx(0.5));

    // path a-b (1), b-c (1.5), c-d (1): greedy picks bc, optimum is ab+cd
    EdgeWeightedGraph path;
    path.num_vertices = 4;
    path.edges = {{0, 1, 1.0}, {1, 2, 1.5}, {2, 3, 1.0}};
    const auto m2 = greedy_general_matching(path);
    REQUIRE(m2.size() == 1);
    CHECK(m2[0].u == 1);
    CHECK(m2[0].v == 2);
    CHECK(matching_weight(m2) == doctest::Approx(1.5));
    CHECK(qlm::testing::brute_max_weight_matching(path) == doctest::Approx(2.0));
    CHECK(matching_weight(m2) >= 0.5 * 2.0);

    EdgeWeightedGraph directed;
    directed.num_vertices = 2;
    directed.directed = true;
    directed.edges = {{0, 1, 1.0}};
    CHECK_THROWS_AS(greedy_general_matching(directed), std::invalid_argument);
}

TEST_CASE("greedy matching is valid and 1/2-approximate on random graphs") {
    for (int rep = 0; rep < 120; ++rep) {
        auto rng = make_rng(7000 + rep);
        EdgeWeightedGraph g;
        g.num_vertices = uniform_int(rng, 2, 10);
        for (int u = 0; u < g.num_vertices; ++u)
            for (int v = u + 1; v < g.num_vertices; ++v)
                if (uniform01(rng) < 0.45) g.edges.push_back({u, v, uniform01(rng)});
        const auto m = greedy_general_matching(g);
        CHECK(is_valid_matching(g, m));
        const double opt = qlm::testing::brute_max_weight_matching(g);
        CHECK(matching_weight(m) >= 0.5 * opt - kWelfareTol);
        // maximality: no remaining edge has both endpoints free
        std::vector<char> used(g.num_vertices, 0);
        for (const Edge& e : m) used[e.u] = used[e.v] = 1;
        for (const Edge& e : g.edges) CHECK((used[e.u] || used[e.v]));
    }
}

TEST_CASE("graph validation") {
    EdgeWeightedGraph loop;
    loop.num_vertices = 2;
    loop.edges = {{1, 1, 0.3}};
    CHECK_THROWS_AS(loop.validate(), std::invalid_argument);
    EdgeWeightedGraph neg;
    neg.num_vertices = 2;
    neg.edges = {{0, 1, -0.3}};
    CHECK_THROWS_AS(neg.validate(), std::invalid_argument);
}
