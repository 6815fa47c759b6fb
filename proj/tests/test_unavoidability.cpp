#include "doctest.h"

#include <vector>

#include "cfhm/conflicts.hpp"
#include "cfhm/hypergraph.hpp"
#include "cfhm/rng.hpp"
#include "cfhm/unavoidability.hpp"
#include "oracles.hpp"

using namespace cfhm;

namespace {

// Toy tripartite instance with H1 triples on P∪Q and H2 edges {x, r1}.
// P degrees in H2 are controlled by the `h2_per_vertex` list.
struct Toy {
    TripartiteHypergraph h;
    std::vector<int> h1_ids;
    std::vector<int> h2_ids;
};

Toy make_toy(int np, int nr, const std::vector<int>& h2_per_vertex,
             std::uint64_t seed) {
    Toy t{TripartiteHypergraph(np, 0, nr), {}, {}};
    CounterRng rng(seed);
    for (int x = 0; x < np; ++x) {
        int want = h2_per_vertex[x % h2_per_vertex.size()];
        int added = 0;
        int guard = 0;
        while (added < want && guard < 1000) {
            int r = t.h.r_begin() + static_cast<int>(rng.below(nr));
            try {
                t.h2_ids.push_back(t.h.add_edge(EdgeClass::H2, {x, r}));
                ++added;
            } catch (const std::invalid_argument&) {
                ++guard;
            }
        }
    }
    // a few H1 pairs for mixed conflicts
    for (int x = 0; x + 1 < np; x += 2)
        t.h1_ids.push_back(t.h.add_edge(EdgeClass::H1, {x, x + 1}));
    return t;
}

}  // namespace

TEST_CASE("unavoidability trivial values") {
    TripartiteHypergraph h(4, 0, 6);
    int a = h.add_edge(EdgeClass::H1, {0, 1});
    int b = h.add_edge(EdgeClass::H1, {2, 3});
    // x = 0 has H2-degree 5
    std::vector<int> at0;
    for (int i = 0; i < 5; ++i) at0.push_back(h.add_edge(EdgeClass::H2, {0, 4 + i}));

    // conflict entirely inside H1: empty product
    CHECK(unavoidability(h, std::vector<int>{a, b}) == 1.0);
    CHECK(unavoidability_exact(h, std::vector<int>{a, b}) == Rational(1));

    // one H2 edge at a vertex of degree 5
    CHECK(unavoidability(h, std::vector<int>{a, at0[0]}) == doctest::Approx(0.2));
    CHECK(unavoidability_exact(h, std::vector<int>{a, at0[0]}) == Rational(1, 5));
}

TEST_CASE("A(D) equals the full choice-function enumeration, exactly") {
    // 6-edge toy system from the operation example, then 30 random systems.
    Toy t = make_toy(6, 8, {2, 3, 1}, 11);
    std::vector<std::vector<int>> dl = {
        {t.h2_ids[0], t.h2_ids[2]},
        {t.h2_ids[1], t.h2_ids[3], t.h1_ids[0]},
        {t.h2_ids[4], t.h2_ids[5]},
    };
    ConflictSystem cs(t.h, {}, dl, 4);
    Rational a = family_unavoidability_exact(t.h, cs.d());
    Rational expect = oracles::choice_function_expectation(t.h, cs.d());
    CHECK(a == expect);

    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Toy r = make_toy(8, 10, {2, 4, 3, 1}, 100 + seed);
        CounterRng rng(seed * 7 + 1);
        std::vector<std::vector<int>> conflicts;
        int wanted = 3 + static_cast<int>(rng.below(6));
        int guard = 0;
        while (static_cast<int>(conflicts.size()) < wanted && guard < 200) {
            int m = 2 + static_cast<int>(rng.below(2));
            std::vector<int> ids;
            std::vector<int> used_x;
            bool ok = true;
            for (int i = 0; i < m; ++i) {
                int e = r.h2_ids[rng.below(r.h2_ids.size())];
                int x = r.h.h2_pvertex(e);
                if (std::find(ids.begin(), ids.end(), e) != ids.end() ||
                    std::find(used_x.begin(), used_x.end(), x) != used_x.end()) {
                    ok = false;
                    break;
                }
                ids.push_back(e);
                used_x.push_back(x);
            }
            if (!ok) { ++guard; continue; }
            std::sort(ids.begin(), ids.end());
            if (std::find(conflicts.begin(), conflicts.end(), ids) != conflicts.end()) {
                ++guard;
                continue;
            }
            conflicts.push_back(ids);
        }
        ConflictSystem cs2(r.h, {}, conflicts, 6);
        CHECK(family_unavoidability_exact(r.h, cs2.d()) ==
              oracles::choice_function_expectation(r.h, cs2.d()));
    }
}

TEST_CASE("unavoidability is multiplicative over P-disjoint H2 parts") {
    Toy t = make_toy(8, 12, {3, 2}, 21);
    // split one conflict into two P-disjoint halves
    std::vector<int> e1 = {t.h2_ids[0]};
    std::vector<int> e2;
    for (int id : t.h2_ids)
        if (t.h.h2_pvertex(id) != t.h.h2_pvertex(t.h2_ids[0])) { e2 = {id}; break; }
    REQUIRE(!e2.empty());
    std::vector<int> both = {e1[0], e2[0]};
    // pad with an H1 edge so every set has >= 2 members
    e1.push_back(t.h1_ids[0]);
    e2.push_back(t.h1_ids[1]);
    Rational a1 = unavoidability_exact(t.h, e1);
    Rational a2 = unavoidability_exact(t.h, e2);
    CHECK(unavoidability_exact(t.h, both) == a1 * a2);
}

TEST_CASE("vertex unavoidability") {
    TripartiteHypergraph h(3, 0, 4);
    // v = 3 (first R vertex)
    h.add_edge(EdgeClass::H2, {0, 3});
    h.add_edge(EdgeClass::H2, {0, 4});
    h.add_edge(EdgeClass::H2, {0, 5});
    h.add_edge(EdgeClass::H2, {0, 6});
    h.add_edge(EdgeClass::H2, {1, 4});
    CHECK(vertex_unavoidability(h, 3) == doctest::Approx(0.25));  // d(0,v)=1, d_0=4
    CHECK(vertex_unavoidability(h, 6) == doctest::Approx(0.25));
    CHECK(vertex_unavoidability(h, 4) == doctest::Approx(0.25 + 1.0));
    CHECK(vertex_unavoidability_exact(h, 4) == Rational(5, 4));
    CHECK_THROWS_AS(vertex_unavoidability(h, 0), std::invalid_argument);

    // v in no H2 edge
    TripartiteHypergraph g(2, 0, 2);
    g.add_edge(EdgeClass::H2, {0, 2});
    CHECK(vertex_unavoidability(g, 3) == 0.0);
}

TEST_CASE("A(v) * delta_P(H2) <= d_H2(v) instance-wide") {
    Toy t = make_toy(10, 8, {3, 5, 2}, 77);
    int delta_p = t.h.degree1(0, EdgeClass::H2);
    for (int x = 1; x < t.h.p_size(); ++x)
        delta_p = std::min(delta_p, t.h.degree1(x, EdgeClass::H2));
    REQUIRE(delta_p >= 1);
    for (int v = t.h.r_begin(); v < t.h.vertex_count(); ++v) {
        double av = vertex_unavoidability(t.h, v);
        CHECK(av * delta_p <= t.h.degree1(v, EdgeClass::H2) + 1e-9);
    }
}

TEST_CASE("weighted max degree") {
    SUBCASE("empty family is zero") {
        TripartiteHypergraph h(2, 0, 2);
        h.add_edge(EdgeClass::H2, {0, 2});
        WeightedDegree wd = weighted_max_degree(h, {}, 0, 1);
        CHECK(wd.value == 0.0);
        CHECK(wd.witness_h2.empty());
    }

    SUBCASE("single conflict of two H2 edges with both P-degrees 2") {
        TripartiteHypergraph h(2, 0, 4);
        int e = h.add_edge(EdgeClass::H2, {0, 2});
        h.add_edge(EdgeClass::H2, {0, 3});
        int f = h.add_edge(EdgeClass::H2, {1, 4});
        h.add_edge(EdgeClass::H2, {1, 5});
        ConflictSystem cs(h, {}, {{e, f}}, 2);
        WeightedDegree wd = weighted_max_degree(h, cs.d(), 0, 1);
        CHECK(wd.value == doctest::Approx(0.25));
        CHECK(wd.witness_h2.size() == 1);
    }

    SUBCASE("matches the exhaustive brute force") {
        Toy t = make_toy(6, 6, {2, 3}, 5);
        CounterRng rng(17);
        std::vector<std::vector<int>> dl;
        for (int i = 0; i < 12; ++i) {
            int e = t.h2_ids[rng.below(t.h2_ids.size())];
            int f = t.h2_ids[rng.below(t.h2_ids.size())];
            if (e == f || t.h.h2_pvertex(e) == t.h.h2_pvertex(f)) continue;
            int c = t.h1_ids[rng.below(t.h1_ids.size())];
            std::vector<int> ids = {e, f, c};
            std::sort(ids.begin(), ids.end());
            if (std::find_if(dl.begin(), dl.end(), [&](auto& v) { return v == ids; }) ==
                dl.end())
                dl.push_back(ids);
        }
        REQUIRE(dl.size() >= 3);
        ConflictSystem cs(t.h, {}, dl, 6);
        for (auto [j1p, j2p] : std::vector<std::pair<int, int>>{{0, 1}, {1, 1}, {0, 2}, {1, 2}}) {
            WeightedDegree wd = weighted_max_degree(t.h, cs.d(), j1p, j2p);
            Rational brute = oracles::weighted_max_degree_brute(t.h, cs.d(), j1p, j2p);
            CHECK(wd.value == doctest::Approx(brute.to_double()).epsilon(1e-12));
        }
    }

    SUBCASE("rejects j1' + j2' = 0") {
        TripartiteHypergraph h(2, 0, 2);
        CHECK_THROWS_AS(weighted_max_degree(h, {}, 0, 0), std::invalid_argument);
    }
}

TEST_CASE("arithmetic mode policy") {
    Toy t = make_toy(4, 4, {2}, 3);
    CHECK(arithmetic_mode_for(t.h, 4).exact);
    CHECK_FALSE(arithmetic_mode_for(t.h, 13).exact);
}

TEST_CASE("conflict system validation and indexes") {
    Toy t = make_toy(6, 8, {2}, 9);
    std::vector<std::vector<int>> cl = {{t.h1_ids[0], t.h1_ids[1]}};
    std::vector<std::vector<int>> dl = {{t.h2_ids[0], t.h2_ids[2]}};
    ConflictSystem cs(t.h, cl, dl, 4, 0.2);
    CHECK(cs.ell() == 4);
    CHECK(cs.index_round_trips(t.h));
    CHECK(cs.c_at_edge(t.h1_ids[0]) == std::vector<int>{0});
    int x = t.h.h2_pvertex(t.h2_ids[0]);
    CHECK(cs.d_at_pvertex(x) == std::vector<int>{0});

    // a C-conflict may not contain H2 edges, a D-conflict needs one
    CHECK_THROWS_AS(ConflictSystem(t.h, {{t.h1_ids[0], t.h2_ids[0]}}, {}, 4),
                    std::invalid_argument);
    CHECK_THROWS_AS(ConflictSystem(t.h, {}, {{t.h1_ids[0], t.h1_ids[1]}}, 4),
                    std::invalid_argument);
    // duplicates rejected
    CHECK_THROWS_AS(ConflictSystem(t.h, {}, {dl[0], dl[0]}, 4), std::invalid_argument);
    // conflicts above ell rejected
    CHECK_THROWS_AS(
        ConflictSystem(t.h, {}, {{t.h2_ids[0], t.h2_ids[2], t.h2_ids[4]}}, 2),
        std::invalid_argument);
}
