#include "doctest.h"

#include <vector>

#include "cfhm/conditions.hpp"
#include "cfhm/conflicts.hpp"
#include "cfhm/hypergraph.hpp"

using namespace cfhm;

namespace {

// 3x3 grid: rows and columns as triples. Every P-vertex has degree 2 and
// every pair lies in at most one edge.
TripartiteHypergraph grid_instance() {
    TripartiteHypergraph h(9, 0, 9);
    for (int r = 0; r < 3; ++r)
        h.add_edge(EdgeClass::H1, {3 * r, 3 * r + 1, 3 * r + 2});
    for (int c = 0; c < 3; ++c)
        h.add_edge(EdgeClass::H1, {c, c + 3, c + 6});
    for (int x = 0; x < 9; ++x)
        h.add_edge(EdgeClass::H2, {x, 9 + x});
    return h;
}

}  // namespace

TEST_CASE("regular H1 with codegree 1 passes H1 and H2") {
    auto h = grid_instance();
    ConditionReport rep = check_h_conditions(h, 2.0, 0.1);
    CHECK(rep.find("H1.min-degree")->holds);
    CHECK(rep.find("H1.max-degree")->holds);
    CHECK(rep.find("H2.codegree")->holds);
    CHECK(rep.find("H2.codegree")->lhs == 1.0);
    CHECK(rep.find("H0.nonempty")->holds);
    CHECK(rep.find("H3p.positive-degrees")->holds);
    CHECK(rep.delta_p_h2 == 1.0);
}

TEST_CASE("a P-vertex of degree d+1 fails H1 with that witness") {
    TripartiteHypergraph h(6, 0, 6);
    // vertex 0 has degree 3, everything else lower; d = 2
    h.add_edge(EdgeClass::H1, {0, 1, 2});
    h.add_edge(EdgeClass::H1, {0, 3, 4});
    h.add_edge(EdgeClass::H1, {0, 2, 5});
    for (int x = 0; x < 6; ++x) h.add_edge(EdgeClass::H2, {x, 6 + x});
    ConditionReport rep = check_h_conditions(h, 2.0, 0.1);
    const auto* upper = rep.find("H1.max-degree");
    REQUIRE(upper != nullptr);
    CHECK_FALSE(upper->holds);
    CHECK(upper->lhs == 3.0);
    CHECK(upper->witness == std::vector<int>{0});
}

TEST_CASE("empty H1 or H2 is reported as failing, not thrown") {
    TripartiteHypergraph h(3, 0, 3);
    h.add_edge(EdgeClass::H1, {0, 1});
    ConditionReport rep = check_h_conditions(h, 2.0, 0.2);
    CHECK_FALSE(rep.find("H0.nonempty")->holds);
    CHECK_FALSE(rep.all_hold());
}

TEST_CASE("parameter validation") {
    TripartiteHypergraph h(2, 0, 2);
    CHECK_THROWS_AS(check_h_conditions(h, 1.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(check_h_conditions(h, 4.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(check_h_conditions(h, 4.0, 1.0), std::invalid_argument);
}

TEST_CASE("sup_eps direction and value") {
    auto h = grid_instance();
    ConditionReport rep = check_h_conditions(h, 2.0, 0.1);
    // H2.codegree: 1 <= 2^{1-eps}: holds up to eps = 1 => everywhere
    const auto* cod = rep.find("H2.codegree");
    CHECK(cod->sup_dir == '*');
    // H4p: 1 <= 2^{-eps}: fails for every positive eps
    const auto* h4p = rep.find("H4p.codegree-ratio");
    CHECK_FALSE(h4p->holds);
    CHECK(h4p->sup_dir == '!');
}

TEST_CASE("H1 lower bound sup_eps is the documented flip point") {
    // delta_P = Delta = 180, d = 200: (1 - d^-eps) d <= 180 up to
    // eps = ln(10)/ln(200).
    TripartiteHypergraph h(1, 0, 1);
    (void)h;
    auto lhs = [](double e) { return (1.0 - std::pow(200.0, -e)) * 200.0; };
    double expect = std::log(10.0) / std::log(200.0);
    CHECK(lhs(expect) == doctest::Approx(180.0));
}

TEST_CASE("empty C passes all C conditions") {
    auto h = grid_instance();
    ConflictSystem cs(h, {}, {}, 4, 0.2);
    ConditionReport rep = check_c_conditions(cs, h, 2.0, 0.2);
    CHECK(rep.all_hold());
}

TEST_CASE("a size-2 conflict in C fails C1") {
    auto h = grid_instance();
    ConflictSystem cs(h, {{0, 1}}, {}, 4, 0.2);
    ConditionReport rep = check_c_conditions(cs, h, 2.0, 0.2);
    const auto* c1 = rep.find("C1.min-size");
    REQUIRE(c1 != nullptr);
    CHECK_FALSE(c1->holds);
    CHECK(c1->rhs == 2.0);
}

TEST_CASE("C2 and C3 count degrees of the conflict family") {
    TripartiteHypergraph h(12, 0, 0);
    for (int i = 0; i < 12; i += 3)
        h.add_edge(EdgeClass::H1, {i, i + 1, i + 2});
    // two size-3 conflicts sharing edges {0,1}
    ConflictSystem cs(h, {{0, 1, 2}, {0, 1, 3}}, {}, 4, 0.2);
    ConditionReport rep = check_c_conditions(cs, h, 8.0, 0.2);
    const auto* c2 = rep.find("C2[j=3]");
    REQUIRE(c2 != nullptr);
    CHECK(c2->lhs == 2.0);  // edges 0 and 1 each sit in two conflicts
    CHECK(c2->holds);       // 2 <= 4 * 8^2
    const auto* c3 = rep.find("C3[j=3,j'=2]");
    REQUIRE(c3 != nullptr);
    CHECK(c3->lhs == 2.0);  // the pair {0,1} sits in both
    CHECK(c3->witness == std::vector<int>{0, 1});
    // 2 <= 8^{1-eps} holds for eps = 0.2 (8^0.8 = 5.27)
    CHECK(c3->holds);
}

TEST_CASE("D conditions: simple and mixed modes split on j2 = 1") {
    TripartiteHypergraph h(6, 0, 8);
    std::vector<int> h1, h2;
    h1.push_back(h.add_edge(EdgeClass::H1, {0, 1}));
    h1.push_back(h.add_edge(EdgeClass::H1, {2, 3}));
    h1.push_back(h.add_edge(EdgeClass::H1, {4, 5}));
    for (int x = 0; x < 6; ++x) {
        h2.push_back(h.add_edge(EdgeClass::H2, {x, 6 + x}));
        h2.push_back(h.add_edge(EdgeClass::H2, {x, 7 + x}));
    }
    // a (1,1)-conflict: one H1 edge + one H2 edge
    ConflictSystem cs(h, {}, {{h1[0], h2[4]}}, 4, 0.2);

    ConditionReport simple = check_d_conditions(cs, h, 4.0, 0.2, DMode::Simple);
    CHECK_FALSE(simple.find("D1.min-H2")->holds);

    ConditionReport mixed = check_d_conditions(cs, h, 4.0, 0.2, DMode::Mixed);
    CHECK(mixed.find("E1.min-H2")->holds);
    CHECK(mixed.find("E5[j1=1]") != nullptr);
    CHECK(mixed.find("E5[j1=1]")->holds);
    CHECK(mixed.all_hold());
}

TEST_CASE("empty D passes both modes") {
    auto h = grid_instance();
    ConflictSystem cs(h, {}, {}, 4, 0.2);
    CHECK(check_d_conditions(cs, h, 2.0, 0.2, DMode::Simple).all_hold());
    CHECK(check_d_conditions(cs, h, 2.0, 0.2, DMode::Mixed).all_hold());
}

TEST_CASE("simple-implies-mixed cross validation") {
    TripartiteHypergraph h(8, 0, 10);
    std::vector<int> h2;
    for (int x = 0; x < 8; ++x) {
        h2.push_back(h.add_edge(EdgeClass::H2, {x, 8 + x}));
        h2.push_back(h.add_edge(EdgeClass::H2, {x, 9 + x}));
    }
    ConflictSystem cs(h, {}, {{h2[0], h2[2]}, {h2[4], h2[6]}}, 4, 0.2);
    ConditionReport both = check_d_conditions(cs, h, 4.0, 0.2, DMode::Both);
    const auto* x = both.find("X.simple-implies-mixed");
    REQUIRE(x != nullptr);
    CHECK(x->holds);
}

TEST_CASE("condition report serializes to json deterministically") {
    auto h = grid_instance();
    ConditionReport rep = check_h_conditions(h, 2.0, 0.1);
    auto j1 = rep.to_json().dump();
    auto j2 = check_h_conditions(h, 2.0, 0.1).to_json().dump();
    CHECK(j1 == j2);
    CHECK(j1.find("\"conditions\"") != std::string::npos);
    // entries arrive sorted by label
    for (std::size_t i = 1; i < rep.entries.size(); ++i)
        CHECK(rep.entries[i - 1].label <= rep.entries[i].label);
}
