#include <doctest.h>

#include "desk_models.hpp"
#include "oracles.hpp"

#include "fwland/cycles.hpp"

#include <set>

using namespace fwland;

namespace {

Rate fin(int num, int den = 1) { return Rate(Rat(num, den)); }

std::set<std::vector<int>> node_sets(const CycleTree& tree) {
  std::set<std::vector<int>> out;
  for (const auto& node : tree.nodes) out.insert(node.cycle.members);
  return out;
}

std::set<std::vector<int>> subsets_passing_definition(const Model& m) {
  EnergyTable h = virtual_energy(m);
  auto phi = oracles::oracle_heights(m, h);
  std::set<std::vector<int>> out;
  const int n = m.size();
  for (int mask = 1; mask < (1 << n); ++mask) {
    std::vector<int> subset;
    for (int s = 0; s < n; ++s)
      if (mask & (1 << s)) subset.push_back(s);
    if (oracles::oracle_is_cycle(m, phi, subset)) out.insert(subset);
  }
  return out;
}

}  // namespace

TEST_CASE("energy-cycle test on the well") {
  Landscape land = analyze_landscape(fixtures::well5());
  CHECK(is_cycle(land, {2, 3, 4}));
  CHECK_FALSE(is_cycle(land, {1, 2}));  // internal 4 equals exit 4, not strict
  CHECK(is_cycle(land, {3}));
  CHECK(is_cycle(land, {0, 1, 2, 3, 4}));
}

TEST_CASE("cycle tree of the desk models") {
  SUBCASE("well5") {
    Model m = fixtures::well5();
    Landscape land = analyze_landscape(m);
    CycleTree tree = cycle_tree(m, land);
    auto sets = node_sets(tree);
    CHECK(sets.size() == 7);  // five singletons, the trap, the root
    CHECK(sets.count({2, 3, 4}));
    CHECK(sets.count({0, 1, 2, 3, 4}));
    const Cycle& trap = tree.nodes[tree.find({2, 3, 4})].cycle;
    CHECK(trap.bottom_energy == Rat(1));
    CHECK(trap.depth == fin(3));
    CHECK(trap.exit_level == fin(4));
    CHECK(trap.principal_boundary == std::vector<int>{1});
  }
  SUBCASE("rotor3") {
    Model m = fixtures::rotor3();
    Landscape land = analyze_landscape(m);
    CycleTree tree = cycle_tree(m, land);
    CHECK(node_sets(tree).size() == 4);  // singletons and the root only
  }
  SUBCASE("well6 gains an intermediate level") {
    Model m = fixtures::well6();
    Landscape land = analyze_landscape(m);
    CycleTree tree = cycle_tree(m, land);
    auto sets = node_sets(tree);
    CHECK(sets.count({2, 3, 4}));
    CHECK(sets.count({0, 1, 2, 3, 4}));  // everything below f's level
    CHECK(sets.count({0, 1, 2, 3, 4, 5}));
  }
  SUBCASE("single state") {
    Model single({"a"}, {{Rate::infinity()}});
    Landscape land = analyze_landscape(single);
    CHECK(cycle_tree(single, land).nodes.size() == 1);
  }
}

TEST_CASE("tree nodes equal the exhaustive energy-cycle family") {
  oracles::ModelGen gen(101);
  for (int round = 0; round < 12; ++round) {
    Model m = gen.irreducible(gen.uniform_int(2, 7));
    Landscape land = analyze_landscape(m);
    CycleTree tree = cycle_tree(m, land);
    CHECK(node_sets(tree) == subsets_passing_definition(m));
  }
}

TEST_CASE("tree nodes are nested or disjoint, with monotone depths") {
  oracles::ModelGen gen(102);
  std::vector<Model> models{fixtures::well5(), fixtures::well6(),
                            fixtures::tworoute7()};
  for (int i = 0; i < 10; ++i) models.push_back(gen.irreducible(gen.uniform_int(2, 7)));
  for (const Model& m : models) {
    Landscape land = analyze_landscape(m);
    CycleTree tree = cycle_tree(m, land);
    for (const auto& a : tree.nodes)
      for (const auto& b : tree.nodes) {
        std::vector<int> overlap;
        std::set_intersection(a.cycle.members.begin(), a.cycle.members.end(),
                              b.cycle.members.begin(), b.cycle.members.end(),
                              std::back_inserter(overlap));
        bool nested =
            overlap.size() == a.cycle.members.size() ||
            overlap.size() == b.cycle.members.size();
        CHECK((overlap.empty() || nested));
      }
    for (const auto& node : tree.nodes)
      if (node.parent != -1)
        CHECK(node.cycle.depth <= tree.nodes[node.parent].cycle.depth);
  }
}

TEST_CASE("depth, boundary, and exit costs on the desk models") {
  Model well = fixtures::well5();
  Landscape land = analyze_landscape(well);
  CHECK(cycle_depth(well, land, {2, 3, 4}) == fin(3));
  CHECK(cycle_depth(well, land, {1}) == fin(0));
  CHECK(principal_boundary(well, land, {2, 3, 4}) == std::vector<int>{1});
  CHECK(principal_boundary(well, land, {1}) == std::vector<int>{0, 2});
  auto costs = exit_costs(well, land, {1});
  CHECK(costs.at(0) == fin(0));
  CHECK(costs.at(2) == fin(0));

  Model rotor = fixtures::rotor3();
  Landscape lr = analyze_landscape(rotor);
  CHECK(cycle_depth(rotor, lr, {1}) == fin(0));

  Model well6 = fixtures::well6();
  Landscape l6 = analyze_landscape(well6);
  CHECK(principal_boundary(well6, l6, {2, 3, 4}) == std::vector<int>{1});
  auto costs6 = exit_costs(well6, l6, {2, 3, 4});
  CHECK(costs6.at(1) == fin(0));
  CHECK(costs6.at(5) == fin(4));
  CHECK(costs6.count(0) == 0);  // unreachable in one jump: infinite cost

  CHECK_THROWS_AS(cycle_depth(well, land, {0, 1, 2, 3, 4}), std::invalid_argument);
  CHECK_THROWS_AS(make_cycle(well, land, {1, 2}), std::invalid_argument);
}

TEST_CASE("maximal partitions") {
  Model well = fixtures::well5();
  Landscape land = analyze_landscape(well);
  SUBCASE("the textbook domain") {
    auto parts = maximal_partition(well, land, {1, 2, 3, 4});
    REQUIRE(parts.size() == 2);
    CHECK(parts[0].members == std::vector<int>{1});
    CHECK(parts[1].members == std::vector<int>{2, 3, 4});
  }
  SUBCASE("a domain that is itself a cycle") {
    auto parts = maximal_partition(well, land, {2, 3, 4});
    REQUIRE(parts.size() == 1);
    CHECK(parts[0].members == std::vector<int>{2, 3, 4});
  }
  SUBCASE("singleton domain") {
    auto parts = maximal_partition(well, land, {3});
    REQUIRE(parts.size() == 1);
    CHECK(parts[0].members == std::vector<int>{3});
  }
  SUBCASE("the full space is rejected") {
    CHECK_THROWS_AS(maximal_partition(well, land, {0, 1, 2, 3, 4}),
                    std::invalid_argument);
  }
}

TEST_CASE("partition maximality holds exhaustively on random domains") {
  oracles::ModelGen gen(103);
  for (int round = 0; round < 10; ++round) {
    Model m = gen.irreducible(gen.uniform_int(3, 7));
    Landscape land = analyze_landscape(m);
    // Random proper domain of size <= 6.
    std::vector<int> domain;
    for (int s = 0; s < m.size(); ++s)
      if (gen.uniform_int(0, 1)) domain.push_back(s);
    if (domain.empty() || static_cast<int>(domain.size()) == m.size()) continue;
    auto parts = maximal_partition(m, land, domain);

    // Covers the domain, pairwise disjoint.
    std::set<int> covered;
    for (const auto& c : parts)
      for (int s : c.members) CHECK(covered.insert(s).second);
    CHECK(covered == std::set<int>(domain.begin(), domain.end()));

    // No union of two or more elements inside the domain is a cycle.
    const int k = static_cast<int>(parts.size());
    for (int mask = 1; mask < (1 << k); ++mask) {
      if ((mask & (mask - 1)) == 0) continue;  // single element
      std::vector<int> unioned;
      for (int i = 0; i < k; ++i)
        if (mask & (1 << i))
          unioned.insert(unioned.end(), parts[i].members.begin(),
                         parts[i].members.end());
      std::sort(unioned.begin(), unioned.end());
      if (static_cast<int>(unioned.size()) == m.size()) continue;
      CHECK_FALSE(is_cycle(land, unioned));
    }
  }
}

TEST_CASE("maximal strict subcycles") {
  SUBCASE("root of well5") {
    Model m = fixtures::well5();
    Landscape land = analyze_landscape(m);
    auto parts = max_strict_subcycles(m, land, {0, 1, 2, 3, 4});
    REQUIRE(parts.size() == 3);
    CHECK(parts[0].members == std::vector<int>{0});
    CHECK(parts[1].members == std::vector<int>{1});
    CHECK(parts[2].members == std::vector<int>{2, 3, 4});
  }
  SUBCASE("root of rotor3 splits into singletons") {
    Model m = fixtures::rotor3();
    Landscape land = analyze_landscape(m);
    CHECK(max_strict_subcycles(m, land, {0, 1, 2}).size() == 3);
  }
  SUBCASE("the trap decomposes into singletons at the tied level") {
    Model m = fixtures::well5();
    Landscape land = analyze_landscape(m);
    auto parts = max_strict_subcycles(m, land, {2, 3, 4});
    REQUIRE(parts.size() == 3);
    for (std::size_t i = 0; i < parts.size(); ++i)
      CHECK(parts[i].members.size() == 1);
  }
  SUBCASE("decomposition equals the tree children everywhere") {
    oracles::ModelGen gen(104);
    for (int round = 0; round < 10; ++round) {
      Model m = gen.irreducible(gen.uniform_int(2, 7));
      Landscape land = analyze_landscape(m);
      CycleTree tree = cycle_tree(m, land);
      for (const auto& node : tree.nodes) {
        if (node.cycle.members.size() < 2) continue;
        auto parts = max_strict_subcycles(m, land, node.cycle.members);
        std::set<std::vector<int>> got;
        for (const auto& c : parts) got.insert(c.members);
        std::set<std::vector<int>> expected;
        for (int child : node.children)
          expected.insert(tree.nodes[child].cycle.members);
        CHECK(got == expected);
        // Constant exit level across the decomposition.
        for (const auto& c : parts) CHECK(c.exit_level == parts.front().exit_level);
      }
    }
  }
}

TEST_CASE("vtj graphs and exit paths") {
  Model well = fixtures::well5();
  Landscape land = analyze_landscape(well);
  SUBCASE("textbook domain graph") {
    auto parts = maximal_partition(well, land, {1, 2, 3, 4});
    VtjGraph g = vtj_graph(well, parts, {1, 2, 3, 4});
    REQUIRE(g.nodes.size() == 2);  // {b} first, then {c,d,e}
    CHECK(g.edges[0] == std::vector<int>{1});  // {b} -> {c,d,e} via c
    CHECK(g.exterior[0]);                      // {b} -> a leaves the domain
    CHECK(g.edges[1] == std::vector<int>{0});  // {c,d,e} -> {b}
    CHECK_FALSE(g.exterior[1]);
  }
  SUBCASE("exit path from the trap") {
    auto path = vtj_exit_path(well, land, {1, 2, 3, 4}, 2);
    REQUIRE(path.size() == 2);
    CHECK(path[0].members == std::vector<int>{2, 3, 4});
    CHECK(path[1].members == std::vector<int>{1});
  }
  SUBCASE("already exiting: length one") {
    auto path = vtj_exit_path(well, land, {1, 2, 3, 4}, 1);
    REQUIRE(path.size() == 1);
    CHECK(path[0].members == std::vector<int>{1});
  }
  SUBCASE("rotor domain") {
    Model rotor = fixtures::rotor3();
    Landscape lr = analyze_landscape(rotor);
    auto path = vtj_exit_path(rotor, lr, {1, 2}, 1);
    REQUIRE(path.size() == 2);
    CHECK(path[0].members == std::vector<int>{1});
    CHECK(path[1].members == std::vector<int>{2});
  }
}

TEST_CASE("isolated unions of vtj systems") {
  Model well = fixtures::well5();
  Landscape land = analyze_landscape(well);
  SUBCASE("the singleton shuffle inside the trap is isolated") {
    std::vector<Cycle> system{make_cycle(well, land, {2}), make_cycle(well, land, {3}),
                              make_cycle(well, land, {4})};
    CHECK(check_isolated_union(well, land, system));
  }
  SUBCASE("a system leaking outside is not") {
    std::vector<Cycle> system{make_cycle(well, land, {1}),
                              make_cycle(well, land, {2, 3, 4})};
    CHECK_FALSE(check_isolated_union(well, land, system));
  }
  SUBCASE("the full space is vacuously isolated") {
    std::vector<Cycle> system{make_cycle(well, land, {0, 1, 2, 3, 4})};
    CHECK(check_isolated_union(well, land, system));
  }
  SUBCASE("disconnected systems are rejected") {
    std::vector<Cycle> system{make_cycle(well, land, {0}), make_cycle(well, land, {4})};
    CHECK_THROWS_AS(check_isolated_union(well, land, system), std::invalid_argument);
  }
}
