#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "pqa/compiler.hpp"
#include "pqa/io.hpp"
#include "pqa/oracle.hpp"
#include "pqa/verify.hpp"

using namespace pqa;

namespace {

SpinGlassProblem coupling_free_problem(int n) {
  SpinGlassProblem problem;
  problem.n_logical = n;
  return problem;
}

SpinGlassProblem random_problem(int n, std::mt19937& rng) {
  SpinGlassProblem problem;
  problem.n_logical = n;
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      problem.couplings[{i, j}] = (rng() * (1.0 / 4294967296.0)) * 2.0 - 1.0;
    }
  }
  return problem;
}

std::vector<std::vector<int>> plaquette_checks(const ParityLayout& layout) {
  std::vector<std::vector<int>> checks;
  for (const auto& c : layout.plaquettes) checks.push_back(c.members);
  return checks;
}

}  // namespace

TEST_CASE("parity_encode: qubit and check counts across sizes") {
  for (int n = 3; n <= 8; ++n) {
    const auto layout = parity_encode(coupling_free_problem(n));
    const int k = n * (n - 1) / 2;
    CHECK(static_cast<int>(layout.qubits.size()) == k);
    CHECK(static_cast<int>(layout.plaquettes.size()) == k - (n - 1));
    CHECK(gf2_rank(plaquette_checks(layout),
                   static_cast<int>(layout.qubits.size())) == k - (n - 1));

    std::set<std::pair<int, int>> positions;
    for (const auto& q : layout.qubits) {
      CHECK(q.kind == QubitKind::logical_pair);
      CHECK(q.pair.has_value());
      positions.insert({q.row, q.col});
    }
    CHECK(positions.size() == layout.qubits.size());
  }
}

TEST_CASE("parity_encode: N=3 is a single boundary triangle") {
  const auto layout = parity_encode(coupling_free_problem(3));
  CHECK(layout.qubits.size() == 3);
  REQUIRE(layout.plaquettes.size() == 1);
  CHECK(layout.plaquettes[0].order() == 3);
  CHECK(layout.plaquettes[0].parity == Parity::even);
}

TEST_CASE("parity_encode rejects sizes without constraints") {
  CHECK_THROWS_WITH_AS(parity_encode(coupling_free_problem(2)),
                       doctest::Contains("no constraints exist"), SchemaError);
}

TEST_CASE("split_constraint: members, parities, and oracle equivalence") {
  ParityConstraint even4{{0, 1, 2, 3}, 1.0, Parity::even};
  auto [left, right] = split_constraint(even4, 2, 9);
  CHECK(left.members == std::vector<int>{0, 1, 9});
  CHECK(right.members == std::vector<int>{9, 2, 3});
  CHECK(left.parity == Parity::odd);
  CHECK(right.parity == Parity::odd);

  ParityConstraint odd4{{0, 1, 2, 3}, 1.0, Parity::odd};
  auto [oleft, oright] = split_constraint(odd4, 2, 9);
  CHECK(oleft.parity == Parity::odd);
  CHECK(oright.parity == Parity::even);

  CHECK_THROWS_WITH_AS(split_constraint(even4, 0, 9),
                       doctest::Contains("degenerate cut"), SchemaError);
  CHECK_THROWS_AS(split_constraint(even4, 4, 9), SchemaError);
  CHECK_THROWS_AS(split_constraint(even4, 2, 3), SchemaError);

  std::mt19937 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const int order = 3 + static_cast<int>(rng() % 4);
    std::vector<int> members(static_cast<std::size_t>(order));
    for (int i = 0; i < order; ++i) members[static_cast<std::size_t>(i)] = i;
    ParityConstraint root{members,
                          0.5 + 1.5 * (rng() * (1.0 / 4294967296.0)),
                          rng() & 1 ? Parity::even : Parity::odd};
    const int cut = 1 + static_cast<int>(rng() % (order - 1));
    auto [a, b] = split_constraint(root, cut, order);
    std::vector<ParityConstraint> children{a, b};
    const auto eq = verify_equivalence(
        IsingSystem::from_constraint(root),
        IsingSystem::from_constraints(children), root.members);
    CHECK(eq.ok);
    CHECK(eq.gap_original == doctest::Approx(2.0 * root.strength));
    CHECK(eq.gap_decomposed == doctest::Approx(2.0 * root.strength));
  }
}

TEST_CASE("decompose_to_tree: base case and the worked 5-body example") {
  ParityConstraint triangle{{0, 1, 2}, 1.0, Parity::even};
  const auto leaf_tree =
      decompose_to_tree(triangle, SplitPolicy::balanced, 10);
  CHECK(leaf_tree.nodes.size() == 1);
  CHECK(leaf_tree.root().is_leaf());
  CHECK(leaf_tree.ancilla_ids().empty());

  ParityConstraint five{{1, 2, 3, 4, 5}, 1.0, Parity::even};
  const auto tree = decompose_to_tree(five, SplitPolicy::paper_example, 6);
  const auto leaves = tree.leaves();
  REQUIRE(leaves.size() == 3);
  CHECK(leaves[0].members == std::vector<int>{1, 2, 6});
  CHECK(leaves[1].members == std::vector<int>{6, 3, 7});
  CHECK(leaves[2].members == std::vector<int>{7, 4, 5});
  CHECK(tree.ancilla_ids() == std::vector<int>{6, 7});
}

TEST_CASE("decompose_to_tree: 7-body bookkeeping and acyclicity") {
  ParityConstraint seven{{0, 1, 2, 3, 4, 5, 6}, 1.0, Parity::odd};
  for (SplitPolicy policy : {SplitPolicy::balanced, SplitPolicy::left_pair}) {
    const auto tree = decompose_to_tree(seven, policy, 7);
    CHECK(tree.ancilla_ids().size() == 4);  // order - 3
    const auto leaves = tree.leaves();
    CHECK(leaves.size() == 5);
    for (const auto& leaf : leaves) CHECK(leaf.order() == 3);

    // acyclic: the constraint graph with shared ancillas as edges has
    // #nodes - 1 edges and is connected by construction
    std::map<int, int> ancilla_uses;
    for (const auto& leaf : leaves) {
      for (int m : leaf.members) {
        if (m >= 7) ++ancilla_uses[m];
      }
    }
    int shared_edges = 0;
    for (const auto& [id, uses] : ancilla_uses) {
      CHECK(uses == 2);  // every ancilla joins exactly two constraints
      shared_edges += uses - 1;
    }
    CHECK(shared_edges == static_cast<int>(leaves.size()) - 1);
  }
}

TEST_CASE("decomposition soundness for random constraints (tree oracle)") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const int order = 3 + static_cast<int>(rng() % 5);
    std::vector<int> members(static_cast<std::size_t>(order));
    for (int i = 0; i < order; ++i) members[static_cast<std::size_t>(i)] = i;
    ParityConstraint root{members,
                          0.5 + 1.5 * (rng() * (1.0 / 4294967296.0)),
                          rng() & 1 ? Parity::even : Parity::odd};
    const auto policy =
        rng() & 1 ? SplitPolicy::balanced : SplitPolicy::left_pair;
    const auto tree = decompose_to_tree(root, policy, order);
    const auto leaves = tree.leaves();
    const auto eq = verify_equivalence(
        IsingSystem::from_constraint(root),
        IsingSystem::from_constraints(std::span(leaves.data(), leaves.size())),
        root.members);
    CHECK(eq.ok);
    CHECK(eq.gap_decomposed ==
          doctest::Approx(2.0 * root.strength).epsilon(1e-9));
  }
}

TEST_CASE("gadgetize_3body: frozen spectrum, parity, and error paths") {
  ParityConstraint even3{{0, 1, 2}, 1.0, Parity::even};
  const auto fragment = gadgetize_3body(even3, 3);
  CHECK(fragment.pair_terms.size() == 6);
  for (const auto& term : fragment.pair_terms) CHECK(term.weight > 0.0);

  const auto lines = enumerate_spectrum(IsingSystem::from_fragment(fragment));
  REQUIRE(lines.size() == 4);
  CHECK(lines[0].energy == doctest::Approx(-4.0));
  CHECK(lines[0].multiplicity == 4);
  CHECK(lines[1].energy == doctest::Approx(-2.0));
  CHECK(lines[1].multiplicity == 7);
  CHECK(lines[2].energy == doctest::Approx(4.0));
  CHECK(lines[2].multiplicity == 4);
  CHECK(lines[3].energy == doctest::Approx(14.0));
  CHECK(lines[3].multiplicity == 1);

  const auto eq = verify_equivalence(
      IsingSystem::from_constraint(even3),
      IsingSystem::from_fragment(fragment), even3.members);
  CHECK(eq.ok);
  CHECK(eq.gap_decomposed == doctest::Approx(2.0));

  // odd constraints flip the field signs, not the pair weights
  ParityConstraint odd3{{0, 1, 2}, 1.0, Parity::odd};
  const auto odd_fragment = gadgetize_3body(odd3, 3);
  for (const auto& term : odd_fragment.pair_terms) CHECK(term.weight > 0.0);
  for (const auto& term : odd_fragment.constraint_fields) {
    CHECK(term.weight > 0.0);
  }
  const auto odd_eq = verify_equivalence(
      IsingSystem::from_constraint(odd3),
      IsingSystem::from_fragment(odd_fragment), odd3.members);
  CHECK(odd_eq.ok);
  CHECK(odd_eq.gap_decomposed == doctest::Approx(2.0));

  ParityConstraint four{{0, 1, 2, 3}, 1.0, Parity::even};
  CHECK_THROWS_WITH_AS(gadgetize_3body(four, 9), doctest::Contains("order-3"),
                       SchemaError);
}

TEST_CASE("gadget ground states fix the ancilla uniquely") {
  ParityConstraint even3{{0, 1, 2}, 1.0, Parity::even};
  const auto fragment = gadgetize_3body(even3, 3);
  const auto report = ground_report(IsingSystem::from_fragment(fragment),
                                    even3.members);
  REQUIRE(report.ground_states.size() == 4);
  CHECK(report.marginal_ground.size() == 4);  // one ancilla value per state
}

TEST_CASE("compile_full: N=3 instance matches the hand count") {
  auto problem = coupling_free_problem(3);
  problem.couplings[{1, 2}] = 0.5;
  CompileOptions options;
  options.constraint_strength = 2.0;
  const auto program = compile_full(problem, options);
  CHECK(program.model.n_spins == 4);  // 3 logical + 1 gadget ancilla
  CHECK(program.model.pair_terms.size() == 6);
  CHECK(program.model.constraint_fields.size() == 4);
  CHECK(program.model.ancilla_ids == std::vector<int>{3});
  CHECK(program.model.crossing_free);
  // even constraint: fields -C on members, -2C on the ancilla
  for (const auto& term : program.model.constraint_fields) {
    if (term.site == 3) {
      CHECK(term.weight == doctest::Approx(-4.0));
    } else {
      CHECK(term.weight == doctest::Approx(-2.0));
    }
  }
  REQUIRE(program.model.z_fields.size() == 1);
  CHECK(program.model.z_fields[0].site == 0);  // qubit of pair (1, 2)
  CHECK(program.model.z_fields[0].weight == 0.5);
}

TEST_CASE("compile_full: N=4 ancilla budget is 3 per 4-body plaquette") {
  std::mt19937 rng(5);
  const auto program = compile_full(random_problem(4, rng));
  const auto& layout = program.layout;
  REQUIRE(layout.plaquettes.size() == 3);

  int split_count = 0, gadget_count = 0;
  for (const auto& q : layout.qubits) {
    split_count += q.kind == QubitKind::split_ancilla;
    gadget_count += q.kind == QubitKind::gadget_ancilla;
  }
  // two boundary triangles (1 gadget each) + one 4-body cell (1 split + 2)
  CHECK(split_count == 1);
  CHECK(gadget_count == 4);
  CHECK(program.model.n_spins == 11);
  CHECK(program.model.crossing_free);
  CHECK(program.decode_map.size() == 6);

  int four_body = 0;
  for (std::size_t t = 0; t < program.trees.size(); ++t) {
    const auto& tree = program.trees[t];
    const int order = tree.root().constraint.order();
    const int ancillas_here =
        static_cast<int>(tree.ancilla_ids().size()) +
        static_cast<int>(tree.leaves().size());
    if (order == 4) {
      ++four_body;
      CHECK(ancillas_here == 3);  // one split + two gadget ancillas
    } else {
      CHECK(ancillas_here == 1);
    }
  }
  CHECK(four_body == 1);
}

TEST_CASE("compile_full is deterministic and verifies") {
  std::mt19937 rng(23);
  const auto problem = random_problem(4, rng);
  const auto a = compile_full(problem);
  const auto b = compile_full(problem);
  CHECK(serialize_compiled(a) == serialize_compiled(b));

  const auto report = verify_compiled(a);
  CHECK(report.ok);
  CHECK(report.model_check_ran);
  CHECK(report.model_check_ok);
}

TEST_CASE("compile_full covers both groupings and driver scopes") {
  std::mt19937 rng(29);
  const auto problem = random_problem(4, rng);
  for (auto grouping : {PlaquetteGrouping::ne_sw, PlaquetteGrouping::nw_es}) {
    for (auto scope : {DriverScope::all_spins, DriverScope::logical_only}) {
      CompileOptions options;
      options.grouping = grouping;
      options.driver_scope = scope;
      const auto program = compile_full(problem, options);
      CHECK(program.model.crossing_free);
      CHECK(verify_compiled(program).ok);
      const std::size_t expected_driver =
          scope == DriverScope::all_spins
              ? static_cast<std::size_t>(program.model.n_spins)
              : 6u;
      CHECK(program.model.x_fields.size() == expected_driver);
    }
  }
}

TEST_CASE("compile_full stays planar with unique positions across sizes") {
  for (int n = 3; n <= 7; ++n) {
    for (auto grouping : {PlaquetteGrouping::ne_sw, PlaquetteGrouping::nw_es}) {
      CompileOptions options;
      options.grouping = grouping;
      const auto program =
          compile_full(coupling_free_problem(n), options);
      CHECK(program.model.crossing_free);
      std::set<std::pair<int, int>> positions;
      for (const auto& q : program.layout.qubits) {
        positions.insert({q.row, q.col});
      }
      CHECK(positions.size() == program.layout.qubits.size());
    }
  }
}

TEST_CASE("compile_full rejects logical on-site fields") {
  auto problem = coupling_free_problem(3);
  problem.z_fields = {0.0, 0.1, 0.0};
  CHECK_THROWS_AS(compile_full(problem), SchemaError);
  problem.z_fields.clear();
  problem.x_fields = {0.2, 0.0, 0.0};
  CHECK_THROWS_AS(compile_full(problem), SchemaError);
}

TEST_CASE("compiled ground states decode to the logical optimum") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    const auto problem = random_problem(4, rng);
    const auto program = compile_full(problem);
    const auto system = IsingSystem::from_model(program.model);
    std::vector<int> all_ids(static_cast<std::size_t>(program.model.n_spins));
    for (int i = 0; i < program.model.n_spins; ++i) {
      all_ids[static_cast<std::size_t>(i)] = i;
    }
    const auto report = ground_report(system, all_ids);

    double logical_best = std::numeric_limits<double>::infinity();
    for (int mask = 0; mask < 16; ++mask) {
      std::vector<int> spins(4);
      for (int b = 0; b < 4; ++b) spins[static_cast<std::size_t>(b)] =
          (mask >> b) & 1 ? -1 : 1;
      logical_best = std::min(logical_best, classical_energy(problem, spins));
    }

    // bijectivity up to the global flip: decoded ground orbits and the
    // brute-forced logical optimum orbits are the same set
    std::set<int> optimal_orbits;
    for (int mask = 0; mask < 16; ++mask) {
      std::vector<int> spins(4);
      for (int b = 0; b < 4; ++b) spins[static_cast<std::size_t>(b)] =
          (mask >> b) & 1 ? -1 : 1;
      if (classical_energy(problem, spins) <= logical_best + 1e-9) {
        optimal_orbits.insert(std::min(mask, 15 - mask));
      }
    }
    std::set<int> decoded_orbits;
    for (std::uint32_t g : report.ground_states) {
      std::vector<int> physical(static_cast<std::size_t>(program.model.n_spins));
      for (int b = 0; b < program.model.n_spins; ++b) {
        physical[static_cast<std::size_t>(b)] = spin_of_bit(g, b);
      }
      const auto logical = decode(program.layout, physical);
      CHECK(classical_energy(problem, logical) ==
            doctest::Approx(logical_best).epsilon(1e-9));
      int mask = 0;
      for (int b = 0; b < 4; ++b) {
        if (logical[static_cast<std::size_t>(b)] < 0) mask |= 1 << b;
      }
      decoded_orbits.insert(std::min(mask, 15 - mask));
    }
    CHECK(decoded_orbits == optimal_orbits);
  }
}

TEST_CASE("compiled programs round-trip through their file form") {
  std::mt19937 rng(47);
  const auto program = compile_full(random_problem(4, rng));
  const std::string text = serialize_compiled(program);
  const auto reloaded = load_compiled(text);
  CHECK(serialize_compiled(reloaded) == text);
  CHECK(verify_compiled(reloaded).ok);
  CHECK(reloaded.decode_map == program.decode_map);
}

TEST_CASE("decode: worked three-spin examples") {
  const auto layout = parity_encode(coupling_free_problem(3));
  // qubit order is lexicographic: (1,2), (1,3), (2,3)
  const int all_up[] = {1, 1, 1};
  CHECK(decode(layout, all_up) == std::vector<int>{1, 1, 1});

  const int mixed[] = {-1, -1, 1};
  CHECK(decode(layout, mixed) == std::vector<int>{1, -1, -1});

  const int violating[] = {-1, 1, 1};
  CHECK_THROWS_WITH_AS(decode(layout, violating),
                       doctest::Contains("unsatisfied plaquette"),
                       VerificationError);

  const int wrong_length[] = {1, 1};
  CHECK_THROWS_AS(decode(layout, wrong_length), SchemaError);
  const int not_spins[] = {1, 2, 1};
  CHECK_THROWS_AS(decode(layout, not_spins), SchemaError);
}

TEST_CASE("decode inverts encode_state up to the global flip") {
  std::mt19937 rng(37);
  const auto layout = parity_encode(coupling_free_problem(5));
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> logical(5);
    for (auto& s : logical) s = rng() & 1 ? 1 : -1;
    const auto physical = encode_state(layout, logical);
    const auto decoded = decode(layout, physical);
    std::vector<int> flipped(5);
    for (int i = 0; i < 5; ++i) flipped[static_cast<std::size_t>(i)] =
        -logical[static_cast<std::size_t>(i)];
    CHECK((decoded == logical || decoded == flipped));
  }
}

TEST_CASE("single_plaquette_model: the 7-spin demonstration system") {
  const auto model = single_plaquette_model(1.0);
  CHECK(model.n_spins == 7);
  CHECK(model.pair_terms.size() == 12);
  CHECK(model.ancilla_ids == std::vector<int>{4, 5, 6});

  TwoBodyModel constraint_only = model;
  constraint_only.z_fields.clear();
  ParityConstraint plaquette{{0, 1, 2, 3}, 1.0, Parity::even};
  const auto eq = verify_equivalence(
      IsingSystem::from_constraint(plaquette),
      IsingSystem::from_model(constraint_only), plaquette.members);
  CHECK(eq.ok);
  const std::vector<int> members{0, 1, 2, 3};
  const auto report =
      ground_report(IsingSystem::from_model(constraint_only), members);
  CHECK(report.ground_states.size() == 8);  // unique ancilla extensions
  CHECK(report.marginal_ground.size() == 8);
}

TEST_CASE("verify_compiled flags a mutated model") {
  std::mt19937 rng(41);
  auto program = compile_full(random_problem(4, rng));
  program.model.pair_terms[0].weight += 0.5;
  const auto report = verify_compiled(program);
  CHECK_FALSE(report.ok);
}
