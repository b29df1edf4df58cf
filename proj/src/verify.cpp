#include "pqa/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace pqa {

namespace {

bool weights_match(const std::map<std::pair<int, int>, double>& expected,
                   const std::vector<PairTerm>& actual) {
  if (expected.size() != actual.size()) return false;
  for (const auto& term : actual) {
    auto it = expected.find(std::minmax(term.a, term.b));
    if (it == expected.end() || it->second != term.weight) return false;
  }
  return true;
}

bool fields_match(const std::map<int, double>& expected,
                  const std::vector<FieldTerm>& actual) {
  if (expected.size() != actual.size()) return false;
  for (const auto& term : actual) {
    auto it = expected.find(term.site);
    if (it == expected.end() || it->second != term.weight) return false;
  }
  return true;
}

}  // namespace

VerifyReport verify_compiled(const CompiledProgram& program) {
  VerifyReport report;
  const ParityLayout& layout = program.layout;
  const int n = layout.n_logical;

  int k_logical = 0;
  for (const auto& q : layout.qubits) {
    if (q.kind == QubitKind::logical_pair) ++k_logical;
  }
  report.n_logical_qubits = k_logical;
  if (k_logical != n * (n - 1) / 2) {
    report.failures.push_back("logical qubit count is not N(N-1)/2");
  }
  if (static_cast<int>(program.decode_map.size()) != k_logical) {
    report.failures.push_back("decode map does not cover the logical qubits");
  } else {
    for (const auto& q : layout.qubits) {
      if (q.kind != QubitKind::logical_pair) continue;
      auto it = program.decode_map.find(q.id);
      if (it == program.decode_map.end() || !q.pair || it->second != *q.pair) {
        report.failures.push_back("decode map disagrees with qubit " +
                                  std::to_string(q.id));
        break;
      }
    }
  }

  // one tree per plaquette, covering it exactly (member order may differ:
  // the compiler regroups 4-body cells before splitting)
  if (program.trees.size() != layout.plaquettes.size()) {
    report.failures.push_back("tree count differs from plaquette count");
  } else {
    for (std::size_t t = 0; t < program.trees.size(); ++t) {
      const ParityConstraint& root = program.trees[t].root().constraint;
      const ParityConstraint& plaquette = layout.plaquettes[t];
      std::vector<int> a = root.members, b = plaquette.members;
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      if (a != b || root.strength != plaquette.strength ||
          root.parity != plaquette.parity) {
        report.failures.push_back("tree " + std::to_string(t) +
                                  " does not cover its plaquette");
      }
    }
  }

  std::vector<std::vector<int>> checks;
  checks.reserve(layout.plaquettes.size());
  for (const auto& c : layout.plaquettes) checks.push_back(c.members);
  report.gf2_rank =
      pqa::gf2_rank(checks, static_cast<int>(layout.qubits.size()));
  report.expected_rank = k_logical - (n - 1);
  if (report.gf2_rank != report.expected_rank) {
    std::ostringstream msg;
    msg << "parity-check rank " << report.gf2_rank << " differs from K-(N-1)="
        << report.expected_rank;
    report.failures.push_back(msg.str());
  }

  // Every tree: the leaf system must reproduce the root's ground manifold
  // over the root members, with the expected 2 * strength gap.
  for (std::size_t t = 0; t < program.trees.size(); ++t) {
    const ConstraintTree& tree = program.trees[t];
    const ParityConstraint& root = tree.root().constraint;
    const auto leaves = tree.leaves();
    const IsingSystem root_system = IsingSystem::from_constraint(root);
    const IsingSystem leaf_system =
        IsingSystem::from_constraints(std::span(leaves.data(), leaves.size()));
    EquivalenceReport eq =
        verify_equivalence(root_system, leaf_system, root.members);
    TreeVerification tv;
    tv.tree_index = static_cast<int>(t);
    tv.ok = eq.ok &&
            std::abs(eq.gap_decomposed - 2.0 * root.strength) <= 1e-9;
    tv.gap_original = eq.gap_original;
    tv.gap_decomposed = eq.gap_decomposed;
    report.trees.push_back(tv);
    if (!tv.ok) {
      report.failures.push_back("tree " + std::to_string(t) +
                                " does not reproduce its root constraint");
    }
  }

  // Rebuild the constraint sector the trees imply (gadget ancilla ids run
  // consecutively after each split ancilla, in plaquette order) and compare
  // term by term with the serialized model.
  {
    std::map<std::pair<int, int>, double> pair_accum;
    std::map<int, double> field_accum;
    int next_id = k_logical;
    bool structure_ok = true;
    for (const auto& tree : program.trees) {
      for (const auto& node : tree.nodes) {
        if (!node.is_leaf() && node.ancilla_id != next_id++) {
          structure_ok = false;
        }
      }
      for (const ParityConstraint& leaf : tree.leaves()) {
        const TwoBodyModel fragment = gadgetize_3body(leaf, next_id++);
        for (const auto& term : fragment.pair_terms) {
          pair_accum[std::minmax(term.a, term.b)] += term.weight;
        }
        for (const auto& term : fragment.constraint_fields) {
          field_accum[term.site] += term.weight;
        }
      }
    }
    if (!structure_ok) {
      report.failures.push_back("ancilla ids are not in allocation order");
    }
    if (next_id != program.model.n_spins) {
      report.failures.push_back("model spin count disagrees with the trees");
    }
    if (!weights_match(pair_accum, program.model.pair_terms)) {
      report.failures.push_back(
          "pair terms disagree with the gadgetized trees");
    }
    if (!fields_match(field_accum, program.model.constraint_fields)) {
      report.failures.push_back(
          "constraint fields disagree with the gadgetized trees");
    }
  }

  // End-to-end code-space check on desk-size models: the constraint
  // sector's marginal ground manifold over the logical qubits must equal
  // the plaquette system's.
  if (program.model.n_spins <= kEnumerationCap &&
      static_cast<int>(layout.qubits.size()) == program.model.n_spins) {
    report.model_check_ran = true;
    TwoBodyModel constraint_sector = program.model;
    constraint_sector.z_fields.clear();
    const IsingSystem model_system =
        IsingSystem::from_model(constraint_sector);
    const IsingSystem plaquette_system = IsingSystem::from_constraints(
        std::span(layout.plaquettes.data(), layout.plaquettes.size()));
    std::vector<int> logical_ids;
    for (const auto& q : layout.qubits) {
      if (q.kind == QubitKind::logical_pair) logical_ids.push_back(q.id);
    }
    EquivalenceReport eq =
        verify_equivalence(plaquette_system, model_system, logical_ids);
    report.model_check_ok = eq.ok;
    report.model_report = ground_report(model_system, logical_ids);
    if (!eq.ok) {
      report.failures.push_back(
          "model ground manifold differs from the plaquette code space");
    }
  }

  report.ok = report.failures.empty();
  return report;
}

}  // namespace pqa
