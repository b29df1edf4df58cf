#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pqa/compiler.hpp"
#include "pqa/oracle.hpp"

// Certification of a compiled program against the brute-force oracle:
// layout counts and GF(2) rank, per-tree ground-manifold equivalence,
// structural agreement between the serialized pair model and the one the
// trees imply, and (when the model fits under the enumeration cap) the
// end-to-end code-space check.

namespace pqa {

struct TreeVerification {
  int tree_index = 0;
  bool ok = false;
  double gap_original = 0.0;
  double gap_decomposed = 0.0;
};

struct VerifyReport {
  bool ok = false;
  int n_logical_qubits = 0;
  int gf2_rank = 0;
  int expected_rank = 0;
  std::vector<TreeVerification> trees;
  /// Ground manifold of the model's constraint sector, present when the
  /// model fits under the enumeration cap.
  std::optional<GroundManifoldReport> model_report;
  bool model_check_ran = false;
  bool model_check_ok = false;
  std::vector<std::string> failures;  // human-readable, one per defect
};

VerifyReport verify_compiled(const CompiledProgram& program);

}  // namespace pqa
