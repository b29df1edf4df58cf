#pragma once

#include <map>
#include <span>
#include <utility>
#include <vector>

#include "pqa/model.hpp"

// Parity compiler: encodes an all-to-all spin glass onto the planar parity
// (LHZ) lattice, decomposes every plaquette constraint down to pair
// interactions with ancillas, and decodes physical states back to logical
// solutions. All operations are pure functions over immutable inputs.

namespace pqa {

// ---------------------------------------------------------------------------
// Layout
// ---------------------------------------------------------------------------

/// The planar parity lattice: K = N(N-1)/2 logical-pair qubits on the
/// pyramid grid plus the plaquette constraint list (4-body cells in the
/// bulk, 3-body triangles on the bottom boundary). Compiled programs extend
/// the qubit list with ancillas; the plaquettes always reference
/// logical-pair ids only.
struct ParityLayout {
  int n_logical = 0;
  std::vector<ParityQubit> qubits;
  std::vector<ParityConstraint> plaquettes;

  int qubit_id(int i, int j) const;  // logical pair (i, j), i < j
};

/// Lay out the K parity qubits and generate all plaquette constraints, each
/// set to the even-parity (product +1) manifold at unit strength. Requires
/// N >= 3; below that no constraints exist and the encoding is pointless.
ParityLayout parity_encode(const SpinGlassProblem& problem);

// ---------------------------------------------------------------------------
// Constraint decomposition
// ---------------------------------------------------------------------------

/// Split a k-body constraint into two lower-order constraints sharing a
/// fresh ancilla: {m_1..m_cut, a} and {a, m_cut+1..m_k}. The ancilla
/// communicates the subset parity: an even root yields two odd children,
/// an odd root yields one odd and one even child. The pair of children has
/// the same marginal ground manifold as the root over the original members
/// and the same gap (2 * strength), with no perturbative ancilla
/// elimination involved.
std::pair<ParityConstraint, ParityConstraint> split_constraint(
    const ParityConstraint& c, int cut, int ancilla_id);

enum class SplitPolicy {
  balanced,       // cut at floor(order / 2)
  left_pair,      // always split off the two leading members
  paper_example,  // alias of left_pair; reproduces the canonical worked
                  // 5-body decomposition used for regression tests
};

struct TreeNode {
  ParityConstraint constraint;
  int cut = -1;         // -1 on leaves
  int ancilla_id = -1;  // ancilla introduced by this split
  int left = -1;        // child indices into ConstraintTree::nodes
  int right = -1;

  bool is_leaf() const { return left < 0; }
};

/// Tree of 3-body constraints produced by recursively splitting a k-body
/// constraint. Node 0 is the root; an order-k root owns exactly k - 3
/// ancillas and the constraint graph (nodes joined by shared ancillas) is
/// acyclic by construction.
struct ConstraintTree {
  std::vector<TreeNode> nodes;

  const TreeNode& root() const { return nodes.front(); }
  std::vector<ParityConstraint> leaves() const;
  std::vector<int> ancilla_ids() const;  // in allocation order
};

/// Recursively split until every leaf is 3-body. Ancilla ids are handed out
/// consecutively from `first_ancilla_id` in preorder; pass -1 to start just
/// above the largest member id.
ConstraintTree decompose_to_tree(const ParityConstraint& c, SplitPolicy policy,
                                 int first_ancilla_id = -1);

/// Replace a 3-body constraint by pair interactions with one ancilla:
/// the member triangle at weight 1x strength, member-ancilla couplings at
/// 2x strength, and local fields of magnitude strength on members and
/// 2x strength on the ancilla (negative for an even constraint, positive
/// for odd). The fragment's ground manifold, marginalized over the ancilla,
/// is exactly the constraint's parity class, with gap 2 x strength and all
/// pair weights of one sign.
TwoBodyModel gadgetize_3body(const ParityConstraint& c, int ancilla_id);

// ---------------------------------------------------------------------------
// Full compile
// ---------------------------------------------------------------------------

enum class DriverScope {
  all_spins,     // sigma_x on every spin including ancillas (default)
  logical_only,  // sigma_x on the K logical-pair qubits, as written in the
                 // plaquette-form annealing Hamiltonian
};

enum class PlaquetteGrouping {
  ne_sw,  // split 4-body cells as {n, e, a} + {a, s, w}
  nw_es,  // alternative grouping {n, w, a} + {a, e, s}
};

struct CompileOptions {
  SplitPolicy policy = SplitPolicy::balanced;
  DriverScope driver_scope = DriverScope::all_spins;
  PlaquetteGrouping grouping = PlaquetteGrouping::ne_sw;
  /// Constraint strength C. Non-positive means automatic:
  /// C = 4 * sum|J_ij| + 1, which strictly dominates anything the
  /// programmable fields can gain from violating a constraint.
  double constraint_strength = 0.0;
};

struct CompiledProgram {
  SpinGlassProblem problem;
  ParityLayout layout;  // qubits incl. ancillas; plaquettes at strength C
  std::vector<ConstraintTree> trees;  // one per plaquette
  TwoBodyModel model;
  std::map<int, std::pair<int, int>> decode_map;  // qubit id -> logical pair
};

/// Compile a spin glass to the pair-interaction model: encode, split every
/// 4-body plaquette (one split ancilla), gadgetize every 3-body constraint
/// (one gadget ancilla each; boundary triangles skip the split), attach the
/// coupling J_ij of each logical pair as a programmable field on its qubit,
/// and attach the transverse driver. Pair terms shared between adjacent
/// plaquettes are merged by weight. The generated embedding is planar and
/// `model.crossing_free` records the segment-intersection check.
CompiledProgram compile_full(const SpinGlassProblem& problem,
                             const CompileOptions& options = {});

/// Map a physical state back to logical spins: verify every plaquette
/// parity, gauge-fix logical spin 1 to +1, propagate along the (1, j)
/// pairs, and use the remaining pairs as consistency checks. The input
/// vector covers all layout qubits (ancilla entries are ignored). Throws
/// VerificationError ("unsatisfied plaquette" / "not in code space").
std::vector<int> decode(const ParityLayout& layout,
                        std::span<const int> physical);

/// Physical parity state of a logical assignment: qubit (i, j) gets
/// s_i * s_j. Defined on ancilla-free layouts (the parity_encode output);
/// inverse of decode up to the global logical flip.
std::vector<int> encode_state(const ParityLayout& layout,
                              std::span<const int> logical);

/// Stand-alone compile of one 4-body even plaquette over spins {0, 1, 2, 3}
/// with split ancilla 4 and gadget ancillas 5 and 6: the 7-spin
/// demonstration system. Optional programmable fields act on the four
/// members; the driver acts on all seven spins.
TwoBodyModel single_plaquette_model(double strength,
                                    std::span<const double> member_fields = {},
                                    const CompileOptions& options = {});

}  // namespace pqa
