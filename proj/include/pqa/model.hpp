#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

// Core data model for parity-encoded quantum annealing: logical spin-glass
// instances, the parity lattice they compile to, and the pair-interaction
// model that finally runs on hardware. All energies in this layer are
// dimensionless; physical units (GHz) enter only in hardware.hpp.
//
// Spin convention: up = +1, down = -1. In packed bitmask configurations
// bit b = 0 means spin +1 and bit b = 1 means spin -1.

namespace pqa {

/// Malformed input: bad schema, bad field value, unsupported combination.
/// The CLI maps this to exit code 2.
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Request exceeds a hard resource cap (enumeration or dense-matrix size).
/// Deliberately a refusal, never a best-effort attempt. CLI exit code 3.
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A certified property failed to hold (constraint violated, manifold
/// mismatch, state outside the code space). CLI exit code 4.
struct VerificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Logical problem
// ---------------------------------------------------------------------------

/// An all-to-all Ising instance on N logical spins:
///   E(s) = sum_i h_z,i s_i + sum_{i<j} J_ij s_i s_j
/// plus optional transverse fields h_x,i used by simulation front ends.
/// Indices are 1-based; absent couplings mean J_ij = 0.
struct SpinGlassProblem {
  int n_logical = 0;
  std::map<std::pair<int, int>, double> couplings;  // key (i, j) with i < j
  std::vector<double> z_fields;  // empty means all zero
  std::vector<double> x_fields;  // empty means all zero

  double z_field(int i) const {
    return z_fields.empty() ? 0.0 : z_fields[static_cast<std::size_t>(i - 1)];
  }
  double x_field(int i) const {
    return x_fields.empty() ? 0.0 : x_fields[static_cast<std::size_t>(i - 1)];
  }
  double coupling(int i, int j) const {
    if (i > j) std::swap(i, j);
    auto it = couplings.find({i, j});
    return it == couplings.end() ? 0.0 : it->second;
  }
};

/// Classical energy of a +-1 assignment (transverse fields ignored).
/// Throws SchemaError on length mismatch.
double classical_energy(const SpinGlassProblem& problem,
                        std::span<const int> spins);

// ---------------------------------------------------------------------------
// Parity lattice
// ---------------------------------------------------------------------------

enum class QubitKind { logical_pair, split_ancilla, gadget_ancilla };

/// One physical qubit of the parity lattice. logical_pair qubits store the
/// relative alignment of one logical pair (i, j); ancillas are introduced by
/// the constraint decomposition. Positions are integer plot coordinates on
/// the planar embedding (scaled so ancillas land on lattice points too).
struct ParityQubit {
  int id = 0;
  QubitKind kind = QubitKind::logical_pair;
  std::optional<std::pair<int, int>> pair;  // present iff kind == logical_pair
  int row = 0;
  int col = 0;
};

/// Which parity class of the members spans the ground manifold.
/// even: product of member spins +1 is favored; odd: product -1.
enum class Parity { even, odd };

/// A k-body product-of-sigma_z constraint with normalized sign: the stored
/// strength is positive and the sign lives in `parity`. The Hamiltonian term
/// is  -strength * prod(sigma_z)  for even and  +strength * prod(sigma_z)
/// for odd, so the favored manifold always sits at -strength per constraint.
struct ParityConstraint {
  std::vector<int> members;
  double strength = 1.0;
  Parity parity = Parity::even;

  int order() const { return static_cast<int>(members.size()); }
  double signed_coefficient() const {
    return parity == Parity::even ? -strength : strength;
  }
};

// ---------------------------------------------------------------------------
// Pair-interaction model
// ---------------------------------------------------------------------------

struct PairTerm {
  int a = 0, b = 0;
  double weight = 0.0;
};

struct FieldTerm {
  int site = 0;
  double weight = 0.0;
};

/// Final two-body Ising model produced by the compiler. Terms are grouped by
/// the annealing schedule that scales them:
///   driver (A)      : x_fields
///   problem (B)     : z_fields
///   constraints (C) : pair_terms + constraint_fields
/// Keeping the constraint-derived sigma_z fields separate from the problem
/// fields is what lets C(t) carry the whole gadget while B(t) carries only
/// the programmable part.
struct TwoBodyModel {
  int n_spins = 0;
  std::vector<PairTerm> pair_terms;          // all one sign by construction
  std::vector<FieldTerm> constraint_fields;  // gadget local fields
  std::vector<FieldTerm> z_fields;           // programmable local fields
  std::vector<FieldTerm> x_fields;           // transverse driver
  std::vector<int> ancilla_ids;              // sorted
  bool crossing_free = false;
};

/// Structural checks: indices in range, no self pairs, no duplicate pairs up
/// to order, all pair weights sharing one sign. Throws VerificationError.
void validate_model(const TwoBodyModel& model);

/// Classical energy of the model at full schedule (B = C = 1): pair terms
/// plus both field sectors, transverse driver ignored. `config` packs spins
/// as bits (bit = 1 means spin -1).
double model_energy(const TwoBodyModel& model, std::uint32_t config);

inline int spin_of_bit(std::uint32_t config, int site) {
  return (config >> site) & 1u ? -1 : +1;
}

}  // namespace pqa
