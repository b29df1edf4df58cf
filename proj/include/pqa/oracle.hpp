#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pqa/model.hpp"

// Brute-force ground-truth engine. Everything in here is exact enumeration
// over all 2^n classical configurations, or a refusal: no sampling, no
// heuristics. Used to certify every decomposition and compile step on
// desk-scale instances.

namespace pqa {

/// Hard enumeration cap. Requests beyond this are refused with
/// CapacityError rather than attempted.
inline constexpr int kEnumerationCap = 24;

/// Absolute tolerance for grouping classical energies into levels and for
/// ground-manifold membership. Constraint gadgets have integer spectra times
/// the strength, so ties are exact; the tolerance guards user-supplied reals.
inline constexpr double kEnergyTolerance = 1e-9;

/// One product-of-sigma_z term over the spins selected by `mask`.
/// A mask with a single bit is a local field, two bits a pair coupling,
/// k bits a k-body constraint term.
struct IsingTerm {
  std::uint32_t mask = 0;
  double weight = 0.0;
};

/// A classical Ising system over an explicit set of spin ids. Ids may be any
/// integers (the compiler hands out global qubit ids); internally spins are
/// indexed by their position in the sorted id list, and configurations pack
/// those positions as bits (bit = 1 means spin -1).
class IsingSystem {
 public:
  IsingSystem() = default;
  IsingSystem(std::vector<int> ids, std::vector<IsingTerm> terms);

  static IsingSystem from_constraints(std::span<const ParityConstraint> cs);
  static IsingSystem from_constraint(const ParityConstraint& c);
  /// Classical sector of a pair model: pair terms + both sigma_z field
  /// sectors at full schedule. The transverse driver has no classical part.
  static IsingSystem from_model(const TwoBodyModel& model);
  /// Like from_model, but over only the spins the terms reference. Use for
  /// gadget fragments whose global ids are sparse.
  static IsingSystem from_fragment(const TwoBodyModel& model);

  int n_spins() const { return static_cast<int>(ids_.size()); }
  const std::vector<int>& ids() const { return ids_; }
  const std::vector<IsingTerm>& terms() const { return terms_; }
  int index_of(int id) const;  // -1 if absent

  double energy(std::uint32_t config) const;

 private:
  std::vector<int> ids_;
  std::vector<IsingTerm> terms_;
};

struct SpectrumLine {
  double energy = 0.0;
  std::int64_t multiplicity = 0;
};

/// Exact classical spectrum: all 2^n assignments, grouped into distinct
/// levels with kEnergyTolerance, sorted ascending. Total multiplicity is
/// exactly 2^n. Refuses systems above kEnumerationCap.
std::vector<SpectrumLine> enumerate_spectrum(const IsingSystem& system);

/// Ground-manifold summary of a classical system. `marginal_ground` is the
/// projection of the ground states onto a designated subset of spins
/// (deduplicated), packed in the order of the sorted subset ids.
struct GroundManifoldReport {
  double min_energy = 0.0;
  double gap = 0.0;  // second-lowest distinct energy minus lowest; 0 if flat
  std::vector<std::uint32_t> ground_states;    // sorted configs
  std::vector<std::uint32_t> marginal_ground;  // sorted, deduplicated
};

GroundManifoldReport ground_report(const IsingSystem& system,
                                   std::span<const int> marginal_ids);

struct EquivalenceReport {
  bool ok = false;
  double gap_original = 0.0;
  double gap_decomposed = 0.0;
};

/// Certifies that two systems have identical ground manifolds when
/// marginalized onto the shared (non-ancilla) spins, and reports both
/// spectral gaps. This is the defining check for every constraint
/// decomposition step.
EquivalenceReport verify_equivalence(const IsingSystem& original,
                                     const IsingSystem& decomposed,
                                     std::span<const int> shared_ids);

/// Rank over GF(2) of the parity-check matrix whose rows are the member-id
/// sets. For a sound parity layout on K qubits encoding N logical spins the
/// rank is K - (N - 1).
int gf2_rank(std::span<const std::vector<int>> checks, int n_qubits);

}  // namespace pqa
