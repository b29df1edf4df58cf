#pragma once

#include <Eigen/Dense>
#include <array>
#include <span>
#include <vector>

#include "pqa/model.hpp"
#include "pqa/oracle.hpp"

// Exact simulation of the adiabatic sweep: build the time-dependent
// Hamiltonian H(t) = A(t) X + B(t) Z_problem + C(t) Z_constraints as a dense
// real-symmetric matrix, trace its low-lying spectrum, and propagate the
// Schroedinger equation piecewise-constantly through eigendecompositions.
//
// Basis convention: computational basis indexed by bitmask x, bit i = 0
// meaning spin i up (+1). sigma_x flips bits, sigma_z reads them.

namespace pqa {

/// Dense construction cap: 2^16 is the largest dimension the interface
/// admits. Practical sweeps use 7-12 spins; beyond the cap we refuse.
inline constexpr int kDenseSpinCap = 16;

enum class ScheduleMode { ramp, always_on };

/// Linear annealing schedules. ramp: A falls A_max -> 0 while B and C rise
/// 0 -> max. always_on: the constraint term stays at C_max for all times.
struct ScheduleSpec {
  ScheduleMode mode = ScheduleMode::ramp;
  double a_max = 1.0;
  double b_max = 1.0;
  double c_max = 1.0;
  double total_time = 10.0;

  double a(double t) const { return a_max * (1.0 - fraction(t)); }
  double b(double t) const { return b_max * fraction(t); }
  double c(double t) const {
    return mode == ScheduleMode::always_on ? c_max : c_max * fraction(t);
  }

 private:
  double fraction(double t) const {
    if (total_time <= 0.0) return 1.0;
    double s = t / total_time;
    return s < 0.0 ? 0.0 : (s > 1.0 ? 1.0 : s);
  }
};

/// The three scheduled sectors of an annealing Hamiltonian, kept apart so
/// each schedule function scales the right terms. Constraint terms are
/// sigma_z products of any order, so this covers both the plaquette form
/// (4-body cells) and the compiled pair form.
struct ScheduledHamiltonian {
  int n_spins = 0;
  std::vector<FieldTerm> driver;          // sigma_x, scaled by A(t)
  std::vector<FieldTerm> problem_fields;  // sigma_z, scaled by B(t)
  std::vector<IsingTerm> constraint_terms;  // sigma_z products, scaled by C(t)

  static ScheduledHamiltonian from_model(const TwoBodyModel& model);
  static ScheduledHamiltonian from_plaquettes(
      int n_spins, std::span<const ParityConstraint> constraints,
      std::span<const FieldTerm> problem_fields,
      std::span<const FieldTerm> driver);

  /// Classical (diagonal) part at schedule values (b, c).
  Eigen::VectorXd diagonal(double b, double c) const;
  /// Constraint-sector energy of one basis state at unit schedule.
  double constraint_energy(std::uint32_t config) const;
};

/// Dense H at schedule values (a, b, c). Real symmetric by construction.
Eigen::MatrixXd build_hamiltonian(const ScheduledHamiltonian& system,
                                  double a, double b, double c);
Eigen::MatrixXd build_hamiltonian(const ScheduledHamiltonian& system,
                                  const ScheduleSpec& schedule, double t);

enum class LevelLabel { constraint_satisfying, constraint_violating };

/// Time-resolved low-lying spectrum. levels(k, m) is the m-th lowest
/// eigenvalue at times[k]; rows are sorted ascending and level crossings are
/// allowed. When the driver is off at the final time, `labels` classifies
/// each final level by whether its basis states satisfy all constraints.
struct SpectrumTrace {
  std::vector<double> times;
  Eigen::MatrixXd levels;  // n_times x m_levels
  std::vector<LevelLabel> labels;  // empty when A(T) != 0
};

SpectrumTrace spectrum_trace(const ScheduledHamiltonian& system,
                             const ScheduleSpec& schedule, int m_levels = 16,
                             int n_times = 101);

/// Pure state over the 2^n computational basis.
struct QuantumState {
  Eigen::VectorXcd amplitudes;
  double norm() const { return amplitudes.norm(); }
};

/// Relative tolerance for grouping eigenvalues into the degenerate ground
/// space when computing success probabilities.
inline constexpr double kGroundSpaceTolerance = 1e-8;

struct SweepResult {
  QuantumState state;
  /// Squared overlap of the final state with the full degenerate ground
  /// space of H(T) (a projector, not a single vector).
  double success_probability = 0.0;
  /// Sampled (t, overlap with the H(T) ground space) pairs, including the
  /// initial and final times.
  std::vector<std::array<double, 2>> success_trace;
};

/// Adiabatic sweep by piecewise-constant propagation: n_steps steps of
/// exp(-i H(t_mid) dt) applied through the eigendecomposition of H at each
/// midpoint. The initial state is the exact ground state of H(0) (computed
/// by diagonalization in both modes). Norm is checked to 1e-9 after every
/// step.
SweepResult evolve(const ScheduledHamiltonian& system,
                   const ScheduleSpec& schedule, int n_steps,
                   int n_trace_samples = 0);

/// Spectrum traces of the ramp and always-on protocols on one model with
/// identical endpoints: both schedules agree at t = T by construction.
/// The base schedule supplies the maxima and total time; its mode is
/// overridden per trace.
struct ProtocolComparison {
  SpectrumTrace ramp;
  SpectrumTrace always_on;
};

ProtocolComparison compare_protocols(const ScheduledHamiltonian& system,
                                     const ScheduleSpec& base,
                                     int m_levels = 16, int n_times = 101);

}  // namespace pqa
