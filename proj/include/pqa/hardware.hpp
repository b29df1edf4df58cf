#pragma once

#include <array>

#include "pqa/model.hpp"

// Mapping from abstract spins and couplings to Transmon + Josephson ring
// modulator (JRM) circuit parameters, with a numerical two-mode Fock-space
// oracle validating the closed-form coupling strength.
//
// Units: hbar = 1 throughout, all energies and frequencies in GHz, fluxes in
// units of the reduced flux quantum phi_0.

namespace pqa {
namespace hardware {

/// Charge qubit / Transmon circuit energies plus the microwave drive that
/// realizes the rotating-frame fields.
struct TransmonSpec {
  double charging_energy = 0.0;    // E_C
  double josephson_energy = 0.0;   // E_J
  double offset_charge = 0.0;      // n_g
  double drive_frequency = 0.0;    // omega_d
  double drive_amplitude = 0.0;    // A; must stay below E_C for the
                                   // qubit projection to hold
};

/// Ring of four Josephson junctions. The mean junction energy sets the
/// coupling; the deviations are fabrication spread handled by the
/// asymmetric-JRM analysis.
struct JrmSpec {
  std::array<double, 4> junction_energies{};  // E_J1..E_J4
  double external_flux = 0.0;                 // phi_ext in units of phi_0

  double mean_energy() const {
    return (junction_energies[0] + junction_energies[1] +
            junction_energies[2] + junction_energies[3]) /
           4.0;
  }
  std::array<double, 4> deviations() const;  // E_Ji - mean, sums to zero
  bool is_symmetric(double tol = 1e-12) const;

  static JrmSpec symmetric(double e_jrm, double external_flux = 0.0) {
    return JrmSpec{{e_jrm, e_jrm, e_jrm, e_jrm}, external_flux};
  }
};

// ---------------------------------------------------------------------------
// Single Transmon
// ---------------------------------------------------------------------------

struct QubitFields {
  double h_z = 0.0;
  double h_x = 0.0;
};

/// Charge-qubit spin mapping near the half-integer degeneracy point:
/// h_z = 2 E_C (1 - 2 n_g), h_x = E_J / 2.
QubitFields charge_qubit_fields(double ec, double ej, double ng);

/// Transmon 0-1 transition energy sqrt(8 E_J E_C). Negative inputs throw;
/// zero is the valid formula limit. Anharmonicity is -E_C.
double transmon_frequency(double ec, double ej);
inline double transmon_anharmonicity(double ec) { return -ec; }

/// Zero-point amplitude of the phase operator, (2 E_C / E_J)^(1/4).
/// The half-phase entering the JRM arms carries half of it, which is the
/// ~0.2 figure for large-E_J/E_C Transmons.
double zero_point_phase(double ec, double ej);

/// Whether E_J / E_C is comfortably in the Transmon regime (>= 10).
inline bool transmon_regime(double ec, double ej) {
  return ec > 0.0 && ej / ec >= 10.0;
}

struct RotatingFrameFields {
  double j = 0.0;  // longitudinal: (sqrt(8 E_C E_J) - omega_d) / 2
  double a = 0.0;  // transverse: drive amplitude, passed through
  bool projection_valid = true;  // false when A >= E_C
};

/// Effective qubit fields in the frame rotating with the microwave drive.
RotatingFrameFields rotating_frame_fields(const TransmonSpec& spec);

// ---------------------------------------------------------------------------
// JRM-coupled pair
// ---------------------------------------------------------------------------

struct CoupledTransmonParams {
  double e_a = 0.0;  // dressed Transmon energies sqrt(8 E_C (E_Jx + E_JRM))
  double e_b = 0.0;
  double g = 0.0;    // sigma_z sigma_z coupling, bounded by E_C / 2
};

/// Closed-form dressed energies and coupling of two Transmons joined by a
/// symmetric JRM at zero external flux:
///   E_x = sqrt(8 E_C (E_Jx + E_JRM)),
///   g   = (E_C / 2) E_JRM / sqrt((E_Ja + E_JRM)(E_Jb + E_JRM)).
/// Asymmetric rings or finite flux must go through asymmetric_jrm_report.
CoupledTransmonParams jrm_coupled_params(double ec, double e_ja, double e_jb,
                                         const JrmSpec& jrm);

struct DriveSpec {
  double frequency = 0.0;
  double amplitude = 0.0;
};

struct EffectiveQubitParams {
  double a_a = 0.0, a_b = 0.0;  // transverse fields
  double j_a = 0.0, j_b = 0.0;  // longitudinal fields E_x - 2g - omega_d,x
  double g = 0.0;
  bool projection_valid = true;
};

/// Full parameter set of the two-qubit building block
///   A_a sx + A_b sx + J_a sz + J_b sz - g sz sz.
EffectiveQubitParams effective_two_qubit(double ec, double e_ja, double e_jb,
                                         const JrmSpec& jrm, DriveSpec drive_a,
                                         DriveSpec drive_b);

/// Inverse mapping for fixed-frequency Transmons with individual drives:
/// the drive frequency that realizes a target longitudinal field,
/// omega_d = E_x - 2 g_total - J_target.
double drive_frequency_for_target(double e_x, double g_total,
                                  double j_target);

// ---------------------------------------------------------------------------
// Fock-space oracle
// ---------------------------------------------------------------------------

struct FockVerifyResult {
  double g_numeric = 0.0;      // -(E00 - E01 - E10 + E11) / 4
  double g_closed_form = 0.0;  // from jrm_coupled_params
  double rel_error = 0.0;
  bool converged = true;        // false if g moves > 1% from n_max to n_max+2
  bool overlap_warning = false; // dressed-state identification below 0.5
};

/// Numerical check of the closed-form coupling: diagonalize the two-mode
/// Hamiltonian
///   E_a n_a - (E_C/2) n_a(n_a - 1) + E_b n_b - (E_C/2) n_b(n_b - 1)
///     - g (a + a^dag)^2 (b + b^dag)^2
/// in a truncated Fock basis, keeping the full quartic coupling with all
/// number-non-conserving terms (no rotating-wave truncation), identify the
/// dressed computational states by overlap, and extract the ZZ strength.
/// Requires n_max >= 6 levels per mode.
FockVerifyResult fock_verify(double ec, double e_ja, double e_jb,
                             double e_jrm, int n_max);

// ---------------------------------------------------------------------------
// JRM statics and asymmetry
// ---------------------------------------------------------------------------

struct JrmStatics {
  std::array<double, 4> static_fluxes{};  // phi_i^DC = (i-1)/4 * phi_loop
  double ring_current = 0.0;              // (E_JRM / phi_0) sin(phi_loop / 4)
};

/// Static node fluxes and ring current of a symmetric JRM with enclosed
/// flux phi_loop: equal drops at all four junctions.
JrmStatics jrm_statics(const JrmSpec& jrm, double loop_flux);

/// Potential minimum of trapped-flux state n: the enclosed flux is
/// phi_loop = 2 pi n + phi_ext, giving energy -4 E_JRM cos(phi_loop / 4).
double flux_state_energy(const JrmSpec& jrm, int n, double external_flux);

struct FluxStateScan {
  std::array<double, 4> energies{};  // n = 0..3
  int stable_n = 0;                  // argmin
};

/// Energies of the four distinct trapped-flux states of the ring; stable
/// operation happens in the state minimizing the total energy (n = 0 at
/// zero applied flux).
FluxStateScan jrm_flux_states(const JrmSpec& jrm, double external_flux);

/// Collective-mode expansion of a JRM with unequal junctions, linearized in
/// the (small) enclosed flux. Coefficient combinations multiply the trig
/// products of the half-mode phases x = phi_x/2, y = phi_y/2, z = phi_z/2:
///   L = ccc * cos cos cos - ssc * sin sin cos - scs * sin cos sin
///       - css * cos sin sin - sss * sin sin sin.
/// With phi_z pinned to zero only the ccc and ssc terms survive; the ssc
/// term is the residual sigma_x sigma_x coupling channel.
struct AsymmetricJrmReport {
  std::array<double, 4> static_jumps{};  // delta_{1,2}, .., delta_{4,1}
  double alpha = 0.0;                    // sum of inverse junction energies
  std::array<double, 4> renormalized_energies{};    // E'_Ji
  std::array<double, 4> renormalized_deviations{};  // dE'_i
  double coeff_ccc = 0.0;  // E'_J1 + E'_J2 + E'_J3 + E'_J4
  double coeff_ssc = 0.0;  // -dE'_1 + dE'_2 - dE'_3 + dE'_4
  double coeff_scs = 0.0;  //  dE'_1 - dE'_2 - dE'_3 + dE'_4
  double coeff_css = 0.0;  // -dE'_1 - dE'_2 + dE'_3 + dE'_4
  double coeff_sss = 0.0;  // 4 phi_loop / alpha
  double residual_xx = 0.0;        // |ssc| x (half zero-point phase)^2
  double residual_xx_over_g = 0.0;
  double junction_spread = 0.0;    // max|dE_i| / E_JRM
  bool pass_10pct = false;         // junction_spread <= 0.10
};

/// Requires |phi_loop / phi_0| < 0.1 (the linearization range). The Transmon
/// parameters ec, ej size the zero-point amplitudes used for the residual
/// sigma_x sigma_x estimate.
AsymmetricJrmReport asymmetric_jrm_report(const JrmSpec& jrm,
                                          double external_flux, double ec,
                                          double ej);

/// Largest mismatch among the four steady-state current-conservation
/// equations E_Ji sin(delta_i) = E_Jj sin(delta_j) for given static jumps;
/// the linearized solution leaves a residual of order (phi_loop)^3.
double jrm_kirchhoff_residual(const JrmSpec& jrm,
                              const std::array<double, 4>& static_jumps);

}  // namespace hardware
}  // namespace pqa
