#include "pqa/hardware.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace pqa {
namespace hardware {

namespace {

void require_nonnegative(double value, const char* name) {
  if (value < 0.0 || !std::isfinite(value)) {
    throw SchemaError(std::string(name) + " must be finite and nonnegative");
  }
}

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

struct ZzExtraction {
  double zz_over_minus4 = 0.0;  // -(E00 - E01 - E10 + E11) / 4
  bool overlap_warning = false;
};

// Diagonalize the two-mode quartic Hamiltonian in a truncated Fock basis
// and extract the dispersive ZZ strength from the dressed computational
// levels, identified by overlap with the bare Fock labels.
ZzExtraction two_mode_zz(double ec, double e_a, double e_b, double g,
                         int n_max) {
  const Eigen::Index dim = static_cast<Eigen::Index>(n_max) * n_max;
  Eigen::MatrixXd lower = Eigen::MatrixXd::Zero(n_max, n_max);
  for (int n = 1; n < n_max; ++n) lower(n - 1, n) = std::sqrt(double(n));
  const Eigen::MatrixXd quad = lower + lower.transpose();       // a + a^dag
  const Eigen::MatrixXd quad_sq = quad * quad;                  // (a+a^dag)^2
  Eigen::MatrixXd kerr = Eigen::MatrixXd::Zero(n_max, n_max);   // n(n-1)
  Eigen::MatrixXd number = Eigen::MatrixXd::Zero(n_max, n_max);
  for (int n = 0; n < n_max; ++n) {
    number(n, n) = n;
    kerr(n, n) = double(n) * (n - 1);
  }
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n_max, n_max);

  Eigen::MatrixXd h =
      kron(e_a * number - 0.5 * ec * kerr, identity) +
      kron(identity, e_b * number - 0.5 * ec * kerr) -
      g * kron(quad_sq, quad_sq);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  const Eigen::VectorXd& levels = solver.eigenvalues();
  const Eigen::MatrixXd& vectors = solver.eigenvectors();

  const Eigen::Index bare00 = 0;
  const Eigen::Index bare01 = 1;
  const Eigen::Index bare10 = n_max;
  const Eigen::Index bare11 = n_max + 1;

  std::vector<bool> used(static_cast<std::size_t>(dim), false);
  auto pick = [&](auto weight) {
    Eigen::Index best = -1;
    double best_weight = -1.0;
    for (Eigen::Index k = 0; k < dim; ++k) {
      if (used[static_cast<std::size_t>(k)]) continue;
      const double w = weight(k);
      if (w > best_weight) {
        best_weight = w;
        best = k;
      }
    }
    used[static_cast<std::size_t>(best)] = true;
    return std::pair<Eigen::Index, double>(best, best_weight);
  };

  auto [k00, w00] = pick([&](Eigen::Index k) {
    return vectors(bare00, k) * vectors(bare00, k);
  });
  // The two single-excitation states can be exactly degenerate for matched
  // Transmons, so identify the pair jointly by its span and take the energy
  // sum, which is basis independent inside the doublet.
  auto doublet_weight = [&](Eigen::Index k) {
    return vectors(bare01, k) * vectors(bare01, k) +
           vectors(bare10, k) * vectors(bare10, k);
  };
  auto [k01, w01] = pick(doublet_weight);
  auto [k10, w10] = pick(doublet_weight);
  auto [k11, w11] = pick([&](Eigen::Index k) {
    return vectors(bare11, k) * vectors(bare11, k);
  });

  ZzExtraction out;
  out.overlap_warning = w00 < 0.5 || w01 < 0.5 || w10 < 0.5 || w11 < 0.5;
  out.zz_over_minus4 =
      -(levels(k00) - levels(k01) - levels(k10) + levels(k11)) / 4.0;
  return out;
}

}  // namespace

std::array<double, 4> JrmSpec::deviations() const {
  const double mean = mean_energy();
  return {junction_energies[0] - mean, junction_energies[1] - mean,
          junction_energies[2] - mean, junction_energies[3] - mean};
}

bool JrmSpec::is_symmetric(double tol) const {
  for (double d : deviations()) {
    if (std::abs(d) > tol) return false;
  }
  return true;
}

QubitFields charge_qubit_fields(double ec, double ej, double ng) {
  require_nonnegative(ec, "E_C");
  require_nonnegative(ej, "E_J");
  return {2.0 * ec * (1.0 - 2.0 * ng), ej / 2.0};
}

double transmon_frequency(double ec, double ej) {
  require_nonnegative(ec, "E_C");
  require_nonnegative(ej, "E_J");
  return std::sqrt(8.0 * ej * ec);
}

double zero_point_phase(double ec, double ej) {
  require_nonnegative(ec, "E_C");
  if (ej <= 0.0) throw SchemaError("E_J must be positive");
  return std::pow(2.0 * ec / ej, 0.25);
}

RotatingFrameFields rotating_frame_fields(const TransmonSpec& spec) {
  RotatingFrameFields out;
  out.j = (transmon_frequency(spec.charging_energy, spec.josephson_energy) -
           spec.drive_frequency) /
          2.0;
  out.a = spec.drive_amplitude;
  out.projection_valid = spec.drive_amplitude < spec.charging_energy;
  return out;
}

CoupledTransmonParams jrm_coupled_params(double ec, double e_ja, double e_jb,
                                         const JrmSpec& jrm) {
  require_nonnegative(ec, "E_C");
  require_nonnegative(e_ja, "E_Ja");
  require_nonnegative(e_jb, "E_Jb");
  if (!jrm.is_symmetric() || jrm.external_flux != 0.0) {
    throw SchemaError(
        "closed-form coupling holds for a symmetric JRM at zero flux; use "
        "asymmetric_jrm_report");
  }
  const double e_jrm = jrm.mean_energy();
  CoupledTransmonParams out;
  out.e_a = std::sqrt(8.0 * ec * (e_ja + e_jrm));
  out.e_b = std::sqrt(8.0 * ec * (e_jb + e_jrm));
  const double denom = std::sqrt((e_ja + e_jrm) * (e_jb + e_jrm));
  out.g = denom > 0.0 ? 0.5 * ec * e_jrm / denom : 0.0;
  return out;
}

EffectiveQubitParams effective_two_qubit(double ec, double e_ja, double e_jb,
                                         const JrmSpec& jrm, DriveSpec drive_a,
                                         DriveSpec drive_b) {
  const CoupledTransmonParams base = jrm_coupled_params(ec, e_ja, e_jb, jrm);
  EffectiveQubitParams out;
  out.g = base.g;
  out.a_a = drive_a.amplitude;
  out.a_b = drive_b.amplitude;
  out.j_a = base.e_a - 2.0 * base.g - drive_a.frequency;
  out.j_b = base.e_b - 2.0 * base.g - drive_b.frequency;
  out.projection_valid = drive_a.amplitude < ec && drive_b.amplitude < ec;
  return out;
}

double drive_frequency_for_target(double e_x, double g_total,
                                  double j_target) {
  return e_x - 2.0 * g_total - j_target;
}

FockVerifyResult fock_verify(double ec, double e_ja, double e_jb,
                             double e_jrm, int n_max) {
  if (n_max < 6) {
    throw SchemaError("fock_verify needs at least 6 Fock levels per mode");
  }
  const CoupledTransmonParams closed =
      jrm_coupled_params(ec, e_ja, e_jb, JrmSpec::symmetric(e_jrm));

  FockVerifyResult out;
  out.g_closed_form = closed.g;
  const ZzExtraction base =
      two_mode_zz(ec, closed.e_a, closed.e_b, closed.g, n_max);
  const ZzExtraction refined =
      two_mode_zz(ec, closed.e_a, closed.e_b, closed.g, n_max + 2);
  out.g_numeric = base.zz_over_minus4;
  out.overlap_warning = base.overlap_warning;
  const double scale = std::max(std::abs(refined.zz_over_minus4), 1e-12);
  out.converged =
      std::abs(refined.zz_over_minus4 - base.zz_over_minus4) <= 0.01 * scale;
  out.rel_error = closed.g != 0.0
                      ? std::abs(out.g_numeric - closed.g) / closed.g
                      : std::abs(out.g_numeric);
  return out;
}

JrmStatics jrm_statics(const JrmSpec& jrm, double loop_flux) {
  if (!jrm.is_symmetric()) {
    throw SchemaError("jrm_statics assumes equal junctions; use "
                      "asymmetric_jrm_report");
  }
  JrmStatics out;
  for (int i = 0; i < 4; ++i) {
    out.static_fluxes[static_cast<std::size_t>(i)] = i * loop_flux / 4.0;
  }
  out.ring_current = jrm.mean_energy() * std::sin(loop_flux / 4.0);
  return out;
}

double flux_state_energy(const JrmSpec& jrm, int n, double external_flux) {
  const double loop = 2.0 * std::numbers::pi * n + external_flux;
  return -4.0 * jrm.mean_energy() * std::cos(loop / 4.0);
}

FluxStateScan jrm_flux_states(const JrmSpec& jrm, double external_flux) {
  FluxStateScan out;
  for (int n = 0; n < 4; ++n) {
    out.energies[static_cast<std::size_t>(n)] =
        flux_state_energy(jrm, n, external_flux);
  }
  out.stable_n = static_cast<int>(
      std::min_element(out.energies.begin(), out.energies.end()) -
      out.energies.begin());
  return out;
}

AsymmetricJrmReport asymmetric_jrm_report(const JrmSpec& jrm,
                                          double external_flux, double ec,
                                          double ej) {
  if (std::abs(external_flux) >= 0.1) {
    throw SchemaError(
        "enclosed flux outside the linearization range |phi_loop| < 0.1");
  }
  for (double e : jrm.junction_energies) {
    if (e <= 0.0) throw SchemaError("junction energies must be positive");
  }

  AsymmetricJrmReport out;
  const double phi_loop = external_flux;  // n = 0 trapped-flux sector
  out.alpha = 0.0;
  for (double e : jrm.junction_energies) out.alpha += 1.0 / e;
  for (int i = 0; i < 4; ++i) {
    out.static_jumps[static_cast<std::size_t>(i)] =
        phi_loop / (jrm.junction_energies[static_cast<std::size_t>(i)] *
                    out.alpha);
  }
  const auto dev = jrm.deviations();
  for (int i = 0; i < 4; ++i) {
    const double ratio =
        phi_loop / (jrm.junction_energies[static_cast<std::size_t>(i)] *
                    out.alpha);
    const double renorm = 1.0 - 0.5 * ratio * ratio;
    out.renormalized_energies[static_cast<std::size_t>(i)] =
        jrm.junction_energies[static_cast<std::size_t>(i)] * renorm;
    out.renormalized_deviations[static_cast<std::size_t>(i)] =
        dev[static_cast<std::size_t>(i)] * renorm;
  }
  const auto& dp = out.renormalized_deviations;
  out.coeff_ccc = out.renormalized_energies[0] + out.renormalized_energies[1] +
                  out.renormalized_energies[2] + out.renormalized_energies[3];
  out.coeff_ssc = -dp[0] + dp[1] - dp[2] + dp[3];
  out.coeff_scs = dp[0] - dp[1] - dp[2] + dp[3];
  out.coeff_css = -dp[0] - dp[1] + dp[2] + dp[3];
  out.coeff_sss = 4.0 * phi_loop / out.alpha;

  // Residual sigma_x sigma_x channel: the ssc term survives phi_z = 0 and
  // is quadratic in the mode quadratures, sized by the half zero-point
  // phase of each JRM-dressed Transmon.
  const double e_jrm = jrm.mean_energy();
  const double half_zp = 0.5 * zero_point_phase(ec, ej + e_jrm);
  out.residual_xx = std::abs(out.coeff_ssc) * half_zp * half_zp;
  const double g =
      0.5 * ec * e_jrm / std::sqrt((ej + e_jrm) * (ej + e_jrm));
  out.residual_xx_over_g = g > 0.0 ? out.residual_xx / g : 0.0;

  out.junction_spread = 0.0;
  for (double d : dev) {
    out.junction_spread = std::max(out.junction_spread, std::abs(d));
  }
  out.junction_spread /= e_jrm;
  out.pass_10pct = out.junction_spread <= 0.10;
  return out;
}

double jrm_kirchhoff_residual(const JrmSpec& jrm,
                              const std::array<double, 4>& static_jumps) {
  std::array<double, 4> currents{};
  for (int i = 0; i < 4; ++i) {
    currents[static_cast<std::size_t>(i)] =
        jrm.junction_energies[static_cast<std::size_t>(i)] *
        std::sin(static_jumps[static_cast<std::size_t>(i)]);
  }
  double residual = 0.0;
  for (int i = 0; i < 4; ++i) {
    residual = std::max(
        residual,
        std::abs(currents[static_cast<std::size_t>(i)] -
                 currents[static_cast<std::size_t>((i + 1) % 4)]));
  }
  return residual;
}

}  // namespace hardware
}  // namespace pqa
