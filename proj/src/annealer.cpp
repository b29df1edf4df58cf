#include "pqa/annealer.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <sstream>

namespace pqa {

namespace {

void check_dense_cap(int n_spins) {
  if (n_spins < 1) throw SchemaError("empty spin system");
  if (n_spins > kDenseSpinCap) {
    std::ostringstream msg;
    msg << "dense construction refused for " << n_spins << " spins (cap "
        << kDenseSpinCap << ")";
    throw CapacityError(msg.str());
  }
}

int parity_sign(std::uint32_t bits) {
  return std::popcount(bits) & 1 ? -1 : +1;
}

}  // namespace

ScheduledHamiltonian ScheduledHamiltonian::from_model(
    const TwoBodyModel& model) {
  ScheduledHamiltonian sys;
  sys.n_spins = model.n_spins;
  sys.driver = model.x_fields;
  sys.problem_fields = model.z_fields;
  for (const auto& term : model.pair_terms) {
    sys.constraint_terms.push_back(
        {(std::uint32_t{1} << term.a) | (std::uint32_t{1} << term.b),
         term.weight});
  }
  for (const auto& term : model.constraint_fields) {
    sys.constraint_terms.push_back({std::uint32_t{1} << term.site,
                                    term.weight});
  }
  return sys;
}

ScheduledHamiltonian ScheduledHamiltonian::from_plaquettes(
    int n_spins, std::span<const ParityConstraint> constraints,
    std::span<const FieldTerm> problem_fields,
    std::span<const FieldTerm> driver) {
  ScheduledHamiltonian sys;
  sys.n_spins = n_spins;
  sys.driver.assign(driver.begin(), driver.end());
  sys.problem_fields.assign(problem_fields.begin(), problem_fields.end());
  for (const auto& c : constraints) {
    std::uint32_t mask = 0;
    for (int id : c.members) {
      if (id < 0 || id >= n_spins) {
        throw SchemaError("constraint member " + std::to_string(id) +
                          " outside the spin range");
      }
      mask |= std::uint32_t{1} << id;
    }
    sys.constraint_terms.push_back({mask, c.signed_coefficient()});
  }
  return sys;
}

Eigen::VectorXd ScheduledHamiltonian::diagonal(double b, double c) const {
  check_dense_cap(n_spins);
  const std::uint32_t dim = std::uint32_t{1} << n_spins;
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(dim);
  for (const auto& term : problem_fields) {
    const double w = b * term.weight;
    const std::uint32_t bit = std::uint32_t{1} << term.site;
    for (std::uint32_t x = 0; x < dim; ++x) {
      diag(x) += (x & bit) ? -w : w;
    }
  }
  for (const auto& term : constraint_terms) {
    const double w = c * term.weight;
    for (std::uint32_t x = 0; x < dim; ++x) {
      diag(x) += w * parity_sign(x & term.mask);
    }
  }
  return diag;
}

double ScheduledHamiltonian::constraint_energy(std::uint32_t config) const {
  double energy = 0.0;
  for (const auto& term : constraint_terms) {
    energy += term.weight * parity_sign(config & term.mask);
  }
  return energy;
}

Eigen::MatrixXd build_hamiltonian(const ScheduledHamiltonian& system,
                                  double a, double b, double c) {
  check_dense_cap(system.n_spins);
  const std::uint32_t dim = std::uint32_t{1} << system.n_spins;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  h.diagonal() = system.diagonal(b, c);
  for (const auto& term : system.driver) {
    const std::uint32_t bit = std::uint32_t{1} << term.site;
    const double w = a * term.weight;
    for (std::uint32_t x = 0; x < dim; ++x) {
      h(x ^ bit, x) += w;
    }
  }
  return h;
}

Eigen::MatrixXd build_hamiltonian(const ScheduledHamiltonian& system,
                                  const ScheduleSpec& schedule, double t) {
  return build_hamiltonian(system, schedule.a(t), schedule.b(t),
                           schedule.c(t));
}

SpectrumTrace spectrum_trace(const ScheduledHamiltonian& system,
                             const ScheduleSpec& schedule, int m_levels,
                             int n_times) {
  check_dense_cap(system.n_spins);
  if (n_times < 2) throw SchemaError("need at least 2 time samples");
  const std::uint32_t dim = std::uint32_t{1} << system.n_spins;
  const int m = std::min<int>(m_levels, static_cast<int>(dim));

  SpectrumTrace trace;
  trace.times.resize(static_cast<std::size_t>(n_times));
  trace.levels.resize(n_times, m);
  const double total = schedule.total_time;
  for (int k = 0; k < n_times; ++k) {
    const double t = total * k / (n_times - 1);
    trace.times[static_cast<std::size_t>(k)] = t;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        build_hamiltonian(system, schedule, t), Eigen::EigenvaluesOnly);
    trace.levels.row(k) = solver.eigenvalues().head(m).transpose();
  }

  // With the driver off at t = T the final Hamiltonian is diagonal, so each
  // level corresponds to basis states we can classify exactly.
  if (schedule.a(total) == 0.0) {
    Eigen::VectorXd diag = system.diagonal(schedule.b(total),
                                           schedule.c(total));
    std::vector<std::uint32_t> order(dim);
    for (std::uint32_t x = 0; x < dim; ++x) order[x] = x;
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      return diag(a) < diag(b);
    });
    double constraint_min = system.constraint_energy(0);
    for (std::uint32_t x = 1; x < dim; ++x) {
      constraint_min = std::min(constraint_min,
                                system.constraint_energy(x));
    }
    trace.labels.reserve(static_cast<std::size_t>(m));
    for (int level = 0; level < m; ++level) {
      const bool satisfied =
          system.constraint_energy(order[static_cast<std::size_t>(level)]) <=
          constraint_min + kEnergyTolerance;
      trace.labels.push_back(satisfied ? LevelLabel::constraint_satisfying
                                       : LevelLabel::constraint_violating);
    }
  }
  return trace;
}

SweepResult evolve(const ScheduledHamiltonian& system,
                   const ScheduleSpec& schedule, int n_steps,
                   int n_trace_samples) {
  check_dense_cap(system.n_spins);
  if (n_steps < 1) throw SchemaError("n_steps must be at least 1");

  using Complex = std::complex<double>;

  // Initial state: exact ground state of H(0), sign-fixed for determinism.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> initial(
      build_hamiltonian(system, schedule, 0.0));
  Eigen::VectorXd ground0 = initial.eigenvectors().col(0);
  Eigen::Index peak = 0;
  ground0.cwiseAbs().maxCoeff(&peak);
  if (ground0(peak) < 0.0) ground0 = -ground0;
  Eigen::VectorXcd psi = ground0.cast<Complex>();

  // Target: projector onto the full degenerate ground space of H(T).
  const double total = schedule.total_time;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> final_solver(
      build_hamiltonian(system, schedule, total));
  const Eigen::VectorXd& final_levels = final_solver.eigenvalues();
  const double tol =
      kGroundSpaceTolerance * std::max(1.0, std::abs(final_levels(0)));
  int ground_dim = 1;
  while (ground_dim < final_levels.size() &&
         final_levels(ground_dim) <= final_levels(0) + tol) {
    ++ground_dim;
  }
  const Eigen::MatrixXcd target =
      final_solver.eigenvectors().leftCols(ground_dim).cast<Complex>();
  auto success_of = [&](const Eigen::VectorXcd& state) {
    return (target.adjoint() * state).squaredNorm();
  };

  SweepResult result;
  const int stride =
      n_trace_samples > 0 ? std::max(1, n_steps / n_trace_samples) : 0;
  if (stride > 0) result.success_trace.push_back({0.0, success_of(psi)});

  const double dt = total / n_steps;
  for (int step = 0; step < n_steps; ++step) {
    const double t_mid = (step + 0.5) * dt;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        build_hamiltonian(system, schedule, t_mid));
    const Eigen::MatrixXd& vecs = solver.eigenvectors();
    // exp(-i H dt) through the eigenbasis, with the real/imaginary parts
    // propagated through real matvecs
    Eigen::VectorXd cre = vecs.transpose() * psi.real();
    Eigen::VectorXd cim = vecs.transpose() * psi.imag();
    for (Eigen::Index i = 0; i < cre.size(); ++i) {
      const double phase = solver.eigenvalues()(i) * dt;
      const double c = std::cos(phase), s = std::sin(phase);
      const double re = cre(i) * c + cim(i) * s;
      const double im = cim(i) * c - cre(i) * s;
      cre(i) = re;
      cim(i) = im;
    }
    Eigen::VectorXd out_re = vecs * cre;
    Eigen::VectorXd out_im = vecs * cim;
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
      psi(i) = Complex(out_re(i), out_im(i));
    }
    if (std::abs(psi.norm() - 1.0) > 1e-9) {
      throw std::runtime_error("propagation lost unitarity");
    }
    if (stride > 0 && ((step + 1) % stride == 0 || step + 1 == n_steps)) {
      result.success_trace.push_back({(step + 1) * dt, success_of(psi)});
    }
  }

  result.state.amplitudes = std::move(psi);
  result.success_probability = success_of(result.state.amplitudes);
  if (stride == 0) {
    result.success_trace.push_back({total, result.success_probability});
  }
  return result;
}

ProtocolComparison compare_protocols(const ScheduledHamiltonian& system,
                                     const ScheduleSpec& base, int m_levels,
                                     int n_times) {
  ScheduleSpec ramp = base;
  ramp.mode = ScheduleMode::ramp;
  ScheduleSpec always_on = base;
  always_on.mode = ScheduleMode::always_on;
  return {spectrum_trace(system, ramp, m_levels, n_times),
          spectrum_trace(system, always_on, m_levels, n_times)};
}

}  // namespace pqa
