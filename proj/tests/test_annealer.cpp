#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "pqa/annealer.hpp"
#include "pqa/compiler.hpp"

using namespace pqa;

namespace {

ScheduledHamiltonian one_spin_x(double weight) {
  ScheduledHamiltonian sys;
  sys.n_spins = 1;
  sys.driver = {{0, weight}};
  return sys;
}

std::vector<double> seeded_fields(unsigned seed, double amplitude) {
  std::mt19937 rng(seed);
  std::vector<double> fields(4);
  for (double& f : fields) {
    f = amplitude * (2.0 * (rng() * (1.0 / 4294967296.0)) - 1.0);
  }
  return fields;
}

}  // namespace

TEST_CASE("build_hamiltonian: single-operator matrices") {
  const auto hx = build_hamiltonian(one_spin_x(1.0), 1.0, 0.0, 0.0);
  CHECK(hx(0, 0) == 0.0);
  CHECK(hx(0, 1) == 1.0);
  CHECK(hx(1, 0) == 1.0);
  CHECK(hx(1, 1) == 0.0);

  ScheduledHamiltonian z;
  z.n_spins = 1;
  z.problem_fields = {{0, 0.7}};
  const auto hz = build_hamiltonian(z, 0.0, 1.0, 0.0);
  CHECK(hz(0, 0) == doctest::Approx(0.7));
  CHECK(hz(1, 1) == doctest::Approx(-0.7));
  CHECK(hz(0, 1) == 0.0);

  ScheduledHamiltonian zz;
  zz.n_spins = 2;
  zz.constraint_terms = {{0b11, 0.3}};
  const auto hzz = build_hamiltonian(zz, 0.0, 0.0, 1.0);
  CHECK(hzz(0, 0) == doctest::Approx(0.3));
  CHECK(hzz(1, 1) == doctest::Approx(-0.3));
  CHECK(hzz(2, 2) == doctest::Approx(-0.3));
  CHECK(hzz(3, 3) == doctest::Approx(0.3));
}

TEST_CASE("build_hamiltonian is symmetric and capped") {
  const auto model = single_plaquette_model(1.0, seeded_fields(1, 0.2));
  const auto sys = ScheduledHamiltonian::from_model(model);
  ScheduleSpec schedule;
  const auto h = build_hamiltonian(sys, schedule, 0.4 * schedule.total_time);
  CHECK((h - h.transpose()).cwiseAbs().maxCoeff() == 0.0);

  ScheduledHamiltonian too_big;
  too_big.n_spins = kDenseSpinCap + 1;
  CHECK_THROWS_AS(build_hamiltonian(too_big, 1.0, 0.0, 0.0), CapacityError);
}

TEST_CASE("spectrum_trace: pure-driver ladder at t=0 in ramp mode") {
  const auto model = single_plaquette_model(1.0);
  const auto sys = ScheduledHamiltonian::from_model(model);
  ScheduleSpec schedule;  // ramp, maxima 1
  const auto trace = spectrum_trace(sys, schedule, 16, 11);
  // 7 noninteracting sigma_x spins: levels -7 + 2k with binomial weights
  CHECK(trace.levels(0, 0) == doctest::Approx(-7.0));
  for (int m = 1; m <= 7; ++m) {
    CHECK(trace.levels(0, m) == doctest::Approx(-5.0));
  }
  for (int m = 8; m <= 15; ++m) {
    CHECK(trace.levels(0, m) == doctest::Approx(-3.0));
  }
}

TEST_CASE("spectrum_trace: zero-field plaquette ends 8-fold degenerate") {
  const auto model = single_plaquette_model(1.0);
  const auto sys = ScheduledHamiltonian::from_model(model);
  ScheduleSpec schedule;
  const auto trace = spectrum_trace(sys, schedule, 16, 21);
  const auto final_row = trace.levels.row(trace.levels.rows() - 1);
  for (int m = 1; m < 8; ++m) {
    CHECK(final_row(m) == doctest::Approx(final_row(0)).epsilon(1e-12));
  }
  CHECK(final_row(8) >= final_row(0) + 2.0 - 1e-9);

  REQUIRE(trace.labels.size() == 16);
  for (int m = 0; m < 8; ++m) {
    CHECK(trace.labels[static_cast<std::size_t>(m)] ==
          LevelLabel::constraint_satisfying);
  }
  CHECK(trace.labels[8] == LevelLabel::constraint_violating);
}

TEST_CASE("spectrum_trace: level continuity at default sampling") {
  const auto model = single_plaquette_model(1.0, seeded_fields(2, 0.2));
  const auto sys = ScheduledHamiltonian::from_model(model);
  ScheduleSpec schedule;
  const auto trace = spectrum_trace(sys, schedule, 16, 101);
  double scale = 0.0;
  for (const auto& t : sys.driver) scale += std::abs(t.weight);
  for (const auto& t : sys.problem_fields) scale += std::abs(t.weight);
  for (const auto& t : sys.constraint_terms) scale += std::abs(t.weight);
  const double bound = 10.0 * scale / 100.0;  // 10 * scale * (dt / T)
  for (int k = 1; k < trace.levels.rows(); ++k) {
    const double jump =
        (trace.levels.row(k) - trace.levels.row(k - 1)).cwiseAbs().maxCoeff();
    CHECK(jump < bound);
  }
}

TEST_CASE("always-on trace starts split by the constraint term") {
  const auto model = single_plaquette_model(1.0);
  const auto sys = ScheduledHamiltonian::from_model(model);
  ScheduleSpec base;
  base.total_time = 5.0;
  const auto comparison = compare_protocols(sys, base, 16, 11);

  // identical final Hamiltonians
  const int last = static_cast<int>(comparison.ramp.levels.rows()) - 1;
  CHECK((comparison.ramp.levels.row(last) -
         comparison.always_on.levels.row(last))
            .cwiseAbs()
            .maxCoeff() < 1e-9);

  // at t=0 the always-on spectrum equals diagonalizing A*X + C*constraints
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> direct(
      build_hamiltonian(sys, base.a_max, 0.0, base.c_max),
      Eigen::EigenvaluesOnly);
  for (int m = 0; m < comparison.always_on.levels.cols(); ++m) {
    CHECK(comparison.always_on.levels(0, m) ==
          doctest::Approx(direct.eigenvalues()(m)).epsilon(1e-12));
  }
  // and differs from the pure-driver ladder of the ramp start
  CHECK(comparison.always_on.levels(0, 0) < comparison.ramp.levels(0, 0));
}

TEST_CASE("evolve: time-independent Hamiltonian is step-count exact") {
  const auto model = single_plaquette_model(1.0);
  auto sys = ScheduledHamiltonian::from_model(model);
  ScheduleSpec constant;
  constant.mode = ScheduleMode::always_on;
  constant.a_max = 0.0;
  constant.b_max = 0.0;
  constant.total_time = 3.0;
  const auto one = evolve(sys, constant, 1);
  const auto many = evolve(sys, constant, 9);
  CHECK((one.state.amplitudes - many.state.amplitudes).norm() < 1e-8);
  CHECK(one.success_probability == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(one.state.norm() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("evolve: instantaneous sweep reduces to the static overlap") {
  const auto model = single_plaquette_model(1.0, seeded_fields(3, 0.2));
  const auto sys = ScheduledHamiltonian::from_model(model);
  ScheduleSpec schedule;
  schedule.total_time = 1e-9;
  const auto result = evolve(sys, schedule, 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> start(
      build_hamiltonian(sys, schedule, 0.0));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> finish(
      build_hamiltonian(sys, schedule, schedule.total_time));
  const Eigen::VectorXd ground = start.eigenvectors().col(0);
  const double tol =
      kGroundSpaceTolerance *
      std::max(1.0, std::abs(finish.eigenvalues()(0)));
  double overlap = 0.0;
  for (int m = 0; m < finish.eigenvalues().size(); ++m) {
    if (finish.eigenvalues()(m) > finish.eigenvalues()(0) + tol) break;
    const double amp = finish.eigenvectors().col(m).dot(ground);
    overlap += amp * amp;
  }
  CHECK(result.success_probability == doctest::Approx(overlap).epsilon(1e-6));
}

TEST_CASE("evolve: zero-field sweep fills the degenerate code space") {
  // without programmable fields the target is the whole 8-fold code space,
  // so only the constraint gap matters and T=20 is already adiabatic
  const auto sys =
      ScheduledHamiltonian::from_model(single_plaquette_model(1.0));
  ScheduleSpec schedule;
  schedule.total_time = 20.0;
  CHECK(evolve(sys, schedule, 200).success_probability >= 0.99);
}

TEST_CASE("evolve: slow sweep reaches the ground space") {
  // seed 8 keeps the minimal gap along the ramp near 0.32, so T=60 is
  // already deep in the adiabatic regime
  const auto model = single_plaquette_model(1.0, seeded_fields(8, 0.2));
  const auto sys = ScheduledHamiltonian::from_model(model);
  ScheduleSpec schedule;
  schedule.total_time = 60.0;
  const auto result = evolve(sys, schedule, 600, 10);
  CHECK(result.success_probability > 0.9);
  CHECK(result.state.norm() == doctest::Approx(1.0).epsilon(1e-9));
  REQUIRE(!result.success_trace.empty());
  CHECK(result.success_trace.front()[0] == 0.0);
  CHECK(result.success_trace.back()[0] ==
        doctest::Approx(schedule.total_time));
  CHECK(result.success_trace.back()[1] ==
        doctest::Approx(result.success_probability));
}

TEST_CASE("evolve rejects bad step counts") {
  const auto sys =
      ScheduledHamiltonian::from_model(single_plaquette_model(1.0));
  ScheduleSpec schedule;
  CHECK_THROWS_AS(evolve(sys, schedule, 0), SchemaError);
}

TEST_CASE("from_plaquettes matches the pair model at the final time") {
  // the 4-body plaquette form and its pair-gadget compile share the final
  // classical ground-space structure: both end with an 8-fold ground space
  ParityConstraint plaquette{{0, 1, 2, 3}, 1.0, Parity::even};
  std::vector<FieldTerm> driver;
  for (int i = 0; i < 4; ++i) driver.push_back({i, 1.0});
  const auto sys = ScheduledHamiltonian::from_plaquettes(
      4, std::span(&plaquette, 1), {}, driver);
  ScheduleSpec schedule;
  const auto trace = spectrum_trace(sys, schedule, 16, 5);
  const auto final_row = trace.levels.row(trace.levels.rows() - 1);
  for (int m = 1; m < 8; ++m) {
    CHECK(final_row(m) == doctest::Approx(final_row(0)));
  }
  CHECK(final_row(8) >= final_row(0) + 2.0 - 1e-9);
}
