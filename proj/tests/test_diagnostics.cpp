#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "kg/diagnostics.hpp"
#include "kg/stepper.hpp"
#include "support/oracles.hpp"

using namespace kg;

namespace {

SpectralField transform_of_constant(const Grid& g, Complex a, FftPlan& plan) {
  RealField f = make_real_field(g);
  f.data.setConstant(a);
  return fft3_forward(f, plan);
}

}  // namespace

TEST_CASE("energy of the zero state is exactly zero") {
  const Grid g = make_grid({8, 8, 8});
  FftPlan plan = make_plan(g, 2);
  const SpectralField z = make_spectral_field(g);
  const EnergyReport r = energy(z, z, 0.01, plan);
  CHECK(r.kinetic == 0.0);
  CHECK(r.mass == 0.0);
  CHECK(r.gradient == 0.0);
  CHECK(r.quartic == 0.0);
  CHECK(r.total == 0.0);
}

TEST_CASE("constant field u = 1 at rest has total (2 pi)^3 / 4") {
  const Grid g = make_grid({16, 16, 16});
  FftPlan plan = make_plan(g, 2);
  const SpectralField uhat = transform_of_constant(g, 1.0, plan);
  const EnergyReport r = energy(uhat, uhat, 0.01, plan);

  const double volume = std::pow(kTwoPi, 3);
  CHECK(r.kinetic == doctest::Approx(0.0));
  CHECK(r.mass == doctest::Approx(0.5 * volume).epsilon(1e-12));
  CHECK(r.gradient == doctest::Approx(0.0));
  CHECK(r.quartic == doctest::Approx(0.25 * volume).epsilon(1e-12));
  CHECK(r.total == doctest::Approx(volume / 4.0).epsilon(1e-12));
  CHECK(r.total == doctest::Approx(62.0126).epsilon(1e-5));
}

TEST_CASE("plane-wave energy matches the continuum closed form") {
  const Grid g = make_grid({32, 32, 32});
  FftPlan plan = make_plan(g, 2);
  const double dt = 0.01;
  const Complex a(0.1, 0.0);
  const double omega = std::sqrt(1.0 + 1.0 - std::norm(a));

  // Exact levels at t = 0 and t = dt.
  auto level = [&](double t) {
    RealField f = make_real_field(g);
    for (int i = 0; i < 32; ++i) {
      const double phase = g.coord(0, i) - omega * t;
      const Complex v = a * Complex(std::cos(phase), std::sin(phase));
      for (int j = 0; j < 32; ++j) {
        for (int l = 0; l < 32; ++l) f.data[g.index(i, j, l)] = v;
      }
    }
    return fft3_forward(f, plan);
  };
  const SpectralField at0 = level(0.0), at1 = level(dt);
  const EnergyReport r = energy(at0, at1, dt, plan);

  const double volume = std::pow(kTwoPi, 3);
  const double exact =
      volume * (0.5 * (omega * omega + 1.0 + 1.0) * std::norm(a) -
                0.25 * std::norm(a) * std::norm(a));
  CHECK(std::abs(r.total - exact) / exact < 1e-4);  // O(dt^2) + spectral error
}

TEST_CASE("energy components are non-negative and worker invariant") {
  const Grid g = make_grid({16, 16, 16});
  const RealField u = test::random_field(g, 42);
  const RealField v = test::random_field(g, 43);

  FftPlan base = make_plan(g, 1);
  const EnergyReport ref = energy(fft3_forward(u, base), fft3_forward(v, base),
                                  0.02, base);
  CHECK(ref.kinetic >= 0.0);
  CHECK(ref.mass >= 0.0);
  CHECK(ref.gradient >= 0.0);
  CHECK(ref.quartic >= 0.0);
  CHECK(ref.total == ref.kinetic + ref.mass + ref.gradient - ref.quartic);

  for (int p : {2, 4}) {
    FftPlan plan = make_plan(g, p);
    const EnergyReport r = energy(fft3_forward(u, plan), fft3_forward(v, plan),
                                  0.02, plan);
    CHECK(std::abs(r.total - ref.total) <= 1e-12 * std::abs(ref.total));
    CHECK(std::abs(r.kinetic - ref.kinetic) <= 1e-12 * ref.kinetic);
    CHECK(std::abs(r.gradient - ref.gradient) <= 1e-12 * ref.gradient);
  }
}

TEST_CASE("energy rejects non-finite fields and bad dt") {
  const Grid g = make_grid({8, 8, 8});
  FftPlan plan = make_plan(g, 1);
  SpectralField bad = make_spectral_field(g);
  bad.data[3] = Complex(std::nan(""), 0.0);
  CHECK_THROWS_AS(energy(bad, bad, 0.01, plan), std::domain_error);

  const SpectralField z = make_spectral_field(g);
  CHECK_THROWS_AS(energy(z, z, 0.0, plan), std::invalid_argument);
}

TEST_CASE("drift_series") {
  auto with_totals = [](std::vector<double> totals) {
    std::vector<EnergyReport> reports;
    for (double t : totals) {
      EnergyReport r;
      r.total = t;
      reports.push_back(r);
    }
    return reports;
  };

  const auto constant = with_totals({2.5, 2.5, 2.5});
  CHECK(drift_series(constant) == 0.0);

  const auto pair = with_totals({1.0, 1.001});
  CHECK(drift_series(pair) == doctest::Approx(1e-3).epsilon(1e-9));

  const auto zeros = with_totals({0.0, 0.0});
  CHECK(drift_series(zeros) == 0.0);  // the 1e-300 guard, no division by zero

  CHECK_THROWS_AS(drift_series({}), std::invalid_argument);
}

TEST_CASE("gaussian drift shrinks by 3x-5x under dt halving at fixed time") {
  const Grid g = make_grid({32, 32, 32});
  FftPlan plan = make_plan(g, 2);
  const auto ic = InitialCondition::gaussian(0.1);

  auto drift_at = [&](double dt, int steps) {
    SolverState state = initialize(g, ic, dt, plan);
    const RunOutcome outcome = run(state, steps, plan, 1);
    REQUIRE(!outcome.blowup);
    return drift_series(outcome.energy);
  };

  const double coarse = drift_at(0.01, 30);
  const double fine = drift_at(0.005, 60);
  const double ratio = coarse / fine;
  CHECK(ratio > 3.0);
  CHECK(ratio < 5.0);
}

TEST_CASE("constant exact solution conserves the computed energy to 1e-5") {
  const Grid g = make_grid({16, 16, 16});
  FftPlan plan = make_plan(g, 2);
  const Complex a(0.1, 0.0);
  SolverState state =
      initialize(g, InitialCondition::plane_wave(a, {0, 0, 0}), 0.01, plan);
  const RunOutcome outcome = run(state, 30, plan, 1);
  REQUIRE(!outcome.blowup);
  CHECK(drift_series(outcome.energy) <= 1e-5);
}

TEST_CASE("error_vs_exact") {
  const Grid g = make_grid({16, 16, 16});
  FftPlan plan = make_plan(g, 2);
  const Complex a(0.1, 0.0);
  SolverState state =
      initialize(g, InitialCondition::plane_wave(a, {1, 0, 0}), 0.01, plan);
  const ExactSolution exact =
      traveling_wave_solution(a, {kTwoPi / g.length[0], 0.0, 0.0});

  const ErrorNorms zero = error_vs_exact(state, exact);
  CHECK(zero.linf < 1e-15);
  CHECK(zero.l2 < 1e-15);

  state.u_now.data += Complex(1e-6, 0.0);
  const ErrorNorms offset = error_vs_exact(state, exact);
  CHECK(offset.linf == doctest::Approx(1e-6).epsilon(1e-9));
  CHECK(offset.l2 == doctest::Approx(1e-6).epsilon(1e-7));
}

TEST_CASE("blowup_check") {
  const Grid g = make_grid({8, 8, 8});
  RealField u = make_real_field(g);
  CHECK(!blowup_check(u, 1e8).has_value());

  u.data[g.index(2, 3, 4)] = Complex(1e9, 0.0);
  const auto report = blowup_check(u, 1e8);
  REQUIRE(report.has_value());
  CHECK(report->max_abs == doctest::Approx(1e9));
  CHECK(report->location == std::array<int, 3>{2, 3, 4});
  CHECK(!report->non_finite);

  u.data[g.index(1, 1, 1)] = Complex(0.0, std::nan(""));
  const auto nf = blowup_check(u, 1e8);
  REQUIRE(nf.has_value());
  CHECK(nf->non_finite);
  CHECK(nf->location == std::array<int, 3>{1, 1, 1});

  CHECK_THROWS_AS(blowup_check(u, 0.0), std::invalid_argument);
}
