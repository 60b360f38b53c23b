#include "kg/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

#include "kg/stepper.hpp"

namespace kg {
namespace {

// i*k multiplier for one axis with the Nyquist mode zeroed: odd derivatives
// of real fields need the unpaired frequency dropped to keep odd symmetry.
ComplexArray gradient_multiplier(const Grid& grid, int axis) {
  const int n = grid.n[axis];
  ComplexArray ik(n);
  for (int m = 0; m < n; ++m) {
    ik[m] = (m == n / 2) ? Complex(0.0, 0.0) : Complex(0.0, grid.k[axis][m]);
  }
  return ik;
}

double nonnegative_integral(const RealField& f, FftPlan& plan) {
  const double value = integrate(f, &plan.team()).real();
  if (value < 0.0) {
    throw std::logic_error("energy component integral came out negative");
  }
  return value;
}

}  // namespace

EnergyReport energy(const SpectralField& uhat_a, const SpectralField& uhat_b,
                    double dt, FftPlan& plan, std::int64_t step_index) {
  if (!same_grid(uhat_a.grid, uhat_b.grid) ||
      !same_grid(uhat_a.grid, plan.grid())) {
    throw std::invalid_argument("energy: levels must share the plan's grid");
  }
  if (!(dt > 0.0)) throw std::invalid_argument("energy: dt must be positive");
  const Grid& grid = uhat_a.grid;

  SpectralField half{0.5 * (uhat_a.data + uhat_b.data), grid};
  SpectralField dtdiff{(uhat_b.data - uhat_a.data) / dt, grid};
  RealField u_half = plan.inverse(half);
  RealField u_t = plan.inverse(dtdiff);
  if (!all_finite(u_half) || !all_finite(u_t)) {
    throw std::domain_error("energy: non-finite field values");
  }

  auto abs2_field = [&](const RealField& f) {
    return RealField{f.data.abs2().cast<Complex>(), grid};
  };

  EnergyReport report;
  report.step_index = step_index;
  report.kinetic = 0.5 * nonnegative_integral(abs2_field(u_t), plan);
  report.mass = 0.5 * nonnegative_integral(abs2_field(u_half), plan);

  double grad = 0.0;
  const Index n1 = grid.n[1], n2 = grid.n[2];
  for (int axis = 0; axis < 3; ++axis) {
    const ComplexArray ik = gradient_multiplier(grid, axis);
    SpectralField ghat{ComplexArray(grid.size()), grid};
    Index pos = 0;
    for (int i = 0; i < grid.n[0]; ++i) {
      for (Index j = 0; j < n1; ++j) {
        for (Index l = 0; l < n2; ++l, ++pos) {
          const int m = axis == 0 ? i : (axis == 1 ? static_cast<int>(j)
                                                   : static_cast<int>(l));
          ghat.data[pos] = ik[m] * half.data[pos];
        }
      }
    }
    RealField g = plan.inverse(ghat);
    grad += 0.5 * nonnegative_integral(abs2_field(g), plan);
  }
  report.gradient = grad;

  RealField quartic{u_half.data.abs2().square().cast<Complex>(), grid};
  report.quartic = 0.25 * nonnegative_integral(quartic, plan);

  report.total =
      report.kinetic + report.mass + report.gradient - report.quartic;
  return report;
}

double drift_series(std::span<const EnergyReport> reports) {
  if (reports.empty()) {
    throw std::invalid_argument("drift_series: empty report list");
  }
  const double base = reports.front().total;
  const double guard = std::max(std::abs(base), 1e-300);
  double drift = 0.0;
  for (const auto& r : reports) {
    drift = std::max(drift, std::abs(r.total - base) / guard);
  }
  return drift;
}

ExactSolution traveling_wave_solution(Complex amplitude,
                                      std::array<double, 3> wavevector) {
  const double k2 = wavevector[0] * wavevector[0] +
                    wavevector[1] * wavevector[1] +
                    wavevector[2] * wavevector[2];
  const double omega2 = 1.0 + k2 - std::norm(amplitude);
  if (!(omega2 > 0.0)) {
    throw std::invalid_argument(
        "traveling wave requires |A|^2 < 1 + |k|^2 (real frequency)");
  }
  const double omega = std::sqrt(omega2);
  return ExactSolution{[amplitude, wavevector, omega](double x, double y,
                                                      double z, double t) {
    const double phase =
        wavevector[0] * x + wavevector[1] * y + wavevector[2] * z - omega * t;
    return amplitude * Complex(std::cos(phase), std::sin(phase));
  }};
}

ExactSolution static_profile_solution(
    std::function<Complex(double, double, double)> profile) {
  return ExactSolution{[profile = std::move(profile)](double x, double y,
                                                      double z, double) {
    return profile(x, y, z);
  }};
}

ErrorNorms error_vs_exact(const SolverState& state, const ExactSolution& exact) {
  if (!exact.value) {
    throw std::invalid_argument("error_vs_exact: empty solution descriptor");
  }
  const Grid& grid = state.grid();
  const double t = static_cast<double>(state.step_index) * state.dt;

  RealField diff{ComplexArray(grid.size()), grid};
  double linf = 0.0;
  Index pos = 0;
  for (int i = 0; i < grid.n[0]; ++i) {
    const double x = grid.coord(0, i);
    for (int j = 0; j < grid.n[1]; ++j) {
      const double y = grid.coord(1, j);
      for (int l = 0; l < grid.n[2]; ++l, ++pos) {
        const Complex d =
            state.u_now.data[pos] - exact.value(x, y, grid.coord(2, l), t);
        diff.data[pos] = std::norm(d);
        linf = std::max(linf, std::abs(d));
      }
    }
  }
  const double volume = grid.length[0] * grid.length[1] * grid.length[2];
  const double l2 = std::sqrt(std::max(0.0, integrate(diff).real() / volume));
  return ErrorNorms{linf, l2};
}

std::optional<BlowupReport> blowup_check(const RealField& u, double threshold) {
  if (!(threshold > 0.0)) {
    throw std::invalid_argument("blowup_check: threshold must be positive");
  }
  const Grid& grid = u.grid;
  double max_abs = 0.0;
  Index argmax = 0, first_non_finite = -1;
  for (Index i = 0; i < u.data.size(); ++i) {
    const Complex v = u.data[i];
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      if (first_non_finite < 0) first_non_finite = i;
      continue;
    }
    const double a = std::abs(v);
    if (a > max_abs) {
      max_abs = a;
      argmax = i;
    }
  }
  const bool non_finite = first_non_finite >= 0;
  if (!non_finite && !(max_abs > threshold)) return std::nullopt;

  const Index flat = non_finite ? first_non_finite : argmax;
  const Index ny = grid.n[1], nz = grid.n[2];
  BlowupReport report;
  report.max_abs = max_abs;
  report.non_finite = non_finite;
  report.location = {static_cast<int>(flat / (ny * nz)),
                     static_cast<int>((flat / nz) % ny),
                     static_cast<int>(flat % nz)};
  return report;
}

}  // namespace kg
