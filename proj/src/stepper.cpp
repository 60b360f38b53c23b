#include "kg/stepper.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "kg/diagnostics.hpp"

namespace kg {
namespace {

// Gathered per-worker blow-up scan state, combined in worker order so the
// reported location is the first flat index attaining the maximum.
struct ScanPartial {
  double max_abs = 0.0;
  Index argmax = 0;
  Index first_non_finite = -1;
};

ScanPartial scan_range(const Complex* data, Index lo, Index hi) {
  ScanPartial part;
  part.argmax = lo;
  for (Index i = lo; i < hi; ++i) {
    const double re = data[i].real(), im = data[i].imag();
    if (!std::isfinite(re) || !std::isfinite(im)) {
      if (part.first_non_finite < 0) part.first_non_finite = i;
      continue;
    }
    const double a = std::abs(data[i]);
    if (a > part.max_abs) {
      part.max_abs = a;
      part.argmax = i;
    }
  }
  return part;
}

std::optional<BlowupReport> combine_scans(const std::vector<ScanPartial>& parts,
                                          const Grid& grid, double threshold,
                                          std::int64_t step_index) {
  ScanPartial total;
  total.argmax = -1;
  for (const auto& p : parts) {
    if (p.first_non_finite >= 0 &&
        (total.first_non_finite < 0 || p.first_non_finite < total.first_non_finite)) {
      total.first_non_finite = p.first_non_finite;
    }
    if (total.argmax < 0 || p.max_abs > total.max_abs) {
      total.max_abs = p.max_abs;
      total.argmax = p.argmax;
    }
  }
  const bool non_finite = total.first_non_finite >= 0;
  if (!non_finite && !(total.max_abs > threshold)) return std::nullopt;

  const Index flat = non_finite ? total.first_non_finite : total.argmax;
  const Index ny = grid.n[1], nz = grid.n[2];
  BlowupReport report;
  report.step_index = step_index;
  report.max_abs = total.max_abs;
  report.non_finite = non_finite;
  report.location = {static_cast<int>(flat / (ny * nz)),
                     static_cast<int>((flat / nz) % ny),
                     static_cast<int>(flat % nz)};
  return report;
}

double center(const Grid& grid, int axis) { return 0.5 * grid.length[axis]; }

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string("initial condition: non-finite ") + what);
  }
}

// Samples u0 and v0 for the preset; parallel over the plan's x-slabs.
void sample_initial(const Grid& grid, const InitialCondition& ic, FftPlan& plan,
                    RealField& u0, RealField& v0) {
  using Preset = InitialCondition::Preset;

  require_finite(std::abs(ic.amplitude), "amplitude");
  for (double w : ic.width) require_finite(w, "width");
  require_finite(std::abs(ic.v_amplitude), "velocity amplitude");

  std::array<double, 3> kvec{};
  Complex minus_i_omega = 0.0;
  switch (ic.preset) {
    case Preset::gaussian:
      for (double w : ic.width) {
        if (!(w > 0.0)) throw std::invalid_argument("gaussian width must be positive");
      }
      break;
    case Preset::plane_wave: {
      double k2 = 0.0;
      for (int d = 0; d < 3; ++d) {
        kvec[d] = kTwoPi * ic.mode[d] / grid.length[d];
        k2 += kvec[d] * kvec[d];
      }
      const double omega2 = 1.0 + k2 - std::norm(ic.amplitude);
      if (!(omega2 > 0.0)) {
        throw std::invalid_argument(
            "plane wave requires |A|^2 < 1 + |k|^2 (real frequency)");
      }
      minus_i_omega = Complex(0.0, -std::sqrt(omega2));
      break;
    }
    case Preset::sech_line:
      break;
    case Preset::custom:
      if (!ic.custom_u0) {
        throw std::invalid_argument("custom preset needs a u0 sampler");
      }
      break;
  }

  const double cx = (ic.preset == Preset::sech_line && ic.center_x >= 0.0)
                        ? ic.center_x
                        : center(grid, 0);

  plan.team().run([&](int w) {
    const auto [x0, x1] = plan.x_slab(w);
    Complex* u = u0.data.data();
    Complex* v = v0.data.data();
    for (int i = x0; i < x1; ++i) {
      const double x = grid.coord(0, i);
      for (int j = 0; j < grid.n[1]; ++j) {
        const double y = grid.coord(1, j);
        for (int l = 0; l < grid.n[2]; ++l) {
          const double z = grid.coord(2, l);
          const Index pos = grid.index(i, j, l);
          switch (ic.preset) {
            case Preset::gaussian: {
              const double dx = x - center(grid, 0), dy = y - center(grid, 1),
                           dz = z - center(grid, 2);
              const double shape =
                  std::exp(-0.5 * (dx * dx / (ic.width[0] * ic.width[0]) +
                                   dy * dy / (ic.width[1] * ic.width[1]) +
                                   dz * dz / (ic.width[2] * ic.width[2])));
              u[pos] = ic.amplitude * shape;
              v[pos] = ic.v_amplitude * shape;
              break;
            }
            case Preset::plane_wave: {
              const double phase = kvec[0] * x + kvec[1] * y + kvec[2] * z;
              const Complex wave =
                  ic.amplitude * Complex(std::cos(phase), std::sin(phase));
              u[pos] = wave;
              v[pos] = minus_i_omega * wave;
              break;
            }
            case Preset::sech_line: {
              u[pos] = ic.amplitude / std::cosh(x - cx);
              v[pos] = 0.0;
              break;
            }
            case Preset::custom: {
              u[pos] = ic.custom_u0(x, y, z);
              v[pos] = ic.custom_v0 ? ic.custom_v0(x, y, z) : Complex(0.0);
              break;
            }
          }
        }
      }
    }
  });
}

}  // namespace

InitialCondition InitialCondition::zero() {
  return gaussian(0.0);
}

InitialCondition InitialCondition::gaussian(Complex amplitude,
                                            std::array<double, 3> width) {
  InitialCondition ic;
  ic.preset = Preset::gaussian;
  ic.amplitude = amplitude;
  ic.width = width;
  return ic;
}

InitialCondition InitialCondition::plane_wave(Complex amplitude,
                                              std::array<int, 3> mode) {
  InitialCondition ic;
  ic.preset = Preset::plane_wave;
  ic.amplitude = amplitude;
  ic.mode = mode;
  return ic;
}

InitialCondition InitialCondition::sech_line(double amplitude_scale,
                                             double center_x) {
  InitialCondition ic;
  ic.preset = Preset::sech_line;
  ic.amplitude = amplitude_scale * std::sqrt(2.0);
  ic.center_x = center_x;
  return ic;
}

SolverState initialize(const Grid& grid, const InitialCondition& ic, double dt,
                       FftPlan& plan) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!same_grid(grid, plan.grid())) {
    throw std::invalid_argument("initialize: grid does not match plan");
  }

  RealField u0 = make_real_field(grid);
  RealField v0 = make_real_field(grid);
  sample_initial(grid, ic, plan, u0, v0);

  SpectralField uhat0 = plan.forward(u0);

  // Lap u0 via the spectral symbol.
  SpectralField lap_hat{ComplexArray(grid.size()), grid};
  lap_hat.data = laplacian_multiplier(grid).cast<Complex>() * uhat0.data;
  RealField lap = plan.inverse(lap_hat);

  // Second-order Taylor back level:
  //   u^{-1} = u0 - dt v0 + (dt^2/2)(Lap u0 - u0 + |u0|^2 u0)
  RealField back{ComplexArray(grid.size()), grid};
  back.data = u0.data - dt * v0.data +
              (0.5 * dt * dt) *
                  (lap.data - u0.data + u0.data * u0.data.abs2().cast<Complex>());

  SolverState state{plan.forward(back), std::move(uhat0), std::move(u0), dt, 0};
  return state;
}

std::optional<BlowupReport> step(SolverState& state, FftPlan& plan,
                                 const StepOptions& options) {
  const Grid& grid = state.grid();
  if (!same_grid(grid, plan.grid())) {
    throw std::invalid_argument("step: state grid does not match plan");
  }
  if (!(state.dt > 0.0)) throw std::invalid_argument("step: dt must be positive");

  const Index n1 = grid.n[1], n2 = grid.n[2];
  const double inv_dt2 = 1.0 / (state.dt * state.dt);
  const RealArray kx2 = grid.k[0].square();
  const RealArray ky2 = grid.k[1].square();
  const RealArray kz2 = grid.k[2].square();

  // 2/3-rule mask per axis (1 keeps the mode), built only when dealiasing.
  std::array<RealArray, 3> mask;
  if (options.dealias) {
    for (int d = 0; d < 3; ++d) {
      mask[d] = RealArray::Ones(grid.n[d]);
      for (int m = 0; m < grid.n[d]; ++m) {
        const int wrapped = (m < grid.n[d] / 2) ? m : m - grid.n[d];
        if (std::abs(wrapped) >= grid.n[d] / 3.0) mask[d][m] = 0.0;
      }
    }
  }

  // Nonlinear term in physical space from the cached copy of u^n.
  RealField nl{ComplexArray(grid.size()), grid};
  plan.team().run([&](int w) {
    const auto [lo, hi] = plan.x_flat_range(w);
    auto seg = [&](const ComplexArray& a) {
      return Eigen::Map<const ComplexArray>(a.data() + lo, hi - lo);
    };
    Eigen::Map<ComplexArray>(nl.data.data() + lo, hi - lo) =
        seg(state.u_now.data) * seg(state.u_now.data).abs2().cast<Complex>();
  });

  SpectralField nhat = plan.forward(nl);  // transform #1

  // Pointwise semi-implicit solve; overwrites nhat with uhat^{n+1}.
  plan.team().run([&](int w) {
    const auto [x0, x1] = plan.x_slab(w);
    Complex* out = nhat.data.data();
    const Complex* now = state.uhat_now.data.data();
    const Complex* prev = state.uhat_prev.data.data();
    for (int i = x0; i < x1; ++i) {
      for (Index j = 0; j < n1; ++j) {
        const double kxy = kx2[i] + ky2[j];
        const double mxy = options.dealias ? mask[0][i] * mask[1][j] : 1.0;
        Index pos = (Index(i) * n1 + j) * n2;
        for (Index l = 0; l < n2; ++l, ++pos) {
          const double rho = 1.0 + kxy + kz2[l];
          const Complex forcing = options.dealias ? out[pos] * (mxy * mask[2][l])
                                                  : out[pos];
          out[pos] = (2.0 * inv_dt2 * now[pos] - inv_dt2 * prev[pos] -
                      0.25 * rho * (2.0 * now[pos] + prev[pos]) + forcing) /
                     (inv_dt2 + 0.25 * rho);
        }
      }
    }
  });

  RealField u_new = plan.inverse(nhat);  // transform #2

  // Blow-up scan over the new field, combined in fixed worker order.
  std::vector<ScanPartial> parts(static_cast<size_t>(plan.workers()));
  plan.team().run([&](int w) {
    const auto [lo, hi] = plan.x_flat_range(w);
    parts[static_cast<size_t>(w)] = scan_range(u_new.data.data(), lo, hi);
  });

  state.uhat_prev = std::move(state.uhat_now);
  state.uhat_now = std::move(nhat);
  state.u_now = std::move(u_new);
  ++state.step_index;

  return combine_scans(parts, grid, options.blowup_threshold, state.step_index);
}

RunOutcome run(SolverState& state, int steps, FftPlan& plan,
               int diagnostics_every, const StepOptions& options) {
  if (steps < 1) throw std::invalid_argument("run: steps must be >= 1");

  RunOutcome outcome;
  double baseline = 0.0;
  auto record = [&] {
    EnergyReport report = energy(state.uhat_prev, state.uhat_now, state.dt,
                                 plan, state.step_index);
    if (outcome.energy.empty()) {
      baseline = report.total;
      report.relative_drift = 0.0;
    } else {
      report.relative_drift = std::abs(report.total - baseline) /
                              std::max(std::abs(baseline), 1e-300);
    }
    outcome.energy.push_back(report);
  };

  if (diagnostics_every > 0) record();
  for (int s = 0; s < steps; ++s) {
    outcome.blowup = step(state, plan, options);
    if (outcome.blowup) break;
    if (diagnostics_every > 0 && state.step_index % diagnostics_every == 0) {
      record();
    }
  }
  return outcome;
}

}  // namespace kg
