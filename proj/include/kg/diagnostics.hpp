#ifndef KG_DIAGNOSTICS_HPP
#define KG_DIAGNOSTICS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "kg/fft.hpp"
#include "kg/field.hpp"
#include "kg/types.hpp"

namespace kg {

struct SolverState;

/// Discrete energy of a consecutive level pair:
///   E = 1/2 int |u_t|^2 + 1/2 int |u|^2 + 1/2 int |grad u|^2 - 1/4 int |u|^4
/// with u_t = (u^{n+1} - u^n)/dt and u at the half level (u^{n+1} + u^n)/2.
struct EnergyReport {
  std::int64_t step_index = 0;
  double kinetic = 0.0;
  double mass = 0.0;
  double gradient = 0.0;
  double quartic = 0.0;
  double total = 0.0;           // kinetic + mass + gradient - quartic
  double relative_drift = 0.0;  // vs the step-0 total, filled by the run loop
};

struct BlowupReport {
  std::int64_t step_index = 0;
  double max_abs = 0.0;
  std::array<int, 3> location = {0, 0, 0};
  bool non_finite = false;
};

/// Evaluates the discrete energy from two consecutive Fourier-space levels
/// (uhat_a = uhat^n, uhat_b = uhat^{n+1}). The gradient is spectral
/// (i*k multiplier with the Nyquist mode zeroed) on the half-level field;
/// all integrals run through the fixed-order reduction, so the result is
/// worker-count independent. Throws std::domain_error on non-finite fields.
EnergyReport energy(const SpectralField& uhat_a, const SpectralField& uhat_b,
                    double dt, FftPlan& plan, std::int64_t step_index = 0);

/// Max over the series of |total_n - total_0| / max(|total_0|, 1e-300).
/// Throws std::invalid_argument on an empty list.
double drift_series(std::span<const EnergyReport> reports);

/// Analytic solution descriptor: a sampler u(x, y, z, t).
struct ExactSolution {
  std::function<Complex(double, double, double, double)> value;
};

/// Traveling wave A e^{i(k.x - omega t)} with omega = sqrt(1 + |k|^2 - |A|^2);
/// mode (0,0,0) gives the spatially constant exact solution A e^{-i omega t}.
ExactSolution traveling_wave_solution(Complex amplitude,
                                      std::array<double, 3> wavevector);

/// Time-independent profile (e.g. the static sech line soliton).
ExactSolution static_profile_solution(
    std::function<Complex(double, double, double)> profile);

struct ErrorNorms {
  double linf = 0.0;
  double l2 = 0.0;  // volume-weighted RMS: sqrt( int |diff|^2 / volume )
};

/// Compares the state's physical field against the exact solution sampled at
/// t = step_index * dt on the state's grid.
ErrorNorms error_vs_exact(const SolverState& state, const ExactSolution& exact);

/// Report when max |u| exceeds the threshold or any entry is non-finite;
/// std::nullopt otherwise. Ties resolve to the lowest flat index, so the
/// location is deterministic.
std::optional<BlowupReport> blowup_check(const RealField& u, double threshold);

}  // namespace kg

#endif
