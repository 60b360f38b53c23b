#ifndef KG_STEPPER_HPP
#define KG_STEPPER_HPP

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "kg/diagnostics.hpp"
#include "kg/fft.hpp"
#include "kg/field.hpp"
#include "kg/types.hpp"

namespace kg {

/// Initial data preset. The velocity specification belongs to the preset
/// family: gaussian and sech_line start at rest, plane_wave launches the
/// exact traveling wave with v0 = -i*omega*u0, custom supplies both samplers.
struct InitialCondition {
  enum class Preset { gaussian, plane_wave, sech_line, custom };

  Preset preset = Preset::gaussian;
  Complex amplitude = 0.0;

  // gaussian: u0 = A exp(-sum_d (x_d - L_d/2)^2 / (2 width_d^2)),
  // optionally with a gaussian velocity of amplitude v_amplitude.
  std::array<double, 3> width = {0.5, 0.5, 0.5};
  Complex v_amplitude = 0.0;

  // plane_wave: u0 = A e^{i k.x} with k_d = 2*pi*mode_d / L_d and
  // omega = sqrt(1 + |k|^2 - |A|^2); requires |A|^2 < 1 + |k|^2.
  std::array<int, 3> mode = {0, 0, 0};

  // sech_line: u0 = A sech(x - x0), constant in y and z; x0 < 0 means the
  // box center. A = sqrt(2) is the static line soliton.
  double center_x = -1.0;

  std::function<Complex(double, double, double)> custom_u0;
  std::function<Complex(double, double, double)> custom_v0;

  static InitialCondition zero();
  static InitialCondition gaussian(Complex amplitude,
                                   std::array<double, 3> width = {0.5, 0.5, 0.5});
  static InitialCondition plane_wave(Complex amplitude, std::array<int, 3> mode);
  static InitialCondition sech_line(double amplitude_scale = 1.0,
                                    double center_x = -1.0);
};

/// Two consecutive Fourier-space levels plus the physical copy of the newest
/// one; everything one semi-implicit step needs.
struct SolverState {
  SpectralField uhat_prev;  // uhat^{n-1}
  SpectralField uhat_now;   // uhat^n
  RealField u_now;          // physical copy of u^n
  double dt = 0.0;
  std::int64_t step_index = 0;

  const Grid& grid() const { return u_now.grid; }
};

struct StepOptions {
  bool dealias = false;              // 2/3-rule mask on the nonlinear term
  double blowup_threshold = 1e8;     // max |u| that counts as blown up
};

struct RunOutcome {
  std::optional<BlowupReport> blowup;  // set if the run stopped early
  std::vector<EnergyReport> energy;
};

/// Samples the preset and produces the two-level bootstrap
///   u^{-1} = u0 - dt*v0 + (dt^2/2) (Lap u0 - u0 + |u0|^2 u0),
/// a second-order Taylor start consistent with the scheme's accuracy.
/// Throws std::invalid_argument for preset parameter violations.
SolverState initialize(const Grid& grid, const InitialCondition& ic, double dt,
                       FftPlan& plan);

/// One semi-implicit step, solved pointwise in Fourier space: with
/// rho = 1 + |k|^2 and Nhat the transform of |u^n|^2 u^n,
///   uhat^{n+1} = [ (2/dt^2) uhat^n - (1/dt^2) uhat^{n-1}
///                  - (rho/4)(2 uhat^n + uhat^{n-1}) + Nhat ]
///                / ( 1/dt^2 + rho/4 ).
/// Costs exactly one forward and one inverse 3D transform. Advances the
/// state one level. Returns a report (state still advanced) if the new field
/// exceeds the blow-up threshold or stops being finite.
std::optional<BlowupReport> step(SolverState& state, FftPlan& plan,
                                 const StepOptions& options = {});

/// Applies step() `steps` times, recording the energy of the current level
/// pair every diagnostics_every steps (0 = never; step 0 included). Stops
/// early on blow-up and reports it in the outcome.
RunOutcome run(SolverState& state, int steps, FftPlan& plan,
               int diagnostics_every = 0, const StepOptions& options = {});

}  // namespace kg

#endif
