#ifndef KG_PERF_MODEL_HPP
#define KG_PERF_MODEL_HPP

#include <vector>

#include "kg/scaling.hpp"

namespace kg {

/// Parameters of the latency/bandwidth runtime model
///   t(N, p) = (d1*N^3 + d2*[N ln N]^3) / (Bc * p) + Ln + d3*log(p).
/// d1 weights the pointwise work, d2 the FFT work, Bc is per-core bandwidth
/// (bytes/s), Ln the minimum network latency and d3 the network constant on
/// the log(p) exchange term. Note the FFT term is [N ln N]^3 as modeled, not
/// the textbook N^3 ln N operation count.
struct PerfModelParams {
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
  double bandwidth_per_core = 1.0;  // Bc, must be > 0
  double network_latency = 0.0;     // Ln
};

struct PerfModelOptions {
  bool fft_factor_two = false;  // use 2*d2 on the FFT term (earlier variant)
  bool log2_network = false;    // base-2 log on the d3 term (default natural)
};

/// Predicted seconds for an N^3 problem on p workers.
double model_time(const PerfModelParams& params, int n, int p,
                  const PerfModelOptions& options = {});

/// Result of a single-N fit. Only the lumped compute coefficient
/// a = (d1*N^3 + [2]d2*[N ln N]^3)/Bc is identifiable from one N, so params
/// uses the convention Bc = 1, d2 = 0, d1 = a/N^3; then
/// model_time(params, N, p) reproduces the fitted curve at that N.
struct FitResult {
  PerfModelParams params;
  double lumped_compute = 0.0;  // a, seconds at p = 1 excluding latency
  double rms_residual = 0.0;
  PerfModelOptions options;
};

/// Non-negative least squares of the records' (p, seconds) pairs against the
/// basis {1/p, 1, log p}: a/p + b + c*log(p) with a, b, c >= 0. Requires at
/// least 4 records spanning at least 3 distinct worker counts and at least
/// one positive time; throws std::invalid_argument otherwise.
FitResult fit_model(const std::vector<ScalingRecord>& records, int n,
                    const PerfModelOptions& options = {});

}  // namespace kg

#endif
