#include "kg/perf_model.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include <Eigen/Dense>

namespace kg {
namespace {

double network_log(double p, const PerfModelOptions& options) {
  return options.log2_network ? std::log2(p) : std::log(p);
}

}  // namespace

double model_time(const PerfModelParams& params, int n, int p,
                  const PerfModelOptions& options) {
  if (n < 1 || p < 1) throw std::invalid_argument("model_time: N, p must be >= 1");
  if (!(params.bandwidth_per_core > 0.0)) {
    throw std::invalid_argument("model_time: Bc must be positive");
  }
  const double nd = static_cast<double>(n);
  const double fft_basis = nd * std::log(nd);
  const double fft_weight = options.fft_factor_two ? 2.0 : 1.0;
  const double compute = params.d1 * nd * nd * nd +
                         fft_weight * params.d2 * fft_basis * fft_basis * fft_basis;
  return compute / (params.bandwidth_per_core * p) + params.network_latency +
         params.d3 * network_log(static_cast<double>(p), options);
}

FitResult fit_model(const std::vector<ScalingRecord>& records, int n,
                    const PerfModelOptions& options) {
  if (n < 1) throw std::invalid_argument("fit_model: N must be >= 1");
  std::set<int> distinct;
  bool any_positive = false;
  for (const auto& r : records) {
    if (r.cores < 1) throw std::invalid_argument("fit_model: cores must be >= 1");
    distinct.insert(r.cores);
    if (r.time_seconds > 0.0) any_positive = true;
  }
  if (records.size() < 4 || distinct.size() < 3) {
    throw std::invalid_argument(
        "fit_model: need at least 4 records spanning at least 3 distinct "
        "worker counts (got " + std::to_string(records.size()) + " records, " +
        std::to_string(distinct.size()) + " counts)");
  }
  if (!any_positive) {
    throw std::invalid_argument("fit_model: all times are zero");
  }

  const auto m = static_cast<Eigen::Index>(records.size());
  Eigen::MatrixXd basis(m, 3);
  Eigen::VectorXd times(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double p = records[static_cast<size_t>(i)].cores;
    basis(i, 0) = 1.0 / p;
    basis(i, 1) = 1.0;
    basis(i, 2) = network_log(p, options);
    times(i) = records[static_cast<size_t>(i)].time_seconds;
  }

  // Non-negative least squares over three coefficients: enumerate the eight
  // active sets, solve the unconstrained subproblem on each, keep the
  // feasible solution with the smallest residual.
  Eigen::Vector3d coeff = Eigen::Vector3d::Zero();
  double best_norm = times.norm();  // the all-zero solution
  for (int mask = 1; mask < 8; ++mask) {
    std::vector<int> free_cols;
    for (int c = 0; c < 3; ++c) {
      if (mask & (1 << c)) free_cols.push_back(c);
    }
    Eigen::MatrixXd sub(m, static_cast<Eigen::Index>(free_cols.size()));
    for (size_t c = 0; c < free_cols.size(); ++c) {
      sub.col(static_cast<Eigen::Index>(c)) = basis.col(free_cols[c]);
    }
    Eigen::VectorXd beta = sub.colPivHouseholderQr().solve(times);
    bool feasible = true;
    for (Eigen::Index c = 0; c < beta.size(); ++c) {
      if (beta(c) < -1e-12 * times.norm()) feasible = false;
      if (beta(c) < 0.0) beta(c) = 0.0;
    }
    if (!feasible) continue;
    const double norm = (sub * beta - times).norm();
    if (norm < best_norm) {
      best_norm = norm;
      coeff.setZero();
      for (size_t c = 0; c < free_cols.size(); ++c) {
        coeff(free_cols[c]) = beta(static_cast<Eigen::Index>(c));
      }
    }
  }

  FitResult result;
  result.lumped_compute = coeff(0);
  result.rms_residual = best_norm / std::sqrt(static_cast<double>(m));
  result.options = options;
  // Single-N convention: all compute attributed to the N^3 term at unit
  // bandwidth, so model_time(params, n, p) reproduces the fitted curve.
  result.params.d1 = coeff(0) / (static_cast<double>(n) * n * n);
  result.params.d2 = 0.0;
  result.params.d3 = coeff(2);
  result.params.bandwidth_per_core = 1.0;
  result.params.network_latency = coeff(1);
  return result;
}

}  // namespace kg
