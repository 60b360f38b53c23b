#include "kg/benchmark.hpp"

#include <unistd.h>

#include <chrono>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "kg/instrument.hpp"

namespace kg {

std::string default_machine_name() {
  char host[256] = {0};
  if (gethostname(host, sizeof(host) - 1) == 0 && host[0] != '\0') {
    return host;
  }
  return "localhost";
}

BenchResult time_workload(const Grid& grid, int workers,
                          const WorkloadOptions& options) {
  if (options.steps < 1) throw std::invalid_argument("time_workload: steps must be >= 1");
  if (options.repeats < 1) throw std::invalid_argument("time_workload: repeats must be >= 1");

  FftPlan plan = make_plan(grid, workers);

  double best = std::numeric_limits<double>::infinity();
  double best_transform = 0.0, best_transpose = 0.0;
  for (int rep = 0; rep < options.repeats; ++rep) {
    SolverState state = initialize(grid, options.ic, options.dt, plan);
    plan.reset_timers();
    const auto before = instrument::snapshot();

    const auto t0 = std::chrono::steady_clock::now();
    const RunOutcome outcome = run(state, options.steps, plan, /*diagnostics_every=*/0);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const auto after = instrument::snapshot();
    if (after.integrate_calls != before.integrate_calls ||
        after.file_writes != before.file_writes) {
      throw std::logic_error(
          "time_workload: timed region performed diagnostics or disk writes");
    }
    const PhaseTimers& timers = plan.timers();
    if (timers.forward_count != options.steps ||
        timers.inverse_count != options.steps) {
      throw std::logic_error(
          "time_workload: timed region must contain exactly two transforms per step");
    }
    if (outcome.blowup) {
      throw std::runtime_error("time_workload: workload blew up at step " +
                               std::to_string(outcome.blowup->step_index));
    }
    if (elapsed < best) {
      best = elapsed;
      best_transform = timers.transform_seconds;
      best_transpose = timers.transpose_seconds;
    }
  }

  BenchResult result;
  result.record.machine =
      options.machine.empty() ? default_machine_name() : options.machine;
  result.record.cores = workers;
  result.record.time_seconds = best;
  result.steps = options.steps;
  result.n = grid.n[0];
  result.transform_seconds = best_transform;
  result.transpose_seconds = best_transpose;
  result.repeats = options.repeats;
  return result;
}

std::vector<BenchResult> sweep(const Grid& grid,
                               const std::vector<int>& worker_counts,
                               const WorkloadOptions& options) {
  if (worker_counts.empty()) {
    throw std::invalid_argument("sweep: worker count list is empty");
  }
  for (size_t i = 1; i < worker_counts.size(); ++i) {
    if (worker_counts[i] <= worker_counts[i - 1]) {
      throw std::invalid_argument("sweep: worker counts must be ascending");
    }
  }
  std::vector<BenchResult> results;
  results.reserve(worker_counts.size());
  for (int workers : worker_counts) {
    results.push_back(time_workload(grid, workers, options));
  }
  return results;
}

void write_results_csv(std::ostream& out,
                       const std::vector<BenchResult>& results) {
  out << "machine,cores,time_seconds,steps,N,transform_seconds,transpose_seconds\n";
  for (const auto& r : results) {
    out << r.record.machine << ',' << r.record.cores << ','
        << format_g17(r.record.time_seconds) << ',' << r.steps << ',' << r.n
        << ',' << format_g17(r.transform_seconds) << ','
        << format_g17(r.transpose_seconds) << '\n';
  }
}

std::vector<ScalingRecord> results_as_records(
    const std::vector<BenchResult>& results) {
  std::vector<ScalingRecord> records;
  records.reserve(results.size());
  for (const auto& r : results) {
    ScalingRecord rec = r.record;
    rec.extra["steps"] = std::to_string(r.steps);
    rec.extra["N"] = std::to_string(r.n);
    rec.extra["transform_seconds"] = format_g17(r.transform_seconds);
    rec.extra["transpose_seconds"] = format_g17(r.transpose_seconds);
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace kg
