#ifndef KG_BENCHMARK_HPP
#define KG_BENCHMARK_HPP

#include <string>
#include <vector>

#include "kg/grid.hpp"
#include "kg/scaling.hpp"
#include "kg/stepper.hpp"

namespace kg {

struct WorkloadOptions {
  int steps = 30;
  int repeats = 3;
  double dt = 0.01;
  InitialCondition ic = InitialCondition::gaussian(0.1);
  std::string machine;  // empty = hostname
};

/// One timed measurement: the record plus the per-phase breakdown of the
/// fastest repeat and the workload shape.
struct BenchResult {
  ScalingRecord record;
  int steps = 0;
  int n = 0;  // first grid axis, the N of the runtime model
  double transform_seconds = 0.0;
  double transpose_seconds = 0.0;
  int repeats = 0;
};

/// Times the `steps`-step workload on `workers` workers and keeps the
/// minimum wall time over `repeats`. Initialization happens outside the
/// timed region; the timed region performs no disk writes and no diagnostic
/// reductions (enforced via the instrumentation counters) and contains
/// exactly two 3D transforms per step.
BenchResult time_workload(const Grid& grid, int workers,
                          const WorkloadOptions& options = {});

/// One measurement per worker count (must be non-empty and ascending).
std::vector<BenchResult> sweep(const Grid& grid,
                               const std::vector<int>& worker_counts,
                               const WorkloadOptions& options = {});

/// Results CSV schema: machine,cores,time_seconds,steps,N,
/// transform_seconds,transpose_seconds.
void write_results_csv(std::ostream& out,
                       const std::vector<BenchResult>& results);
std::vector<ScalingRecord> results_as_records(
    const std::vector<BenchResult>& results);

std::string default_machine_name();

}  // namespace kg

#endif
