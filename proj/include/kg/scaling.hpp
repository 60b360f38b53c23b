#ifndef KG_SCALING_HPP
#define KG_SCALING_HPP

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace kg {

/// One machine/run row of a scaling table.
struct ScalingRecord {
  std::string machine;
  int cores = 1;
  double time_seconds = 0.0;
  std::string node_type;
  std::string interconnect;
  std::optional<double> chip_bandwidth_gbs;
  std::optional<double> peak_tflops;
  // Unknown CSV columns, preserved verbatim.
  std::map<std::string, std::string> extra;
};

/// One row of a ranking: a machine's best (minimum) time.
struct RankedMachine {
  std::string machine;
  double best_seconds = 0.0;
  int cores = 0;  // cores of the best run
  ScalingRecord best;
};

/// Minimum time per machine, ascending; ties broken by machine name.
/// Throws std::invalid_argument on empty input.
std::vector<RankedMachine> rank(const std::vector<ScalingRecord>& records);

/// Reads a machines CSV whose header names match the ScalingRecord fields
/// (machine, cores, time_seconds, node_type, interconnect,
/// chip_bandwidth_gbs, peak_tflops); unknown columns land in `extra`.
/// Parse errors name the offending line.
std::vector<ScalingRecord> read_scaling_csv(std::istream& in);
std::vector<ScalingRecord> read_scaling_csv_file(const std::string& path);

void write_scaling_csv(std::ostream& out,
                       const std::vector<ScalingRecord>& records);

/// Formats a double with 17 significant digits (bit-faithful round trip).
std::string format_g17(double value);

}  // namespace kg

#endif
