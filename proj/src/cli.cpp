#include "kg/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kg/benchmark.hpp"
#include "kg/checkpoint.hpp"
#include "kg/diagnostics.hpp"
#include "kg/instrument.hpp"
#include "kg/perf_model.hpp"
#include "kg/scaling.hpp"
#include "kg/stepper.hpp"

namespace kg {
namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Shared option bundles

struct GridOpts {
  std::vector<int> n = {64};
  std::vector<double> length = {kTwoPi};
};

struct IcOpts {
  std::string preset = "gaussian";
  std::vector<double> amplitude = {0.1};
  std::vector<double> v_amplitude = {0.0};
  std::vector<double> width = {0.5};
  std::vector<int> mode = {1, 0, 0};
  double center_x = -1.0;
  CLI::Option* amplitude_opt = nullptr;  // to tell defaults from explicit values
};

struct StepFlags {
  double dt = 0.01;
  int steps = 30;
  bool dealias = false;
  double blowup_threshold = 1e8;
};

int default_workers() {
  if (const char* env = std::getenv("KGBENCH_WORKERS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// The automatic worker count respects the slab limit of the grid; explicit
// --workers values are passed through and error out honestly.
int auto_workers(const Grid& grid) {
  return std::min(default_workers(), std::min(grid.n[0], grid.n[2]));
}

template <typename T>
std::array<T, 3> expand3(const std::vector<T>& v, const char* what) {
  if (v.size() == 1) return {v[0], v[0], v[0]};
  if (v.size() == 3) return {v[0], v[1], v[2]};
  throw std::invalid_argument(std::string(what) + " takes 1 or 3 values");
}

Complex parse_complex(const std::vector<double>& v, const char* what) {
  if (v.size() == 1) return Complex(v[0], 0.0);
  if (v.size() == 2) return Complex(v[0], v[1]);
  throw std::invalid_argument(std::string(what) + " takes 1 (re) or 2 (re,im) values");
}

Grid grid_from(const GridOpts& g) {
  return make_grid(expand3(g.n, "--n"), expand3(g.length, "--length"));
}

InitialCondition ic_from(const IcOpts& o) {
  std::string p = o.preset;
  for (char& c : p) {
    if (c == '_') c = '-';
  }
  if (p == "zero") return InitialCondition::zero();
  if (p == "gaussian") {
    InitialCondition ic = InitialCondition::gaussian(
        parse_complex(o.amplitude, "--amplitude"), expand3(o.width, "--width"));
    ic.v_amplitude = parse_complex(o.v_amplitude, "--v-amplitude");
    return ic;
  }
  if (p == "plane-wave") {
    if (o.mode.size() != 3) throw std::invalid_argument("--mode takes 3 integers");
    return InitialCondition::plane_wave(
        parse_complex(o.amplitude, "--amplitude"),
        {o.mode[0], o.mode[1], o.mode[2]});
  }
  if (p == "sech-line") {
    InitialCondition ic = InitialCondition::sech_line(1.0, o.center_x);
    if (o.amplitude_opt != nullptr && o.amplitude_opt->count() > 0) {
      ic.amplitude = parse_complex(o.amplitude, "--amplitude");
    }
    return ic;
  }
  throw std::invalid_argument("unknown IC preset '" + o.preset +
                              "' (zero, gaussian, plane-wave, sech-line)");
}

// Exact solution for presets that have one: traveling plane waves (any mode),
// the zero field, and the static sqrt(2) sech line.
std::optional<ExactSolution> exact_for(const InitialCondition& ic, const Grid& grid) {
  using Preset = InitialCondition::Preset;
  switch (ic.preset) {
    case Preset::plane_wave: {
      std::array<double, 3> kvec{};
      for (int d = 0; d < 3; ++d) kvec[d] = kTwoPi * ic.mode[d] / grid.length[d];
      return traveling_wave_solution(ic.amplitude, kvec);
    }
    case Preset::gaussian:
      if (ic.amplitude == Complex(0.0) && ic.v_amplitude == Complex(0.0)) {
        return static_profile_solution([](double, double, double) { return Complex(0.0); });
      }
      return std::nullopt;
    case Preset::sech_line: {
      if (std::abs(ic.amplitude - Complex(std::sqrt(2.0))) > 1e-12) return std::nullopt;
      const double cx = ic.center_x >= 0.0 ? ic.center_x : 0.5 * grid.length[0];
      const Complex a = ic.amplitude;
      return static_profile_solution(
          [a, cx](double x, double, double) { return a / std::cosh(x - cx); });
    }
    default:
      return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// Output helpers (every file lands here so the write counter stays honest)

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  instrument::file_writes().fetch_add(1, std::memory_order_relaxed);
  return out;
}

void write_energy_csv(const std::string& path,
                      const std::vector<EnergyReport>& reports) {
  std::ofstream out = open_output(path);
  out << "step,kinetic,mass,gradient,quartic,total,relative_drift\n";
  for (const auto& r : reports) {
    out << r.step_index << ',' << format_g17(r.kinetic) << ','
        << format_g17(r.mass) << ',' << format_g17(r.gradient) << ','
        << format_g17(r.quartic) << ',' << format_g17(r.total) << ','
        << format_g17(r.relative_drift) << '\n';
  }
}

void write_plot(const std::string& path, const std::string& header,
                const std::vector<std::pair<double, double>>& rows) {
  std::ofstream out = open_output(path);
  out << "# " << header << '\n';
  for (const auto& [x, y] : rows) {
    out << format_g17(x) << ' ' << format_g17(y) << '\n';
  }
}

std::string timestamp_utc() {
  char buf[32];
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json library_versions() {
  return json{{"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                            std::to_string(EIGEN_MAJOR_VERSION) + "." +
                            std::to_string(EIGEN_MINOR_VERSION)},
              {"compiler", __VERSION__}};
}

json ic_to_json(const IcOpts& o) {
  return json{{"preset", o.preset},
              {"amplitude", o.amplitude},
              {"v_amplitude", o.v_amplitude},
              {"width", o.width},
              {"mode", o.mode}};
}

// Bandwidth-axis rows (total on-chip bandwidth = per-node bandwidth times
// nodes used). Records need chip_bandwidth_gbs plus a `nodes` column; rows
// missing either are skipped with a note.
std::vector<std::pair<double, double>> bandwidth_rows(
    const std::vector<ScalingRecord>& records) {
  std::vector<std::pair<double, double>> rows;
  for (const auto& r : records) {
    if (!r.chip_bandwidth_gbs) {
      std::cerr << "note: no chip_bandwidth_gbs for " << r.machine
                << ", skipped in bandwidth plot\n";
      continue;
    }
    double nodes = 1.0;
    if (auto it = r.extra.find("nodes"); it != r.extra.end()) {
      nodes = std::atof(it->second.c_str());
      if (!(nodes > 0.0)) {
        std::cerr << "note: bad nodes value for " << r.machine
                  << ", skipped in bandwidth plot\n";
        continue;
      }
    } else {
      std::cerr << "note: no nodes column for " << r.machine
                << ", assuming 1 node\n";
    }
    rows.emplace_back(*r.chip_bandwidth_gbs * nodes, r.time_seconds);
  }
  std::sort(rows.begin(), rows.end());
  return rows;
}

// ---------------------------------------------------------------------------
// Subcommands

struct SolveArgs {
  GridOpts grid;
  IcOpts ic;
  StepFlags step;
  int workers = 0;  // 0 = automatic
  int energy_every = 1;
  std::string energy_csv = "energy.csv";
  std::string checkpoint;
};

int do_solve(const SolveArgs& a) {
  const Grid grid = grid_from(a.grid);
  const InitialCondition ic = ic_from(a.ic);
  const int workers = a.workers > 0 ? a.workers : auto_workers(grid);
  FftPlan plan = make_plan(grid, workers);
  SolverState state = initialize(grid, ic, a.step.dt, plan);

  StepOptions options;
  options.dealias = a.step.dealias;
  options.blowup_threshold = a.step.blowup_threshold;
  const RunOutcome outcome = run(state, a.step.steps, plan, a.energy_every, options);

  write_energy_csv(a.energy_csv, outcome.energy);
  if (!a.checkpoint.empty()) save_checkpoint(a.checkpoint, state);

  std::cout << "grid " << grid.n[0] << "x" << grid.n[1] << "x" << grid.n[2]
            << ", dt " << a.step.dt << ", workers " << workers
            << ", final step " << state.step_index << '\n';
  if (!outcome.energy.empty()) {
    std::cout << "max relative energy drift: "
              << format_g17(drift_series(outcome.energy)) << '\n';
  }

  if (outcome.blowup) {
    const auto& b = *outcome.blowup;
    std::cerr << "blow-up at step " << b.step_index << ": max |u| = "
              << format_g17(b.max_abs) << " at (" << b.location[0] << ","
              << b.location[1] << "," << b.location[2] << ")"
              << (b.non_finite ? " [non-finite]" : "") << '\n';
    return kExitBlowup;
  }

  if (const auto exact = exact_for(ic, grid)) {
    const ErrorNorms err = error_vs_exact(state, *exact);
    std::cout << "L_inf error vs exact: " << format_g17(err.linf) << '\n'
              << "L2 error vs exact: " << format_g17(err.l2) << '\n';
  }
  return kExitOk;
}

struct BenchArgs {
  GridOpts grid;
  IcOpts ic;
  StepFlags step;
  std::vector<int> workers;  // sweep list; bench uses a single entry
  int repeats = 3;
  std::string machine;
  std::string out_csv = "results.csv";
  std::string out_json = "results.json";
  std::string plot_prefix = "scaling";
  std::string machines_csv;          // merge for the bandwidth axis
  double chip_bandwidth_gbs = 0.0;   // local per-node bandwidth, if known
};

int do_bench(const BenchArgs& a, bool is_sweep) {
  const Grid grid = grid_from(a.grid);
  WorkloadOptions options;
  options.steps = a.step.steps;
  options.repeats = a.repeats;
  options.dt = a.step.dt;
  options.ic = ic_from(a.ic);
  options.machine = a.machine;

  std::vector<int> counts = a.workers;
  if (counts.empty()) {
    if (is_sweep) {
      for (int p = 1; p <= auto_workers(grid); p *= 2) counts.push_back(p);
    } else {
      counts = {auto_workers(grid)};
    }
  }

  std::vector<BenchResult> results;
  std::vector<std::string> failures;
  for (int workers : counts) {
    try {
      results.push_back(time_workload(grid, workers, options));
      const auto& r = results.back();
      std::cout << "workers " << workers << ": "
                << format_g17(r.record.time_seconds) << " s (transform "
                << format_g17(r.transform_seconds) << " s, transpose "
                << format_g17(r.transpose_seconds) << " s)\n";
    } catch (const std::exception& e) {
      failures.push_back("workers " + std::to_string(workers) + ": " + e.what());
      std::cerr << "measurement failed for workers " << workers << ": "
                << e.what() << '\n';
    }
  }

  {
    std::ofstream out = open_output(a.out_csv);
    write_results_csv(out, results);
  }

  json meta;
  meta["command"] = is_sweep ? "sweep" : "bench";
  meta["timestamp_utc"] = timestamp_utc();
  meta["machine"] = options.machine.empty() ? default_machine_name() : options.machine;
  meta["grid"] = {{"n", {grid.n[0], grid.n[1], grid.n[2]}},
                  {"length", {grid.length[0], grid.length[1], grid.length[2]}}};
  meta["dt"] = a.step.dt;
  meta["steps"] = a.step.steps;
  meta["repeats"] = a.repeats;
  meta["worker_counts"] = counts;
  meta["ic"] = ic_to_json(a.ic);
  meta["model_formula"] = {{"fft_factor_two", false}, {"log2_network", false}};
  meta["library_versions"] = library_versions();
  meta["failures"] = failures;
  meta["results"] = json::array();
  for (const auto& r : results) {
    meta["results"].push_back({{"machine", r.record.machine},
                               {"cores", r.record.cores},
                               {"time_seconds", r.record.time_seconds},
                               {"steps", r.steps},
                               {"N", r.n},
                               {"transform_seconds", r.transform_seconds},
                               {"transpose_seconds", r.transpose_seconds},
                               {"repeats", r.repeats}});
  }
  {
    std::ofstream out = open_output(a.out_json);
    out << meta.dump(2) << '\n';
  }

  std::vector<std::pair<double, double>> scaling_rows;
  for (const auto& r : results) {
    scaling_rows.emplace_back(r.record.cores, r.record.time_seconds);
  }
  write_plot(a.plot_prefix + ".dat", "cores seconds (plot on log-log axes)",
             scaling_rows);

  // Bandwidth-axis variant when any bandwidth metadata is available.
  std::vector<ScalingRecord> bw_records;
  if (!a.machines_csv.empty()) {
    bw_records = read_scaling_csv_file(a.machines_csv);
  }
  if (a.chip_bandwidth_gbs > 0.0) {
    for (const auto& r : results) {
      ScalingRecord rec = r.record;
      rec.chip_bandwidth_gbs = a.chip_bandwidth_gbs;
      rec.extra["nodes"] = "1";
      bw_records.push_back(std::move(rec));
    }
  }
  if (!bw_records.empty()) {
    write_plot(a.plot_prefix + "_bandwidth.dat",
               "total_bandwidth_gbs seconds (plot on log-log axes)",
               bandwidth_rows(bw_records));
  }

  if (results.empty()) {
    std::cerr << "all measurements failed\n";
    return kExitFailure;
  }
  // Strong-scaling sanity: more workers should not be slower at the low end.
  if (results.size() > 1 && std::thread::hardware_concurrency() >= 2) {
    if (results[0].record.time_seconds < results[1].record.time_seconds) {
      std::cerr << "warning: time(p=" << results[0].record.cores
                << ") < time(p=" << results[1].record.cores
                << "); no speedup from the first worker increase\n";
    }
  }
  return kExitOk;
}

struct RankArgs {
  std::string machines_csv;
  std::string out_csv;
};

int do_rank(const RankArgs& a) {
  const std::vector<ScalingRecord> records = read_scaling_csv_file(a.machines_csv);
  const std::vector<RankedMachine> ranked = rank(records);

  std::cout << "rank  time_s      cores     machine\n";
  int position = 1;
  for (const auto& r : ranked) {
    char line[256];
    std::snprintf(line, sizeof(line), "%-5d %-11.4g %-9d %s", position++,
                  r.best_seconds, r.cores, r.machine.c_str());
    std::cout << line << '\n';
  }

  if (!a.out_csv.empty()) {
    std::ofstream out = open_output(a.out_csv);
    out << "rank,machine,time_seconds,cores,node_type,interconnect,"
           "chip_bandwidth_gbs,peak_tflops\n";
    position = 1;
    for (const auto& r : ranked) {
      out << position++ << ',' << r.machine << ','
          << format_g17(r.best_seconds) << ',' << r.cores << ','
          << r.best.node_type << ',' << r.best.interconnect << ','
          << (r.best.chip_bandwidth_gbs ? format_g17(*r.best.chip_bandwidth_gbs) : "")
          << ',' << (r.best.peak_tflops ? format_g17(*r.best.peak_tflops) : "")
          << '\n';
    }
  }
  return kExitOk;
}

struct FitArgs {
  std::string input_csv;
  std::string machine;  // optional filter
  int n = 0;            // 0 = infer from the CSV's N column
  PerfModelOptions options;
  std::string out_json = "model_params.json";
};

int do_model_fit(const FitArgs& a) {
  std::vector<ScalingRecord> records = read_scaling_csv_file(a.input_csv);
  if (!a.machine.empty()) {
    std::erase_if(records,
                  [&](const ScalingRecord& r) { return r.machine != a.machine; });
  }

  int n = a.n;
  if (n == 0) {
    for (const auto& r : records) {
      if (auto it = r.extra.find("N"); it != r.extra.end()) {
        const int v = std::atoi(it->second.c_str());
        if (n == 0) n = v;
        if (v != n) {
          std::cerr << "records mix several N values; pass --n explicitly\n";
          return kExitUsage;
        }
      }
    }
    if (n == 0) {
      std::cerr << "no N column in " << a.input_csv << "; pass --n\n";
      return kExitUsage;
    }
  }

  FitResult fit;
  try {
    fit = fit_model(records, n, a.options);
  } catch (const std::invalid_argument& e) {
    std::cerr << "fit failed: " << e.what() << '\n';
    return kExitFitError;
  }

  json out;
  out["n"] = n;
  out["record_count"] = records.size();
  out["lumped_compute_seconds"] = fit.lumped_compute;
  out["network_latency_seconds"] = fit.params.network_latency;
  out["network_log_coefficient"] = fit.params.d3;
  out["rms_residual"] = fit.rms_residual;
  out["fft_factor_two"] = fit.options.fft_factor_two;
  out["log2_network"] = fit.options.log2_network;
  out["params"] = {{"d1", fit.params.d1},
                   {"d2", fit.params.d2},
                   {"d3", fit.params.d3},
                   {"bandwidth_per_core", fit.params.bandwidth_per_core},
                   {"network_latency", fit.params.network_latency}};
  out["library_versions"] = library_versions();
  {
    std::ofstream f = open_output(a.out_json);
    f << out.dump(2) << '\n';
  }

  std::cout << "fit over " << records.size() << " records (N = " << n << "):\n"
            << "  compute (a, /p)    : " << format_g17(fit.lumped_compute) << " s\n"
            << "  latency (Ln)       : " << format_g17(fit.params.network_latency) << " s\n"
            << "  network (d3, *logp): " << format_g17(fit.params.d3) << " s\n"
            << "  rms residual       : " << format_g17(fit.rms_residual) << " s\n";
  return kExitOk;
}

struct EvalArgs {
  std::string params_json;
  PerfModelParams params;
  PerfModelOptions options;
  int n = 64;
  std::vector<int> p_list;
  int p_max = 0;
  std::string out_csv = "model_eval.csv";
  std::string plot;
};

int do_model_eval(EvalArgs a) {
  if (!a.params_json.empty()) {
    std::ifstream in(a.params_json);
    if (!in) throw std::runtime_error("cannot open " + a.params_json);
    json j = json::parse(in);
    const json& p = j.contains("params") ? j["params"] : j;
    a.params.d1 = p.value("d1", 0.0);
    a.params.d2 = p.value("d2", 0.0);
    a.params.d3 = p.value("d3", 0.0);
    a.params.bandwidth_per_core = p.value("bandwidth_per_core", 1.0);
    a.params.network_latency = p.value("network_latency", 0.0);
    a.options.fft_factor_two = j.value("fft_factor_two", a.options.fft_factor_two);
    a.options.log2_network = j.value("log2_network", a.options.log2_network);
    if (j.contains("n")) a.n = j["n"].get<int>();
  }
  std::vector<int> ps = a.p_list;
  if (ps.empty()) {
    if (a.p_max > 0) {
      for (int p = 1; p <= a.p_max; ++p) ps.push_back(p);
    } else {
      for (int p = 1; p <= 1024; p *= 2) ps.push_back(p);
    }
  }

  std::vector<std::pair<double, double>> rows;
  {
    std::ofstream out = open_output(a.out_csv);
    out << "p,predicted_seconds\n";
    for (int p : ps) {
      const double t = model_time(a.params, a.n, p, a.options);
      out << p << ',' << format_g17(t) << '\n';
      rows.emplace_back(p, t);
    }
  }
  if (!a.plot.empty()) {
    write_plot(a.plot, "cores predicted_seconds (plot on log-log axes)", rows);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

void add_grid_options(CLI::App* cmd, GridOpts& g) {
  cmd->add_option("--n", g.n, "grid points per axis (1 or 3 values)")
      ->delimiter(',');
  cmd->add_option("--length", g.length, "box edge lengths (1 or 3 values)")
      ->delimiter(',');
}

void add_ic_options(CLI::App* cmd, IcOpts& ic) {
  cmd->add_option("--ic", ic.preset, "initial condition preset")
      ->check(CLI::IsMember({"zero", "gaussian", "plane-wave", "plane_wave",
                             "sech-line", "sech_line"}));
  ic.amplitude_opt = cmd->add_option("--amplitude", ic.amplitude,
                                     "IC amplitude, re or re,im")
                         ->delimiter(',');
  cmd->add_option("--v-amplitude", ic.v_amplitude,
                  "gaussian initial velocity amplitude, re or re,im")
      ->delimiter(',');
  cmd->add_option("--width", ic.width, "gaussian widths (1 or 3 values)")
      ->delimiter(',');
  cmd->add_option("--mode", ic.mode, "plane-wave integer mode (3 values)")
      ->delimiter(',');
  cmd->add_option("--center-x", ic.center_x,
                  "sech-line center (default: box center)");
}

void add_step_options(CLI::App* cmd, StepFlags& s) {
  cmd->add_option("--dt", s.dt, "time step")->check(CLI::PositiveNumber);
  cmd->add_option("--steps", s.steps, "number of time steps")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--dealias", s.dealias, "2/3-rule mask on the nonlinear term");
  cmd->add_option("--blowup-threshold", s.blowup_threshold,
                  "max |u| treated as blow-up")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{
      "kgbench: cubic Klein-Gordon pseudospectral solver and parallel-FFT "
      "strong-scaling benchmark"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "key=value config file; keys are <subcommand>.<flag>, e.g. "
                 "solve.steps=10 (or under a [solve] section)");

  int exit_code = kExitOk;

  auto solve_args = std::make_shared<SolveArgs>();
  CLI::App* solve = app.add_subcommand(
      "solve", "run the solver, write the energy series CSV");
  add_grid_options(solve, solve_args->grid);
  add_ic_options(solve, solve_args->ic);
  add_step_options(solve, solve_args->step);
  solve->add_option("--workers", solve_args->workers,
                    "worker count (default: KGBENCH_WORKERS or all cores, "
                    "capped by the slab limit of the grid)");
  solve->add_option("--energy-every", solve_args->energy_every,
                    "energy cadence in steps (0 = never)");
  solve->add_option("--energy-csv", solve_args->energy_csv, "energy CSV path");
  solve->add_option("--checkpoint", solve_args->checkpoint,
                    "write a binary checkpoint of the final state");
  solve->callback([&, solve_args] { exit_code = do_solve(*solve_args); });

  auto bench_args = std::make_shared<BenchArgs>();
  CLI::App* bench = app.add_subcommand(
      "bench", "time the workload for one worker count");
  auto sweep_args = std::make_shared<BenchArgs>();
  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "time the workload over a list of worker counts");
  for (auto [cmd, args] : {std::pair{bench, bench_args.get()},
                           std::pair{sweep_cmd, sweep_args.get()}}) {
    add_grid_options(cmd, args->grid);
    add_ic_options(cmd, args->ic);
    add_step_options(cmd, args->step);
    cmd->add_option("--workers", args->workers,
                    "worker count(s), e.g. 1,2,4 (default: all cores)")
        ->delimiter(',');
    cmd->add_option("--repeats", args->repeats,
                    "repeats per count; the minimum time is kept")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--machine", args->machine,
                    "machine name for the records (default: hostname)");
    cmd->add_option("--out", args->out_csv, "results CSV path");
    cmd->add_option("--json", args->out_json, "results JSON path");
    cmd->add_option("--plot-prefix", args->plot_prefix,
                    "prefix for .dat plot files");
    cmd->add_option("--machines", args->machines_csv,
                    "machines CSV merged into the bandwidth-axis plot");
    cmd->add_option("--chip-bandwidth-gbs", args->chip_bandwidth_gbs,
                    "per-node bandwidth of this machine for the bandwidth plot");
  }
  bench->callback([&, bench_args] { exit_code = do_bench(*bench_args, false); });
  sweep_cmd->callback([&, sweep_args] { exit_code = do_bench(*sweep_args, true); });

  auto rank_args = std::make_shared<RankArgs>();
  CLI::App* rank_cmd = app.add_subcommand(
      "rank", "order machines by their fastest recorded time");
  rank_cmd->add_option("--machines", rank_args->machines_csv, "machines CSV")
      ->required();
  rank_cmd->add_option("--out", rank_args->out_csv, "ranking CSV path");
  rank_cmd->callback([&, rank_args] { exit_code = do_rank(*rank_args); });

  auto fit_args = std::make_shared<FitArgs>();
  CLI::App* fit_cmd = app.add_subcommand(
      "model-fit", "fit the runtime model to measured (cores, seconds) data");
  fit_cmd->add_option("--input", fit_args->input_csv, "results or machines CSV")
      ->required();
  fit_cmd->add_option("--machine", fit_args->machine, "only fit this machine");
  fit_cmd->add_option("--n", fit_args->n, "problem size N (default: CSV N column)");
  fit_cmd->add_flag("--fft-factor-two", fit_args->options.fft_factor_two,
                    "use the 2*d2 FFT-term variant");
  fit_cmd->add_flag("--log2", fit_args->options.log2_network,
                    "base-2 log in the network term (default natural)");
  fit_cmd->add_option("--out", fit_args->out_json, "fitted parameters JSON path");
  fit_cmd->callback([&, fit_args] { exit_code = do_model_fit(*fit_args); });

  auto eval_args = std::make_shared<EvalArgs>();
  CLI::App* eval_cmd = app.add_subcommand(
      "model-eval", "tabulate predicted times from model parameters");
  eval_cmd->add_option("--params", eval_args->params_json,
                       "parameters JSON from model-fit");
  eval_cmd->add_option("--d1", eval_args->params.d1, "pointwise-work constant");
  eval_cmd->add_option("--d2", eval_args->params.d2, "FFT-work constant");
  eval_cmd->add_option("--d3", eval_args->params.d3, "network constant");
  eval_cmd->add_option("--bc", eval_args->params.bandwidth_per_core,
                       "per-core bandwidth");
  eval_cmd->add_option("--ln", eval_args->params.network_latency,
                       "minimum network latency");
  eval_cmd->add_flag("--fft-factor-two", eval_args->options.fft_factor_two,
                     "use the 2*d2 FFT-term variant");
  eval_cmd->add_flag("--log2", eval_args->options.log2_network,
                     "base-2 log in the network term");
  eval_cmd->add_option("--n", eval_args->n, "problem size N");
  eval_cmd->add_option("--p", eval_args->p_list, "worker counts, e.g. 1,2,4")
      ->delimiter(',');
  eval_cmd->add_option("--p-max", eval_args->p_max,
                       "evaluate powers of two up to this count");
  eval_cmd->add_option("--out", eval_args->out_csv, "predictions CSV path");
  eval_cmd->add_option("--plot", eval_args->plot, "plot .dat path");
  eval_cmd->callback([&, eval_args] { exit_code = do_model_eval(*eval_args); });

  // --config may appear after the subcommand name; unmatched flags fall
  // through to the main app where the config option lives.
  for (CLI::App* cmd : {solve, bench, sweep_cmd, rank_cmd, fit_cmd, eval_cmd}) {
    cmd->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitFailure;
  }
  return exit_code;
}

}  // namespace kg
