#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "kg/benchmark.hpp"
#include "kg/instrument.hpp"
#include "kg/perf_model.hpp"
#include "kg/scaling.hpp"

using namespace kg;

namespace {

std::vector<ScalingRecord> synthetic_records(const PerfModelParams& params,
                                             int n, const std::vector<int>& ps,
                                             const PerfModelOptions& options = {}) {
  std::vector<ScalingRecord> records;
  for (int p : ps) {
    ScalingRecord r;
    r.machine = "synthetic";
    r.cores = p;
    r.time_seconds = model_time(params, n, p, options);
    records.push_back(r);
  }
  return records;
}

// The thirteen reference rows: (machine, seconds, cores).
const std::vector<std::tuple<std::string, double, int>> kReferenceTable = {
    {"Hornet", 0.319, 12288},     {"Juqueen", 0.350, 262144},
    {"Stampede", 0.581, 8162},    {"Shaheen", 1.66, 16384},
    {"MareNostrum III", 4.00, 64}, {"Hector", 7.66, 1024},
    {"VSC2", 9.03, 1024},         {"Beacon", 9.13, 256},
    {"Monte Rosa", 11.9, 1024},   {"Titan", 17.0, 256},
    {"Vedur", 18.6, 1024},        {"Aquila", 22.4, 256},
    {"Neser", 27.9, 128},
};

}  // namespace

TEST_CASE("model_time basics") {
  PerfModelParams latency_only;
  latency_only.network_latency = 5.0;
  CHECK(model_time(latency_only, 64, 1) == 5.0);
  CHECK(model_time(latency_only, 512, 4096) == 5.0);

  PerfModelParams linear;
  linear.d1 = 1.0;
  linear.d2 = 1.0;
  linear.bandwidth_per_core = 2.0;
  for (int p : {1, 2, 8}) {
    CHECK(model_time(linear, 32, 2 * p) ==
          doctest::Approx(model_time(linear, 32, p) / 2.0).epsilon(1e-15));
  }

  PerfModelParams cube;
  cube.d1 = 1.0;
  cube.bandwidth_per_core = 1.0;
  CHECK(model_time(cube, 2, 1) == doctest::Approx(8.0));

  CHECK_THROWS_AS(model_time(cube, 0, 1), std::invalid_argument);
  cube.bandwidth_per_core = 0.0;
  CHECK_THROWS_AS(model_time(cube, 2, 1), std::invalid_argument);
}

TEST_CASE("model_time formula variants") {
  PerfModelParams params;
  params.d2 = 3.0;
  params.bandwidth_per_core = 1.0;
  const double base = model_time(params, 8, 1);
  PerfModelOptions two;
  two.fft_factor_two = true;
  CHECK(model_time(params, 8, 1, two) == doctest::Approx(2.0 * base));

  PerfModelParams net;
  net.d3 = 1.0;
  PerfModelOptions log2opt;
  log2opt.log2_network = true;
  CHECK(model_time(net, 8, 2) == doctest::Approx(std::log(2.0)));
  CHECK(model_time(net, 8, 2, log2opt) == doctest::Approx(1.0));
}

TEST_CASE("model_time is decreasing without a network term and floored by latency") {
  PerfModelParams params;
  params.d1 = 2.5e-9;
  params.d2 = 1e-12;
  params.bandwidth_per_core = 1.0;
  params.network_latency = 0.125;
  double prev = std::numeric_limits<double>::infinity();
  for (int p = 1; p <= 64; ++p) {
    const double t = model_time(params, 64, p);
    CHECK(t < prev);
    CHECK(t >= params.network_latency);
    prev = t;
  }
}

TEST_CASE("discrete argmin of the model is unimodal in p") {
  PerfModelParams params;
  params.d1 = 1e-6;
  params.bandwidth_per_core = 1.0;
  params.d3 = 0.004;
  params.network_latency = 0.01;

  std::vector<double> t;
  for (int p = 1; p <= 512; ++p) t.push_back(model_time(params, 64, p));
  const auto min_it = std::min_element(t.begin(), t.end());
  for (auto it = t.begin(); it != min_it; ++it) CHECK(*it >= *(it + 1));
  for (auto it = min_it; it + 1 != t.end(); ++it) CHECK(*(it + 1) >= *it);

  // Continuous relaxation: p* = a / d3 with a the lumped compute time.
  const double a = params.d1 * 64.0 * 64.0 * 64.0;
  const auto argmin = static_cast<double>(min_it - t.begin()) + 1.0;
  CHECK(std::abs(argmin - a / params.d3) <= 1.0);
}

TEST_CASE("fit recovers exact model coefficients") {
  PerfModelParams truth;
  truth.d1 = 2e-9;
  truth.d2 = 1e-12;
  truth.d3 = 0.01;
  truth.bandwidth_per_core = 3.0;
  truth.network_latency = 0.5;
  const int n = 64;
  const auto records = synthetic_records(truth, n, {1, 2, 4, 8, 16, 32});

  const FitResult fit = fit_model(records, n);
  const double nd = n;
  const double lumped = (truth.d1 * nd * nd * nd +
                         truth.d2 * std::pow(nd * std::log(nd), 3)) /
                        truth.bandwidth_per_core;
  CHECK(std::abs(fit.lumped_compute - lumped) / lumped < 1e-8);
  CHECK(std::abs(fit.params.network_latency - truth.network_latency) /
            truth.network_latency <
        1e-8);
  CHECK(std::abs(fit.params.d3 - truth.d3) / truth.d3 < 1e-8);
  CHECK(fit.rms_residual <= 1e-10);

  // The reported params reproduce the fitted curve at this N.
  for (int p : {1, 3, 7, 64}) {
    const double direct = lumped / p + truth.network_latency + truth.d3 * std::log(p);
    CHECK(model_time(fit.params, n, p) == doctest::Approx(direct).epsilon(1e-8));
  }
}

TEST_CASE("fit under one percent noise stays within ten percent") {
  // Terms sized so each one is visible above the 1% noise floor.
  PerfModelParams truth;
  truth.d1 = 2e-6;
  truth.d3 = 0.05;
  truth.bandwidth_per_core = 1.0;
  truth.network_latency = 0.4;
  const int n = 64;
  auto records = synthetic_records(truth, n, {1, 2, 4, 8, 16, 32, 64, 128});

  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> noise(-0.01, 0.01);
  double mean_time = 0.0;
  for (auto& r : records) {
    r.time_seconds *= 1.0 + noise(rng);
    mean_time += r.time_seconds;
  }
  mean_time /= static_cast<double>(records.size());

  const FitResult fit = fit_model(records, n);
  const double lumped = truth.d1 * 64.0 * 64.0 * 64.0;  // 0.524 s
  CHECK(std::abs(fit.lumped_compute - lumped) / lumped < 0.1);
  CHECK(std::abs(fit.params.network_latency - truth.network_latency) /
            truth.network_latency <
        0.1);
  CHECK(std::abs(fit.params.d3 - truth.d3) / truth.d3 < 0.1);
  CHECK(fit.rms_residual < 0.05 * mean_time);
  CHECK(fit.rms_residual > 1e-8 * mean_time);
}

TEST_CASE("fit of a decreasing-then-flat curve needs the latency/network terms") {
  std::vector<ScalingRecord> records;
  for (int p : {1, 2, 4, 8, 16, 32, 64, 128, 256}) {
    ScalingRecord r;
    r.machine = "shape";
    r.cores = p;
    r.time_seconds = 10.0 / p + 0.5;
    records.push_back(r);
  }
  const FitResult fit = fit_model(records, 64);
  CHECK(fit.params.network_latency + fit.params.d3 * std::log(256.0) > 0.1);
}

TEST_CASE("fit input validation") {
  PerfModelParams truth;
  truth.d1 = 1e-9;
  truth.bandwidth_per_core = 1.0;
  auto too_few = synthetic_records(truth, 64, {1, 2, 4});
  CHECK_THROWS_AS(fit_model(too_few, 64), std::invalid_argument);

  auto few_counts = synthetic_records(truth, 64, {1, 2});
  few_counts.push_back(few_counts[0]);
  few_counts.push_back(few_counts[1]);
  CHECK_THROWS_AS(fit_model(few_counts, 64), std::invalid_argument);

  auto zeros = synthetic_records(truth, 64, {1, 2, 4, 8});
  for (auto& r : zeros) r.time_seconds = 0.0;
  CHECK_THROWS_AS(fit_model(zeros, 64), std::invalid_argument);
}

TEST_CASE("rank reproduces the reference ordering whatever the input order") {
  std::vector<ScalingRecord> records;
  for (const auto& [machine, seconds, cores] : kReferenceTable) {
    ScalingRecord r;
    r.machine = machine;
    r.cores = cores;
    r.time_seconds = seconds;
    records.push_back(r);
  }
  std::mt19937_64 rng(7);
  std::shuffle(records.begin(), records.end(), rng);

  const auto ranked = rank(records);
  REQUIRE(ranked.size() == kReferenceTable.size());
  for (size_t i = 0; i < ranked.size(); ++i) {
    CHECK(ranked[i].machine == std::get<0>(kReferenceTable[i]));
    CHECK(ranked[i].best_seconds == doctest::Approx(std::get<1>(kReferenceTable[i])));
  }
}

TEST_CASE("rank takes the machine minimum, breaks ties by name, rejects empty") {
  std::vector<ScalingRecord> records;
  auto add = [&](const std::string& m, double t) {
    ScalingRecord r;
    r.machine = m;
    r.cores = 4;
    r.time_seconds = t;
    records.push_back(r);
  };
  add("beta", 2.0);
  add("beta", 1.5);
  add("alpha", 1.5);
  add("gamma", 0.5);

  const auto ranked = rank(records);
  REQUIRE(ranked.size() == 3);
  CHECK(ranked[0].machine == "gamma");
  CHECK(ranked[1].machine == "alpha");  // 1.5 tie, lexicographic
  CHECK(ranked[2].machine == "beta");

  CHECK_THROWS_AS(rank({}), std::invalid_argument);

  const auto single = rank({records[0]});
  CHECK(single.size() == 1);
  CHECK(single[0].machine == "beta");
  CHECK(single[0].best_seconds == 2.0);
}

TEST_CASE("machines CSV parsing: fields, extras, errors") {
  std::istringstream in(
      "machine,cores,time_seconds,node_type,interconnect,chip_bandwidth_gbs,"
      "peak_tflops,fft_library\n"
      "Hornet,12288,0.319,2x12 core Intel Xeon,Cray Aries,68,3784,FFTW 3\n"
      "\"MareNostrum, III\",64,4.0,2x8 core Intel Xeon,FDR10,51.2,1017,MKL\n");
  const auto records = read_scaling_csv(in);
  REQUIRE(records.size() == 2);
  CHECK(records[0].machine == "Hornet");
  CHECK(records[0].cores == 12288);
  CHECK(records[0].time_seconds == doctest::Approx(0.319));
  CHECK(records[0].chip_bandwidth_gbs == 68.0);
  CHECK(records[0].peak_tflops == 3784.0);
  CHECK(records[0].extra.at("fft_library") == "FFTW 3");
  CHECK(records[1].machine == "MareNostrum, III");  // quoted comma preserved

  std::istringstream bad_cores(
      "machine,cores,time_seconds\nHornet,twelve,0.3\n");
  CHECK_THROWS_WITH_AS(static_cast<void>(read_scaling_csv(bad_cores)),
                       doctest::Contains("line 2"), std::runtime_error);

  std::istringstream bad_width("machine,cores,time_seconds\nHornet,4\n");
  CHECK_THROWS_WITH_AS(static_cast<void>(read_scaling_csv(bad_width)),
                       doctest::Contains("line 2"), std::runtime_error);

  std::istringstream no_col("machine,cores\nHornet,4\n");
  CHECK_THROWS_AS(static_cast<void>(read_scaling_csv(no_col)), std::runtime_error);

  std::istringstream bad_time("machine,cores,time_seconds\nHornet,4,0\n");
  CHECK_THROWS_WITH_AS(static_cast<void>(read_scaling_csv(bad_time)),
                       doctest::Contains("line 2"), std::runtime_error);
}

TEST_CASE("scaling CSV round-trips through write and read") {
  std::vector<ScalingRecord> records;
  ScalingRecord a;
  a.machine = "alpha";
  a.cores = 3;
  a.time_seconds = 0.12345678901234567;
  a.node_type = "2x8 core";
  a.chip_bandwidth_gbs = 51.2;
  a.extra["nodes"] = "16";
  ScalingRecord b;
  b.machine = "beta, prime";
  b.cores = 7;
  b.time_seconds = 2.0;
  records = {a, b};

  std::ostringstream out;
  write_scaling_csv(out, records);
  std::istringstream in(out.str());
  const auto parsed = read_scaling_csv(in);
  REQUIRE(parsed.size() == 2);
  CHECK(parsed[0].machine == "alpha");
  CHECK(parsed[0].time_seconds == a.time_seconds);  // 17 digits, bit-faithful
  CHECK(parsed[0].extra.at("nodes") == "16");
  CHECK(parsed[1].machine == "beta, prime");
  CHECK(!parsed[1].chip_bandwidth_gbs.has_value());
}

TEST_CASE("time_workload measures and enforces the timed-region contract") {
  const Grid g = make_grid({16, 16, 16});
  WorkloadOptions options;
  options.steps = 3;
  options.repeats = 2;
  options.ic = InitialCondition::gaussian(0.1);
  options.machine = "testbox";

  const BenchResult result = time_workload(g, 2, options);
  CHECK(result.record.machine == "testbox");
  CHECK(result.record.cores == 2);
  CHECK(result.record.time_seconds > 0.0);
  CHECK(result.n == 16);
  CHECK(result.steps == 3);
  CHECK(result.transform_seconds > 0.0);
  CHECK(result.transpose_seconds > 0.0);
  CHECK(result.transform_seconds + result.transpose_seconds <=
        result.record.time_seconds * 1.05);
}

TEST_CASE("sweep validates its worker list and emits parseable results") {
  const Grid g = make_grid({8, 8, 8});
  WorkloadOptions options;
  options.steps = 1;
  options.repeats = 1;
  options.machine = "testbox";

  CHECK_THROWS_AS(sweep(g, {}, options), std::invalid_argument);
  CHECK_THROWS_AS(sweep(g, {2, 1}, options), std::invalid_argument);
  CHECK_THROWS_AS(sweep(g, {1, 1}, options), std::invalid_argument);

  const auto results = sweep(g, {1, 2}, options);
  REQUIRE(results.size() == 2);
  CHECK(results[0].record.cores == 1);
  CHECK(results[1].record.cores == 2);

  std::ostringstream out;
  write_results_csv(out, results);
  std::istringstream in(out.str());
  const auto parsed = read_scaling_csv(in);  // rank(sweep output) round-trip
  REQUIRE(parsed.size() == 2);
  CHECK(parsed[0].extra.at("N") == "8");
  const auto ranked = rank(parsed);
  CHECK(ranked.size() == 1);
  CHECK(ranked[0].machine == "testbox");
}
