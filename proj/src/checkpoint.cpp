#include "kg/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "kg/instrument.hpp"

static_assert(std::endian::native == std::endian::little,
              "checkpoint format is little-endian");

namespace kg {
namespace {

constexpr char kMagic[8] = {'K', 'G', 'C', 'K', 'P', 'T', '0', '1'};
constexpr std::uint32_t kVersion = 1;

void write_bytes(std::ostream& out, const void* data, size_t count) {
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(count));
}

void read_bytes(std::istream& in, void* data, size_t count) {
  in.read(static_cast<char*>(data), static_cast<std::streamsize>(count));
  if (!in) throw std::runtime_error("checkpoint: truncated file");
}

void write_field(std::ostream& out, const ComplexArray& data) {
  // std::complex<double> is layout-compatible with a (re, im) double pair.
  write_bytes(out, data.data(), sizeof(Complex) * static_cast<size_t>(data.size()));
}

}  // namespace

void save_checkpoint(const std::string& path, const SolverState& state) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("checkpoint: cannot open " + path);
  instrument::file_writes().fetch_add(1, std::memory_order_relaxed);

  const Grid& grid = state.grid();
  write_bytes(out, kMagic, sizeof(kMagic));
  const std::uint32_t version = kVersion, reserved = 0;
  write_bytes(out, &version, 4);
  write_bytes(out, &reserved, 4);
  for (int d = 0; d < 3; ++d) {
    const std::uint64_t n = static_cast<std::uint64_t>(grid.n[d]);
    write_bytes(out, &n, 8);
  }
  for (int d = 0; d < 3; ++d) write_bytes(out, &grid.length[d], 8);
  write_bytes(out, &state.dt, 8);
  const std::uint64_t step = static_cast<std::uint64_t>(state.step_index);
  write_bytes(out, &step, 8);
  write_field(out, state.uhat_prev.data);
  write_field(out, state.uhat_now.data);
  if (!out) throw std::runtime_error("checkpoint: write failed for " + path);
}

SolverState load_checkpoint(const std::string& path, FftPlan& plan) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checkpoint: cannot open " + path);

  char magic[8];
  read_bytes(in, magic, sizeof(magic));
  if (std::memcmp(magic, kMagic, sizeof(magic)) != 0) {
    throw std::runtime_error("checkpoint: bad magic in " + path);
  }
  std::uint32_t version = 0, reserved = 0;
  read_bytes(in, &version, 4);
  read_bytes(in, &reserved, 4);
  if (version != kVersion) {
    throw std::runtime_error("checkpoint: unsupported version " +
                             std::to_string(version));
  }

  std::array<int, 3> n{};
  for (int d = 0; d < 3; ++d) {
    std::uint64_t v = 0;
    read_bytes(in, &v, 8);
    if (v < 4 || v > (1u << 24)) {
      throw std::runtime_error("checkpoint: implausible grid size");
    }
    n[d] = static_cast<int>(v);
  }
  std::array<double, 3> length{};
  for (int d = 0; d < 3; ++d) read_bytes(in, &length[d], 8);

  double dt = 0.0;
  std::uint64_t step = 0;
  read_bytes(in, &dt, 8);
  read_bytes(in, &step, 8);
  if (!(dt > 0.0)) throw std::runtime_error("checkpoint: non-positive dt");

  const Grid grid = make_grid(n, length);
  if (!same_grid(grid, plan.grid())) {
    throw std::invalid_argument("checkpoint: stored grid does not match plan");
  }

  SpectralField prev{ComplexArray(grid.size()), grid};
  SpectralField now{ComplexArray(grid.size()), grid};
  read_bytes(in, prev.data.data(), sizeof(Complex) * static_cast<size_t>(grid.size()));
  read_bytes(in, now.data.data(), sizeof(Complex) * static_cast<size_t>(grid.size()));

  RealField u_now = plan.inverse(now);
  return SolverState{std::move(prev), std::move(now), std::move(u_now), dt,
                     static_cast<std::int64_t>(step)};
}

}  // namespace kg
