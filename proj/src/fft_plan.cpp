#include "kg/fft.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <stdexcept>
#include <string>

namespace kg {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<std::pair<int, int>> balanced_slabs(int n, int p) {
  std::vector<std::pair<int, int>> slabs(static_cast<size_t>(p));
  const int base = n / p, rem = n % p;
  int begin = 0;
  for (int w = 0; w < p; ++w) {
    const int size = base + (w < rem ? 1 : 0);
    slabs[static_cast<size_t>(w)] = {begin, begin + size};
    begin += size;
  }
  return slabs;
}

}  // namespace

FftPlan::FftPlan(const Grid& grid, int workers)
    : grid_(grid),
      fft_x_(grid.n[0]),
      fft_y_(grid.n[1]),
      fft_z_(grid.n[2]) {
  const int limit = std::min(grid.n[0], grid.n[2]);
  if (workers < 1 || workers > limit) {
    throw std::invalid_argument(
        "workers must be in [1, min(n_x, n_z)] = [1, " +
        std::to_string(limit) + "], got " + std::to_string(workers));
  }
  x_slabs_ = balanced_slabs(grid.n[0], workers);
  z_slabs_ = balanced_slabs(grid.n[2], workers);
  team_ = std::make_unique<WorkerTeam>(workers);

  const size_t line = static_cast<size_t>(
      std::max({grid.n[0], grid.n[1], grid.n[2]}));
  size_t pad = 0;
  for (const Fft1d* f : {&fft_x_, &fft_y_, &fft_z_}) {
    pad = std::max(pad, f->make_workspace().a.size());
  }
  scratch_.resize(static_cast<size_t>(workers));
  for (auto& s : scratch_) {
    s.fft.a.resize(pad);
    s.line.resize(line);
  }

  send_.resize(grid.size());
  recv_.resize(grid.size());
  work_.resize(grid.size());
}

std::pair<Index, Index> FftPlan::x_flat_range(int w) const {
  const auto [x0, x1] = x_slabs_[static_cast<size_t>(w)];
  const Index plane = Index(grid_.n[1]) * grid_.n[2];
  return {x0 * plane, x1 * plane};
}

// Block (a,b) = {(i,j,l) : i in x_slab(a), l in z_slab(b)}, elements ordered
// (i, j, l-local). The send buffer groups blocks by sender, the recv buffer
// by receiver; with those layouts the receiver-major buffer is exactly the
// z-slab block layout, and the sender-major buffer is exactly the canonical
// layout cut along z-ranges.
Index FftPlan::send_offset(int a, int b) const {
  const auto [x0, x1] = x_slabs_[static_cast<size_t>(a)];
  const Index ny = grid_.n[1], nz = grid_.n[2];
  return Index(x0) * ny * nz + Index(x1 - x0) * ny * z_slabs_[static_cast<size_t>(b)].first;
}

Index FftPlan::recv_offset(int b, int a) const {
  const auto [z0, z1] = z_slabs_[static_cast<size_t>(b)];
  const Index ny = grid_.n[1];
  return Index(grid_.n[0]) * ny * z0 +
         Index(x_slabs_[static_cast<size_t>(a)].first) * ny * (z1 - z0);
}

void FftPlan::pack(int w, const Complex* src, SlabAxis from) {
  const int p = workers();
  const Index ny = grid_.n[1], nz = grid_.n[2];
  Complex* send = send_.data();
  if (from == SlabAxis::X) {
    // Canonical rows: the run l in z_slab(b) for fixed (i,j) is contiguous.
    const auto [x0, x1] = x_slabs_[static_cast<size_t>(w)];
    for (int b = 0; b < p; ++b) {
      const auto [z0, z1] = z_slabs_[static_cast<size_t>(b)];
      const Index zs = z1 - z0;
      Complex* dst = send + send_offset(w, b);
      for (int i = x0; i < x1; ++i) {
        for (Index j = 0; j < ny; ++j) {
          std::memcpy(dst + ((Index(i - x0) * ny + j) * zs),
                      src + (Index(i) * ny + j) * nz + z0,
                      sizeof(Complex) * static_cast<size_t>(zs));
        }
      }
    }
  } else {
    // The z-slab block layout is receiver-major; each outgoing block is one
    // contiguous span of it.
    for (int a = 0; a < p; ++a) {
      const auto [x0, x1] = x_slabs_[static_cast<size_t>(a)];
      const auto [z0, z1] = z_slabs_[static_cast<size_t>(w)];
      const Index count = Index(x1 - x0) * ny * (z1 - z0);
      const Index off = recv_offset(w, a);
      std::memcpy(send + off, src + off,
                  sizeof(Complex) * static_cast<size_t>(count));
    }
  }
}

void FftPlan::exchange(int w, SlabAxis from) {
  const int p = workers();
  const Index ny = grid_.n[1];
  // Receiver w pulls one block from every sender (itself included, a local
  // copy, mirroring an all-to-all's self message).
  for (int s = 0; s < p; ++s) {
    const int a = (from == SlabAxis::X) ? s : w;
    const int b = (from == SlabAxis::X) ? w : s;
    const Index count = Index(x_slabs_[static_cast<size_t>(a)].second -
                              x_slabs_[static_cast<size_t>(a)].first) *
                        ny *
                        (z_slabs_[static_cast<size_t>(b)].second -
                         z_slabs_[static_cast<size_t>(b)].first);
    const Index src_off = (from == SlabAxis::X) ? send_offset(a, b) : recv_offset(b, a);
    const Index dst_off = (from == SlabAxis::X) ? recv_offset(b, a) : send_offset(a, b);
    std::memcpy(recv_.data() + dst_off, send_.data() + src_off,
                sizeof(Complex) * static_cast<size_t>(count));
  }
}

void FftPlan::unpack(int w, Complex* dst, SlabAxis from) {
  const int p = workers();
  const Index ny = grid_.n[1], nz = grid_.n[2];
  const Complex* recv = recv_.data();
  if (from == SlabAxis::X) {
    // Arriving blocks already sit in z-slab block order; the unpack is the
    // straight copy of this worker's region into the destination buffer.
    const auto [z0, z1] = z_slabs_[static_cast<size_t>(w)];
    const Index begin = Index(grid_.n[0]) * ny * z0;
    const Index count = Index(grid_.n[0]) * ny * (z1 - z0);
    std::memcpy(dst + begin, recv + begin,
                sizeof(Complex) * static_cast<size_t>(count));
  } else {
    // Scatter each block's (i,j) rows back into canonical z-runs.
    const auto [x0, x1] = x_slabs_[static_cast<size_t>(w)];
    for (int b = 0; b < p; ++b) {
      const auto [z0, z1] = z_slabs_[static_cast<size_t>(b)];
      const Index zs = z1 - z0;
      const Complex* block = recv + send_offset(w, b);
      for (int i = x0; i < x1; ++i) {
        for (Index j = 0; j < ny; ++j) {
          std::memcpy(dst + (Index(i) * ny + j) * nz + z0,
                      block + (Index(i - x0) * ny + j) * zs,
                      sizeof(Complex) * static_cast<size_t>(zs));
        }
      }
    }
  }
}

void FftPlan::transform_yz(int w, Complex* buf, bool inverse) {
  const auto [x0, x1] = x_slabs_[static_cast<size_t>(w)];
  const Index ny = grid_.n[1], nz = grid_.n[2];
  WorkerScratch& ws = scratch_[static_cast<size_t>(w)];
  for (int i = x0; i < x1; ++i) {
    Complex* plane = buf + Index(i) * ny * nz;
    for (Index j = 0; j < ny; ++j) {
      Complex* z_line = plane + j * nz;
      inverse ? fft_z_.inverse(z_line, ws.fft) : fft_z_.forward(z_line, ws.fft);
    }
    for (Index l = 0; l < nz; ++l) {
      Complex* base = plane + l;
      for (Index j = 0; j < ny; ++j) ws.line[static_cast<size_t>(j)] = base[j * nz];
      inverse ? fft_y_.inverse(ws.line.data(), ws.fft)
              : fft_y_.forward(ws.line.data(), ws.fft);
      for (Index j = 0; j < ny; ++j) base[j * nz] = ws.line[static_cast<size_t>(j)];
    }
  }
}

void FftPlan::transform_x(int w, Complex* buf, bool inverse) {
  const auto [z0, z1] = z_slabs_[static_cast<size_t>(w)];
  const Index nx = grid_.n[0], ny = grid_.n[1];
  const Index zs = z1 - z0;
  WorkerScratch& ws = scratch_[static_cast<size_t>(w)];
  Complex* block = buf + nx * ny * z0;  // this worker's z-slab block
  const Index stride = ny * zs;
  for (Index j = 0; j < ny; ++j) {
    for (Index l = 0; l < zs; ++l) {
      Complex* base = block + j * zs + l;
      for (Index i = 0; i < nx; ++i) ws.line[static_cast<size_t>(i)] = base[i * stride];
      inverse ? fft_x_.inverse(ws.line.data(), ws.fft)
              : fft_x_.forward(ws.line.data(), ws.fft);
      for (Index i = 0; i < nx; ++i) base[i * stride] = ws.line[static_cast<size_t>(i)];
    }
  }
}

ComplexArray FftPlan::run_transform(const ComplexArray& input, bool inverse) {
  ComplexArray out(grid_.size());
  const double norm = 1.0 / static_cast<double>(grid_.size());
  double transform_s = 0.0, transpose_s = 0.0;
  Clock::time_point mark;

  team_->run([&](int w) {
    const auto [lo, hi] = x_flat_range(w);
    if (w == 0) mark = Clock::now();

    // y/z passes on the worker's x-slab (staged through the fresh output).
    std::memcpy(out.data() + lo, input.data() + lo,
                sizeof(Complex) * static_cast<size_t>(hi - lo));
    transform_yz(w, out.data(), inverse);
    team_->barrier();
    if (w == 0) { transform_s += seconds_since(mark); mark = Clock::now(); }

    pack(w, out.data(), SlabAxis::X);
    team_->barrier();
    exchange(w, SlabAxis::X);
    team_->barrier();
    unpack(w, work_.data(), SlabAxis::X);
    team_->barrier();
    if (w == 0) { transpose_s += seconds_since(mark); mark = Clock::now(); }

    transform_x(w, work_.data(), inverse);
    team_->barrier();
    if (w == 0) { transform_s += seconds_since(mark); mark = Clock::now(); }

    pack(w, work_.data(), SlabAxis::Z);
    team_->barrier();
    exchange(w, SlabAxis::Z);
    team_->barrier();
    unpack(w, out.data(), SlabAxis::Z);
    team_->barrier();
    if (w == 0) { transpose_s += seconds_since(mark); mark = Clock::now(); }

    if (inverse) {
      Eigen::Map<ComplexArray>(out.data() + lo, hi - lo) *= norm;
      team_->barrier();
      if (w == 0) transform_s += seconds_since(mark);
    }
  });

  timers_.transform_seconds += transform_s;
  timers_.transpose_seconds += transpose_s;
  timers_.exchange_count += 2;
  return out;
}

SpectralField FftPlan::forward(const RealField& u) {
  if (!same_grid(u.grid, grid_)) {
    throw std::invalid_argument("fft3_forward: field grid does not match plan");
  }
  SpectralField out{run_transform(u.data, false), grid_};
  ++timers_.forward_count;
  return out;
}

RealField FftPlan::inverse(const SpectralField& uhat) {
  if (!same_grid(uhat.grid, grid_)) {
    throw std::invalid_argument("fft3_inverse: field grid does not match plan");
  }
  RealField out{run_transform(uhat.data, true), grid_};
  ++timers_.inverse_count;
  return out;
}

ComplexArray FftPlan::transpose(const ComplexArray& buffer, SlabAxis from) {
  if (buffer.size() != grid_.size()) {
    throw std::invalid_argument("transpose_exchange: buffer size mismatch");
  }
  ComplexArray out(grid_.size());
  Clock::time_point mark;
  double elapsed = 0.0;
  team_->run([&](int w) {
    if (w == 0) mark = Clock::now();
    pack(w, buffer.data(), from);
    team_->barrier();
    exchange(w, from);
    team_->barrier();
    unpack(w, out.data(), from);
    team_->barrier();
    if (w == 0) elapsed = seconds_since(mark);
  });
  timers_.transpose_seconds += elapsed;
  ++timers_.exchange_count;
  return out;
}

FftPlan make_plan(const Grid& grid, int workers) { return FftPlan(grid, workers); }

SpectralField fft3_forward(const RealField& u, FftPlan& plan) {
  return plan.forward(u);
}

RealField fft3_inverse(const SpectralField& uhat, FftPlan& plan) {
  return plan.inverse(uhat);
}

ComplexArray transpose_exchange(FftPlan& plan, const ComplexArray& buffer,
                                SlabAxis from) {
  return plan.transpose(buffer, from);
}

}  // namespace kg
