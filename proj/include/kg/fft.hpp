#ifndef KG_FFT_HPP
#define KG_FFT_HPP

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "kg/fft1d.hpp"
#include "kg/field.hpp"
#include "kg/grid.hpp"
#include "kg/types.hpp"
#include "kg/worker_team.hpp"

namespace kg {

/// Which axis a distributed buffer is decomposed along.
///
/// X-slab buffers are the canonical layout itself: worker w owns the
/// contiguous planes i in x_slab(w). Z-slab buffers are stored as
/// concatenated per-worker blocks; worker w's block holds all (i,j) for
/// l in z_slab(w), element (i,j,l) at
///   nx*ny*z0 + (i*ny + j)*(z1 - z0) + (l - z0).
/// With one worker both layouts coincide.
enum class SlabAxis { X, Z };

/// Accumulated wall-clock per phase kind plus call counts, for the
/// benchmark harness. transform covers the 1D passes (and the inverse
/// normalization); transpose covers pack + exchange + unpack.
struct PhaseTimers {
  double transform_seconds = 0.0;
  double transpose_seconds = 0.0;
  std::int64_t forward_count = 0;
  std::int64_t inverse_count = 0;
  std::int64_t exchange_count = 0;
};

/// Slab-decomposed 3D FFT plan: owns the worker team, the balanced slab
/// ranges along x and z, the 1D transform tables and the transpose scratch.
/// Reusable across many transforms; a plan must not be used by two
/// concurrent transforms.
class FftPlan {
 public:
  FftPlan(const Grid& grid, int workers);

  const Grid& grid() const { return grid_; }
  int workers() const { return team_->size(); }
  WorkerTeam& team() { return *team_; }

  /// Plane range [begin,end) owned by worker w along the given axis.
  std::pair<int, int> x_slab(int w) const { return x_slabs_[w]; }
  std::pair<int, int> z_slab(int w) const { return z_slabs_[w]; }

  /// Contiguous flat-index range of worker w's x-slab in canonical layout;
  /// the partition used for pointwise collectives.
  std::pair<Index, Index> x_flat_range(int w) const;

  const PhaseTimers& timers() const { return timers_; }
  void reset_timers() { timers_ = PhaseTimers{}; }

  SpectralField forward(const RealField& u);
  RealField inverse(const SpectralField& uhat);
  ComplexArray transpose(const ComplexArray& buffer, SlabAxis from);

 private:
  struct WorkerScratch {
    Fft1d::Workspace fft;
    std::vector<Complex> line;  // gather buffer for strided 1D passes
  };

  // Transpose phase drivers; `from` names the current decomposition.
  void pack(int w, const Complex* src, SlabAxis from);
  void exchange(int w, SlabAxis from);
  void unpack(int w, Complex* dst, SlabAxis from);

  void transform_yz(int w, Complex* buf, bool inverse);
  void transform_x(int w, Complex* buf, bool inverse);
  ComplexArray run_transform(const ComplexArray& input, bool inverse);

  Index send_offset(int a, int b) const;  // block (a,b) in (sender-major) order
  Index recv_offset(int b, int a) const;  // block (a,b) in (receiver-major) order

  Grid grid_;
  std::vector<std::pair<int, int>> x_slabs_;
  std::vector<std::pair<int, int>> z_slabs_;
  std::unique_ptr<WorkerTeam> team_;

  Fft1d fft_x_, fft_y_, fft_z_;
  std::vector<WorkerScratch> scratch_;  // one per worker

  ComplexArray send_;  // pack target, blocks in sender-major order
  ComplexArray recv_;  // exchange target, blocks in receiver-major order
  ComplexArray work_;  // z-slab intermediate of the transform pipeline

  PhaseTimers timers_;
};

/// Builds a plan; throws std::invalid_argument unless
/// 1 <= workers <= min(n_x, n_z). Slab sizes differ by at most one.
FftPlan make_plan(const Grid& grid, int workers);

/// Unnormalized forward DFT of u, all three axes. Throws on grid mismatch.
SpectralField fft3_forward(const RealField& u, FftPlan& plan);

/// Inverse DFT scaled by 1/(nx*ny*nz), so fft3_inverse(fft3_forward(u)) == u.
RealField fft3_inverse(const SpectralField& uhat, FftPlan& plan);

/// Redistributes a buffer from one slab decomposition to the other through
/// the plan's pack -> exchange -> unpack pipeline (a barrier separates the
/// phases). Applying it twice returns the original buffer bitwise.
ComplexArray transpose_exchange(FftPlan& plan, const ComplexArray& buffer,
                                SlabAxis from);

}  // namespace kg

#endif
