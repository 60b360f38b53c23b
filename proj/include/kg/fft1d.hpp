#ifndef KG_FFT1D_HPP
#define KG_FFT1D_HPP

#include <vector>

#include "kg/types.hpp"

namespace kg {

/// Complex-to-complex 1D DFT engine for a fixed size n >= 2.
///
/// forward() applies the e^{-2*pi*i*j*k/n} kernel, inverse() the conjugate
/// kernel; both are unnormalized (the 3D wrapper applies the single 1/(n^3)
/// factor on the inverse path). Powers of two run an iterative radix-2
/// butterfly; other sizes go through Bluestein's chirp-z reduction to a
/// power-of-two convolution. All tables are precomputed, so transforms are
/// deterministic and safe to share across threads as long as each thread uses
/// its own Workspace.
class Fft1d {
 public:
  struct Workspace {
    std::vector<Complex> a;  // padded signal scratch (Bluestein only)
  };

  explicit Fft1d(int n);

  int size() const noexcept { return n_; }

  Workspace make_workspace() const;

  void forward(Complex* line, Workspace& ws) const { transform(line, ws, false); }
  void inverse(Complex* line, Workspace& ws) const { transform(line, ws, true); }

 private:
  void transform(Complex* line, Workspace& ws, bool inverse) const;
  static void radix2(Complex* data, int m, const std::vector<int>& bitrev,
                     const std::vector<Complex>& twiddle);

  int n_ = 0;
  bool pow2_ = false;

  // Radix-2 tables for n_ itself (pow2 case) or for the padded length m_
  // (Bluestein case). twiddle_*_ holds e^{∓2*pi*i*k/len} for k < len/2.
  std::vector<int> bitrev_;
  std::vector<Complex> twiddle_fwd_;
  std::vector<Complex> twiddle_inv_;

  // Bluestein tables. chirp_fwd_[j] = e^{-i*pi*j^2/n} (inverse uses the
  // conjugate); filter_*_ is the length-m_ transform of the wrapped
  // conjugate-chirp sequence.
  int m_ = 0;
  std::vector<Complex> chirp_fwd_;
  std::vector<Complex> filter_fwd_;
  std::vector<Complex> filter_inv_;
};

}  // namespace kg

#endif
