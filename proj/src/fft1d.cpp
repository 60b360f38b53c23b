#include "kg/fft1d.hpp"

#include <cmath>
#include <stdexcept>

namespace kg {
namespace {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

int next_pow2(int n) {
  int m = 1;
  while (m < n) m <<= 1;
  return m;
}

std::vector<int> make_bitrev(int m) {
  std::vector<int> rev(static_cast<size_t>(m), 0);
  for (int i = 1, j = 0; i < m; ++i) {
    int bit = m >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    rev[static_cast<size_t>(i)] = j;
  }
  return rev;
}

// twiddle[k] = e^{sign * 2*pi*i*k/m} for k < m/2; stages stride into it.
std::vector<Complex> make_twiddles(int m, double sign) {
  std::vector<Complex> tw(static_cast<size_t>(m / 2));
  for (int k = 0; k < m / 2; ++k) {
    const double angle = sign * 2.0 * M_PI * k / m;
    tw[static_cast<size_t>(k)] = Complex(std::cos(angle), std::sin(angle));
  }
  return tw;
}

// Chirp c_j = e^{sign * i*pi*j^2/n}, with j^2 reduced mod 2n to keep the
// trig argument small (j^2 grows like n^2 otherwise).
Complex chirp(int j, int n, double sign) {
  const long long q = (static_cast<long long>(j) * j) % (2LL * n);
  const double angle = sign * M_PI * static_cast<double>(q) / n;
  return Complex(std::cos(angle), std::sin(angle));
}

}  // namespace

Fft1d::Fft1d(int n) : n_(n), pow2_(is_pow2(n)) {
  if (n < 2) throw std::invalid_argument("fft size must be >= 2");
  if (pow2_) {
    bitrev_ = make_bitrev(n_);
    twiddle_fwd_ = make_twiddles(n_, -1.0);
    twiddle_inv_ = make_twiddles(n_, +1.0);
    return;
  }

  // Bluestein: X_k = c_k * (a (*) b)_k with a_j = x_j c_j, b_j = conj(c_j),
  // the linear convolution evaluated circularly at padded length m_.
  m_ = next_pow2(2 * n_ - 1);
  bitrev_ = make_bitrev(m_);
  twiddle_fwd_ = make_twiddles(m_, -1.0);
  twiddle_inv_ = make_twiddles(m_, +1.0);

  chirp_fwd_.resize(static_cast<size_t>(n_));
  for (int j = 0; j < n_; ++j) chirp_fwd_[static_cast<size_t>(j)] = chirp(j, n_, -1.0);

  auto build_filter = [&](double sign) {
    std::vector<Complex> b(static_cast<size_t>(m_), Complex(0.0, 0.0));
    for (int j = 0; j < n_; ++j) {
      const Complex v = chirp(j, n_, -sign);  // conj of the analysis chirp
      b[static_cast<size_t>(j)] = v;
      if (j > 0) b[static_cast<size_t>(m_ - j)] = v;
    }
    radix2(b.data(), m_, bitrev_, twiddle_fwd_);
    return b;
  };
  filter_fwd_ = build_filter(-1.0);
  filter_inv_ = build_filter(+1.0);
}

Fft1d::Workspace Fft1d::make_workspace() const {
  Workspace ws;
  ws.a.resize(static_cast<size_t>(pow2_ ? 0 : m_));
  return ws;
}

void Fft1d::radix2(Complex* data, int m, const std::vector<int>& bitrev,
                   const std::vector<Complex>& twiddle) {
  for (int i = 0; i < m; ++i) {
    const int j = bitrev[static_cast<size_t>(i)];
    if (i < j) std::swap(data[i], data[j]);
  }
  for (int len = 2; len <= m; len <<= 1) {
    const int half = len >> 1;
    const int stride = m / len;
    for (int base = 0; base < m; base += len) {
      for (int k = 0; k < half; ++k) {
        const Complex w = twiddle[static_cast<size_t>(k * stride)];
        const Complex even = data[base + k];
        const Complex odd = data[base + k + half] * w;
        data[base + k] = even + odd;
        data[base + k + half] = even - odd;
      }
    }
  }
}

void Fft1d::transform(Complex* line, Workspace& ws, bool inverse) const {
  const auto& twiddle = inverse ? twiddle_inv_ : twiddle_fwd_;
  if (pow2_) {
    radix2(line, n_, bitrev_, twiddle);
    return;
  }

  Complex* a = ws.a.data();
  const auto& filter = inverse ? filter_inv_ : filter_fwd_;
  for (int j = 0; j < n_; ++j) {
    const Complex c = chirp_fwd_[static_cast<size_t>(j)];
    a[j] = line[j] * (inverse ? std::conj(c) : c);
  }
  for (int j = n_; j < m_; ++j) a[j] = Complex(0.0, 0.0);

  radix2(a, m_, bitrev_, twiddle_fwd_);
  for (int j = 0; j < m_; ++j) a[j] *= filter[static_cast<size_t>(j)];
  radix2(a, m_, bitrev_, twiddle_inv_);

  const double scale = 1.0 / m_;  // the two padded transforms are unnormalized
  for (int k = 0; k < n_; ++k) {
    const Complex c = chirp_fwd_[static_cast<size_t>(k)];
    line[k] = a[k] * scale * (inverse ? std::conj(c) : c);
  }
}

}  // namespace kg
