#include "kg/field.hpp"

#include <cmath>
#include <vector>

#include "kg/instrument.hpp"
#include "kg/worker_team.hpp"

namespace kg {
namespace {

constexpr Index kChunk = 4096;   // fixed base-chunk width of the reduction tree
constexpr Index kLeaf = 32;      // below this, plain sequential summation

// Pairwise (tree) sum of one base chunk. The recursion pattern depends only
// on the chunk length, never on the caller.
Complex chunk_sum(const Complex* data, Index len) {
  if (len <= kLeaf) {
    Complex s = 0.0;
    for (Index i = 0; i < len; ++i) s += data[i];
    return s;
  }
  const Index half = len / 2;
  return chunk_sum(data, half) + chunk_sum(data + half, len - half);
}

// Combines the per-chunk partials in index order, pairwise.
Complex combine(const Complex* partials, Index count) {
  if (count == 1) return partials[0];
  const Index half = count / 2;
  return combine(partials, half) + combine(partials + half, count - half);
}

}  // namespace

RealField cubic_term(const RealField& u) {
  RealField out{ComplexArray(u.data.size()), u.grid};
  out.data = u.data * u.data.abs2().cast<Complex>();
  return out;
}

Complex integrate(const RealField& f, WorkerTeam* team) {
  instrument::integrate_calls().fetch_add(1, std::memory_order_relaxed);

  const Complex* data = f.data.data();
  const Index n = f.data.size();
  const Index chunks = (n + kChunk - 1) / kChunk;
  std::vector<Complex> partials(static_cast<size_t>(chunks));

  auto sum_chunks = [&](Index begin, Index end) {
    for (Index c = begin; c < end; ++c) {
      const Index lo = c * kChunk;
      partials[static_cast<size_t>(c)] = chunk_sum(data + lo, std::min(kChunk, n - lo));
    }
  };

  if (team != nullptr && team->size() > 1) {
    const int p = team->size();
    team->run([&](int w) {
      // Block partition of the chunk list; each chunk is summed identically
      // no matter which worker owns it.
      const Index per = chunks / p, rem = chunks % p;
      const Index begin = w * per + std::min<Index>(w, rem);
      sum_chunks(begin, begin + per + (w < rem ? 1 : 0));
    });
  } else {
    sum_chunks(0, chunks);
  }

  return combine(partials.data(), chunks) * f.grid.cell_volume();
}

bool all_finite(const RealField& f) {
  const Complex* data = f.data.data();
  for (Index i = 0; i < f.data.size(); ++i) {
    if (!std::isfinite(data[i].real()) || !std::isfinite(data[i].imag()))
      return false;
  }
  return true;
}

}  // namespace kg
