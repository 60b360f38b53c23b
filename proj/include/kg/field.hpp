#ifndef KG_FIELD_HPP
#define KG_FIELD_HPP

#include <utility>

#include "kg/grid.hpp"
#include "kg/types.hpp"

namespace kg {

class WorkerTeam;

/// Physical-space field u on a Grid. Storage is complex throughout, even for
/// real simulations; data is flat in the canonical layout (x slowest,
/// z fastest).
struct RealField {
  ComplexArray data;
  Grid grid;
};

/// Fourier-space field u-hat on a Grid, same layout as RealField. Produced by
/// the unnormalized forward transform; for the transform of a real-valued
/// field, uhat(-k) = conj(uhat(k)).
struct SpectralField {
  ComplexArray data;
  Grid grid;
};

inline RealField make_real_field(const Grid& grid) {
  return RealField{ComplexArray::Zero(grid.size()), grid};
}

inline SpectralField make_spectral_field(const Grid& grid) {
  return SpectralField{ComplexArray::Zero(grid.size()), grid};
}

/// Pointwise |u|^2 * u (for real u this is u^3). Fresh output, input untouched.
RealField cubic_term(const RealField& u);

/// Sum of all entries times the cell volume, i.e. the discrete integral over
/// the box. Uses a fixed-order pairwise reduction so the result is bitwise
/// independent of the worker count; pass a team to spread the chunk sums.
Complex integrate(const RealField& f, WorkerTeam* team = nullptr);

/// True when every entry of the field is finite.
bool all_finite(const RealField& f);

}  // namespace kg

#endif
