#ifndef KG_GRID_HPP
#define KG_GRID_HPP

#include <array>

#include "kg/types.hpp"

namespace kg {

/// Discrete periodic box: axis sizes, physical edge lengths, spacings and the
/// angular wavenumbers of each axis in FFT index order.
///
/// Axis sizes must be even and >= 4; k[axis][m] = 2*pi*wrap(m)/length where
/// wrap maps m in [0,n) to the signed frequency in [-n/2, n/2).
struct Grid {
  std::array<int, 3> n{};
  std::array<double, 3> length{};
  std::array<double, 3> spacing{};
  std::array<RealArray, 3> k{};

  Index size() const { return Index(n[0]) * n[1] * n[2]; }

  /// Flat index in the canonical layout: x slowest, z fastest.
  Index index(int i, int j, int l) const {
    return (Index(i) * n[1] + j) * n[2] + l;
  }

  double cell_volume() const { return spacing[0] * spacing[1] * spacing[2]; }

  /// Physical coordinate of grid point m on the given axis.
  double coord(int axis, int m) const { return spacing[axis] * m; }
};

/// Builds a Grid. Throws std::invalid_argument for odd or undersized n
/// (every n_j must be even and >= 4) and for non-positive lengths.
Grid make_grid(std::array<int, 3> n,
               std::array<double, 3> length = {kTwoPi, kTwoPi, kTwoPi});

/// Angular wavenumbers for one axis in FFT order, e.g. n=8, L=2*pi gives
/// [0,1,2,3,-4,-3,-2,-1].
RealArray wavenumbers(int n, double length);

/// True when the two grids describe the same discrete box.
bool same_grid(const Grid& a, const Grid& b);

/// Fourier symbol of the Laplacian as a flat array in canonical layout:
/// entry (i,j,l) = -(kx[i]^2 + ky[j]^2 + kz[l]^2).
RealArray laplacian_multiplier(const Grid& grid);

}  // namespace kg

#endif
