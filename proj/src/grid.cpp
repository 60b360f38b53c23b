#include "kg/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace kg {

RealArray wavenumbers(int n, double length) {
  RealArray k(n);
  const double scale = kTwoPi / length;
  for (int m = 0; m < n; ++m) {
    const int wrapped = (m < n / 2) ? m : m - n;
    k[m] = scale * wrapped;
  }
  return k;
}

Grid make_grid(std::array<int, 3> n, std::array<double, 3> length) {
  for (int axis = 0; axis < 3; ++axis) {
    if (n[axis] < 4 || n[axis] % 2 != 0) {
      throw std::invalid_argument("grid size must be even and >= 4, got n[" +
                                  std::to_string(axis) + "] = " +
                                  std::to_string(n[axis]));
    }
    if (!(length[axis] > 0.0)) {
      throw std::invalid_argument("box length must be positive, got length[" +
                                  std::to_string(axis) + "] = " +
                                  std::to_string(length[axis]));
    }
  }
  Grid grid;
  grid.n = n;
  grid.length = length;
  for (int axis = 0; axis < 3; ++axis) {
    grid.spacing[axis] = length[axis] / n[axis];
    grid.k[axis] = wavenumbers(n[axis], length[axis]);
  }
  return grid;
}

bool same_grid(const Grid& a, const Grid& b) {
  return a.n == b.n && a.length == b.length;
}

RealArray laplacian_multiplier(const Grid& grid) {
  RealArray out(grid.size());
  const RealArray kx2 = grid.k[0].square();
  const RealArray ky2 = grid.k[1].square();
  const RealArray kz2 = grid.k[2].square();
  Index pos = 0;
  for (int i = 0; i < grid.n[0]; ++i) {
    for (int j = 0; j < grid.n[1]; ++j) {
      const double kxy = kx2[i] + ky2[j];
      for (int l = 0; l < grid.n[2]; ++l, ++pos) out[pos] = -(kxy + kz2[l]);
    }
  }
  return out;
}

}  // namespace kg
