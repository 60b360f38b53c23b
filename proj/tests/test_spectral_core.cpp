#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kg/field.hpp"
#include "kg/grid.hpp"
#include "kg/worker_team.hpp"
#include "support/oracles.hpp"

using namespace kg;

TEST_CASE("wavenumbers follow the FFT ordering") {
  const Grid g = make_grid({8, 8, 8});
  const double expected[8] = {0, 1, 2, 3, -4, -3, -2, -1};
  for (int m = 0; m < 8; ++m) CHECK(g.k[0][m] == doctest::Approx(expected[m]));

  const Grid h = make_grid({4, 4, 4}, {4 * M_PI, 4 * M_PI, 4 * M_PI});
  const double expected4[4] = {0, 0.5, -1, -0.5};
  for (int m = 0; m < 4; ++m) CHECK(h.k[0][m] == doctest::Approx(expected4[m]));
}

TEST_CASE("wavenumber symmetry about zero except the Nyquist mode") {
  for (int n : {4, 8, 12, 32}) {
    const Grid g = make_grid({n, n, n}, {5.0, 5.0, 5.0});
    for (int m = 1; m < n / 2; ++m) {
      CHECK(g.k[0][m] == doctest::Approx(-g.k[0][n - m]).epsilon(1e-15));
    }
    CHECK(g.k[0][n / 2] == doctest::Approx(-(n / 2) * kTwoPi / 5.0));
  }
}

TEST_CASE("grid stores exact spacing and rejects bad sizes") {
  const Grid g = make_grid({8, 16, 32}, {1.0, 2.0, 4.0});
  for (int d = 0; d < 3; ++d) CHECK(g.spacing[d] * g.n[d] == g.length[d]);

  CHECK_THROWS_AS(make_grid({7, 8, 8}), std::invalid_argument);
  CHECK_THROWS_AS(make_grid({2, 8, 8}), std::invalid_argument);
  CHECK_THROWS_AS(make_grid({8, 8, 8}, {0.0, 1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_grid({8, 8, 8}, {1.0, -2.0, 1.0}), std::invalid_argument);
}

TEST_CASE("the benchmark-size grid is representable") {
  const Grid g = make_grid({512, 512, 512});
  CHECK(g.size() == 512LL * 512 * 512);
  CHECK(g.k[0][256] == doctest::Approx(-256.0));
  CHECK(g.k[0][511] == doctest::Approx(-1.0));
}

TEST_CASE("laplacian multiplier") {
  const Grid g = make_grid({8, 8, 8});
  const RealArray lap = laplacian_multiplier(g);
  CHECK(lap[g.index(0, 0, 0)] == 0.0);
  CHECK(lap[g.index(1, 0, 0)] == doctest::Approx(-1.0));
  // k = (3, -4, 1) lives at indices (3, 4, 1) in FFT order.
  CHECK(lap[g.index(3, 4, 1)] == doctest::Approx(-26.0));
}

TEST_CASE("cubic term is |u|^2 u") {
  const Grid g = make_grid({4, 4, 4});

  RealField zero = make_real_field(g);
  CHECK(cubic_term(zero).data.abs().maxCoeff() == 0.0);

  RealField two = make_real_field(g);
  two.data.setConstant(Complex(2.0, 0.0));
  CHECK(test::max_abs_diff(cubic_term(two).data,
                           ComplexArray::Constant(g.size(), Complex(8.0, 0.0)))
        < 1e-15);

  RealField onei = make_real_field(g);
  onei.data.setConstant(Complex(1.0, 1.0));
  CHECK(test::max_abs_diff(cubic_term(onei).data,
                           ComplexArray::Constant(g.size(), Complex(2.0, 2.0)))
        < 1e-14);
}

TEST_CASE("integrate: volume, zero and an exact sine cancellation") {
  const Grid g = make_grid({16, 16, 16});
  RealField one = make_real_field(g);
  one.data.setConstant(1.0);
  const double volume = std::pow(kTwoPi, 3);
  CHECK(integrate(one).real() == doctest::Approx(volume).epsilon(1e-13));
  CHECK(integrate(make_real_field(g)) == Complex(0.0));

  const Grid g32 = make_grid({32, 32, 32});
  RealField sine = make_real_field(g32);
  for (int i = 0; i < 32; ++i) {
    for (int j = 0; j < 32; ++j) {
      for (int l = 0; l < 32; ++l) {
        sine.data[g32.index(i, j, l)] = std::sin(g32.coord(0, i));
      }
    }
  }
  CHECK(std::abs(integrate(sine)) < 1e-12);
}

TEST_CASE("integrate is linear on random fields") {
  const Grid g = make_grid({12, 8, 6}, {3.0, 2.0, 1.0});
  const RealField f = test::random_field(g, 11);
  const RealField h = test::random_field(g, 22);
  const Complex a(0.7, -0.3), b(-1.1, 0.25);

  RealField combo{a * f.data + b * h.data, g};
  const Complex lhs = integrate(combo);
  const Complex rhs = a * integrate(f) + b * integrate(h);
  CHECK(std::abs(lhs - rhs) / std::abs(rhs) < 1e-13);
}

TEST_CASE("integrate is bitwise identical for 1, 2, 4, 8 workers") {
  const Grid g = make_grid({32, 32, 32});
  const RealField f = test::random_field(g, 33);

  const Complex serial = integrate(f);
  for (int p : {1, 2, 4, 8}) {
    WorkerTeam team(p);
    const Complex parallel = integrate(f, &team);
    CHECK(parallel.real() == serial.real());
    CHECK(parallel.imag() == serial.imag());
  }
}

TEST_CASE("all_finite flags bad entries") {
  const Grid g = make_grid({4, 4, 4});
  RealField f = make_real_field(g);
  CHECK(all_finite(f));
  f.data[g.index(1, 2, 3)] = Complex(std::nan(""), 0.0);
  CHECK(!all_finite(f));
}
