#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "ksfluid/grid.hpp"

using namespace ksfluid;

namespace {

GridSpec unit_square(int n) { return GridSpec::make(2, {1.0, 1.0, 1.0}, {n, n, 1}); }

}  // namespace

TEST_CASE("GridSpec validation") {
  CHECK_THROWS_AS(GridSpec::make(1, {1, 1, 1}, {8, 8, 1}), ConfigError);
  CHECK_THROWS_AS(GridSpec::make(4, {1, 1, 1}, {8, 8, 8}), ConfigError);
  CHECK_THROWS_AS(GridSpec::make(2, {1, 1, 1}, {3, 8, 1}), ConfigError);
  CHECK_THROWS_AS(GridSpec::make(2, {0.0, 1, 1}, {8, 8, 1}), ConfigError);
  const GridSpec g = GridSpec::make(2, {2.0, 1.0, 1.0}, {8, 4, 1});
  CHECK(g.h[0] == doctest::Approx(0.25));
  CHECK(g.h[1] == doctest::Approx(0.25));
  CHECK(g.cells[2] == 1);
  CHECK(g.cell_count() == 32);
  CHECK(g.cell_volume() == doctest::Approx(0.0625));
}

TEST_CASE("integrate: constants are exact") {
  for (int n : {4, 16, 33}) {
    ScalarField f(unit_square(n));
    f.fill(1.0);
    CHECK(integrate(f) == doctest::Approx(1.0).epsilon(1e-14));
  }
  ScalarField f2(GridSpec::make(2, {2.0, 2.0, 1.0}, {10, 10, 1}));
  f2.fill(2.0);
  CHECK(integrate(f2) == doctest::Approx(8.0).epsilon(1e-14));
}

TEST_CASE("integrate: midpoint rule is exact for linear integrands") {
  const GridSpec g = unit_square(4);
  ScalarField f(g);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) f(i, j) = g.cell_center(0, i);
  CHECK(integrate(f) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("integrate is linear") {
  const GridSpec g = unit_square(12);
  ScalarField f(g), h(g), comb(g);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j) {
      f(i, j) = dist(rng);
      h(i, j) = dist(rng);
    }
  const double a = 1.7, b = -0.3;
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j) comb(i, j) = a * f(i, j) + b * h(i, j);
  CHECK(integrate(comb) ==
        doctest::Approx(a * integrate(f) + b * integrate(h)).epsilon(1e-12));
}

TEST_CASE("min/max over interior cells") {
  ScalarField f(unit_square(6));
  f.fill(3.0);
  CHECK(min_value(f) == 3.0);
  CHECK(max_value(f) == 3.0);
  f(2, 4) = -1.0;
  f.close();
  f(-1, 0) = -50.0;  // ghost values must not affect extrema
  CHECK(min_value(f) == -1.0);
  CHECK(max_value(f) == 3.0);
}

TEST_CASE("min of sampled cosine mode") {
  const GridSpec g = unit_square(8);
  ScalarField f(g);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) f(i, j) = std::cos(M_PI * g.cell_center(0, i));
  const double expected = std::cos(15.0 * M_PI / 16.0);
  CHECK(min_value(f) == doctest::Approx(expected).epsilon(1e-15));
  CHECK(min_value(f) == doctest::Approx(-0.98079).epsilon(1e-4));
}

TEST_CASE("NeumannZero closure mirrors across every boundary face") {
  const GridSpec g = GridSpec::make(2, {1.0, 1.0, 1.0}, {5, 7, 1});
  ScalarField f(g);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 7; ++j) f(i, j) = dist(rng);
  f.close();
  for (int j = -1; j <= 7; ++j) {
    const int jj = std::min(std::max(j, 0), 6);
    CHECK(f(-1, jj) == f(0, jj));
    CHECK(f(5, jj) == f(4, jj));
  }
  for (int i = 0; i < 5; ++i) {
    CHECK(f(i, -1) == f(i, 0));
    CHECK(f(i, 7) == f(i, 6));
  }
  // corner ghost is the mirror of the mirror
  CHECK(f(-1, -1) == f(0, 0));
}

TEST_CASE("Periodic closure wraps") {
  const GridSpec g = unit_square(4);
  ScalarField f(g, ScalarBC::Periodic);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) f(i, j) = 10.0 * i + j;
  f.close();
  CHECK(f(-1, 2) == f(3, 2));
  CHECK(f(4, 2) == f(0, 2));
  CHECK(f(1, -1) == f(1, 3));
  CHECK(f(1, 4) == f(1, 0));
}

TEST_CASE("3D closure and integrate") {
  const GridSpec g = GridSpec::make(3, {1.0, 1.0, 1.0}, {4, 4, 4});
  ScalarField f(g);
  f.fill(1.5);
  CHECK(integrate(f) == doctest::Approx(1.5).epsilon(1e-14));
  f.close();
  CHECK(f(0, 0, -1) == f(0, 0, 0));
  CHECK(f(0, 0, 4) == f(0, 0, 3));
}

TEST_CASE("MacVectorField closure pins boundary-normal faces after interior writes") {
  const GridSpec g = unit_square(6);
  MacVectorField u(g);
  u.fill(2.5);  // writes everything, including boundary faces
  u.close();
  for (int j = 0; j < 6; ++j) {
    CHECK(u.face(0, 0, j) == 0.0);
    CHECK(u.face(0, 6, j) == 0.0);
    CHECK(u.face(1, j, 0) == 0.0);
    CHECK(u.face(1, j, 6) == 0.0);
  }
  // tangential ghost reflects with a sign flip (wall value 0)
  for (int i = 1; i < 6; ++i) {
    CHECK(u.face(0, i, -1) == -u.face(0, i, 0));
    CHECK(u.face(0, i, 6) == -u.face(0, i, 5));
  }
}

TEST_CASE("MacVectorField periodic closure keeps a uniform field uniform") {
  const GridSpec g = unit_square(4);
  MacVectorField u(g, VectorBC::Periodic);
  u.fill(1.25);
  u.close();
  for (int i = 0; i <= 4; ++i)
    for (int j = -1; j <= 4; ++j) CHECK(u.face(0, i, j) == 1.25);
}

TEST_CASE("all_finite detects NaN") {
  ScalarField f(unit_square(4));
  CHECK(all_finite(f));
  f(1, 1) = std::nan("");
  CHECK(!all_finite(f));
  MacVectorField u(unit_square(4));
  CHECK(all_finite(u));
  u.face(1, 2, 3) = std::numeric_limits<double>::infinity();
  CHECK(!all_finite(u));
}
