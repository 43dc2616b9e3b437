#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "ksfluid/operators.hpp"

using namespace ksfluid;

namespace {

GridSpec unit_square(int n) { return GridSpec::make(2, {1.0, 1.0, 1.0}, {n, n, 1}); }

ScalarField random_field(const GridSpec& g, unsigned seed, double lo = -1.0, double hi = 1.0) {
  ScalarField f(g);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  for (int i = 0; i < g.cells[0]; ++i)
    for (int j = 0; j < g.cells[1]; ++j)
      for (int k = 0; k < g.cells[2]; ++k) f(i, j, k) = dist(rng);
  return f;
}

// Discretely divergence-free velocity with zero boundary-normal faces, built
// as the curl of a corner stream function vanishing on the boundary ring.
MacVectorField stream_velocity(const GridSpec& g, unsigned seed, double amp = 1.0) {
  const int nx = g.cells[0], ny = g.cells[1];
  std::vector<double> psi(static_cast<std::size_t>(nx + 1) * (ny + 1), 0.0);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-amp, amp);
  auto at = [&](int i, int j) -> double& {
    return psi[static_cast<std::size_t>(i) * (ny + 1) + j];
  };
  for (int i = 1; i < nx; ++i)
    for (int j = 1; j < ny; ++j) at(i, j) = dist(rng);
  MacVectorField u(g);
  for (int i = 0; i <= nx; ++i)
    for (int j = 0; j < ny; ++j) u.face(0, i, j) = (at(i, j + 1) - at(i, j)) / g.h[1];
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j <= ny; ++j) u.face(1, i, j) = -(at(i + 1, j) - at(i, j)) / g.h[0];
  u.close();
  return u;
}

double max_abs(const ScalarField& f) {
  return std::max(std::abs(min_value(f)), std::abs(max_value(f)));
}

}  // namespace

TEST_CASE("laplacian of a constant vanishes") {
  ScalarField f(unit_square(8));
  f.fill(4.2);
  ScalarField lap = laplacian(f);
  CHECK(max_abs(lap) == 0.0);
}

TEST_CASE("laplacian acts on the Neumann cosine mode with the discrete eigenvalue") {
  // lambda_h = -(2/h^2)(1 - cos(pi h)); mirror ghosts are exact for this mode.
  for (int n : {4, 8}) {
    const GridSpec g = unit_square(n);
    ScalarField f(g);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) f(i, j) = std::cos(M_PI * g.cell_center(0, i));
    const double h = g.h[0];
    const double lambda = -(2.0 / (h * h)) * (1.0 - std::cos(M_PI * h));
    ScalarField lap = laplacian(f);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        CHECK(lap(i, j) == doctest::Approx(lambda * f(i, j)).epsilon(1e-12));
    if (n == 4) CHECK(lambda == doctest::Approx(-9.37258300203048).epsilon(1e-12));
  }
}

TEST_CASE("discrete eigenvalue converges to -pi^2 at second order") {
  double prev_err = 0.0;
  for (int level = 0; level < 3; ++level) {
    const int n = 8 << level;
    const double h = 1.0 / n;
    const double lambda = -(2.0 / (h * h)) * (1.0 - std::cos(M_PI * h));
    const double err = std::abs(lambda + M_PI * M_PI);
    if (level > 0) {
      const double ratio = prev_err / err;
      CHECK(ratio > 3.8);
      CHECK(ratio < 4.2);
    }
    prev_err = err;
  }
}

TEST_CASE("laplacian integrates to zero with NeumannZero") {
  const GridSpec g = unit_square(16);
  ScalarField f = random_field(g, 11);
  ScalarField lap = laplacian(f);
  CHECK(std::abs(integrate(lap)) < 1e-11);
}

TEST_CASE("gradient_to_faces: constants, linears, boundary faces") {
  const GridSpec g = unit_square(4);
  ScalarField c(g);
  c.fill(3.0);
  FluxField gc = gradient_to_faces(c);
  for (int i = 0; i <= 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(gc.flux(0, i, j) == 0.0);

  ScalarField f(g);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) f(i, j) = g.cell_center(0, i);
  FluxField gf = gradient_to_faces(f);
  for (int i = 1; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      CHECK(gf.flux(0, i, j) == doctest::Approx(1.0).epsilon(1e-13));
  // Neumann mirror makes boundary faces exactly zero.
  for (int j = 0; j < 4; ++j) {
    CHECK(gf.flux(0, 0, j) == 0.0);
    CHECK(gf.flux(0, 4, j) == 0.0);
    CHECK(gf.flux(1, j, 0) == 0.0);
    CHECK(gf.flux(1, j, 4) == 0.0);
  }
}

TEST_CASE("divergence of gradient equals laplacian bitwise") {
  const GridSpec g = unit_square(9);
  ScalarField f = random_field(g, 23);
  ScalarField lhs = divergence(gradient_to_faces(f));
  ScalarField rhs = laplacian(f);
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j) CHECK(lhs(i, j) == rhs(i, j));
}

TEST_CASE("divergence of zero flux is zero; zero-boundary flux integrates to zero") {
  const GridSpec g = unit_square(8);
  FluxField F(g);
  CHECK(max_abs(divergence(F)) == 0.0);

  ScalarField f = random_field(g, 5, 0.5, 2.0);
  MacVectorField u = stream_velocity(g, 17);
  FluxField adv = advective_flux(f, u, AdvectionScheme::Upwind);
  CHECK(std::abs(integrate(divergence(adv))) < 1e-11);
}

TEST_CASE("advective flux: zero velocity, constant field, conservation") {
  const GridSpec g = unit_square(8);
  ScalarField f = random_field(g, 29, 0.0, 3.0);
  MacVectorField zero(g);
  FluxField adv0 = advective_flux(f, zero, AdvectionScheme::Upwind);
  for (int i = 0; i <= 8; ++i)
    for (int j = 0; j < 8; ++j) CHECK(adv0.flux(0, i, j) == 0.0);

  // Constant field with discretely div-free u: divergence vanishes exactly
  // (flux = c0 * u_face, so div = c0 * div u).
  ScalarField cf(g);
  cf.fill(2.0);
  MacVectorField u = stream_velocity(g, 31);
  FluxField adv = advective_flux(cf, u, AdvectionScheme::Upwind);
  ScalarField d = divergence(adv);
  CHECK(max_abs(d) < 1e-11);
}

TEST_CASE("upwind picks the donor side") {
  const GridSpec g = unit_square(4);
  ScalarField f(g);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) f(i, j) = i;  // increases with x
  MacVectorField u(g);
  u.face(0, 2, 1) = 1.0;  // flow to +x between cells 1 and 2
  FluxField adv = advective_flux(f, u, AdvectionScheme::Upwind);
  CHECK(adv.flux(0, 2, 1) == doctest::Approx(1.0));  // donor cell value is 1
  u.face(0, 2, 1) = -1.0;
  adv = advective_flux(f, u, AdvectionScheme::Upwind);
  CHECK(adv.flux(0, 2, 1) == doctest::Approx(-2.0));  // donor cell value is 2
  FluxField cen = advective_flux(f, u, AdvectionScheme::Central);
  CHECK(cen.flux(0, 2, 1) == doctest::Approx(-1.5));
}

TEST_CASE("chemotactic flux: hand-checked two-cell case") {
  // h=1, chi=1, n=(1,1), c=(1,2): drift (2-1)/1 = 1 > 0, upwind n_face = 1,
  // harmonic c_face = 4/3, flux = 1 * 1 * 1 / (4/3) = 0.75.
  const GridSpec g = GridSpec::make(2, {4.0, 4.0, 1.0}, {4, 4, 1});
  ScalarField n(g), c(g);
  n.fill(1.0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) c(i, j) = i < 2 ? 1.0 : 2.0;
  FluxField F = chemotactic_flux(n, c, 1.0, FaceMean::Harmonic, 1e-12);
  for (int j = 0; j < 4; ++j) CHECK(F.flux(0, 2, j) == doctest::Approx(0.75).epsilon(1e-14));
  // Arithmetic mean gives c_face = 3/2 and flux 2/3.
  FluxField Fa = chemotactic_flux(n, c, 1.0, FaceMean::Arithmetic, 1e-12);
  for (int j = 0; j < 4; ++j)
    CHECK(Fa.flux(0, 2, j) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("chemotactic flux vanishes for constant c or zero n") {
  const GridSpec g = unit_square(6);
  ScalarField n = random_field(g, 41, 0.0, 2.0);
  ScalarField c(g);
  c.fill(1.5);
  FluxField F = chemotactic_flux(n, c, 0.7, FaceMean::Harmonic, 1e-12);
  for (int i = 0; i <= 6; ++i)
    for (int j = 0; j < 6; ++j) CHECK(F.flux(0, i, j) == 0.0);

  ScalarField zero(g);
  ScalarField c2 = random_field(g, 43, 0.5, 2.0);
  FluxField F2 = chemotactic_flux(zero, c2, 0.7, FaceMean::Harmonic, 1e-12);
  for (int i = 0; i <= 6; ++i)
    for (int j = 0; j < 6; ++j) CHECK(F2.flux(0, i, j) == 0.0);
}

TEST_CASE("chemotactic flux is positively homogeneous in chi and n") {
  const GridSpec g = unit_square(6);
  ScalarField n = random_field(g, 47, 0.1, 2.0);
  ScalarField c = random_field(g, 53, 0.5, 2.5);
  const double lambda = 2.75;
  FluxField F1 = chemotactic_flux(n, c, 0.5, FaceMean::Harmonic, 1e-12);
  ScalarField ns(g);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) ns(i, j) = lambda * n(i, j);
  FluxField Fn = chemotactic_flux(ns, c, 0.5, FaceMean::Harmonic, 1e-12);
  FluxField Fchi = chemotactic_flux(n, c, lambda * 0.5, FaceMean::Harmonic, 1e-12);
  for (int a = 0; a < 2; ++a)
    for (int i = 0; i <= (a == 0 ? 6 : 5); ++i)
      for (int j = 0; j < (a == 0 ? 6 : 7); ++j) {
        CHECK(Fn.flux(a, i, j) ==
              doctest::Approx(lambda * F1.flux(a, i, j)).epsilon(1e-13));
        CHECK(Fchi.flux(a, i, j) ==
              doctest::Approx(lambda * F1.flux(a, i, j)).epsilon(1e-13));
      }
}

TEST_CASE("chemotactic flux conserves mass and respects the floor") {
  const GridSpec g = unit_square(8);
  ScalarField n = random_field(g, 59, 0.0, 2.0);
  ScalarField c = random_field(g, 61, 0.5, 2.5);
  FluxField F = chemotactic_flux(n, c, 0.5, FaceMean::Harmonic, 1e-12);
  CHECK(std::abs(integrate(divergence(F))) < 1e-11);

  ScalarField csing = random_field(g, 67, 0.5, 2.5);
  csing(3, 3) = 1e-13;
  CHECK_THROWS_AS(chemotactic_flux(n, csing, 0.5, FaceMean::Harmonic, 1e-12),
                  SingularityError);
}

TEST_CASE("nonlinear advection of zero and of a uniform periodic field") {
  const GridSpec g = unit_square(8);
  MacVectorField zero(g);
  MacVectorField a0 = nonlinear_advection(zero);
  for (int i = 0; i <= 8; ++i)
    for (int j = 0; j < 8; ++j) CHECK(a0.face(0, i, j) == 0.0);

  MacVectorField u(g, VectorBC::Periodic);
  u.fill(0.0);
  for (int i = 0; i <= 8; ++i)
    for (int j = -1; j <= 8; ++j) u.face(0, i, j) = 1.3;  // uniform (U, 0)
  MacVectorField adv = nonlinear_advection(u);
  for (int a = 0; a < 2; ++a)
    for (int i = 0; i <= (a == 0 ? 8 : 7); ++i)
      for (int j = 0; j < (a == 0 ? 8 : 9); ++j)
        CHECK(adv.face(a, i, j) == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("force_faces of constant n and linear phi is the constant gradient") {
  const GridSpec g = unit_square(8);
  ScalarField n(g);
  n.fill(2.0);
  ScalarField phi(g);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) phi(i, j) = 0.3 * g.cell_center(0, i) - 0.1 * g.cell_center(1, j);
  FluxField f = force_faces(n, phi);
  for (int i = 1; i < 8; ++i)
    for (int j = 0; j < 8; ++j) CHECK(f.flux(0, i, j) == doctest::Approx(0.6).epsilon(1e-12));
  for (int i = 0; i < 8; ++i)
    for (int j = 1; j < 8; ++j) CHECK(f.flux(1, i, j) == doctest::Approx(-0.2).epsilon(1e-12));
}

TEST_CASE("max_face_speed and max_drift_speed") {
  const GridSpec g = unit_square(8);
  MacVectorField u(g);
  u.face(0, 3, 3) = -2.5;
  CHECK(max_face_speed(u) == 2.5);

  ScalarField c(g);
  c.fill(1.0);
  CHECK(max_drift_speed(c, FaceMean::Harmonic, 1e-12) == 0.0);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) c(i, j) = i < 4 ? 1.0 : 2.0;
  // steepest face: |2-1| / (h * 4/3) with h = 1/8
  CHECK(max_drift_speed(c, FaceMean::Harmonic, 1e-12) ==
        doctest::Approx(8.0 * 3.0 / 4.0).epsilon(1e-13));
}

TEST_CASE("3D operators: laplacian identity and flux telescoping") {
  const GridSpec g = GridSpec::make(3, {1.0, 1.0, 1.0}, {6, 6, 6});
  ScalarField f(g);
  std::mt19937 rng(71);
  std::uniform_real_distribution<double> dist(0.2, 2.0);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      for (int k = 0; k < 6; ++k) f(i, j, k) = dist(rng);
  ScalarField lhs = divergence(gradient_to_faces(f));
  ScalarField rhs = laplacian(f);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      for (int k = 0; k < 6; ++k) CHECK(lhs(i, j, k) == rhs(i, j, k));
  CHECK(std::abs(integrate(rhs)) < 1e-11);
}
