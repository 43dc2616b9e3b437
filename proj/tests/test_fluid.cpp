#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "ksfluid/fluid.hpp"
#include "ksfluid/operators.hpp"

using namespace ksfluid;

namespace {

GridSpec unit_square(int n) { return GridSpec::make(2, {1.0, 1.0, 1.0}, {n, n, 1}); }

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

double max_div(MacVectorField& u) {
  ScalarField d = divergence(u);
  return std::max(std::abs(min_value(d)), std::abs(max_value(d)));
}

double max_face_diff(const MacVectorField& a, const MacVectorField& b) {
  const GridSpec& g = a.grid();
  double m = 0.0;
  for (int ax = 0; ax < g.dim; ++ax) {
    int ext[3];
    for (int c = 0; c < 3; ++c) ext[c] = (c == ax) ? g.cells[ax] + 1 : g.cells[c];
    for (int i = 0; i < ext[0]; ++i)
      for (int j = 0; j < ext[1]; ++j)
        for (int k = 0; k < ext[2]; ++k)
          m = std::max(m, std::abs(a.face(ax, i, j, k) - b.face(ax, i, j, k)));
  }
  return m;
}

}  // namespace

TEST_CASE("projection leaves a divergence-free field unchanged") {
  const GridSpec g = unit_square(16);
  MacVectorField u = stream_velocity(g, 7);
  MacVectorField u0 = u;
  ScalarField q(g);
  ProjectStats st = project(u, q, 0.01, 1e-12, 20000, Preconditioner::Diagonal);
  CHECK(st.div_inf <= 1e-12);
  CHECK(max_face_diff(u, u0) < 1e-9);
  CHECK(std::abs(max_value(q)) + std::abs(min_value(q)) < 1e-7);
}

TEST_CASE("projection annihilates pure gradients") {
  const GridSpec g = unit_square(16);
  ScalarField psi(g);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) psi(i, j) = dist(rng);
  FluxField gpsi = gradient_to_faces(psi);
  MacVectorField u(g);
  for (int i = 0; i <= 16; ++i)
    for (int j = 0; j < 16; ++j) u.face(0, i, j) = gpsi.flux(0, i, j);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j <= 16; ++j) u.face(1, i, j) = gpsi.flux(1, i, j);
  u.close();
  ScalarField q(g);
  project(u, q, 1.0, 1e-13, 20000, Preconditioner::Diagonal);
  CHECK(max_face_speed(u) < 1e-9);
}

TEST_CASE("projection reaches the divergence tolerance on random fields") {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int n : {12, 24}) {
    const GridSpec g = unit_square(n);
    MacVectorField u(g);
    for (int i = 1; i < n; ++i)
      for (int j = 0; j < n; ++j) u.face(0, i, j) = dist(rng);
    for (int i = 0; i < n; ++i)
      for (int j = 1; j < n; ++j) u.face(1, i, j) = dist(rng);
    u.close();
    ScalarField q(g);
    ProjectStats st = project(u, q, 0.005, 1e-11, 20000, Preconditioner::Diagonal);
    CHECK(st.div_inf <= 1e-11);
    CHECK(max_div(u) <= 1e-11);
    for (int j = 0; j < n; ++j) {
      CHECK(u.face(0, 0, j) == 0.0);
      CHECK(u.face(0, n, j) == 0.0);
    }
  }
}

TEST_CASE("3D projection") {
  const GridSpec g = GridSpec::make(3, {1.0, 1.0, 1.0}, {8, 8, 8});
  MacVectorField u(g);
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int i = 1; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      for (int k = 0; k < 8; ++k) u.face(0, i, j, k) = dist(rng);
  u.close();
  ScalarField q(g);
  ProjectStats st = project(u, q, 0.01, 1e-11, 20000, Preconditioner::Diagonal);
  CHECK(st.div_inf <= 1e-11);
}

TEST_CASE("constant n with linear phi: forcing is a discrete gradient, u stays zero") {
  const GridSpec g = unit_square(16);
  FluidState fs;
  fs.u = MacVectorField(g);
  fs.P = ScalarField(g);
  fs.poisson_tol = 1e-12;
  ScalarField n(g);
  n.fill(2.0);
  ScalarField phi(g);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j)
      phi(i, j) = 0.5 * g.cell_center(0, i) - 0.25 * g.cell_center(1, j);
  FluidStepOpts opts;
  ScalarField P_prev(g);
  for (int step = 0; step < 5; ++step) {
    fluid_step(fs, n, phi, 0, 0.01, opts);
    CHECK(max_face_speed(fs.u) < 1e-9);
    CHECK(std::abs(integrate(fs.P)) < 1e-10);  // zero-mean gauge
    if (step > 0) {
      double dP = 0.0;
      for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) dP = std::max(dP, std::abs(fs.P(i, j) - P_prev(i, j)));
      CHECK(dP < 1e-9);  // stationary pressure
    }
    P_prev = fs.P;
  }
}

TEST_CASE("constant phi exerts no force") {
  const GridSpec g = unit_square(12);
  FluidState fs;
  fs.u = MacVectorField(g);
  fs.P = ScalarField(g);
  ScalarField n(g);
  n.fill(1.3);
  ScalarField phi(g);
  phi.fill(7.0);
  FluidStepOpts opts;
  fluid_step(fs, n, phi, 0, 0.01, opts);
  CHECK(max_face_speed(fs.u) < 1e-11);
}

TEST_CASE("unforced viscous flow dissipates kinetic energy") {
  const GridSpec g = unit_square(16);
  FluidState fs;
  fs.u = stream_velocity(g, 23, 0.5);
  fs.P = ScalarField(g);
  fs.poisson_tol = 1e-12;
  ScalarField n(g), phi(g);  // n = 0, phi = 0
  FluidStepOpts opts;
  double prev = face_dot(fs.u, fs.u);
  CHECK(prev > 0.0);
  for (int step = 0; step < 20; ++step) {
    fluid_step(fs, n, phi, 1, 0.005, opts);
    const double now = face_dot(fs.u, fs.u);
    CHECK(now <= prev * (1.0 + 1e-12));
    prev = now;
  }
}

TEST_CASE("kappa=1 is rejected in 3D") {
  const GridSpec g = GridSpec::make(3, {1.0, 1.0, 1.0}, {4, 4, 4});
  FluidState fs;
  fs.u = MacVectorField(g);
  fs.P = ScalarField(g);
  ScalarField n(g), phi(g);
  FluidStepOpts opts;
  CHECK_THROWS_AS(fluid_step(fs, n, phi, 1, 0.01, opts), ConfigError);
}

TEST_CASE("post-step divergence stays within tolerance with the convective term") {
  const GridSpec g = unit_square(16);
  FluidState fs;
  fs.u = stream_velocity(g, 29, 1.0);
  fs.P = ScalarField(g);
  fs.poisson_tol = 1e-11;
  ScalarField n(g);
  n.fill(1.0);
  ScalarField phi(g);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) phi(i, j) = -0.3 * g.cell_center(1, j);
  FluidStepOpts opts;
  for (int step = 0; step < 10; ++step) {
    ProjectStats st = fluid_step(fs, n, phi, 1, 0.004, opts);
    CHECK(st.div_inf <= 1e-11);
    CHECK(max_div(fs.u) <= 1e-11);
  }
}
