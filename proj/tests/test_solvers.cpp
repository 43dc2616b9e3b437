#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "ksfluid/operators.hpp"
#include "ksfluid/solvers.hpp"

using namespace ksfluid;

namespace {

ScalarField random_field(const GridSpec& g, unsigned seed, ScalarBC bc = ScalarBC::NeumannZero) {
  ScalarField f(g, bc);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int i = 0; i < g.cells[0]; ++i)
    for (int j = 0; j < g.cells[1]; ++j)
      for (int k = 0; k < g.cells[2]; ++k) f(i, j, k) = dist(rng);
  return f;
}

double max_abs_diff(const ScalarField& a, const ScalarField& b) {
  const GridSpec& g = a.grid();
  double m = 0.0;
  for (int i = 0; i < g.cells[0]; ++i)
    for (int j = 0; j < g.cells[1]; ++j)
      for (int k = 0; k < g.cells[2]; ++k) m = std::max(m, std::abs(a(i, j, k) - b(i, j, k)));
  return m;
}

}  // namespace

TEST_CASE("cell Helmholtz solve recovers a manufactured solution (Neumann)") {
  const GridSpec g = GridSpec::make(2, {1.0, 1.0, 1.0}, {16, 12, 1});
  ScalarField x_true = random_field(g, 313);
  const double alpha = 1.05, beta = 0.01;
  ScalarField lap = laplacian(x_true);
  ScalarField b(g);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 12; ++j) b(i, j) = alpha * x_true(i, j) - beta * lap(i, j);
  ScalarField x(g);
  SolveOpts opts;
  opts.tol_inf = 1e-13;
  SolveStats st = helmholtz_cell_solve(x, b, alpha, beta, opts);
  CHECK(st.residual_inf <= 1e-13);
  CHECK(max_abs_diff(x, x_true) < 1e-11);
}

TEST_CASE("cell Helmholtz solve with periodic bc") {
  const GridSpec g = GridSpec::make(2, {1.0, 1.0, 1.0}, {8, 8, 1});
  ScalarField x_true = random_field(g, 17, ScalarBC::Periodic);
  const double alpha = 2.0, beta = 0.05;
  ScalarField lap = laplacian(x_true);
  ScalarField b(g, ScalarBC::Periodic);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) b(i, j) = alpha * x_true(i, j) - beta * lap(i, j);
  ScalarField x(g, ScalarBC::Periodic);
  SolveOpts opts;
  opts.tol_inf = 1e-13;
  helmholtz_cell_solve(x, b, alpha, beta, opts);
  CHECK(max_abs_diff(x, x_true) < 1e-11);
}

TEST_CASE("Poisson Neumann solve: residual target and zero mean") {
  const GridSpec g = GridSpec::make(2, {1.0, 1.0, 1.0}, {32, 32, 1});
  ScalarField b = random_field(g, 41);
  const double mean = integrate(b);  // |Omega| = 1
  for (int i = 0; i < 32; ++i)
    for (int j = 0; j < 32; ++j) b(i, j) -= mean;
  ScalarField x(g);
  SolveOpts opts;
  opts.tol_inf = 1e-11;
  SolveStats st = poisson_neumann_solve(x, b, opts);
  CHECK(st.residual_inf <= 1e-11);
  ScalarField lap = laplacian(x);
  CHECK(max_abs_diff(lap, b) < 1e-10);
  CHECK(std::abs(integrate(x)) < 1e-12);
}

TEST_CASE("Poisson solve handles an incompatible rhs by mean subtraction") {
  const GridSpec g = GridSpec::make(2, {1.0, 1.0, 1.0}, {16, 16, 1});
  ScalarField b = random_field(g, 43);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) b(i, j) += 0.7;
  ScalarField x(g);
  SolveOpts opts;
  opts.tol_inf = 1e-11;
  poisson_neumann_solve(x, b, opts);
  const double mean = integrate(b);
  ScalarField lap = laplacian(x);
  double worst = 0.0;
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j)
      worst = std::max(worst, std::abs(lap(i, j) - (b(i, j) - mean)));
  CHECK(worst < 1e-10);
}

TEST_CASE("multigrid preconditioner matches the diagonal one and converges faster") {
  const GridSpec g = GridSpec::make(2, {1.0, 1.0, 1.0}, {64, 64, 1});
  ScalarField b = random_field(g, 47);
  const double mean = integrate(b);
  for (int i = 0; i < 64; ++i)
    for (int j = 0; j < 64; ++j) b(i, j) -= mean;
  SolveOpts diag;
  diag.tol_inf = 1e-11;
  diag.pc = Preconditioner::Diagonal;
  SolveOpts mg;
  mg.tol_inf = 1e-11;
  mg.pc = Preconditioner::Multigrid;
  ScalarField xd(g), xm(g);
  SolveStats st_d = poisson_neumann_solve(xd, b, diag);
  SolveStats st_m = poisson_neumann_solve(xm, b, mg);
  CHECK(max_abs_diff(xd, xm) < 1e-9);
  CHECK(st_m.iterations < st_d.iterations);
  MESSAGE("poisson 64x64 iterations: diagonal=", st_d.iterations,
          " multigrid=", st_m.iterations);
}

TEST_CASE("3D Poisson solve") {
  const GridSpec g = GridSpec::make(3, {1.0, 1.0, 1.0}, {8, 8, 8});
  ScalarField b(g);
  std::mt19937 rng(53);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      for (int k = 0; k < 8; ++k) b(i, j, k) = dist(rng);
  const double mean = integrate(b);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      for (int k = 0; k < 8; ++k) b(i, j, k) -= mean;
  ScalarField x(g);
  SolveOpts opts;
  opts.tol_inf = 1e-11;
  poisson_neumann_solve(x, b, opts);
  ScalarField lap = laplacian(x);
  CHECK(max_abs_diff(lap, b) < 1e-10);
}

TEST_CASE("face Helmholtz solve recovers a manufactured velocity") {
  const GridSpec g = GridSpec::make(2, {1.0, 1.0, 1.0}, {12, 10, 1});
  MacVectorField x_true(g);
  std::mt19937 rng(59);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int i = 1; i < 12; ++i)
    for (int j = 0; j < 10; ++j) x_true.face(0, i, j) = dist(rng);
  for (int i = 0; i < 12; ++i)
    for (int j = 1; j < 10; ++j) x_true.face(1, i, j) = dist(rng);
  x_true.close();
  const double beta = 0.02;
  FluxField lap = laplacian_faces(x_true);
  MacVectorField b(g);
  for (int i = 1; i < 12; ++i)
    for (int j = 0; j < 10; ++j)
      b.face(0, i, j) = x_true.face(0, i, j) - beta * lap.flux(0, i, j);
  for (int i = 0; i < 12; ++i)
    for (int j = 1; j < 10; ++j)
      b.face(1, i, j) = x_true.face(1, i, j) - beta * lap.flux(1, i, j);
  b.close();
  MacVectorField x(g);
  SolveOpts opts;
  opts.tol_inf = 1e-13;
  helmholtz_face_solve(x, b, beta, opts);
  double worst = 0.0;
  for (int i = 0; i <= 12; ++i)
    for (int j = 0; j < 10; ++j)
      worst = std::max(worst, std::abs(x.face(0, i, j) - x_true.face(0, i, j)));
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j <= 10; ++j)
      worst = std::max(worst, std::abs(x.face(1, i, j) - x_true.face(1, i, j)));
  CHECK(worst < 1e-11);
  for (int j = 0; j < 10; ++j) {
    CHECK(x.face(0, 0, j) == 0.0);
    CHECK(x.face(0, 12, j) == 0.0);
  }
}

TEST_CASE("solver reports divergence when starved of iterations") {
  const GridSpec g = GridSpec::make(2, {1.0, 1.0, 1.0}, {32, 32, 1});
  ScalarField b = random_field(g, 61);
  const double mean = integrate(b);
  for (int i = 0; i < 32; ++i)
    for (int j = 0; j < 32; ++j) b(i, j) -= mean;
  ScalarField x(g);
  SolveOpts opts;
  opts.tol_inf = 1e-12;
  opts.max_iter = 2;
  CHECK_THROWS_AS(poisson_neumann_solve(x, b, opts), SolverDivergence);
}
