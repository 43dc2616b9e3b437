// Matrix-free preconditioned conjugate-gradient solvers for the implicit
// pieces: cell-centered Helmholtz (alpha I - beta Lap), the singular Neumann
// pressure Poisson problem, and the face-centered viscous Helmholtz solve.
#pragma once

#include <memory>
#include <vector>

#include "ksfluid/grid.hpp"
#include "ksfluid/operators.hpp"

namespace ksfluid {

enum class Preconditioner { Diagonal, Multigrid };

struct SolveOpts {
  double tol_inf = 1e-12;  // stop when ||b - A x||_inf <= tol_inf
  int max_iter = 20000;
  Preconditioner pc = Preconditioner::Diagonal;
};

struct SolveStats {
  int iterations = 0;
  double residual_inf = 0.0;
};

/// Solves (alpha I - beta Lap) x = b on cell-centered data with b's boundary
/// condition; alpha > 0. x carries the initial guess (warm start).
SolveStats helmholtz_cell_solve(ScalarField& x, const ScalarField& b, double alpha, double beta,
                                const SolveOpts& opts);

/// Solves the singular Neumann problem Lap x = b. The right-hand side is
/// mean-subtracted for compatibility and x is returned with zero mean.
SolveStats poisson_neumann_solve(ScalarField& x, const ScalarField& b, const SolveOpts& opts);

/// Solves (I - beta Lap) x = b per velocity component on the staggered faces
/// with the no-slip closure; boundary-normal faces stay exactly 0.
SolveStats helmholtz_face_solve(MacVectorField& x, const MacVectorField& b, double beta,
                                const SolveOpts& opts);

}  // namespace ksfluid
