// Pressure-projection advance of the fluid subsystem: implicit unit-viscosity
// diffusion, optional convective term, buoyancy forcing n grad(phi), then a
// discrete Helmholtz projection onto the divergence-free space.
#pragma once

#include "ksfluid/grid.hpp"
#include "ksfluid/operators.hpp"
#include "ksfluid/solvers.hpp"

namespace ksfluid {

struct FluidState {
  MacVectorField u;
  ScalarField P;  // zero-mean pressure gauge
  double poisson_tol = 1e-10;
  int poisson_max_iter = 20000;
};

struct ProjectStats {
  SolveStats poisson;
  double div_inf = 0.0;
};

/// Solves Lap q = div(u_star)/dt with Neumann data, subtracts dt * grad(q)
/// from u_star in place, and returns the zero-mean q through `q`. Afterwards
/// ||div(u_star)||_inf <= poisson_tol. `q` carries the initial guess.
ProjectStats project(MacVectorField& u_star, ScalarField& q, double dt, double poisson_tol,
                     int poisson_max_iter, Preconditioner pc);

struct FluidStepOpts {
  Preconditioner pc = Preconditioner::Diagonal;
  double helmholtz_tol = 1e-12;
  int helmholtz_max_iter = 20000;
};

/// One projection step:
///   (I - dt Lap) u** = u - dt kappa (u.grad)u,
///   u* = u** + dt (n grad(phi) + extra),
///   (u, P) = project(u*).
/// The forcing is added after the viscous solve so discrete-gradient forcings
/// reach the projection intact and are annihilated exactly. `extra` (may be
/// null) adds a face source, used by manufactured-solution runs. Throws
/// ConfigError for kappa=1 in 3D.
ProjectStats fluid_step(FluidState& fs, ScalarField& n, ScalarField& phi, int kappa, double dt,
                        const FluidStepOpts& opts, const FluxField* extra = nullptr);

}  // namespace ksfluid
