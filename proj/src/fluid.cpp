#include "ksfluid/fluid.hpp"

#include <cmath>

namespace ksfluid {

ProjectStats project(MacVectorField& u_star, ScalarField& q, double dt, double poisson_tol,
                     int poisson_max_iter, Preconditioner pc) {
  const GridSpec& g = u_star.grid();
  u_star.close();
  ScalarField rhs = divergence(u_star);
  for (int i = 0; i < g.cells[0]; ++i)
    for (int j = 0; j < g.cells[1]; ++j)
      for (int k = 0; k < g.cells[2]; ++k) rhs(i, j, k) /= dt;

  SolveOpts opts;
  opts.tol_inf = poisson_tol / dt;
  opts.max_iter = poisson_max_iter;
  opts.pc = pc;
  ProjectStats st;
  st.poisson = poisson_neumann_solve(q, rhs, opts);

  FluxField gq = gradient_to_faces(q);
  for (int a = 0; a < g.dim; ++a) {
    int ext[3];
    for (int b = 0; b < 3; ++b) ext[b] = (b == a) ? g.cells[a] + 1 : g.cells[b];
    for (int i = 0; i < ext[0]; ++i)
      for (int j = 0; j < ext[1]; ++j)
        for (int k = 0; k < ext[2]; ++k)
          u_star.face(a, i, j, k) -= dt * gq.flux(a, i, j, k);
  }
  u_star.close();

  ScalarField div_after = divergence(u_star);
  st.div_inf = std::max(std::abs(min_value(div_after)), std::abs(max_value(div_after)));
  return st;
}

ProjectStats fluid_step(FluidState& fs, ScalarField& n, ScalarField& phi, int kappa, double dt,
                        const FluidStepOpts& opts, const FluxField* extra) {
  const GridSpec& g = fs.u.grid();
  if (kappa != 0 && kappa != 1) throw ConfigError("kappa must be 0 or 1");
  if (kappa == 1 && g.dim == 3)
    throw ConfigError("kappa=1 requires dim=2; use kappa=0 (Stokes) in 3D");

  FluxField force = force_faces(n, phi);
  if (extra) force.add_scaled(*extra, 1.0);

  MacVectorField adv(g);
  if (kappa == 1) adv = nonlinear_advection(fs.u);

  // Implicit viscous + explicit convective predictor. The forcing is added
  // after the Helmholtz solve: the face Laplacian does not commute with the
  // face gradient at walls, so a forcing passed through the solve would stop
  // being a discrete gradient and the projection could no longer annihilate
  // the constant-n case exactly.
  MacVectorField rhs(g);
  for (int a = 0; a < g.dim; ++a) {
    int ext[3];
    for (int b = 0; b < 3; ++b) ext[b] = (b == a) ? g.cells[a] + 1 : g.cells[b];
    for (int i = 0; i < ext[0]; ++i)
      for (int j = 0; j < ext[1]; ++j)
        for (int k = 0; k < ext[2]; ++k) {
          const int own = a == 0 ? i : (a == 1 ? j : k);
          if (own == 0 || own == g.cells[a]) {
            rhs.face(a, i, j, k) = 0.0;
            continue;
          }
          rhs.face(a, i, j, k) =
              fs.u.face(a, i, j, k) - dt * kappa * adv.face(a, i, j, k);
        }
  }
  rhs.close();

  // Warm-start the viscous solve from the current velocity.
  SolveOpts hopts;
  hopts.tol_inf = opts.helmholtz_tol;
  hopts.max_iter = opts.helmholtz_max_iter;
  hopts.pc = Preconditioner::Diagonal;
  helmholtz_face_solve(fs.u, rhs, dt, hopts);

  // Interior faces only; boundary-normal faces stay pinned at 0.
  for (int a = 0; a < g.dim; ++a) {
    for (int i = (a == 0 ? 1 : 0); i < g.cells[0]; ++i)
      for (int j = (a == 1 ? 1 : 0); j < g.cells[1]; ++j)
        for (int k = (a == 2 ? 1 : 0); k < g.cells[2]; ++k)
          fs.u.face(a, i, j, k) += dt * force.flux(a, i, j, k);
  }
  fs.u.close();

  return project(fs.u, fs.P, dt, fs.poisson_tol, fs.poisson_max_iter, opts.pc);
}

}  // namespace ksfluid
