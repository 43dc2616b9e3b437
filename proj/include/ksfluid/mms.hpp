// Built-in manufactured solution for convergence studies (2D). The fields
// satisfy the grid closures exactly: n and c are even about every wall
// (Neumann mirror is exact) and the stream-function velocity is odd about the
// tangential walls (the no-slip ghost reflection is exact), so boundary
// handling does not pollute the measured orders.
#pragma once

#include <array>

#include "ksfluid/grid.hpp"
#include "ksfluid/operators.hpp"

namespace ksfluid {

struct MmsCase {
  double n(double x, double y, double t) const;
  double c(double x, double y, double t) const;
  double u(int axis, double x, double y, double t) const;
  std::array<double, 2> grad_phi() const { return {0.1, 0.1}; }

  double source_n(double x, double y, double t, double chi) const;
  double source_c(double x, double y, double t) const;
  double source_u(int axis, double x, double y, double t, int kappa) const;

  /// Samples the exact fields at cell centers / face centers at time t.
  void sample_n(const GridSpec& g, double t, ScalarField& out) const;
  void sample_c(const GridSpec& g, double t, ScalarField& out) const;
  void sample_u(const GridSpec& g, double t, MacVectorField& out) const;

  /// Samples the per-equation sources at time t.
  void sample_source_n(const GridSpec& g, double t, double chi, ScalarField& out) const;
  void sample_source_c(const GridSpec& g, double t, ScalarField& out) const;
  void sample_source_u(const GridSpec& g, double t, int kappa, FluxField& out) const;
};

}  // namespace ksfluid
