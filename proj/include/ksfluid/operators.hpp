// Discrete differential operators on the staggered grid: Laplacian, face
// gradient, divergence, conservative advection and the singular chemotactic
// flux chi * n/c * grad c.
#pragma once

#include "ksfluid/grid.hpp"

namespace ksfluid {

enum class AdvectionScheme { Upwind, Central };
enum class FaceMean { Harmonic, Arithmetic };

/// Per-axis face flux arrays (no ghost layer); boundary faces included.
class FluxField {
 public:
  FluxField() = default;
  explicit FluxField(const GridSpec& grid);

  const GridSpec& grid() const { return grid_; }
  double& flux(int axis, int i, int j, int k = 0) { return comp_[axis][index(axis, i, j, k)]; }
  double flux(int axis, int i, int j, int k = 0) const {
    return comp_[axis][index(axis, i, j, k)];
  }
  void fill(double v);
  /// this += s * other (same grid).
  void add_scaled(const FluxField& other, double s);

 private:
  std::size_t index(int axis, int i, int j, int k) const {
    const auto& s = size_[axis];
    return static_cast<std::size_t>((i * s[1] + j) * s[2] + k);
  }
  GridSpec grid_;
  std::array<std::array<int, 3>, 3> size_{{{1, 1, 1}, {1, 1, 1}, {1, 1, 1}}};
  std::array<std::vector<double>, 3> comp_;
};

/// Standard 2*dim+1 stencil. Closes f first; with NeumannZero the discrete
/// integral of the result telescopes to zero.
ScalarField laplacian(ScalarField& f);

/// Face value (f_E - f_W)/h per axis; exactly zero on boundary faces for
/// NeumannZero f.
FluxField gradient_to_faces(ScalarField& f);

/// Cell value sum_axis (F_E - F_W)/h.
ScalarField divergence(const FluxField& F);
ScalarField divergence(const MacVectorField& u);

/// Face flux u_face * f_face with f_face upwinded by sign(u_face) or averaged.
FluxField advective_flux(ScalarField& f, const MacVectorField& u, AdvectionScheme scheme);

/// Face flux chi * n_face * (c_E - c_W) / (h * c_face); n_face follows the
/// sign of the face drift (or the central average), c_face is the harmonic
/// (or arithmetic) mean of the neighbors. Throws SingularityError if any
/// c_face <= c_floor.
FluxField chemotactic_flux(ScalarField& n, ScalarField& c, double chi, FaceMean c_mean,
                           double c_floor, AdvectionScheme n_face = AdvectionScheme::Upwind);

/// Conservative central discretization of (u.grad)u on the staggered layout.
MacVectorField nonlinear_advection(MacVectorField& u);

/// Buoyancy forcing n * grad(phi) averaged/differenced onto faces, built with
/// the same face gradient as the projection so that constant-n forcings are
/// discrete gradients.
FluxField force_faces(ScalarField& n, ScalarField& phi);

/// Viscous Laplacian of each velocity component on its own face grid, using
/// the field's tangential ghost closure; boundary-normal faces get 0.
FluxField laplacian_faces(MacVectorField& u);

/// Max over faces of |u|.
double max_face_speed(const MacVectorField& u);

/// Max over interior faces of |c_E - c_W| / (h * c_face) with the given mean.
double max_drift_speed(ScalarField& c, FaceMean c_mean, double c_floor);

/// Pointwise L2-type dot product of face data: sum of products times cell
/// volume (boundary faces included; they carry zero for no-slip data).
double face_dot(const MacVectorField& a, const FluxField& b);
double face_dot(const MacVectorField& a, const MacVectorField& b);

}  // namespace ksfluid
