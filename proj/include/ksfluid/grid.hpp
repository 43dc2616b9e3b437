// Structured grid, cell-centered scalar fields and MAC-staggered vector
// fields, with ghost-layer boundary closures.
#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "ksfluid/errors.hpp"

namespace ksfluid {

enum class ScalarBC { NeumannZero, Periodic };
enum class VectorBC { NoSlip, Periodic };

/// Uniform rectangular grid. Axes >= dim are collapsed (1 cell, unit extent).
struct GridSpec {
  int dim = 2;
  std::array<double, 3> extent{1.0, 1.0, 1.0};
  std::array<int, 3> cells{1, 1, 1};
  std::array<double, 3> h{1.0, 1.0, 1.0};

  static GridSpec make(int dim, std::array<double, 3> extent, std::array<int, 3> cells);

  long cell_count() const {
    return static_cast<long>(cells[0]) * cells[1] * cells[2];
  }
  double cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < dim; ++a) v *= h[a];
    return v;
  }
  double min_h() const {
    double m = h[0];
    for (int a = 1; a < dim; ++a) m = m < h[a] ? m : h[a];
    return m;
  }
  /// Coordinate of the cell center with index idx along `axis`.
  double cell_center(int axis, int idx) const { return (idx + 0.5) * h[axis]; }
  /// Coordinate of face `idx` (0..cells[axis]) along `axis`.
  double face_coord(int axis, int idx) const { return idx * h[axis]; }

  bool operator==(const GridSpec&) const = default;
};

/// Cell-centered grid function with a one-cell ghost layer per active axis.
/// Interior indices run 0..cells[a]-1; ghosts live at -1 and cells[a].
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const GridSpec& grid, ScalarBC bc = ScalarBC::NeumannZero,
                       double value = 0.0);

  const GridSpec& grid() const { return grid_; }
  ScalarBC bc() const { return bc_; }
  void set_bc(ScalarBC bc) { bc_ = bc; }

  double& operator()(int i, int j, int k = 0) { return data_[index(i, j, k)]; }
  double operator()(int i, int j, int k = 0) const { return data_[index(i, j, k)]; }

  /// Fill ghost cells from the interior according to the boundary condition.
  /// NeumannZero mirrors (ghost = adjacent interior value), Periodic wraps.
  void close();

  void fill(double v);

  bool operator==(const ScalarField&) const = default;

 private:
  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(((i + ghost_[0]) * size_[1] + (j + ghost_[1])) * size_[2] +
                                    (k + ghost_[2]));
  }
  GridSpec grid_;
  ScalarBC bc_ = ScalarBC::NeumannZero;
  std::array<int, 3> size_{1, 1, 1};
  std::array<int, 3> ghost_{0, 0, 0};
  std::vector<double> data_;
};

/// MAC-staggered vector field: component `a` lives on faces normal to axis
/// `a` (face index 0..cells[a] along that axis) with one ghost layer in the
/// tangential directions. The NoSlip closure pins boundary-normal faces to 0
/// and reflects tangential ghosts with a sign flip so the wall value is 0.
class MacVectorField {
 public:
  MacVectorField() = default;
  explicit MacVectorField(const GridSpec& grid, VectorBC bc = VectorBC::NoSlip);

  const GridSpec& grid() const { return grid_; }
  VectorBC bc() const { return bc_; }

  double& face(int axis, int i, int j, int k = 0) { return comp_[axis][index(axis, i, j, k)]; }
  double face(int axis, int i, int j, int k = 0) const {
    return comp_[axis][index(axis, i, j, k)];
  }

  /// Number of faces along the component's own axis (cells+1).
  int face_count(int axis) const { return grid_.cells[axis] + 1; }

  void close();
  void fill(double v);

  bool operator==(const MacVectorField&) const = default;

 private:
  std::size_t index(int axis, int i, int j, int k) const {
    const auto& s = size_[axis];
    const auto& g = ghost_[axis];
    return static_cast<std::size_t>(((i + g[0]) * s[1] + (j + g[1])) * s[2] + (k + g[2]));
  }
  GridSpec grid_;
  VectorBC bc_ = VectorBC::NoSlip;
  std::array<std::array<int, 3>, 3> size_{{{1, 1, 1}, {1, 1, 1}, {1, 1, 1}}};
  std::array<std::array<int, 3>, 3> ghost_{{{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}};
  std::array<std::vector<double>, 3> comp_;
};

/// Midpoint-rule integral over the interior cells.
double integrate(const ScalarField& f);
double min_value(const ScalarField& f);
double max_value(const ScalarField& f);
bool all_finite(const ScalarField& f);
bool all_finite(const MacVectorField& u);

}  // namespace ksfluid
