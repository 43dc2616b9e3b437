#include "ksfluid/grid.hpp"

#include <cmath>
#include <limits>

namespace ksfluid {

GridSpec GridSpec::make(int dim, std::array<double, 3> extent, std::array<int, 3> cells) {
  if (dim != 2 && dim != 3) throw ConfigError("grid dim must be 2 or 3");
  GridSpec g;
  g.dim = dim;
  for (int a = 0; a < 3; ++a) {
    if (a < dim) {
      if (cells[a] < 4) throw ConfigError("grid cells must be >= 4 per axis");
      if (!(extent[a] > 0.0)) throw ConfigError("grid extent must be positive");
      g.extent[a] = extent[a];
      g.cells[a] = cells[a];
      g.h[a] = extent[a] / cells[a];
    } else {
      g.extent[a] = 1.0;
      g.cells[a] = 1;
      g.h[a] = 1.0;
    }
  }
  return g;
}

ScalarField::ScalarField(const GridSpec& grid, ScalarBC bc, double value)
    : grid_(grid), bc_(bc) {
  for (int a = 0; a < 3; ++a) {
    ghost_[a] = a < grid.dim ? 1 : 0;
    size_[a] = grid.cells[a] + 2 * ghost_[a];
  }
  data_.assign(static_cast<std::size_t>(size_[0]) * size_[1] * size_[2], value);
}

void ScalarField::fill(double v) { data_.assign(data_.size(), v); }

void ScalarField::close() {
  // Sweep axis by axis over the extended box so edge/corner ghosts end up
  // consistent (mirror of mirror).
  const auto& n = grid_.cells;
  for (int a = 0; a < grid_.dim; ++a) {
    int lo[3], hi[3];
    for (int b = 0; b < 3; ++b) {
      lo[b] = b < grid_.dim ? -1 : 0;
      hi[b] = b < grid_.dim ? n[b] : n[b] - 1;
    }
    lo[a] = 0;
    hi[a] = n[a] - 1;  // sweep the non-`a` directions over the extended range
    int idx[3];
    for (idx[0] = lo[0]; idx[0] <= hi[0]; ++idx[0])
      for (idx[1] = lo[1]; idx[1] <= hi[1]; ++idx[1])
        for (idx[2] = lo[2]; idx[2] <= hi[2]; ++idx[2]) {
          if (idx[a] != 0) continue;
          int gl[3] = {idx[0], idx[1], idx[2]};
          int gh[3] = {idx[0], idx[1], idx[2]};
          int sl[3] = {idx[0], idx[1], idx[2]};
          int sh[3] = {idx[0], idx[1], idx[2]};
          gl[a] = -1;
          gh[a] = n[a];
          if (bc_ == ScalarBC::NeumannZero) {
            sl[a] = 0;
            sh[a] = n[a] - 1;
          } else {  // Periodic
            sl[a] = n[a] - 1;
            sh[a] = 0;
          }
          (*this)(gl[0], gl[1], gl[2]) = (*this)(sl[0], sl[1], sl[2]);
          (*this)(gh[0], gh[1], gh[2]) = (*this)(sh[0], sh[1], sh[2]);
        }
  }
}

MacVectorField::MacVectorField(const GridSpec& grid, VectorBC bc) : grid_(grid), bc_(bc) {
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      if (b == a) {
        ghost_[a][b] = 0;
        size_[a][b] = a < grid.dim ? grid.cells[a] + 1 : 1;
      } else {
        ghost_[a][b] = b < grid.dim ? 1 : 0;
        size_[a][b] = grid.cells[b] + 2 * ghost_[a][b];
      }
    }
    comp_[a].assign(
        static_cast<std::size_t>(size_[a][0]) * size_[a][1] * size_[a][2], 0.0);
  }
}

void MacVectorField::fill(double v) {
  for (int a = 0; a < grid_.dim; ++a) comp_[a].assign(comp_[a].size(), v);
}

void MacVectorField::close() {
  const auto& n = grid_.cells;
  for (int a = 0; a < grid_.dim; ++a) {
    // Boundary-normal faces.
    if (bc_ == VectorBC::NoSlip) {
      int idx[3];
      int lo[3], hi[3];
      for (int b = 0; b < 3; ++b) {
        lo[b] = b == a ? 0 : 0;
        hi[b] = b == a ? 0 : n[b] - 1;
      }
      for (idx[0] = lo[0]; idx[0] <= hi[0]; ++idx[0])
        for (idx[1] = lo[1]; idx[1] <= hi[1]; ++idx[1])
          for (idx[2] = lo[2]; idx[2] <= hi[2]; ++idx[2]) {
            int f0[3] = {idx[0], idx[1], idx[2]};
            int f1[3] = {idx[0], idx[1], idx[2]};
            f0[a] = 0;
            f1[a] = n[a];
            face(a, f0[0], f0[1], f0[2]) = 0.0;
            face(a, f1[0], f1[1], f1[2]) = 0.0;
          }
    } else {  // Periodic: face cells[a] aliases face 0
      int idx[3];
      for (idx[0] = 0; idx[0] <= (a == 0 ? 0 : n[0] - 1); ++idx[0])
        for (idx[1] = 0; idx[1] <= (a == 1 ? 0 : n[1] - 1); ++idx[1])
          for (idx[2] = 0; idx[2] <= (a == 2 ? 0 : n[2] - 1); ++idx[2]) {
            int f0[3] = {idx[0], idx[1], idx[2]};
            int f1[3] = {idx[0], idx[1], idx[2]};
            f0[a] = 0;
            f1[a] = n[a];
            face(a, f1[0], f1[1], f1[2]) = face(a, f0[0], f0[1], f0[2]);
          }
    }
    // Tangential ghosts, swept over the extended range of the remaining axes.
    for (int b = 0; b < grid_.dim; ++b) {
      if (b == a) continue;
      int lo[3], hi[3];
      for (int c = 0; c < 3; ++c) {
        if (c == a) {
          lo[c] = 0;
          hi[c] = n[a];
        } else if (c < grid_.dim) {
          lo[c] = -ghost_[a][c];
          hi[c] = n[c] - 1 + ghost_[a][c];
        } else {
          lo[c] = 0;
          hi[c] = 0;
        }
      }
      lo[b] = 0;
      hi[b] = 0;
      int idx[3];
      for (idx[0] = lo[0]; idx[0] <= hi[0]; ++idx[0])
        for (idx[1] = lo[1]; idx[1] <= hi[1]; ++idx[1])
          for (idx[2] = lo[2]; idx[2] <= hi[2]; ++idx[2]) {
            int gl[3] = {idx[0], idx[1], idx[2]};
            int gh[3] = {idx[0], idx[1], idx[2]};
            int sl[3] = {idx[0], idx[1], idx[2]};
            int sh[3] = {idx[0], idx[1], idx[2]};
            gl[b] = -1;
            gh[b] = n[b];
            if (bc_ == VectorBC::NoSlip) {
              sl[b] = 0;
              sh[b] = n[b] - 1;
              face(a, gl[0], gl[1], gl[2]) = -face(a, sl[0], sl[1], sl[2]);
              face(a, gh[0], gh[1], gh[2]) = -face(a, sh[0], sh[1], sh[2]);
            } else {
              sl[b] = n[b] - 1;
              sh[b] = 0;
              face(a, gl[0], gl[1], gl[2]) = face(a, sl[0], sl[1], sl[2]);
              face(a, gh[0], gh[1], gh[2]) = face(a, sh[0], sh[1], sh[2]);
            }
          }
    }
  }
}

double integrate(const ScalarField& f) {
  const auto& g = f.grid();
  double s = 0.0;
  for (int i = 0; i < g.cells[0]; ++i)
    for (int j = 0; j < g.cells[1]; ++j)
      for (int k = 0; k < g.cells[2]; ++k) s += f(i, j, k);
  return s * g.cell_volume();
}

double min_value(const ScalarField& f) {
  const auto& g = f.grid();
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < g.cells[0]; ++i)
    for (int j = 0; j < g.cells[1]; ++j)
      for (int k = 0; k < g.cells[2]; ++k) m = std::min(m, f(i, j, k));
  return m;
}

double max_value(const ScalarField& f) {
  const auto& g = f.grid();
  double m = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < g.cells[0]; ++i)
    for (int j = 0; j < g.cells[1]; ++j)
      for (int k = 0; k < g.cells[2]; ++k) m = std::max(m, f(i, j, k));
  return m;
}

bool all_finite(const ScalarField& f) {
  const auto& g = f.grid();
  for (int i = 0; i < g.cells[0]; ++i)
    for (int j = 0; j < g.cells[1]; ++j)
      for (int k = 0; k < g.cells[2]; ++k)
        if (!std::isfinite(f(i, j, k))) return false;
  return true;
}

bool all_finite(const MacVectorField& u) {
  const auto& g = u.grid();
  for (int a = 0; a < g.dim; ++a) {
    for (int i = 0; i < (a == 0 ? g.cells[0] + 1 : g.cells[0]); ++i)
      for (int j = 0; j < (a == 1 ? g.cells[1] + 1 : g.cells[1]); ++j)
        for (int k = 0; k < (a == 2 ? g.cells[2] + 1 : g.cells[2]); ++k)
          if (!std::isfinite(u.face(a, i, j, k))) return false;
  }
  return true;
}

}  // namespace ksfluid
