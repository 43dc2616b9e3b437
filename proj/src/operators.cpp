#include "ksfluid/operators.hpp"

#include <cmath>

namespace ksfluid {

namespace {

inline int wrap(int i, int n) {
  int m = i % n;
  return m < 0 ? m + n : m;
}

inline double face_value(const FluxField& F, int a, const int id[3]) {
  return F.flux(a, id[0], id[1], id[2]);
}
inline double face_value(const MacVectorField& F, int a, const int id[3]) {
  return F.face(a, id[0], id[1], id[2]);
}

}  // namespace

FluxField::FluxField(const GridSpec& grid) : grid_(grid) {
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b)
      size_[a][b] = (b == a && a < grid.dim) ? grid.cells[a] + 1 : grid.cells[b];
    comp_[a].assign(
        static_cast<std::size_t>(size_[a][0]) * size_[a][1] * size_[a][2], 0.0);
  }
}

void FluxField::fill(double v) {
  for (auto& c : comp_) c.assign(c.size(), v);
}

void FluxField::add_scaled(const FluxField& other, double s) {
  for (int a = 0; a < 3; ++a)
    for (std::size_t i = 0; i < comp_[a].size(); ++i) comp_[a][i] += s * other.comp_[a][i];
}

ScalarField laplacian(ScalarField& f) {
  f.close();
  const GridSpec& g = f.grid();
  ScalarField out(g, f.bc());
  // Evaluated as the divergence of the face gradient, term for term, so the
  // composition identity divergence(gradient_to_faces(f)) == laplacian(f)
  // holds bitwise.
  for (int i = 0; i < g.cells[0]; ++i)
    for (int j = 0; j < g.cells[1]; ++j)
      for (int k = 0; k < g.cells[2]; ++k) {
        double acc = 0.0;
        const double fc = f(i, j, k);
        int id[3] = {i, j, k};
        for (int a = 0; a < g.dim; ++a) {
          int lo[3] = {id[0], id[1], id[2]};
          int hi[3] = {id[0], id[1], id[2]};
          lo[a] -= 1;
          hi[a] += 1;
          const double ge = (f(hi[0], hi[1], hi[2]) - fc) / g.h[a];
          const double gw = (fc - f(lo[0], lo[1], lo[2])) / g.h[a];
          acc += (ge - gw) / g.h[a];
        }
        out(i, j, k) = acc;
      }
  return out;
}

FluxField gradient_to_faces(ScalarField& f) {
  f.close();
  const GridSpec& g = f.grid();
  FluxField out(g);
  for (int a = 0; a < g.dim; ++a) {
    int ext[3];
    for (int b = 0; b < 3; ++b) ext[b] = (b == a) ? g.cells[a] + 1 : g.cells[b];
    int id[3];
    for (id[0] = 0; id[0] < ext[0]; ++id[0])
      for (id[1] = 0; id[1] < ext[1]; ++id[1])
        for (id[2] = 0; id[2] < ext[2]; ++id[2]) {
          int w[3] = {id[0], id[1], id[2]};
          w[a] -= 1;
          out.flux(a, id[0], id[1], id[2]) =
              (f(id[0], id[1], id[2]) - f(w[0], w[1], w[2])) / g.h[a];
        }
  }
  return out;
}

namespace {

template <class FaceData>
ScalarField divergence_impl(const FaceData& F, const GridSpec& g) {
  ScalarField out(g);
  for (int i = 0; i < g.cells[0]; ++i)
    for (int j = 0; j < g.cells[1]; ++j)
      for (int k = 0; k < g.cells[2]; ++k) {
        double acc = 0.0;
        int id[3] = {i, j, k};
        for (int a = 0; a < g.dim; ++a) {
          int e[3] = {id[0], id[1], id[2]};
          e[a] += 1;
          acc += (face_value(F, a, e) - face_value(F, a, id)) / g.h[a];
        }
        out(i, j, k) = acc;
      }
  return out;
}

}  // namespace

ScalarField divergence(const FluxField& F) { return divergence_impl(F, F.grid()); }
ScalarField divergence(const MacVectorField& u) { return divergence_impl(u, u.grid()); }

FluxField advective_flux(ScalarField& f, const MacVectorField& u, AdvectionScheme scheme) {
  f.close();
  const GridSpec& g = f.grid();
  FluxField out(g);
  for (int a = 0; a < g.dim; ++a) {
    int ext[3];
    for (int b = 0; b < 3; ++b) ext[b] = (b == a) ? g.cells[a] + 1 : g.cells[b];
    int id[3];
    for (id[0] = 0; id[0] < ext[0]; ++id[0])
      for (id[1] = 0; id[1] < ext[1]; ++id[1])
        for (id[2] = 0; id[2] < ext[2]; ++id[2]) {
          int w[3] = {id[0], id[1], id[2]};
          w[a] -= 1;
          const double uf = u.face(a, id[0], id[1], id[2]);
          const double fw = f(w[0], w[1], w[2]);
          const double fe = f(id[0], id[1], id[2]);
          double ff;
          if (scheme == AdvectionScheme::Upwind) {
            ff = uf > 0.0 ? fw : (uf < 0.0 ? fe : 0.5 * (fw + fe));
          } else {
            ff = 0.5 * (fw + fe);
          }
          out.flux(a, id[0], id[1], id[2]) = uf * ff;
        }
  }
  return out;
}

FluxField chemotactic_flux(ScalarField& n, ScalarField& c, double chi, FaceMean c_mean,
                           double c_floor, AdvectionScheme n_face) {
  n.close();
  c.close();
  const GridSpec& g = n.grid();
  FluxField out(g);
  for (int a = 0; a < g.dim; ++a) {
    int ext[3];
    for (int b = 0; b < 3; ++b) ext[b] = (b == a) ? g.cells[a] + 1 : g.cells[b];
    int id[3];
    for (id[0] = 0; id[0] < ext[0]; ++id[0])
      for (id[1] = 0; id[1] < ext[1]; ++id[1])
        for (id[2] = 0; id[2] < ext[2]; ++id[2]) {
          int w[3] = {id[0], id[1], id[2]};
          w[a] -= 1;
          const double cw = c(w[0], w[1], w[2]);
          const double ce = c(id[0], id[1], id[2]);
          const double cf = c_mean == FaceMean::Harmonic
                                ? 2.0 * cw * ce / (cw + ce)
                                : 0.5 * (cw + ce);
          if (!(cf > c_floor)) throw SingularityError("chemotactic face c below floor");
          const double drift = chi * (ce - cw) / (g.h[a] * cf);
          const double nw = n(w[0], w[1], w[2]);
          const double ne = n(id[0], id[1], id[2]);
          double nf;
          if (n_face == AdvectionScheme::Upwind) {
            nf = drift > 0.0 ? nw : (drift < 0.0 ? ne : 0.5 * (nw + ne));
          } else {
            nf = 0.5 * (nw + ne);
          }
          out.flux(a, id[0], id[1], id[2]) = nf * drift;
        }
  }
  return out;
}

MacVectorField nonlinear_advection(MacVectorField& u) {
  u.close();
  const GridSpec& g = u.grid();
  const bool periodic = u.bc() == VectorBC::Periodic;
  MacVectorField out(g, u.bc());

  // Component `a` face read with wrap-around along the own axis (periodic).
  auto uf = [&](int comp, int i, int j, int k) {
    if (periodic) {
      int id[3] = {i, j, k};
      id[comp] = wrap(id[comp], g.cells[comp]);
      return u.face(comp, id[0], id[1], id[2]);
    }
    return u.face(comp, i, j, k);
  };

  for (int a = 0; a < g.dim; ++a) {
    int ext[3];
    for (int b = 0; b < 3; ++b) ext[b] = (b == a) ? g.cells[a] + 1 : g.cells[b];
    int id[3];
    for (id[0] = 0; id[0] < ext[0]; ++id[0])
      for (id[1] = 0; id[1] < ext[1]; ++id[1])
        for (id[2] = 0; id[2] < ext[2]; ++id[2]) {
          if (!periodic && (id[a] == 0 || id[a] == g.cells[a])) {
            out.face(a, id[0], id[1], id[2]) = 0.0;
            continue;
          }
          double acc = 0.0;
          // d/dx_a of (cell average of u_a)^2 between the two adjacent cells.
          {
            auto cell_avg_sq = [&](int cell) {
              int lo[3] = {id[0], id[1], id[2]};
              int hi[3] = {id[0], id[1], id[2]};
              lo[a] = cell;
              hi[a] = cell + 1;
              const double m = 0.5 * (uf(a, lo[0], lo[1], lo[2]) + uf(a, hi[0], hi[1], hi[2]));
              return m * m;
            };
            acc += (cell_avg_sq(id[a]) - cell_avg_sq(id[a] - 1)) / g.h[a];
          }
          // d/dx_b of (corner average of u_b)(corner average of u_a).
          for (int b = 0; b < g.dim; ++b) {
            if (b == a) continue;
            auto corner_flux = [&](int bface) {
              // u_b averaged over the two cells sharing the a-face. The cell
              // indices along a stay within [-1, cells[a]], which the
              // tangential ghost layer of u_b covers for either closure.
              int cb0[3] = {id[0], id[1], id[2]};
              cb0[b] = bface;
              int cb1[3] = {cb0[0], cb0[1], cb0[2]};
              cb0[a] = id[a] - 1;
              cb1[a] = id[a];
              const double vb =
                  0.5 * (u.face(b, cb0[0], cb0[1], cb0[2]) + u.face(b, cb1[0], cb1[1], cb1[2]));
              // u_a averaged along b across the corner.
              int ca0[3] = {id[0], id[1], id[2]};
              int ca1[3] = {id[0], id[1], id[2]};
              ca0[b] = bface - 1;
              ca1[b] = bface;
              const double va =
                  0.5 * (uf(a, ca0[0], ca0[1], ca0[2]) + uf(a, ca1[0], ca1[1], ca1[2]));
              return vb * va;
            };
            acc += (corner_flux(id[b] + 1) - corner_flux(id[b])) / g.h[b];
          }
          out.face(a, id[0], id[1], id[2]) = acc;
        }
  }
  return out;
}

FluxField force_faces(ScalarField& n, ScalarField& phi) {
  n.close();
  phi.close();
  const GridSpec& g = n.grid();
  FluxField out(g);
  for (int a = 0; a < g.dim; ++a) {
    int ext[3];
    for (int b = 0; b < 3; ++b) ext[b] = (b == a) ? g.cells[a] + 1 : g.cells[b];
    int id[3];
    for (id[0] = 0; id[0] < ext[0]; ++id[0])
      for (id[1] = 0; id[1] < ext[1]; ++id[1])
        for (id[2] = 0; id[2] < ext[2]; ++id[2]) {
          int w[3] = {id[0], id[1], id[2]};
          w[a] -= 1;
          const double nf = 0.5 * (n(w[0], w[1], w[2]) + n(id[0], id[1], id[2]));
          const double gp = (phi(id[0], id[1], id[2]) - phi(w[0], w[1], w[2])) / g.h[a];
          out.flux(a, id[0], id[1], id[2]) = nf * gp;
        }
  }
  return out;
}

FluxField laplacian_faces(MacVectorField& u) {
  u.close();
  const GridSpec& g = u.grid();
  const bool periodic = u.bc() == VectorBC::Periodic;
  FluxField out(g);
  auto uf = [&](int comp, int i, int j, int k) {
    if (periodic) {
      int id[3] = {i, j, k};
      id[comp] = wrap(id[comp], g.cells[comp]);
      return u.face(comp, id[0], id[1], id[2]);
    }
    return u.face(comp, i, j, k);
  };
  for (int a = 0; a < g.dim; ++a) {
    int ext[3];
    for (int b = 0; b < 3; ++b) ext[b] = (b == a) ? g.cells[a] + 1 : g.cells[b];
    int id[3];
    for (id[0] = 0; id[0] < ext[0]; ++id[0])
      for (id[1] = 0; id[1] < ext[1]; ++id[1])
        for (id[2] = 0; id[2] < ext[2]; ++id[2]) {
          if (!periodic && (id[a] == 0 || id[a] == g.cells[a])) {
            out.flux(a, id[0], id[1], id[2]) = 0.0;
            continue;
          }
          const double fc = u.face(a, id[0], id[1], id[2]);
          double acc = 0.0;
          for (int b = 0; b < g.dim; ++b) {
            int lo[3] = {id[0], id[1], id[2]};
            int hi[3] = {id[0], id[1], id[2]};
            lo[b] -= 1;
            hi[b] += 1;
            const double vlo = (b == a) ? uf(a, lo[0], lo[1], lo[2])
                                        : u.face(a, lo[0], lo[1], lo[2]);
            const double vhi = (b == a) ? uf(a, hi[0], hi[1], hi[2])
                                        : u.face(a, hi[0], hi[1], hi[2]);
            acc += (vlo - 2.0 * fc + vhi) / (g.h[b] * g.h[b]);
          }
          out.flux(a, id[0], id[1], id[2]) = acc;
        }
  }
  return out;
}

double max_face_speed(const MacVectorField& u) {
  const GridSpec& g = u.grid();
  double m = 0.0;
  for (int a = 0; a < g.dim; ++a) {
    int ext[3];
    for (int b = 0; b < 3; ++b) ext[b] = (b == a) ? g.cells[a] + 1 : g.cells[b];
    for (int i = 0; i < ext[0]; ++i)
      for (int j = 0; j < ext[1]; ++j)
        for (int k = 0; k < ext[2]; ++k) m = std::max(m, std::abs(u.face(a, i, j, k)));
  }
  return m;
}

double max_drift_speed(ScalarField& c, FaceMean c_mean, double c_floor) {
  c.close();
  const GridSpec& g = c.grid();
  double m = 0.0;
  for (int a = 0; a < g.dim; ++a) {
    int ext[3];
    for (int b = 0; b < 3; ++b) ext[b] = (b == a) ? g.cells[a] + 1 : g.cells[b];
    int id[3];
    for (id[0] = 0; id[0] < ext[0]; ++id[0])
      for (id[1] = 0; id[1] < ext[1]; ++id[1])
        for (id[2] = 0; id[2] < ext[2]; ++id[2]) {
          int w[3] = {id[0], id[1], id[2]};
          w[a] -= 1;
          const double cw = c(w[0], w[1], w[2]);
          const double ce = c(id[0], id[1], id[2]);
          double cf = c_mean == FaceMean::Harmonic ? 2.0 * cw * ce / (cw + ce)
                                                   : 0.5 * (cw + ce);
          cf = std::max(cf, c_floor);
          m = std::max(m, std::abs(ce - cw) / (g.h[a] * cf));
        }
  }
  return m;
}

namespace {

template <class B>
double face_dot_impl(const MacVectorField& a, const B& b) {
  const GridSpec& g = a.grid();
  double s = 0.0;
  for (int ax = 0; ax < g.dim; ++ax) {
    int ext[3];
    for (int c = 0; c < 3; ++c) ext[c] = (c == ax) ? g.cells[ax] + 1 : g.cells[c];
    int id[3];
    for (id[0] = 0; id[0] < ext[0]; ++id[0])
      for (id[1] = 0; id[1] < ext[1]; ++id[1])
        for (id[2] = 0; id[2] < ext[2]; ++id[2])
          s += a.face(ax, id[0], id[1], id[2]) * face_value(b, ax, id);
  }
  return s * g.cell_volume();
}

}  // namespace

double face_dot(const MacVectorField& a, const FluxField& b) { return face_dot_impl(a, b); }
double face_dot(const MacVectorField& a, const MacVectorField& b) { return face_dot_impl(a, b); }

}  // namespace ksfluid
