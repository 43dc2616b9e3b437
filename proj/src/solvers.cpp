#include "ksfluid/solvers.hpp"

#include <cmath>
#include <string>

namespace ksfluid {

namespace {

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void subtract_mean(std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  s /= static_cast<double>(v.size());
  for (double& x : v) x -= s;
}

// Cell-centered operator A = alpha I - beta Lap with the field's closure.
class CellSystem {
 public:
  CellSystem(const GridSpec& g, ScalarBC bc, double alpha, double beta)
      : grid_(g), bc_(bc), alpha_(alpha), beta_(beta), scratch_(g, bc) {
    invdiag_.resize(static_cast<std::size_t>(g.cell_count()));
    std::size_t m = 0;
    for (int i = 0; i < g.cells[0]; ++i)
      for (int j = 0; j < g.cells[1]; ++j)
        for (int k = 0; k < g.cells[2]; ++k) {
          double d = alpha_;
          int id[3] = {i, j, k};
          for (int a = 0; a < g.dim; ++a) {
            double links = 2.0;
            if (bc_ == ScalarBC::NeumannZero) {
              if (id[a] == 0) links -= 1.0;             // mirror ghost cancels
              if (id[a] == g.cells[a] - 1) links -= 1.0;
            }
            d += beta_ * links / (g.h[a] * g.h[a]);
          }
          invdiag_[m++] = 1.0 / d;
        }
  }

  const GridSpec& grid() const { return grid_; }
  bool singular() const { return alpha_ == 0.0; }

  void apply(const std::vector<double>& x, std::vector<double>& ax) {
    const GridSpec& g = grid_;
    std::size_t m = 0;
    for (int i = 0; i < g.cells[0]; ++i)
      for (int j = 0; j < g.cells[1]; ++j)
        for (int k = 0; k < g.cells[2]; ++k) scratch_(i, j, k) = x[m++];
    scratch_.close();
    m = 0;
    for (int i = 0; i < g.cells[0]; ++i)
      for (int j = 0; j < g.cells[1]; ++j)
        for (int k = 0; k < g.cells[2]; ++k) {
          const double fc = scratch_(i, j, k);
          double lap = 0.0;
          lap += (scratch_(i - 1, j, k) - 2.0 * fc + scratch_(i + 1, j, k)) /
                 (g.h[0] * g.h[0]);
          lap += (scratch_(i, j - 1, k) - 2.0 * fc + scratch_(i, j + 1, k)) /
                 (g.h[1] * g.h[1]);
          if (g.dim == 3)
            lap += (scratch_(i, j, k - 1) - 2.0 * fc + scratch_(i, j, k + 1)) /
                   (g.h[2] * g.h[2]);
          ax[m++] = alpha_ * fc - beta_ * lap;
        }
  }

  void smooth(const std::vector<double>& b, std::vector<double>& x,
              std::vector<double>& work, int sweeps, double omega) {
    for (int s = 0; s < sweeps; ++s) {
      apply(x, work);
      for (std::size_t i = 0; i < x.size(); ++i)
        x[i] += omega * invdiag_[i] * (b[i] - work[i]);
    }
  }

  const std::vector<double>& invdiag() const { return invdiag_; }

 private:
  GridSpec grid_;
  ScalarBC bc_;
  double alpha_, beta_;
  ScalarField scratch_;
  std::vector<double> invdiag_;
};

// Symmetric V-cycle on rediscretized coarse operators; piecewise-constant
// transfers (averaging restriction, injection prolongation).
class MultigridPC {
 public:
  MultigridPC(const GridSpec& fine, ScalarBC bc, double alpha, double beta) {
    GridSpec g = fine;
    while (true) {
      levels_.push_back(Level{CellSystem(g, bc, alpha, beta), {}, {}, {}, {}});
      auto& lv = levels_.back();
      const std::size_t n = static_cast<std::size_t>(g.cell_count());
      lv.b.resize(n);
      lv.x.resize(n);
      lv.r.resize(n);
      lv.work.resize(n);
      bool can = true;
      for (int a = 0; a < g.dim; ++a)
        can = can && g.cells[a] % 2 == 0 && g.cells[a] >= 8;
      if (!can) break;
      std::array<int, 3> cc = g.cells;
      for (int a = 0; a < g.dim; ++a) cc[a] /= 2;
      g = GridSpec::make(g.dim, g.extent, cc);
    }
  }

  int depth() const { return static_cast<int>(levels_.size()); }

  void apply(const std::vector<double>& r, std::vector<double>& z) {
    levels_[0].b = r;
    std::fill(levels_[0].x.begin(), levels_[0].x.end(), 0.0);
    vcycle(0);
    z = levels_[0].x;
  }

 private:
  struct Level {
    CellSystem sys;
    std::vector<double> b, x, r, work;
  };

  void vcycle(std::size_t l) {
    Level& lv = levels_[l];
    if (l + 1 == levels_.size()) {
      coarse_solve(lv);
      return;
    }
    lv.sys.smooth(lv.b, lv.x, lv.work, 2, 0.8);
    lv.sys.apply(lv.x, lv.work);
    for (std::size_t i = 0; i < lv.r.size(); ++i) lv.r[i] = lv.b[i] - lv.work[i];
    restrict_to(l + 1, lv.r);
    if (levels_[l + 1].sys.singular()) subtract_mean(levels_[l + 1].b);
    std::fill(levels_[l + 1].x.begin(), levels_[l + 1].x.end(), 0.0);
    vcycle(l + 1);
    prolong_from(l + 1, lv.x);
    lv.sys.smooth(lv.b, lv.x, lv.work, 2, 0.8);
  }

  void coarse_solve(Level& lv) {
    // Diagonal-preconditioned CG on the coarsest grid (a few hundred cells).
    const std::size_t n = lv.b.size();
    std::fill(lv.x.begin(), lv.x.end(), 0.0);
    if (lv.sys.singular()) subtract_mean(lv.b);
    std::vector<double> r = lv.b, z(n), p(n), ap(n);
    const double tol = 1e-13 * std::max(1.0, inf_norm(lv.b));
    if (inf_norm(r) <= tol) return;
    for (std::size_t i = 0; i < n; ++i) z[i] = lv.sys.invdiag()[i] * r[i];
    if (lv.sys.singular()) subtract_mean(z);
    p = z;
    double rz = dot(r, z);
    const int cap = static_cast<int>(2 * n) + 50;
    for (int it = 0; it < cap; ++it) {
      lv.sys.apply(p, ap);
      const double pap = dot(p, ap);
      if (!(pap > 0.0)) break;
      const double a = rz / pap;
      for (std::size_t i = 0; i < n; ++i) {
        lv.x[i] += a * p[i];
        r[i] -= a * ap[i];
      }
      if (lv.sys.singular()) subtract_mean(r);
      if (inf_norm(r) <= tol) break;
      for (std::size_t i = 0; i < n; ++i) z[i] = lv.sys.invdiag()[i] * r[i];
      if (lv.sys.singular()) subtract_mean(z);
      const double rz_new = dot(r, z);
      const double beta = rz_new / rz;
      rz = rz_new;
      for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    if (lv.sys.singular()) subtract_mean(lv.x);
  }

  // Average fine children into coarse b.
  void restrict_to(std::size_t lc, const std::vector<double>& fine_r) {
    const GridSpec& gf = levels_[lc - 1].sys.grid();
    const GridSpec& gc = levels_[lc].sys.grid();
    auto idx = [](const GridSpec& g, int i, int j, int k) {
      return static_cast<std::size_t>((i * g.cells[1] + j) * g.cells[2] + k);
    };
    const int dk = gc.dim == 3 ? 2 : 1;
    const double w = 1.0 / ((gc.dim == 3 ? 8.0 : 4.0));
    auto& bc = levels_[lc].b;
    for (int i = 0; i < gc.cells[0]; ++i)
      for (int j = 0; j < gc.cells[1]; ++j)
        for (int k = 0; k < gc.cells[2]; ++k) {
          double s = 0.0;
          for (int di = 0; di < 2; ++di)
            for (int dj = 0; dj < 2; ++dj)
              for (int dd = 0; dd < dk; ++dd)
                s += fine_r[idx(gf, 2 * i + di, 2 * j + dj, dk * k + dd)];
          bc[idx(gc, i, j, k)] = s * w;
        }
  }

  // Inject coarse correction into fine x.
  void prolong_from(std::size_t lc, std::vector<double>& fine_x) {
    const GridSpec& gf = levels_[lc - 1].sys.grid();
    const GridSpec& gc = levels_[lc].sys.grid();
    auto idx = [](const GridSpec& g, int i, int j, int k) {
      return static_cast<std::size_t>((i * g.cells[1] + j) * g.cells[2] + k);
    };
    const int dk = gc.dim == 3 ? 2 : 1;
    const auto& xc = levels_[lc].x;
    for (int i = 0; i < gc.cells[0]; ++i)
      for (int j = 0; j < gc.cells[1]; ++j)
        for (int k = 0; k < gc.cells[2]; ++k) {
          const double v = xc[idx(gc, i, j, k)];
          for (int di = 0; di < 2; ++di)
            for (int dj = 0; dj < 2; ++dj)
              for (int dd = 0; dd < dk; ++dd)
                fine_x[idx(gf, 2 * i + di, 2 * j + dj, dk * k + dd)] += v;
        }
  }

  std::vector<Level> levels_;
};

// Face-centered operator A = I - beta Lap per component, no-slip closure.
class FaceSystem {
 public:
  FaceSystem(const GridSpec& g, double beta) : grid_(g), beta_(beta), scratch_(g) {
    // Interior-face count and inverse diagonal.
    std::size_t n = 0;
    for (int a = 0; a < g.dim; ++a) {
      std::size_t cnt = static_cast<std::size_t>(g.cells[a] - 1);
      for (int b = 0; b < g.dim; ++b)
        if (b != a) cnt *= static_cast<std::size_t>(g.cells[b]);
      n += cnt;
    }
    size_ = n;
    invdiag_.resize(n);
    std::size_t m = 0;
    for_each_interior_face([&](int a, const int id[3]) {
      double d = 1.0;
      d += beta_ * 2.0 / (g.h[a] * g.h[a]);
      for (int b = 0; b < g.dim; ++b) {
        if (b == a) continue;
        double links = 2.0;
        if (id[b] == 0) links += 1.0;  // ghost reflects with sign flip
        if (id[b] == g.cells[b] - 1) links += 1.0;
        d += beta_ * links / (g.h[b] * g.h[b]);
      }
      invdiag_[m++] = 1.0 / d;
    });
  }

  std::size_t size() const { return size_; }
  const std::vector<double>& invdiag() const { return invdiag_; }

  template <class Fn>
  void for_each_interior_face(Fn&& fn) const {
    const GridSpec& g = grid_;
    for (int a = 0; a < g.dim; ++a) {
      int ext[3];
      for (int b = 0; b < 3; ++b) ext[b] = (b == a) ? g.cells[a] + 1 : g.cells[b];
      int id[3];
      for (id[0] = 0; id[0] < ext[0]; ++id[0])
        for (id[1] = 0; id[1] < ext[1]; ++id[1])
          for (id[2] = 0; id[2] < ext[2]; ++id[2]) {
            if (id[a] == 0 || id[a] == g.cells[a]) continue;
            fn(a, id);
          }
    }
  }

  void pack(const MacVectorField& u, std::vector<double>& v) const {
    std::size_t m = 0;
    for_each_interior_face(
        [&](int a, const int id[3]) { v[m++] = u.face(a, id[0], id[1], id[2]); });
  }

  void unpack(const std::vector<double>& v, MacVectorField& u) const {
    std::size_t m = 0;
    for_each_interior_face(
        [&](int a, const int id[3]) { u.face(a, id[0], id[1], id[2]) = v[m++]; });
  }

  void apply(const std::vector<double>& x, std::vector<double>& ax) {
    unpack(x, scratch_);
    scratch_.close();
    const GridSpec& g = grid_;
    std::size_t m = 0;
    for_each_interior_face([&](int a, const int id[3]) {
      const double fc = scratch_.face(a, id[0], id[1], id[2]);
      double lap = 0.0;
      for (int b = 0; b < g.dim; ++b) {
        int lo[3] = {id[0], id[1], id[2]};
        int hi[3] = {id[0], id[1], id[2]};
        lo[b] -= 1;
        hi[b] += 1;
        lap += (scratch_.face(a, lo[0], lo[1], lo[2]) - 2.0 * fc +
                scratch_.face(a, hi[0], hi[1], hi[2])) /
               (g.h[b] * g.h[b]);
      }
      ax[m++] = fc - beta_ * lap;
    });
  }

 private:
  GridSpec grid_;
  double beta_;
  MacVectorField scratch_;
  std::size_t size_ = 0;
  std::vector<double> invdiag_;
};

// Preconditioned CG with Polak-Ribiere update (robust to the slightly
// inexact multigrid preconditioner). Stops on the inf-norm of the residual.
template <class ApplyFn, class PrecFn, class ProjFn>
SolveStats pcg(ApplyFn&& A, PrecFn&& M, ProjFn&& proj, const std::vector<double>& b,
               std::vector<double>& x, double tol_inf, int max_iter, const char* what) {
  const std::size_t n = b.size();
  std::vector<double> r(n), z(n), p(n), ap(n);
  A(x, ap);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - ap[i];
  proj(r);
  SolveStats st;
  st.residual_inf = inf_norm(r);
  if (st.residual_inf <= tol_inf) return st;
  M(r, z);
  proj(z);
  p = z;
  double rz = dot(r, z);
  std::vector<double> r_old(n);
  for (int it = 1; it <= max_iter; ++it) {
    A(p, ap);
    const double pap = dot(p, ap);
    if (!(pap > 0.0) || !std::isfinite(pap))
      throw SolverDivergence(std::string(what) + ": lost positive definiteness");
    const double alpha = rz / pap;
    r_old = r;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    proj(r);
    st.iterations = it;
    st.residual_inf = inf_norm(r);
    if (st.residual_inf <= tol_inf) return st;
    M(r, z);
    proj(z);
    double rz_new = 0.0, rz_pr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      rz_new += r[i] * z[i];
      rz_pr += (r[i] - r_old[i]) * z[i];
    }
    const double beta = std::max(0.0, rz_pr / rz);
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  throw SolverDivergence(std::string(what) + ": no convergence within max_iter (residual " +
                         std::to_string(st.residual_inf) + ")");
}

void pack_cells(const ScalarField& f, std::vector<double>& v) {
  const GridSpec& g = f.grid();
  std::size_t m = 0;
  for (int i = 0; i < g.cells[0]; ++i)
    for (int j = 0; j < g.cells[1]; ++j)
      for (int k = 0; k < g.cells[2]; ++k) v[m++] = f(i, j, k);
}

void unpack_cells(const std::vector<double>& v, ScalarField& f) {
  const GridSpec& g = f.grid();
  std::size_t m = 0;
  for (int i = 0; i < g.cells[0]; ++i)
    for (int j = 0; j < g.cells[1]; ++j)
      for (int k = 0; k < g.cells[2]; ++k) f(i, j, k) = v[m++];
}

SolveStats cell_solve(ScalarField& x, const ScalarField& b, double alpha, double beta,
                      const SolveOpts& opts, const char* what) {
  const GridSpec& g = b.grid();
  const std::size_t n = static_cast<std::size_t>(g.cell_count());
  CellSystem sys(g, b.bc(), alpha, beta);
  std::vector<double> bv(n), xv(n);
  pack_cells(b, bv);
  pack_cells(x, xv);
  const bool singular = sys.singular();
  if (singular) {
    subtract_mean(bv);
    subtract_mean(xv);
  }

  std::unique_ptr<MultigridPC> mg;
  if (opts.pc == Preconditioner::Multigrid && b.bc() == ScalarBC::NeumannZero) {
    mg = std::make_unique<MultigridPC>(g, b.bc(), alpha, beta);
    if (mg->depth() < 2) mg.reset();
  }

  auto A = [&](const std::vector<double>& in, std::vector<double>& out) { sys.apply(in, out); };
  auto M = [&](const std::vector<double>& r, std::vector<double>& z) {
    if (mg) {
      mg->apply(r, z);
    } else {
      for (std::size_t i = 0; i < r.size(); ++i) z[i] = sys.invdiag()[i] * r[i];
    }
  };
  auto proj = [&](std::vector<double>& v) {
    if (singular) subtract_mean(v);
  };

  SolveStats st = pcg(A, M, proj, bv, xv, opts.tol_inf, opts.max_iter, what);
  if (singular) subtract_mean(xv);
  unpack_cells(xv, x);
  return st;
}

}  // namespace

SolveStats helmholtz_cell_solve(ScalarField& x, const ScalarField& b, double alpha, double beta,
                                const SolveOpts& opts) {
  if (!(alpha > 0.0)) throw SolverDivergence("helmholtz_cell_solve requires alpha > 0");
  return cell_solve(x, b, alpha, beta, opts, "helmholtz(cell)");
}

SolveStats poisson_neumann_solve(ScalarField& x, const ScalarField& b, const SolveOpts& opts) {
  if (b.bc() != ScalarBC::NeumannZero)
    throw SolverDivergence("poisson_neumann_solve requires NeumannZero bc");
  // Lap x = b  <=>  (0 I - (-1) Lap) x = b with A = -Lap SPD: solve -Lap x = -b.
  ScalarField nb = b;
  const GridSpec& g = b.grid();
  for (int i = 0; i < g.cells[0]; ++i)
    for (int j = 0; j < g.cells[1]; ++j)
      for (int k = 0; k < g.cells[2]; ++k) nb(i, j, k) = -b(i, j, k);
  return cell_solve(x, nb, 0.0, 1.0, opts, "poisson(neumann)");
}

SolveStats helmholtz_face_solve(MacVectorField& x, const MacVectorField& b, double beta,
                                const SolveOpts& opts) {
  if (b.bc() != VectorBC::NoSlip)
    throw SolverDivergence("helmholtz_face_solve requires NoSlip bc");
  FaceSystem sys(b.grid(), beta);
  std::vector<double> bv(sys.size()), xv(sys.size());
  sys.pack(b, bv);
  sys.pack(x, xv);
  auto A = [&](const std::vector<double>& in, std::vector<double>& out) { sys.apply(in, out); };
  auto M = [&](const std::vector<double>& r, std::vector<double>& z) {
    for (std::size_t i = 0; i < r.size(); ++i) z[i] = sys.invdiag()[i] * r[i];
  };
  auto proj = [](std::vector<double>&) {};
  SolveStats st = pcg(A, M, proj, bv, xv, opts.tol_inf, opts.max_iter, "helmholtz(face)");
  sys.unpack(xv, x);
  x.close();
  return st;
}

}  // namespace ksfluid
