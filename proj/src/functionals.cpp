#include "ksfluid/functionals.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "ksfluid/operators.hpp"

namespace ksfluid {

namespace {

// Quadratic form of the no-slip face Laplacian, assembled from squared link
// differences so the result is nonnegative bitwise. Wall links along the
// tangential axes contribute 2 u^2 (the ghost reflects with a sign flip).
double dirichlet_form(MacVectorField& u) {
  u.close();
  const GridSpec& g = u.grid();
  double s = 0.0;
  for (int a = 0; a < g.dim; ++a) {
    int ext[3];
    for (int b = 0; b < 3; ++b) ext[b] = (b == a) ? g.cells[a] + 1 : g.cells[b];
    for (int b = 0; b < g.dim; ++b) {
      const double w = 1.0 / (g.h[b] * g.h[b]);
      int id[3];
      if (b == a) {
        // Lines of faces 0..cells[a] with pinned endpoints included.
        for (id[0] = 0; id[0] < ext[0]; ++id[0])
          for (id[1] = 0; id[1] < ext[1]; ++id[1])
            for (id[2] = 0; id[2] < ext[2]; ++id[2]) {
              if (id[a] == g.cells[a]) continue;
              int hi[3] = {id[0], id[1], id[2]};
              hi[a] += 1;
              const double d =
                  u.face(a, hi[0], hi[1], hi[2]) - u.face(a, id[0], id[1], id[2]);
              s += w * d * d;
            }
      } else {
        for (id[0] = 0; id[0] < ext[0]; ++id[0])
          for (id[1] = 0; id[1] < ext[1]; ++id[1])
            for (id[2] = 0; id[2] < ext[2]; ++id[2]) {
              const double uc = u.face(a, id[0], id[1], id[2]);
              if (id[b] + 1 < g.cells[b]) {
                int hi[3] = {id[0], id[1], id[2]};
                hi[b] += 1;
                const double d = u.face(a, hi[0], hi[1], hi[2]) - uc;
                s += w * d * d;
              }
              if (id[b] == 0) s += 2.0 * w * uc * uc;
              if (id[b] == g.cells[b] - 1) s += 2.0 * w * uc * uc;
            }
      }
    }
  }
  return s * g.cell_volume();
}

double flux_norm2(const FluxField& F) {
  const GridSpec& g = F.grid();
  double s = 0.0;
  for (int a = 0; a < g.dim; ++a) {
    int ext[3];
    for (int b = 0; b < 3; ++b) ext[b] = (b == a) ? g.cells[a] + 1 : g.cells[b];
    for (int i = 0; i < ext[0]; ++i)
      for (int j = 0; j < ext[1]; ++j)
        for (int k = 0; k < ext[2]; ++k) {
          const double v = F.flux(a, i, j, k);
          s += v * v;
        }
  }
  return s * g.cell_volume();
}

}  // namespace

const FunctionalRecord& FunctionalSeries::append(SimState& state, double dt, ScalarField& phi,
                                                 double c_floor) {
  const GridSpec& g = state.n.grid();
  FunctionalRecord rec;
  rec.t = state.t;
  rec.dt = dt;
  rec.mass_n = integrate(state.n);
  rec.l1_c = integrate(state.c);
  rec.min_c = min_value(state.c);
  rec.max_n = max_value(state.n);
  if (!(rec.min_c > c_floor))
    throw SingularityError("record: min c at/below floor, c^{-r} undefined");

  const double p = params_.p;
  const double r = params_.r;
  const double q = params_.q;
  const double vol = g.cell_volume();
  double F_pr = 0.0, lq = 0.0, n2 = 0.0, npc = 0.0;
  ScalarField w(g, state.n.bc());
  for (int i = 0; i < g.cells[0]; ++i)
    for (int j = 0; j < g.cells[1]; ++j)
      for (int k = 0; k < g.cells[2]; ++k) {
        // Positivity holds up to solver noise; clamp so fractional powers stay defined.
        const double nn = std::max(state.n(i, j, k), 0.0);
        const double cc = state.c(i, j, k);
        F_pr += std::pow(nn, p) * std::pow(cc, -r);
        lq += std::pow(cc, q);
        n2 += nn * nn;
        npc += std::pow(nn, 2.0 * p) * std::pow(cc, -(p - 1.0));
        w(i, j, k) = std::pow(nn, 0.5 * p) * std::pow(cc, -0.5 * r);
      }
  rec.F_pr = F_pr * vol;
  rec.lq_c = lq * vol;
  rec.n2 = n2 * vol;
  rec.npc_mix = npc * vol;
  rec.dissipation_pr = flux_norm2(gradient_to_faces(w));

  // |grad c|^q with the face gradient averaged back to centers.
  {
    FluxField gc = gradient_to_faces(state.c);
    double s = 0.0;
    for (int i = 0; i < g.cells[0]; ++i)
      for (int j = 0; j < g.cells[1]; ++j)
        for (int k = 0; k < g.cells[2]; ++k) {
          double m2 = 0.0;
          int id[3] = {i, j, k};
          for (int a = 0; a < g.dim; ++a) {
            int e[3] = {id[0], id[1], id[2]};
            e[a] += 1;
            const double gm =
                0.5 * (gc.flux(a, id[0], id[1], id[2]) + gc.flux(a, e[0], e[1], e[2]));
            m2 += gm * gm;
          }
          s += std::pow(m2, 0.5 * q);
        }
    rec.grad_c_lq = s * vol;
  }

  rec.kinetic_u = face_dot(state.fluid.u, state.fluid.u);
  rec.dirichlet_u = dirichlet_form(state.fluid.u);
  rec.buoyancy_power = face_dot(state.fluid.u, force_faces(state.n, phi));

  if (records_.empty()) {
    min_c0_ = rec.min_c;
    F_pr0_ = rec.F_pr;
    rec.lower_envelope = min_c0_;
    rec.gronwall_envelope = F_pr0_;
    rec.energy_residual = 0.0;  // first record: residual 0 by convention
  } else {
    rec.lower_envelope = min_c0_ * std::exp(-rec.t);
    rec.gronwall_envelope = gronwall_envelope(F_pr0_, params_.r, rec.t);
    const FunctionalRecord& prev = records_.back();
    rec.energy_residual = 0.5 * (rec.kinetic_u - prev.kinetic_u) / rec.dt + rec.dirichlet_u -
                          rec.buoyancy_power;
  }
  records_.push_back(rec);
  return records_.back();
}

CheckReport check_mass(const FunctionalSeries& s, double rel_tol) {
  CheckReport rep;
  rep.name = "mass";
  if (s.empty()) {
    rep.detail = "empty series";
    return rep;
  }
  const double m0 = s.records().front().mass_n;
  double worst = 0.0;
  long worst_i = 0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double d = std::abs(s.records()[k].mass_n - m0);
    if (d > worst) {
      worst = d;
      worst_i = static_cast<long>(k);
    }
  }
  rep.pass = worst <= rel_tol * m0;
  rep.worst = m0 > 0.0 ? worst / m0 : worst;
  rep.worst_index = worst_i;
  rep.worst_t = s.records()[static_cast<std::size_t>(worst_i)].t;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "max |drift| %.3e of mass %.6g (rel %.3e, tol %.1e)", worst,
                m0, rep.worst, rel_tol);
  rep.detail = buf;
  return rep;
}

CheckReport check_lower_bound(const FunctionalSeries& s, double factor) {
  CheckReport rep;
  rep.name = "lower_bound";
  if (s.empty()) {
    rep.detail = "empty series";
    return rep;
  }
  double worst_margin = std::numeric_limits<double>::infinity();
  long worst_i = 0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const auto& r = s.records()[k];
    const double margin = r.min_c / r.lower_envelope;
    if (margin < worst_margin) {
      worst_margin = margin;
      worst_i = static_cast<long>(k);
    }
  }
  rep.pass = worst_margin >= factor;
  rep.worst = worst_margin;
  rep.worst_index = worst_i;
  rep.worst_t = s.records()[static_cast<std::size_t>(worst_i)].t;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "min ratio min_c/envelope %.9g (factor %.6g)", worst_margin,
                factor);
  rep.detail = buf;
  return rep;
}

CheckReport check_gronwall(const FunctionalSeries& s, const AnalysisParams& params,
                           double slack) {
  const Interval ip = interval_Ip(params.p, params.chi);
  if (!ip.contains(params.r))
    throw AdmissibilityError("check_gronwall: r outside I_p");
  CheckReport rep;
  rep.name = "gronwall";
  if (s.empty()) {
    rep.detail = "empty series";
    return rep;
  }
  double worst_ratio = 0.0;
  long worst_i = 0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const auto& r = s.records()[k];
    const double ratio = r.gronwall_envelope > 0.0 ? r.F_pr / r.gronwall_envelope
                                                   : (r.F_pr > 0.0 ? HUGE_VAL : 0.0);
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      worst_i = static_cast<long>(k);
    }
  }
  rep.pass = worst_ratio <= 1.0 + slack;
  rep.worst = worst_ratio;
  rep.worst_index = worst_i;
  rep.worst_t = s.records()[static_cast<std::size_t>(worst_i)].t;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "max ratio F_pr/envelope %.9g (allowed %.6g)", worst_ratio,
                1.0 + slack);
  rep.detail = buf;
  return rep;
}

namespace {

double max_abs_energy_residual(const FunctionalSeries& s, long* idx) {
  double m = 0.0;
  for (std::size_t k = 1; k < s.size(); ++k) {
    const double v = std::abs(s.records()[k].energy_residual);
    if (v >= m) {
      m = v;
      if (idx) *idx = static_cast<long>(k);
    }
  }
  return m;
}

}  // namespace

CheckReport check_energy_identity(const FunctionalSeries& coarse, const FunctionalSeries& fine,
                                  double factor) {
  if (coarse.size() < 2 || fine.size() < 2)
    throw InsufficientData("check_energy_identity needs at least 2 records per series");
  CheckReport rep;
  rep.name = "energy_identity";
  long ic = 0;
  const double rc = max_abs_energy_residual(coarse, &ic);
  const double rf = max_abs_energy_residual(fine, nullptr);
  rep.pass = rf <= rc / factor;
  rep.worst = rc > 0.0 && rf > 0.0 ? rc / rf : (rc == 0.0 && rf == 0.0 ? HUGE_VAL : 0.0);
  rep.worst_index = ic;
  rep.worst_t = coarse.records()[static_cast<std::size_t>(ic)].t;
  if (rc == 0.0 && rf == 0.0) rep.pass = true;  // identically zero residual (steady state)
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "max|res| %.6e at dt, %.6e at dt/2; ratio %.3f (need >= %.3f), order %.3f", rc,
                rf, rf > 0.0 ? rc / rf : HUGE_VAL, factor,
                rf > 0.0 && rc > 0.0 ? std::log2(rc / rf) : HUGE_VAL);
  rep.detail = buf;
  return rep;
}

CheckReport check_record_nonneg(const FunctionalSeries& s) {
  CheckReport rep;
  rep.name = "record_nonneg";
  rep.pass = true;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const auto& r = s.records()[k];
    const double vals[] = {r.mass_n, r.l1_c,        r.F_pr, r.lq_c, r.kinetic_u,
                           r.dirichlet_u, r.dissipation_pr, r.n2,   r.npc_mix};
    bool ok = r.lower_envelope > 0.0;
    for (double v : vals) ok = ok && v >= 0.0;
    if (!ok) {
      rep.pass = false;
      rep.worst_index = static_cast<long>(k);
      rep.worst_t = r.t;
      rep.detail = "nonnegativity violated";
      return rep;
    }
  }
  rep.detail = "all record invariants hold";
  return rep;
}

TimeIntegrals time_integrals(const FunctionalSeries& s) {
  TimeIntegrals ti;
  for (std::size_t k = 0; k + 1 < s.size(); ++k) {
    const auto& a = s.records()[k];
    const auto& b = s.records()[k + 1];
    const double w = 0.5 * (b.t - a.t);
    ti.int_dissipation_pr += w * (a.dissipation_pr + b.dissipation_pr);
    ti.int_dirichlet_u += w * (a.dirichlet_u + b.dirichlet_u);
    ti.int_n2 += w * (a.n2 + b.n2);
    ti.int_npc_mix += w * (a.npc_mix + b.npc_mix);
  }
  return ti;
}

}  // namespace ksfluid
