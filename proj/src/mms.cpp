#include "ksfluid/mms.hpp"

#include <cmath>

namespace ksfluid {

namespace {

// Closed-form fields and sources (derived symbolically, common subexpressions
// hoisted). The manufactured solution is
//   n = 2 + (1/2) cos(pi x) cos(pi y) e^{-t}
//   c = 3/2 + (1/4) cos(pi x) cos(pi y) e^{-t}
//   u = (pi/5) sin^2(pi x) sin(2 pi y) e^{-t},  v = -(pi/5) sin(2 pi x) sin^2(pi y) e^{-t}
// with phi = (x + y)/10 and exactly divergence-free u.

double n_exact(double x, double y, double t) {
  return 2 + (1.0 / 2.0) * exp(-t) * cos(M_PI * x) * cos(M_PI * y);
}

double c_exact(double x, double y, double t) {
  return (1.0 / 4.0) * (6 + exp(-t) * cos(M_PI * x) * cos(M_PI * y));
}

double u_exact(double x, double y, double t) {
  return (1.0 / 5.0) * M_PI * exp(-t) * pow(sin(M_PI * x), 2) * sin(2 * M_PI * y);
}

double v_exact(double x, double y, double t) {
  return -1.0 / 5.0 * M_PI * exp(-t) * sin(2 * M_PI * x) * pow(sin(M_PI * y), 2);
}

double src_n(double x, double y, double t, double chi) {
  const double x0 = exp(-t);
  const double x1 = M_PI * x;
  const double x2 = cos(x1);
  const double x3 = M_PI * y;
  const double x4 = cos(x3);
  const double x5 = x2 * x4;
  const double x6 = pow(M_PI, 2);
  const double x7 = sin(x1);
  const double x8 = 2 * t;
  const double x9 = exp(-x8);
  const double x10 = sin(x3);
  const double x11 = exp(t);
  const double x12 = 1.0 / (6 * x11 + x5);
  const double x13 = chi * x6;
  const double x14 = x12 * x13;
  const double x15 = pow(x2, 2);
  const double x16 = pow(x4, 2);
  const double x17 = x15 * x16;
  const double x18 = pow(x7, 2);
  const double x19 = pow(x10, 2);
  const double x20 = x13 / (12 * x11 * x5 + x17 + 36 * exp(x8));
  const double x21 = 2 * x20;
  const double x22 = (1.0 / 2.0) * x0 * x20;
  return (1.0 / 2.0) * chi * x0 * x12 * x15 * x19 * x6 +
         (1.0 / 2.0) * chi * x0 * x12 * x16 * x18 * x6 - x0 * x14 * x17 +
         x0 * x2 * x4 * x6 - 1.0 / 2.0 * x0 * x5 +
         (1.0 / 10.0) * pow(x10, 3) * x2 * x6 * x9 * sin(2 * x1) - 4 * x14 * x5 -
         x15 * x19 * x21 - x16 * x18 * x21 - x18 * x2 * x22 * pow(x4, 3) -
         x19 * pow(x2, 3) * x22 * x4 - 1.0 / 10.0 * x4 * x6 * pow(x7, 3) * x9 * sin(2 * x3);
}

double src_c(double x, double y, double t) {
  const double x0 = exp(-t);
  const double x1 = M_PI * x;
  const double x2 = cos(x1);
  const double x3 = M_PI * y;
  const double x4 = cos(x3);
  const double x5 = pow(M_PI, 2);
  const double x6 = exp(-2 * t);
  return (1.0 / 2.0) * x0 * x2 * x4 * x5 - 1.0 / 2.0 * x0 * x2 * x4 +
         (1.0 / 20.0) * x2 * x5 * x6 * sin(2 * x1) * pow(sin(x3), 3) -
         1.0 / 20.0 * x4 * x5 * x6 * pow(sin(x1), 3) * sin(2 * x3) - 1.0 / 2.0;
}

double src_u_base(double x, double y, double t) {
  const double x0 = exp(-t);
  const double x1 = M_PI * x;
  const double x2 = cos(x1);
  const double x3 = M_PI * y;
  const double x4 = pow(sin(x1), 2);
  const double x5 = sin(2 * x3);
  const double x6 = x0 * x5;
  const double x7 = pow(M_PI, 3);
  return -1.0 / 20.0 * x0 * x2 * cos(x3) + (6.0 / 5.0) * x0 * x4 * x5 * x7 -
         2.0 / 5.0 * pow(x2, 2) * x6 * x7 - 1.0 / 5.0 * M_PI * x4 * x6 - 1.0 / 5.0;
}

double src_v_base(double x, double y, double t) {
  const double x0 = exp(-t);
  const double x1 = M_PI * x;
  const double x2 = M_PI * y;
  const double x3 = cos(x2);
  const double x4 = sin(2 * x1);
  const double x5 = pow(sin(x2), 2);
  const double x6 = pow(M_PI, 3);
  return (2.0 / 5.0) * x0 * pow(x3, 2) * x4 * x6 - 1.0 / 20.0 * x0 * x3 * cos(x1) -
         6.0 / 5.0 * x0 * x4 * x5 * x6 + (1.0 / 5.0) * M_PI * x0 * x4 * x5 - 1.0 / 5.0;
}

double src_u_adv(double x, double y, double t) {
  const double x0 = M_PI * x;
  const double x1 = sin(x0);
  const double x2 = M_PI * y;
  const double x3 = 2 * x2;
  return (2.0 / 25.0) * pow(M_PI, 3) * pow(x1, 2) *
         (x1 * pow(sin(x3), 2) * cos(x0) - sin(2 * x0) * pow(sin(x2), 2) * cos(x3)) *
         exp(-2 * t);
}

double src_v_adv(double x, double y, double t) {
  const double x0 = M_PI * y;
  const double x1 = sin(x0);
  const double x2 = M_PI * x;
  const double x3 = 2 * x2;
  return (2.0 / 25.0) * pow(M_PI, 3) * pow(x1, 2) *
         (x1 * pow(sin(x3), 2) * cos(x0) - sin(2 * x0) * pow(sin(x2), 2) * cos(x3)) *
         exp(-2 * t);
}

}  // namespace

double MmsCase::n(double x, double y, double t) const { return n_exact(x, y, t); }
double MmsCase::c(double x, double y, double t) const { return c_exact(x, y, t); }
double MmsCase::u(int axis, double x, double y, double t) const {
  return axis == 0 ? u_exact(x, y, t) : v_exact(x, y, t);
}

double MmsCase::source_n(double x, double y, double t, double chi) const {
  return src_n(x, y, t, chi);
}
double MmsCase::source_c(double x, double y, double t) const { return src_c(x, y, t); }
double MmsCase::source_u(int axis, double x, double y, double t, int kappa) const {
  if (axis == 0) return src_u_base(x, y, t) + kappa * src_u_adv(x, y, t);
  return src_v_base(x, y, t) + kappa * src_v_adv(x, y, t);
}

namespace {

template <class Fn>
void sample_cells(const GridSpec& g, Fn&& fn, ScalarField& out) {
  for (int i = 0; i < g.cells[0]; ++i)
    for (int j = 0; j < g.cells[1]; ++j)
      out(i, j, 0) = fn(g.cell_center(0, i), g.cell_center(1, j));
  out.close();
}

}  // namespace

void MmsCase::sample_n(const GridSpec& g, double t, ScalarField& out) const {
  sample_cells(g, [&](double x, double y) { return n(x, y, t); }, out);
}

void MmsCase::sample_c(const GridSpec& g, double t, ScalarField& out) const {
  sample_cells(g, [&](double x, double y) { return c(x, y, t); }, out);
}

void MmsCase::sample_u(const GridSpec& g, double t, MacVectorField& out) const {
  for (int i = 0; i <= g.cells[0]; ++i)
    for (int j = 0; j < g.cells[1]; ++j)
      out.face(0, i, j, 0) = u(0, g.face_coord(0, i), g.cell_center(1, j), t);
  for (int i = 0; i < g.cells[0]; ++i)
    for (int j = 0; j <= g.cells[1]; ++j)
      out.face(1, i, j, 0) = u(1, g.cell_center(0, i), g.face_coord(1, j), t);
  out.close();
}

void MmsCase::sample_source_n(const GridSpec& g, double t, double chi, ScalarField& out) const {
  sample_cells(g, [&](double x, double y) { return source_n(x, y, t, chi); }, out);
}

void MmsCase::sample_source_c(const GridSpec& g, double t, ScalarField& out) const {
  sample_cells(g, [&](double x, double y) { return source_c(x, y, t); }, out);
}

void MmsCase::sample_source_u(const GridSpec& g, double t, int kappa, FluxField& out) const {
  for (int i = 0; i <= g.cells[0]; ++i)
    for (int j = 0; j < g.cells[1]; ++j)
      out.flux(0, i, j, 0) = source_u(0, g.face_coord(0, i), g.cell_center(1, j), t, kappa);
  for (int i = 0; i < g.cells[0]; ++i)
    for (int j = 0; j <= g.cells[1]; ++j)
      out.flux(1, i, j, 0) = source_u(1, g.cell_center(0, i), g.face_coord(1, j), t, kappa);
}

}  // namespace ksfluid
