// Bit-exact output formats: the series CSV (17 significant digits), the
// KSFLUID-SNAP v1 binary snapshot, and the plain-text field file used for
// tabulated phi / initial data.
#pragma once

#include <string>

#include "ksfluid/functionals.hpp"
#include "ksfluid/state.hpp"

namespace ksfluid {

/// CSV with the fixed header
/// t,dt,mass_n,l1_c,min_c,lower_envelope,F_pr,gronwall_envelope,lq_c,
/// kinetic_u,dirichlet_u,buoyancy_power,energy_residual,grad_c_lq,
/// dissipation_pr,n2,npc_mix
/// and one row per record, reals with 17 significant digits.
void write_series(const FunctionalSeries& series, const std::string& path);

struct Snapshot {
  GridSpec grid;
  double t = 0.0;
  ScalarField n, c, P;
  MacVectorField u;
};

/// KSFLUID-SNAP v1: three header lines, then named FIELD blocks of
/// little-endian 64-bit floats, row-major, interior cells (scalars) or the
/// full face range (velocity components).
void write_snapshot(const SimState& state, const std::string& path);
Snapshot read_snapshot(const std::string& path);

/// KSFLUID-FIELD v1 text format: header line, `cells n0 n1 [n2]`, then
/// whitespace-separated values in row-major order.
ScalarField read_field_file(const std::string& path, const GridSpec& grid);
void write_field_file(const ScalarField& f, const std::string& path);

}  // namespace ksfluid
