// Monitored functionals and the series-level checks of the identities and
// inequalities they obey: mass, the exponential lower envelope of c, the
// Gronwall bound on the singular-weight functional, and the kinetic-energy
// balance.
#pragma once

#include <string>
#include <vector>

#include "ksfluid/analysis.hpp"
#include "ksfluid/state.hpp"

namespace ksfluid {

struct FunctionalRecord {
  double t = 0.0;
  double dt = 0.0;
  double mass_n = 0.0;        // integral of n
  double l1_c = 0.0;          // integral of c
  double min_c = 0.0;
  double max_n = 0.0;
  double lower_envelope = 0.0;     // (min c_0) e^{-t}
  double F_pr = 0.0;               // integral of n^p c^{-r}
  double gronwall_envelope = 0.0;  // F_pr(0) e^{r t}
  double lq_c = 0.0;               // integral of c^q
  double kinetic_u = 0.0;          // integral of |u|^2
  double dirichlet_u = 0.0;        // integral of |grad u|^2 (discrete form)
  double buoyancy_power = 0.0;     // integral of n u . grad(phi)
  double energy_residual = 0.0;
  double grad_c_lq = 0.0;          // integral of |grad c|^q
  double dissipation_pr = 0.0;     // integral of |grad(n^{p/2} c^{-r/2})|^2
  double n2 = 0.0;                 // integral of n^2
  double npc_mix = 0.0;            // integral of n^{2p} c^{-(p-1)}
};

/// Ordered per-step (or per-interval) records plus the series-level context
/// the envelopes need.
class FunctionalSeries {
 public:
  FunctionalSeries() = default;
  explicit FunctionalSeries(const AnalysisParams& params) : params_(params) {}

  /// Computes and appends the record for the current state. Throws
  /// SingularityError if min c <= c_floor (the weight c^{-r} is undefined).
  const FunctionalRecord& append(SimState& state, double dt, ScalarField& phi, double c_floor);

  const std::vector<FunctionalRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const AnalysisParams& params() const { return params_; }
  double min_c0() const { return min_c0_; }
  double F_pr0() const { return F_pr0_; }

 private:
  AnalysisParams params_;
  std::vector<FunctionalRecord> records_;
  double min_c0_ = 0.0;
  double F_pr0_ = 0.0;
};

struct CheckReport {
  std::string name;
  bool pass = false;
  double worst = 0.0;    // worst violation measure (check-specific)
  double worst_t = 0.0;  // time of the worst record
  long worst_index = -1;
  std::string detail;
};

/// Mass identity: max_k |mass_n(t_k) - mass_n(0)| <= rel_tol * mass_n(0).
CheckReport check_mass(const FunctionalSeries& s, double rel_tol);

/// min_c(t_k) >= factor * lower_envelope(t_k) for all k.
CheckReport check_lower_bound(const FunctionalSeries& s, double factor);

/// F_pr(t_k) <= (1 + slack) * F_pr(0) e^{r t_k} for all k. Requires r in I_p;
/// throws AdmissibilityError otherwise.
CheckReport check_gronwall(const FunctionalSeries& s, const AnalysisParams& params, double slack);

/// Passes iff the max |energy_residual| of the dt/2 rerun is at most the
/// coarse one divided by `factor` (default 1.5). Throws InsufficientData for
/// series shorter than 2 records.
CheckReport check_energy_identity(const FunctionalSeries& coarse, const FunctionalSeries& fine,
                                  double factor = 1.5);

/// Record-level nonnegativity invariants across the series.
CheckReport check_record_nonneg(const FunctionalSeries& s);

struct TimeIntegrals {
  double int_dissipation_pr = 0.0;
  double int_dirichlet_u = 0.0;
  double int_n2 = 0.0;
  double int_npc_mix = 0.0;
};

/// Trapezoidal time integrals of the corresponding columns.
TimeIntegrals time_integrals(const FunctionalSeries& s);

}  // namespace ksfluid
