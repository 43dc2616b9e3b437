// Admissibility algebra for the coupled model: the chi bound, the interval
// I_p of admissible singular-weight exponents, the equivalent discriminant
// inequality, exponential envelopes, and the interpolation-exponent gates.
#pragma once

#include <string>
#include <vector>

#include "ksfluid/errors.hpp"

namespace ksfluid {

struct AnalysisParams {
  int N = 2;
  double chi = 0.5;
  double p = 2.0;
  double r = 0.5;
  double q = 2.0;
  double p0 = 3.0;
  double r0 = 1.0;

  bool operator==(const AnalysisParams&) const = default;
};

/// Largest admissible chi for dimension N: sqrt(2/N). Throws
/// UnsupportedDimension unless N is 2 or 3.
double chi_bound(int N);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double mid() const { return 0.5 * (lo + hi); }
  /// Open-interval membership guarded by an endpoint tolerance: values within
  /// `tol` of an endpoint do not count as inside.
  bool contains(double r, double tol = 1e-12) const { return r > lo + tol && r < hi - tol; }
};

/// I_p = ((p-1)/2 (1 - sqrt(1 - p chi^2)), (p-1)/2 (1 + sqrt(1 - p chi^2))).
/// Throws AdmissibilityError unless p > 1 and p chi^2 < 1.
Interval interval_Ip(double p, double chi);

/// The strict inequality (2pr + chi p(p-1))^2 < 4p(p-1)(chi p r + r(r+1)),
/// evaluated exactly as written.
bool discriminant_holds(double p, double r, double chi);

struct GnConditions {
  double a = 0.0;
  double b = 0.0;
  double ab = 0.0;
  double second_exp = 0.0;
  bool ok = false;
};

/// Interpolation exponents a = 2(pq-p+r)/(pq), b = N(q-p+r)/(2(pq-p+r)) and
/// the three gates ab < 2, second exponent < 2, (N-1) r < p.
/// Pre: q >= max(2, p-r). Throws DegenerateExponent on a zero denominator.
GnConditions gn_conditions(int N, double p, double q, double r);

/// F0 * exp(r t): the bound implied by d/dt F <= r F.
double gronwall_envelope(double F0, double r, double t);

enum class GateStatus { Pass, Warn, Fail };

struct ValidationItem {
  std::string gate;
  GateStatus status = GateStatus::Pass;
  std::string value;
};

struct ValidationReport {
  std::vector<ValidationItem> items;
  bool all_pass() const {
    for (const auto& it : items)
      if (it.status == GateStatus::Fail) return false;
    return true;
  }
  bool theorem_regime() const {
    for (const auto& it : items)
      if (it.status != GateStatus::Pass) return false;
    return true;
  }
};

/// Runs every gate: dimension, chi regime (warn only), p range, r in I_p,
/// discriminant consistency, q floor, interpolation gates, p0 range, the r0
/// definition and r0 in I_{p0}.
ValidationReport validate(const AnalysisParams& params);

}  // namespace ksfluid
