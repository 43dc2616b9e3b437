#include "ksfluid/analysis.hpp"

#include <cmath>
#include <cstdio>

namespace ksfluid {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace

double chi_bound(int N) {
  if (N != 2 && N != 3) throw UnsupportedDimension("N must be 2 or 3");
  return std::sqrt(2.0 / N);
}

Interval interval_Ip(double p, double chi) {
  if (!(p > 1.0)) throw AdmissibilityError("interval_Ip requires p > 1");
  const double d = 1.0 - p * chi * chi;
  if (!(d > 0.0)) throw AdmissibilityError("interval_Ip requires p chi^2 < 1");
  const double s = std::sqrt(d);
  const double half = 0.5 * (p - 1.0);
  return Interval{half * (1.0 - s), half * (1.0 + s)};
}

bool discriminant_holds(double p, double r, double chi) {
  const double lhs = 2.0 * p * r + chi * p * (p - 1.0);
  const double rhs = 4.0 * p * (p - 1.0) * (chi * p * r + r * (r + 1.0));
  return lhs * lhs < rhs;
}

GnConditions gn_conditions(int N, double p, double q, double r) {
  if (N != 2 && N != 3) throw UnsupportedDimension("N must be 2 or 3");
  if (q < std::max(2.0, p - r))
    throw DegenerateExponent("gn_conditions requires q >= max(2, p - r)");
  GnConditions g;
  const double d1 = p * q;
  const double d2 = 2.0 * (p * q - p + r);
  const double d3 = 2.0 * p * q - N * (q - p + r);
  if (d1 == 0.0 || d2 == 0.0 || d3 == 0.0)
    throw DegenerateExponent("gn_conditions: zero denominator");
  g.a = 2.0 * (p * q - p + r) / d1;
  g.b = N * (q - p + r) / d2;
  g.ab = g.a * g.b;
  g.second_exp = 2.0 * (2.0 * p * q + (N - 2.0) * p - N * q + (N - 2.0) * r) / d3;
  g.ok = g.ab < 2.0 && g.second_exp < 2.0 && (N - 1.0) * r < p;
  return g;
}

double gronwall_envelope(double F0, double r, double t) { return F0 * std::exp(r * t); }

ValidationReport validate(const AnalysisParams& pr) {
  ValidationReport rep;
  auto add = [&](const std::string& gate, GateStatus st, const std::string& value) {
    rep.items.push_back({gate, st, value});
  };

  if (pr.N != 2 && pr.N != 3) {
    add("dimension", GateStatus::Fail, "N=" + std::to_string(pr.N) + " (need 2 or 3)");
    return rep;
  }
  add("dimension", GateStatus::Pass, "N=" + std::to_string(pr.N));

  const double bound = chi_bound(pr.N);
  if (pr.chi <= 0.0) {
    add("chi_positive", GateStatus::Fail, "chi=" + fmt(pr.chi));
    return rep;
  }
  add("chi_positive", GateStatus::Pass, "chi=" + fmt(pr.chi));
  add("chi_regime", pr.chi < bound ? GateStatus::Pass : GateStatus::Warn,
      "chi=" + fmt(pr.chi) + " vs bound " + fmt(bound) +
          (pr.chi < bound ? "" : " (outside theorem regime; exploration only)"));

  const bool p_ok = pr.p > 1.0 && pr.p * pr.chi * pr.chi < 1.0;
  add("p_range", p_ok ? GateStatus::Pass : GateStatus::Fail,
      "p=" + fmt(pr.p) + " need (1, " + (pr.chi < 1.0 ? fmt(1.0 / (pr.chi * pr.chi)) : "-") +
          ")");
  if (p_ok) {
    const Interval ip = interval_Ip(pr.p, pr.chi);
    const bool r_in = ip.contains(pr.r);
    add("r_in_Ip", r_in ? GateStatus::Pass : GateStatus::Fail,
        "r=" + fmt(pr.r) + " I_p=(" + fmt(ip.lo) + ", " + fmt(ip.hi) + ")");
    const bool disc = discriminant_holds(pr.p, pr.r, pr.chi);
    add("discriminant", disc ? GateStatus::Pass : GateStatus::Fail,
        disc ? "strict inequality holds" : "strict inequality fails");
  }

  add("q_floor", pr.q >= 1.0 ? GateStatus::Pass : GateStatus::Fail, "q=" + fmt(pr.q));
  if (pr.q >= std::max(2.0, pr.p - pr.r)) {
    try {
      const GnConditions g = gn_conditions(pr.N, pr.p, pr.q, pr.r);
      add("gn_exponents", g.ok ? GateStatus::Pass : GateStatus::Fail,
          "ab=" + fmt(g.ab) + " second=" + fmt(g.second_exp) + " (N-1)r=" +
              fmt((pr.N - 1.0) * pr.r) + " p=" + fmt(pr.p));
    } catch (const DegenerateExponent& e) {
      add("gn_exponents", GateStatus::Fail, e.what());
    }
  } else {
    add("gn_exponents", GateStatus::Warn,
        "skipped: q=" + fmt(pr.q) + " < max(2, p-r)=" + fmt(std::max(2.0, pr.p - pr.r)));
  }

  const bool p0_ok = p_ok && pr.p0 > pr.p && pr.p0 * pr.chi * pr.chi < 1.0;
  add("p0_range", p0_ok ? GateStatus::Pass : GateStatus::Fail,
      "p0=" + fmt(pr.p0) + " need (p, 1/chi^2)");
  const bool r0_def = pr.r0 == 0.5 * (pr.p0 - 1.0) ||
                      std::abs(pr.r0 - 0.5 * (pr.p0 - 1.0)) <= 1e-12 * std::max(1.0, pr.p0);
  add("r0_definition", r0_def ? GateStatus::Pass : GateStatus::Fail,
      "r0=" + fmt(pr.r0) + " vs (p0-1)/2=" + fmt(0.5 * (pr.p0 - 1.0)));
  if (p0_ok && r0_def) {
    const Interval ip0 = interval_Ip(pr.p0, pr.chi);
    add("r0_in_Ip0", ip0.contains(pr.r0) ? GateStatus::Pass : GateStatus::Fail,
        "r0=" + fmt(pr.r0) + " I_p0=(" + fmt(ip0.lo) + ", " + fmt(ip0.hi) + ")");
  }
  return rep;
}

}  // namespace ksfluid
