#include "aisr/analysis.hpp"

#include <cmath>
#include <limits>

namespace aisr {

Regime classify_regime(const RaceParams& p, double cutoff) {
  if (!(cutoff > 1.0)) throw InvalidParams("regime cutoff must exceed 1");
  const double ratio = p.B / (p.W * p.b);
  if (ratio >= cutoff) return {RegimeKind::EarlyAIS, ratio};
  if (ratio <= 1.0 / cutoff) return {RegimeKind::LateAIS, ratio};
  return {RegimeKind::Intermediate, ratio};
}

std::string_view to_string(RegimeKind k) {
  switch (k) {
    case RegimeKind::EarlyAIS: return "early";
    case RegimeKind::Intermediate: return "intermediate";
    case RegimeKind::LateAIS: return "late";
  }
  return "?";
}

double early_collective_threshold(double s) { return 1.0 - 1.0 / s; }

double early_risk_dominance_threshold(double s) { return 1.0 - 1.0 / (3.0 * s); }

std::string_view zone_label(Zone z) {
  switch (z) {
    case Zone::Compliance: return "I";
    case Zone::Dilemma: return "II";
    case Zone::Innovation: return "III";
  }
  return "?";
}

ZoneReport classify_zone(const RaceParams& p, SafetySelection rule) {
  const auto pi = averaged_payoff_matrix(p);
  ZoneReport r{};
  r.collective_gap = pi.at(Strategy::AS, Strategy::AS) - pi.at(Strategy::AU, Strategy::AU);
  r.as_rd_margin = risk_dominance_margin(Strategy::AS, Strategy::AU, pi);
  r.cs_rd_margin = risk_dominance_margin(Strategy::CS, Strategy::AU, pi);
  r.tie = r.collective_gap == 0.0 || r.as_rd_margin == 0.0 || r.cs_rd_margin == 0.0;

  const bool as_ok = r.as_rd_margin > 0.0;
  const bool cs_ok = r.cs_rd_margin > 0.0;
  const bool selected = rule == SafetySelection::Both ? (as_ok && cs_ok) : (as_ok || cs_ok);
  if (!(r.collective_gap > 0.0)) {
    r.zone = Zone::Innovation;
  } else {
    r.zone = selected ? Zone::Compliance : Zone::Dilemma;
  }
  return r;
}

std::string_view to_string(Boundary b) {
  switch (b) {
    case Boundary::Collective: return "collective";
    case Boundary::AsRiskDominance: return "as_rd";
    case Boundary::CsRiskDominance: return "cs_rd";
  }
  return "?";
}

double boundary_value(const RaceParams& p, Boundary which) {
  const auto pi = averaged_payoff_matrix(p);
  switch (which) {
    case Boundary::Collective:
      return pi.at(Strategy::AS, Strategy::AS) - pi.at(Strategy::AU, Strategy::AU);
    case Boundary::AsRiskDominance:
      return risk_dominance_margin(Strategy::AS, Strategy::AU, pi);
    case Boundary::CsRiskDominance:
      return risk_dominance_margin(Strategy::CS, Strategy::AU, pi);
  }
  return 0.0;
}

namespace {

RaceParams with_axis(RaceParams p, std::string_view axis, double x) {
  ModelConfig cfg{p, {}};
  set_field(cfg, axis, x);
  return cfg.race;
}

}  // namespace

double threshold_curve(const RaceParams& p, std::string_view axis, Boundary which, double lo,
                       double hi, double tol) {
  if (!is_field(axis) || axis == "Z" || axis == "beta") {
    throw InvalidParams("cannot trace a boundary along '" + std::string(axis) + "'");
  }
  if (!(lo < hi)) throw InvalidParams("threshold interval must satisfy lo < hi");
  auto f = [&](double x) { return boundary_value(with_axis(p, axis, x), which); };
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw NoSignChange("no sign change of " + std::string(to_string(which)) + " boundary along " +
                       std::string(axis));
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double threshold_curve(const RaceParams& p, std::string_view axis, Boundary which) {
  if (axis != "p_r" && axis != "p_fo") {
    throw InvalidParams("no default interval for '" + std::string(axis) + "'");
  }
  return threshold_curve(p, axis, which, 0.0, 1.0);
}

double pr_boundary_root(const RaceParams& p, Boundary which) {
  RaceParams at0 = p, at1 = p;
  at0.p_r = 0.0;
  at1.p_r = 1.0;
  const double f0 = boundary_value(at0, which);
  const double f1 = boundary_value(at1, which);
  if (f1 == f0) return f0 > 0.0 ? -std::numeric_limits<double>::infinity()
                                : std::numeric_limits<double>::infinity();
  return f0 / (f0 - f1);
}

WelfarePoint social_welfare(const PayoffMatrix& pi, const StationaryResult& st) {
  double w = 0.0;
  for (std::size_t i = 0; i < st.strategies.size(); ++i) {
    w += st.distribution[i] * pi.at(st.strategies[i], st.strategies[i]);
  }
  return {w};
}

WelfarePoint social_welfare(const RaceParams& p, const DynamicsParams& dyn) {
  const auto pi = averaged_payoff_matrix(validate(p));
  return social_welfare(pi, stationary_distribution(pi, dyn));
}

}  // namespace aisr
