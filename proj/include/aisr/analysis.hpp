#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "aisr/evodyn.hpp"
#include "aisr/params.hpp"
#include "aisr/payoff.hpp"

namespace aisr {

enum class RegimeKind { EarlyAIS, Intermediate, LateAIS };

struct Regime {
  RegimeKind kind;
  double ratio;  // B / (W b)
};

inline constexpr double kDefaultRegimeCutoff = 10.0;

Regime classify_regime(const RaceParams& p, double cutoff = kDefaultRegimeCutoff);
std::string_view to_string(RegimeKind k);

// Early-regime limits of the collective and risk-dominance boundaries in p_r.
double early_collective_threshold(double s);
double early_risk_dominance_threshold(double s);

enum class Zone { Compliance, Dilemma, Innovation };

// Roman numeral label used in output files: I, II, III.
std::string_view zone_label(Zone z);

// Which safe strategies must risk-dominate AU for a point to count as
// socially selecting safety.
enum class SafetySelection { Both, Either };

struct ZoneReport {
  Zone zone;
  double collective_gap;  // Pi(AS,AS) - Pi(AU,AU)
  double as_rd_margin;    // risk-dominance margin of AS vs AU
  double cs_rd_margin;    // risk-dominance margin of CS vs AU
  bool tie;               // some deciding quantity is exactly zero
};

ZoneReport classify_zone(const RaceParams& p, SafetySelection rule = SafetySelection::Both);

enum class Boundary { Collective, AsRiskDominance, CsRiskDominance };

std::string_view to_string(Boundary b);

// Boundary quantity whose sign change defines the curve.
double boundary_value(const RaceParams& p, Boundary which);

class NoSignChange : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kThresholdTolerance = 1e-6;

// Bisection on `which` along parameter `axis` ("p_r", "p_fo", "s", "W", ...)
// over [lo, hi]; result is within `tol` of the crossing. Throws NoSignChange
// when the boundary quantity has one sign at both ends.
double threshold_curve(const RaceParams& p, std::string_view axis, Boundary which, double lo,
                       double hi, double tol = kThresholdTolerance);

// Same, with the natural probability range [0,1] for p_r / p_fo.
double threshold_curve(const RaceParams& p, std::string_view axis, Boundary which);

// Every boundary quantity is affine in p_r (only the AU row carries 1 - p_r),
// so its zero is available in closed form even when it falls outside [0,1].
// Returns +/-inf when the quantity does not depend on p_r.
double pr_boundary_root(const RaceParams& p, Boundary which);

struct WelfarePoint {
  double welfare;
};

WelfarePoint social_welfare(const RaceParams& p, const DynamicsParams& dyn);
// Same, reusing an already solved stationary distribution over `pi`.
WelfarePoint social_welfare(const PayoffMatrix& pi, const StationaryResult& st);

}  // namespace aisr
