#pragma once

#include <optional>
#include <vector>

#include "dmflow/network_model.hpp"

namespace dmflow {

enum class RegimeKind {
  UpstreamBottleneck,
  MiddleBottleneck,
  Xi1,
  Xi2,
  Xi1Xi2Overlap,
  TildeXi1,
  TildeXi2,
};

const char* to_string(RegimeKind k);

struct Regime {
  RegimeKind kind = RegimeKind::Xi1;

  /// False for the bottleneck regimes, where no return map exists.
  bool map_defined() const {
    return kind != RegimeKind::UpstreamBottleneck && kind != RegimeKind::MiddleBottleneck;
  }
  bool on_xi1() const {
    return kind == RegimeKind::Xi1 || kind == RegimeKind::TildeXi1 ||
           kind == RegimeKind::Xi1Xi2Overlap;
  }
  bool on_xi2() const {
    return kind == RegimeKind::Xi2 || kind == RegimeKind::TildeXi2 ||
           kind == RegimeKind::Xi1Xi2Overlap;
  }
  bool tilde() const { return kind == RegimeKind::TildeXi1 || kind == RegimeKind::TildeXi2; }
  bool operator==(const Regime&) const = default;
};

Regime classify_regime(const DmSpec& spec);

enum class MapBranch { Counterclockwise, Clockwise };

const char* to_string(MapBranch b);

/// Which branch to build when xi = beta sits inside the open interval and
/// both constructions apply.
enum class OverlapBranch { PreferXi1, PreferXi2 };

struct CobwebSegment {
  double x0, y0, x1, y1;
};

/// First-return map on the out-flux v of link 1.
///
///   Counterclockwise: F v = min{upper, max{lower, c3 - slope v}}
///                     upper = C1, lower = A1, slope = (1 - xi)/xi
///   Clockwise:        F v = max{lower, min{upper, slope (c3 - v)}}
///                     lower = C3 - C2, upper = A2', slope = xi/(1 - xi)
struct PiecewiseMap {
  MapBranch branch = MapBranch::Counterclockwise;
  double xi = 0.5;
  double c3 = 1.0;
  double slope = 1.0;
  double lower = 0.0;
  double upper = 1.0;

  double apply(double v) const;
  /// Interior breakpoints in (0, c3), ascending.
  std::vector<double> kinks() const;
  std::vector<double> iterate(double v0, int n) const;
  std::vector<CobwebSegment> cobweb(double v0, int n) const;
};

double a1(const DmSpec& spec);
double a2(const DmSpec& spec);
double a2_prime(const DmSpec& spec);

PiecewiseMap build_map(const DmSpec& spec, OverlapBranch overlap = OverlapBranch::PreferXi1);

double fixed_point(const DmSpec& spec);

enum class StabilityClass { FiniteTime, Asymptotic, Unstable, NeutralTwoCycleContinuum };

const char* to_string(StabilityClass c);

/// Period-2 pair. When `continuum` is set every point of [v_minus, v_plus]
/// other than v* is 2-periodic.
struct Period2 {
  double v_minus = 0.0;
  double v_plus = 0.0;
  bool continuum = false;
};

struct StabilityReport {
  Regime regime;
  /// Map fixed point. In the bottleneck regimes this is the stationary link-1
  /// flow xi q instead.
  double v_star = 0.0;
  StabilityClass stability = StabilityClass::FiniteTime;
  /// Label from the linearized slope alone: xi = 1/2 counts as Unstable here
  /// even though the report classifies it as a neutral continuum.
  StabilityClass linear_class = StabilityClass::FiniteTime;
  /// 1 or 2 for FiniteTime on a defined map; 0 when no map exists.
  int max_steps = 0;
  std::optional<Period2> period2;
};

StabilityReport classify_stability(const DmSpec& spec);

/// Empty when the fixed point is stable.
std::optional<Period2> period2_points(const DmSpec& spec);

}  // namespace dmflow
