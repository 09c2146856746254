#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dmflow/poincare_map.hpp"

namespace dmflow {

struct BifurcationPoint {
  double xi = 0.0;
  RegimeKind regime = RegimeKind::Xi1;
  double v_star = 0.0;
  StabilityClass stability = StabilityClass::FiniteTime;
  std::optional<double> v_minus;
  std::optional<double> v_plus;
  bool continuum = false;
};

/// Ascending grid xi_min, xi_min + step, ... <= xi_max with each value rounded
/// to 12 decimals so that decimal steps land on decimal values. Empty when
/// xi_max < xi_min.
std::vector<double> xi_grid(double xi_min, double xi_max, double step);

struct RegimeBoundary {
  double xi = 0.0;
  std::string label;  // "1-C2/C3", "beta", "1/2", "C1/C3", possibly joined by '='
  StabilityClass left = StabilityClass::FiniteTime;
  StabilityClass at = StabilityClass::FiniteTime;
  StabilityClass right = StabilityClass::FiniteTime;
};

/// Boundary values in [0, 1] for a template; xi of the template is ignored.
/// Coinciding values are merged. Empty for the bottleneck regimes.
std::vector<RegimeBoundary> regime_boundaries(const DmSpec& spec_template);

/// Evaluates every grid value plus every regime boundary lying inside
/// [grid.front(), grid.back()]. Boundary values replace grid points closer
/// than 1e-15. Output is ascending in xi.
std::vector<BifurcationPoint> sweep_xi(const DmSpec& spec_template, std::vector<double> grid);

BifurcationPoint evaluate_xi(const DmSpec& spec_template, double xi);

}  // namespace dmflow
