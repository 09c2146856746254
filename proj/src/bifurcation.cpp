#include "dmflow/bifurcation.hpp"

#include <algorithm>
#include <cmath>

#include "dmflow/errors.hpp"

namespace dmflow {

std::vector<double> xi_grid(double xi_min, double xi_max, double step) {
  if (!(step > 0.0)) throw DomainError("grid step must be positive");
  std::vector<double> grid;
  if (xi_max < xi_min) return grid;
  const auto count = static_cast<long>(std::floor((xi_max - xi_min) / step + 1e-9));
  grid.reserve(static_cast<std::size_t>(count) + 1);
  for (long i = 0; i <= count; ++i) {
    const double x = xi_min + static_cast<double>(i) * step;
    grid.push_back(std::round(x * 1e12) / 1e12);
  }
  return grid;
}

BifurcationPoint evaluate_xi(const DmSpec& spec_template, double xi) {
  const StabilityReport rep = classify_stability(spec_template.with_xi(xi));
  BifurcationPoint p;
  p.xi = xi;
  p.regime = rep.regime.kind;
  p.v_star = rep.v_star;
  p.stability = rep.stability;
  if (rep.period2) {
    p.v_minus = rep.period2->v_minus;
    p.v_plus = rep.period2->v_plus;
    p.continuum = rep.period2->continuum;
  }
  return p;
}

std::vector<RegimeBoundary> regime_boundaries(const DmSpec& spec_template) {
  DmSpec s = spec_template;
  s.validate();
  if (!classify_regime(s).map_defined()) return {};

  const double lo = (s.c3 - s.c2) / s.c3;
  const double hi = s.c1 / s.c3;
  std::vector<std::pair<double, std::string>> raw;
  if (lo >= 0.0) raw.emplace_back(lo, "1-C2/C3");
  if (s.beta > lo && s.beta < hi) raw.emplace_back(s.beta, "beta");
  // The slope changes sign of stability only where a tilde regime exists.
  if (definitely_less(s.c3, s.c0) && 0.5 > lo && 0.5 < hi) raw.emplace_back(0.5, "1/2");
  if (hi <= 1.0) raw.emplace_back(hi, "C1/C3");
  std::stable_sort(raw.begin(), raw.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  std::vector<RegimeBoundary> out;
  for (const auto& [xi, label] : raw) {
    if (!out.empty() && near(out.back().xi, xi)) {
      out.back().label += "=" + label;
      continue;
    }
    out.push_back({xi, label});
  }
  constexpr double kProbe = 1e-9;
  for (auto& b : out) {
    b.at = evaluate_xi(s, b.xi).stability;
    b.left = b.xi - kProbe >= 0.0 ? evaluate_xi(s, b.xi - kProbe).stability : b.at;
    b.right = b.xi + kProbe <= 1.0 ? evaluate_xi(s, b.xi + kProbe).stability : b.at;
  }
  return out;
}

std::vector<BifurcationPoint> sweep_xi(const DmSpec& spec_template, std::vector<double> grid) {
  for (double x : grid) {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("grid values must lie in [0, 1]");
  }
  std::sort(grid.begin(), grid.end());
  if (!grid.empty()) {
    const double first = grid.front(), last = grid.back();
    for (const auto& b : regime_boundaries(spec_template)) {
      if (b.xi < first || b.xi > last) continue;
      auto it = std::lower_bound(grid.begin(), grid.end(), b.xi - 1e-15);
      if (it != grid.end() && std::abs(*it - b.xi) <= 1e-15) {
        *it = b.xi;
      } else {
        grid.insert(it, b.xi);
      }
    }
  }
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::vector<BifurcationPoint> out;
  out.reserve(grid.size());
  for (double xi : grid) out.push_back(evaluate_xi(spec_template, xi));
  return out;
}

}  // namespace dmflow
