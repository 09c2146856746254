#include "dmflow/poincare_map.hpp"

#include <algorithm>
#include <string>

#include "dmflow/errors.hpp"

namespace dmflow {

const char* to_string(RegimeKind k) {
  switch (k) {
    case RegimeKind::UpstreamBottleneck: return "UpstreamBottleneck";
    case RegimeKind::MiddleBottleneck: return "MiddleBottleneck";
    case RegimeKind::Xi1: return "Xi1";
    case RegimeKind::Xi2: return "Xi2";
    case RegimeKind::Xi1Xi2Overlap: return "Xi1Xi2Overlap";
    case RegimeKind::TildeXi1: return "TildeXi1";
    case RegimeKind::TildeXi2: return "TildeXi2";
  }
  return "?";
}

const char* to_string(MapBranch b) {
  return b == MapBranch::Counterclockwise ? "Counterclockwise" : "Clockwise";
}

const char* to_string(StabilityClass c) {
  switch (c) {
    case StabilityClass::FiniteTime: return "FiniteTime";
    case StabilityClass::Asymptotic: return "Asymptotic";
    case StabilityClass::Unstable: return "Unstable";
    case StabilityClass::NeutralTwoCycleContinuum: return "NeutralTwoCycleContinuum";
  }
  return "?";
}

namespace {

// Position of xi relative to the open interval (1 - C2/C3, C1/C3).
enum class Band { Below, AtLower, Interior, AtUpper, Above };

Band xi_band(const DmSpec& s) {
  const double lo = (s.c3 - s.c2) / s.c3;
  const double hi = s.c1 / s.c3;
  if (near(s.xi, lo)) return Band::AtLower;
  if (near(s.xi, hi)) return Band::AtUpper;
  if (s.xi < lo) return Band::Below;
  if (s.xi > hi) return Band::Above;
  return Band::Interior;
}

}  // namespace

Regime classify_regime(const DmSpec& spec) {
  spec.validate();
  if (definitely_less(spec.c0, std::min(spec.c1 + spec.c2, spec.c3))) {
    return {RegimeKind::UpstreamBottleneck};
  }
  if (less_or_near(spec.c1 + spec.c2, std::min(spec.c0, spec.c3))) {
    return {RegimeKind::MiddleBottleneck};
  }
  const Band band = xi_band(spec);
  if (band == Band::Above || band == Band::AtUpper) return {RegimeKind::Xi1};
  if (band == Band::Below || band == Band::AtLower) return {RegimeKind::Xi2};
  if (near(spec.xi, spec.beta)) return {RegimeKind::Xi1Xi2Overlap};
  const bool strict = definitely_less(spec.c3, spec.c0);
  if (spec.xi > spec.beta) return {strict ? RegimeKind::TildeXi1 : RegimeKind::Xi1};
  return {strict ? RegimeKind::TildeXi2 : RegimeKind::Xi2};
}

double a1(const DmSpec& s) {
  return std::max({s.c3 - (1.0 - s.xi) * s.c0, s.c3 - s.c2, s.beta * s.c3});
}

double a2(const DmSpec& s) {
  return std::max({s.c3 - s.xi * s.c0, s.c3 - s.c1, (1.0 - s.beta) * s.c3});
}

double a2_prime(const DmSpec& s) { return std::min({s.xi * s.c0, s.c1, s.beta * s.c3}); }

// c3 - ((1 - xi)/xi) v evaluated as c3 - v/xi + v: rounding the slope first
// knocks exact fixed points and cycles (0.6/0.4 != 1.5) off by an ulp.
static double ccw_line(double c3, double xi, double v) { return c3 - v / xi + v; }

double PiecewiseMap::apply(double v) const {
  if (!(v >= -kBoundaryTol * c3 && v <= c3 * (1.0 + kBoundaryTol))) {
    throw DomainError("map argument " + std::to_string(v) + " outside [0, " +
                      std::to_string(c3) + "]");
  }
  if (branch == MapBranch::Counterclockwise) {
    return std::min(upper, std::max(lower, ccw_line(c3, xi, v)));
  }
  return std::max(lower, std::min(upper, slope * (c3 - v)));
}

std::vector<double> PiecewiseMap::kinks() const {
  std::vector<double> out;
  if (slope <= 0.0) return out;
  auto keep = [&](double v) {
    if (v > 0.0 && v < c3) out.push_back(v);
  };
  if (branch == MapBranch::Counterclockwise) {
    keep((c3 - upper) / slope);
    keep((c3 - lower) / slope);
  } else {
    keep(c3 - upper / slope);
    keep(c3 - lower / slope);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<double> PiecewiseMap::iterate(double v0, int n) const {
  if (n < 0) throw DomainError("iteration count must be nonnegative");
  std::vector<double> orbit;
  orbit.reserve(static_cast<std::size_t>(n) + 1);
  orbit.push_back(v0);
  apply(v0);
  for (int i = 0; i < n; ++i) orbit.push_back(apply(orbit.back()));
  return orbit;
}

std::vector<CobwebSegment> PiecewiseMap::cobweb(double v0, int n) const {
  const auto orbit = iterate(v0, n);
  std::vector<CobwebSegment> segs;
  segs.reserve(2 * static_cast<std::size_t>(n));
  for (std::size_t i = 0; i + 1 < orbit.size(); ++i) {
    const double a = orbit[i], b = orbit[i + 1];
    segs.push_back({a, a, a, b});
    segs.push_back({a, b, b, b});
  }
  return segs;
}

PiecewiseMap build_map(const DmSpec& spec, OverlapBranch overlap) {
  const Regime r = classify_regime(spec);
  if (!r.map_defined()) {
    throw UnsupportedRegimeError(std::string("no return map in regime ") + to_string(r.kind));
  }
  bool counterclockwise = r.on_xi1();
  if (r.kind == RegimeKind::Xi1Xi2Overlap) counterclockwise = overlap == OverlapBranch::PreferXi1;

  PiecewiseMap m;
  m.xi = spec.xi;
  m.c3 = spec.c3;
  if (counterclockwise) {
    if (spec.xi <= 0.0) throw DomainError("degenerate slope: xi = 0 on the Xi1 branch");
    m.branch = MapBranch::Counterclockwise;
    m.slope = (1.0 - spec.xi) / spec.xi;
    m.lower = a1(spec);
    m.upper = spec.c1;
  } else {
    if (spec.xi >= 1.0) throw DomainError("degenerate slope: xi = 1 on the Xi2 branch");
    m.branch = MapBranch::Clockwise;
    m.slope = spec.xi / (1.0 - spec.xi);
    m.lower = spec.c3 - spec.c2;
    m.upper = a2_prime(spec);
  }
  return m;
}

double fixed_point(const DmSpec& spec) {
  const Regime r = classify_regime(spec);
  if (!r.map_defined()) {
    throw UnsupportedRegimeError(std::string("no fixed point in regime ") + to_string(r.kind));
  }
  switch (xi_band(spec)) {
    case Band::AtUpper:
    case Band::Above: return spec.c1;
    case Band::AtLower:
    case Band::Below: return spec.c3 - spec.c2;
    case Band::Interior: break;
  }
  return spec.xi * spec.c3;
}

std::optional<Period2> period2_points(const DmSpec& spec) {
  const Regime r = classify_regime(spec);
  if (!r.map_defined()) {
    throw UnsupportedRegimeError(std::string("no return map in regime ") + to_string(r.kind));
  }
  if (!r.tilde()) return std::nullopt;
  const bool half = near(spec.xi, 0.5);
  if (r.kind == RegimeKind::TildeXi1) {
    if (!half && spec.xi > 0.5) return std::nullopt;
    const double A1 = a1(spec);
    return Period2{std::max(A1, ccw_line(spec.c3, spec.xi, spec.c1)),
                   std::min(spec.c1, ccw_line(spec.c3, spec.xi, A1)), half};
  }
  if (!half && spec.xi < 0.5) return std::nullopt;
  // Mirror of the Xi1 expressions under v = C3 - v2 with v2 following the
  // link-2 map min{C2, max{A2, C3 - mu v2}}.
  const double mu = spec.xi / (1.0 - spec.xi);
  return Period2{std::max(spec.c3 - spec.c2, mu * a2(spec)),
                 std::min(a2_prime(spec), mu * spec.c2), half};
}

StabilityReport classify_stability(const DmSpec& spec) {
  StabilityReport rep;
  rep.regime = classify_regime(spec);
  if (!rep.regime.map_defined()) {
    const auto states = stationary_states(spec);
    rep.v_star = spec.xi * states.front().q;
    rep.stability = rep.linear_class = StabilityClass::FiniteTime;
    return rep;
  }

  rep.v_star = fixed_point(spec);
  if (!rep.regime.tilde()) {
    // At xi = beta = 0 only the clockwise construction has a finite slope.
    const PiecewiseMap m =
        build_map(spec, spec.xi <= 0.0 ? OverlapBranch::PreferXi2 : OverlapBranch::PreferXi1);
    // F is nonincreasing, so its range is [F(C3), F(0)].
    const bool one_step = near(m.apply(0.0), rep.v_star) && near(m.apply(spec.c3), rep.v_star);
    rep.stability = rep.linear_class = StabilityClass::FiniteTime;
    rep.max_steps = one_step ? 1 : 2;
    return rep;
  }

  const bool half = near(spec.xi, 0.5);
  const bool expanding =
      rep.regime.kind == RegimeKind::TildeXi1 ? spec.xi < 0.5 : spec.xi > 0.5;
  if (half) {
    rep.stability = StabilityClass::NeutralTwoCycleContinuum;
    rep.linear_class = StabilityClass::Unstable;
  } else {
    rep.stability = rep.linear_class =
        expanding ? StabilityClass::Unstable : StabilityClass::Asymptotic;
  }
  rep.period2 = period2_points(spec);
  return rep;
}

}  // namespace dmflow
