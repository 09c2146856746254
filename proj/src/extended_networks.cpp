#include "dmflow/extended_networks.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "dmflow/errors.hpp"

namespace dmflow {

namespace {

void require_open_unit(double xi) {
  if (!(xi > 0.0 && xi < 1.0)) throw DomainError("xi must lie in (0, 1)");
}

}  // namespace

bool dmn_analyzed(double xi) { return xi > 1.0 / 3.0 && xi < 0.5; }

DmnMapState dmn_step(double xi, const DmnMapState& state, double scale) {
  require_open_unit(xi);
  if (state.v.empty()) throw DomainError("(DM)^n state must have n >= 1 components");
  const std::size_t n = state.v.size();
  DmnMapState next;
  next.v.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double prev = state.v[(i + n - 1) % n];
    // 2s - lambda prev, ordered to keep 2s - lambda s exact.
    next.v[i] = std::min(scale, 2.0 * scale - prev / xi + prev);
    // Inside the band iterates stay positive, so no lower clip is needed.
    assert(!dmn_analyzed(xi) || next.v[i] > 0.0);
  }
  return next;
}

std::vector<DmnMapState> dmn_iterate(double xi, const DmnMapState& v0, int steps, double scale) {
  if (steps < 0) throw DomainError("iteration count must be nonnegative");
  std::vector<DmnMapState> orbit{v0};
  for (int i = 0; i < steps; ++i) orbit.push_back(dmn_step(xi, orbit.back(), scale));
  return orbit;
}

double dmn_perturbation_factor(int n, double xi) {
  if (n < 1) throw DomainError("(DM)^n needs n >= 1");
  require_open_unit(xi);
  return std::pow(-(1.0 - xi) / xi, n);
}

const char* to_string(DmnClass c) {
  switch (c) {
    case DmnClass::PpoOdd: return "PPO";
    case DmnClass::BistableEven: return "Bistable";
    case DmnClass::Stable: return "Stable";
  }
  return "?";
}

DmnClassification dmn_classify(int n, double xi, double scale) {
  if (n < 1) throw DomainError("(DM)^n needs n >= 1");
  require_open_unit(xi);
  const double lambda = (1.0 - xi) / xi;
  DmnClassification c;
  c.analyzed = dmn_analyzed(xi);
  c.symmetric.v.assign(static_cast<std::size_t>(n), 2.0 * xi * scale);
  if (lambda <= 1.0) {
    c.kind = DmnClass::Stable;
    return c;
  }
  const double low = 2.0 * scale - scale / xi + scale;
  if (n % 2 == 1) {
    c.kind = DmnClass::PpoOdd;
    c.cycle = {low, scale};
    return c;
  }
  c.kind = DmnClass::BistableEven;
  DmnMapState a, b;
  for (int i = 0; i < n; ++i) {
    a.v.push_back(i % 2 == 0 ? scale : low);
    b.v.push_back(i % 2 == 0 ? low : scale);
  }
  c.fixed_points = {a, b};
  return c;
}

void BeltwaySpec::validate() const {
  if (!(beta >= 0.0 && beta < 1.0)) throw DomainError("beltway beta must lie in [0, 1)");
  if (!(xi >= 0.0 && xi < 1.0)) throw DomainError("beltway xi must lie in [0, 1)");
  if (n < 1) throw DomainError("beltway needs n >= 1 ramp pairs");
}

BeltwayFactor beltway_factor(const BeltwaySpec& spec) {
  spec.validate();
  BeltwayFactor f;
  f.per_pair = (1.0 - spec.beta) / (1.0 - spec.xi);
  f.per_lap = std::pow(f.per_pair, spec.n);
  f.alpha_mu_form = (1.0 + spec.mu()) / (1.0 + spec.alpha());
  return f;
}

const char* to_string(GridlockClass c) {
  switch (c) {
    case GridlockClass::GridlockStable: return "GridlockStable";
    case GridlockClass::GridlockUnstable: return "GridlockUnstable";
    case GridlockClass::Neutral: return "Neutral";
  }
  return "?";
}

GridlockClass beltway_classify(const BeltwaySpec& spec) {
  const double r = beltway_factor(spec).per_pair;
  if (near(r, 1.0)) return GridlockClass::Neutral;
  return r < 1.0 ? GridlockClass::GridlockStable : GridlockClass::GridlockUnstable;
}

HalfLife beltway_half_life(const BeltwaySpec& spec) {
  const BeltwayFactor f = beltway_factor(spec);
  if (!(f.per_pair < 1.0) || near(f.per_pair, 1.0)) {
    throw DomainError("half-life undefined: flow does not decay");
  }
  HalfLife h;
  h.pairs = std::log(0.5) / std::log(f.per_pair);
  h.laps = h.pairs / spec.n;
  return h;
}

}  // namespace dmflow
