#pragma once

#include <random>

#include "dmflow/network_model.hpp"
#include "dmflow/poincare_map.hpp"

namespace dmflow::test {

inline DmSpec make(double c0, double c1, double c2, double c3, double beta, double xi) {
  DmSpec s;
  s.c0 = c0;
  s.c1 = c1;
  s.c2 = c2;
  s.c3 = c3;
  s.beta = beta;
  s.xi = xi;
  return s;
}

// C0=3, C1=1, C2=2, C3=2, beta=1/3.
inline DmSpec small_network(double xi) { return make(3, 1, 2, 2, 1.0 / 3.0, xi); }
// C0=3, C1=1.5, C2=2, C3=2.5, beta=0.3.
inline DmSpec sweep_network(double xi) { return make(3, 1.5, 2, 2.5, 0.3, xi); }
// C1=C2, beta=1/2.
inline DmSpec symmetric_network(double xi) { return make(3, 1.5, 1.5, 2, 0.5, xi); }

// Random spec with C3 < C0, C3 < C1 + C2 and xi strictly inside
// (1 - C2/C3, C1/C3), away from beta and 1/2.
inline DmSpec random_tilde_spec(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (;;) {
    const double c3 = 1.0 + unit(rng);
    const double c1 = c3 * (0.15 + 0.8 * unit(rng));
    const double c2 = c3 * (0.15 + 0.8 * unit(rng));
    const double c0 = c3 * (1.05 + unit(rng));
    const double lo = 1.0 - c2 / c3, hi = c1 / c3;
    if (hi - lo < 0.05) continue;
    const double xi = lo + (hi - lo) * (0.02 + 0.96 * unit(rng));
    const double beta = unit(rng);
    if (std::abs(xi - beta) < 1e-3 || std::abs(xi - 0.5) < 1e-3 || xi <= 0.0) continue;
    return make(c0, c1, c2, c3, beta, xi);
  }
}

// Random spec with a defined map: C3 <= C0, C3 < C1 + C2, any xi, beta.
inline DmSpec random_map_spec(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (;;) {
    const double c3 = 1.0 + unit(rng);
    const double c1 = c3 * (0.1 + 0.9 * unit(rng));
    const double c2 = c3 * (0.1 + 0.9 * unit(rng));
    const double c0 = unit(rng) < 0.2 ? c3 : c3 * (1.0 + unit(rng));
    if (c1 + c2 <= c3 * 1.001) continue;
    const DmSpec s = make(c0, c1, c2, c3, unit(rng), unit(rng));
    if (classify_regime(s).map_defined()) return s;
  }
}

}  // namespace dmflow::test
