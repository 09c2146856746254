#pragma once

#include <vector>

namespace dmflow {

// Symmetric (DM)^n ring with congested-link capacity 1, free-link capacity 2
// and destination supply 2, all multiplied by `scale`. The state holds the
// out-fluxes of the n congested links.
struct DmnMapState {
  std::vector<double> v;
  bool operator==(const DmnMapState&) const = default;
};

/// True when xi is inside the band (1/3, 1/2) where the ring map was derived.
bool dmn_analyzed(double xi);

/// v_i <- min{s, 2s - lambda v_{i-1}} with indices cyclic.
DmnMapState dmn_step(double xi, const DmnMapState& state, double scale = 1.0);

std::vector<DmnMapState> dmn_iterate(double xi, const DmnMapState& v0, int steps,
                                     double scale = 1.0);

/// (-lambda)^n: multiplier applied to a perturbation of one component after
/// n steps around the symmetric fixed point.
double dmn_perturbation_factor(int n, double xi);

enum class DmnClass { PpoOdd, BistableEven, Stable };

const char* to_string(DmnClass c);

struct DmnClassification {
  DmnClass kind = DmnClass::Stable;
  bool analyzed = false;
  DmnMapState symmetric;                ///< v_i = 2 xi s for every i
  std::vector<DmnMapState> fixed_points;  ///< BistableEven: the two asymmetric states
  std::vector<double> cycle;              ///< PpoOdd: (2s - lambda s, s)
};

DmnClassification dmn_classify(int n, double xi, double scale = 1.0);

struct BeltwaySpec {
  double beta = 0.0;
  double xi = 0.0;
  int n = 1;

  void validate() const;
  double alpha() const { return beta / (1.0 - beta); }
  double mu() const { return xi / (1.0 - xi); }
};

struct BeltwayFactor {
  double per_pair = 1.0;  ///< (1 - beta)/(1 - xi)
  double per_lap = 1.0;   ///< per_pair^n
  double alpha_mu_form = 1.0;  ///< (1 + mu)/(1 + alpha)
};

BeltwayFactor beltway_factor(const BeltwaySpec& spec);

enum class GridlockClass { GridlockStable, GridlockUnstable, Neutral };

const char* to_string(GridlockClass c);

GridlockClass beltway_classify(const BeltwaySpec& spec);

struct HalfLife {
  double pairs = 0.0;
  double laps = 0.0;
};

/// Throws DomainError when the per-pair ratio is not below 1.
HalfLife beltway_half_life(const BeltwaySpec& spec);

}  // namespace dmflow
