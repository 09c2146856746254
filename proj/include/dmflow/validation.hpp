#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dmflow/ctm.hpp"
#include "dmflow/extended_networks.hpp"
#include "dmflow/poincare_map.hpp"

namespace dmflow {

enum class Verdict { Converged, PersistentOscillation, Undetermined };

const char* to_string(Verdict v);

struct OscillationReport {
  Verdict verdict = Verdict::Undetermined;
  double value = 0.0;   ///< Converged: window mean
  double low = 0.0;     ///< window minimum
  double high = 0.0;    ///< window maximum
  double period = 0.0;  ///< PersistentOscillation: mean spacing of upward mid-level crossings
  double warmup_used = 0.0;
  double window = 0.0;
};

/// Sample i of `series` is taken at time i dt. The analysis window is
/// [warmup, warmup + window]. Converged when its range is below tol;
/// PersistentOscillation when both halves of the window reach the same
/// extrema (within max(tol, 5% of the range)) and the series crosses its
/// mid-level upward at least twice; Undetermined otherwise.
OscillationReport detect_oscillation(const std::vector<double>& series, double dt, double warmup,
                                     double window, double tol);

struct ValidationOptions {
  SimulationOptions sim{};
  double horizon = 400.0;
  double warmup_fraction = 0.5;
  double window_fraction = 0.25;
  double tol = 1e-3;
  double ppo_rel_tol = 0.05;
  double converged_rel_tol = 0.01;
};

struct ValidationReport {
  DmSpec spec;
  StabilityReport analytic;
  OscillationReport measured;
  /// Which series was analyzed: "link1", "C3-link2" (clockwise branch).
  std::string series;
  std::optional<Verdict> expected;
  bool verdict_agrees = false;
  std::optional<double> rel_error_low;
  std::optional<double> rel_error_high;
  std::optional<double> rel_error_value;
  bool passed = false;
};

/// CTM run of build_dm(spec) from an empty network compared against the map.
ValidationReport validate_spec(const DmSpec& spec, const ValidationOptions& options = {});

/// Measured flux series used by validate_spec, exposed for plotting.
std::vector<double> map_series(const DmSpec& spec, const RunRecord& record);

struct PeriodRoots {
  std::vector<double> points;
  /// Closed intervals on which F^order v = v identically.
  std::vector<std::pair<double, double>> intervals;
};

/// Exact roots of F^order v = v on [0, C3]. F^order is composed symbolically
/// as a continuous piecewise-linear function and each segment is solved in
/// closed form.
PeriodRoots brute_force_period_roots(const PiecewiseMap& map, int order);

/// Breakpoints and values of F^order on [0, C3].
std::vector<std::pair<double, double>> compose_power(const PiecewiseMap& map, int order);

/// Independent oracle: sign changes of g on a uniform grid refined by
/// bisection, plus grid points where g vanishes.
std::vector<double> grid_scan_roots(const std::function<double(double)>& g, double lo, double hi,
                                    int points = 100000, double tol = 1e-10);

struct DmnSimReport {
  DmnClass verdict = DmnClass::Stable;
  /// False when some section was Undetermined.
  bool determined = false;
  std::vector<OscillationReport> sections;
  std::vector<double> final_values;  ///< window means per congested link
};

/// CTM run of build_dmn. Without a perturbation the ring starts empty. With
/// one it starts at the symmetric stationary state (v = 2 xi on every
/// congested link) with the flow of link c0 shifted by `perturbation`.
DmnSimReport simulate_dmn(int n, double xi, std::optional<double> perturbation = std::nullopt,
                          const ValidationOptions& options = {});

struct BeltwaySimReport {
  double decay_rate = 0.0;          ///< fitted d ln(flux)/dt
  double pair_time = 0.0;           ///< backward traversal time of one ring pair
  double measured_per_pair = 0.0;   ///< exp(decay_rate * pair_time)
  double analytic_per_pair = 0.0;
  std::vector<double> flux;         ///< section b0 flux
  double dt = 0.0;
};

/// CTM run of a congested beltway started at ring flow `initial_flow`.
BeltwaySimReport simulate_beltway(int n, double beta, double xi, double horizon = 60.0,
                                  double initial_flow = 0.5, const SimulationOptions& sim = {});

}  // namespace dmflow
