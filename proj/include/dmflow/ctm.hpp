#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dmflow/network_model.hpp"

namespace dmflow {

struct CellState {
  double density = 0.0;
  double density1 = 0.0;  ///< commodity-1 density, <= density

  /// k1/k, or `fallback` for an empty cell.
  double fraction(double fallback) const { return density > 0.0 ? density1 / density : fallback; }
};

struct LinkFlux {
  double total = 0.0;
  double commodity1 = 0.0;
};

/// Godunov flux between two cells: min{d_up, s_down}, commodity 1 upwinded.
LinkFlux link_flux(double up_demand, double up_fraction, double down_supply);

struct DivergeFlux {
  double q0 = 0.0;
  double q1 = 0.0;
  double q2 = 0.0;
};

/// FIFO diverge. A branch with zero share imposes no constraint.
DivergeFlux diverge_flux(double d0, double s1, double s2, double xi);

struct MergeFlux {
  double q3 = 0.0;
  double q1 = 0.0;
  double q2 = 0.0;
};

/// Priority merge; beta is the share of s3 guaranteed to approach 1.
MergeFlux merge_flux(double d1, double d2, double s3, double beta);

struct SimulationOptions {
  int cells_per_link = 20;
  double cfl = 0.9;
  /// Overrides the CFL-derived step when set; must still satisfy CFL.
  std::optional<double> dt;
};

struct LinkGrid {
  int cells = 0;
  double dx = 0.0;
  FundamentalDiagram fd;
};

struct NetworkState {
  double t = 0.0;
  std::vector<std::vector<CellState>> links;

  double vehicles(const std::vector<LinkGrid>& grids) const;
  double vehicles1(const std::vector<LinkGrid>& grids) const;
};

/// Fluxes realized during one step.
struct StepFluxes {
  std::vector<LinkFlux> link_in;   ///< into the first cell of each link
  std::vector<LinkFlux> link_out;  ///< out of the last cell of each link
  LinkFlux boundary_in;            ///< summed over origins
  LinkFlux boundary_out;           ///< summed over destinations
};

struct RunRecord {
  double dt = 0.0;
  std::vector<double> times;  ///< end time of each step
  std::vector<std::string> section_names;
  std::vector<std::vector<double>> section_flux;  ///< [section][step]
  /// Total and commodity-1 vehicles; index 0 is the initial state.
  std::vector<double> vehicles;
  std::vector<double> vehicles1;
  std::vector<double> inflow;   ///< boundary inflow per step (rate)
  std::vector<double> outflow;  ///< boundary outflow per step (rate)
  NetworkState final_state;

  const std::vector<double>& section(const std::string& name) const;
};

class Simulator {
 public:
  Simulator(NetworkDescription network, SimulationOptions options = {});

  const NetworkDescription& network() const { return net_; }
  const std::vector<LinkGrid>& grids() const { return grids_; }
  double dt() const { return dt_; }

  NetworkState empty_state() const;
  /// Samples each profile at cell midpoints; `fractions` gives the
  /// commodity-1 share per link.
  NetworkState state_from_profiles(const std::vector<LinkProfile>& profiles,
                                   const std::vector<double>& fractions) const;

  StepFluxes step(NetworkState& state) const;
  RunRecord run(NetworkState initial, double horizon) const;

 private:
  NetworkDescription net_;
  std::vector<LinkGrid> grids_;
  double dt_ = 0.0;
};

/// Initial state for a tabulated stationary state of a DM network built with
/// build_dm(spec). Link 1 carries only commodity 1 and link 2 none.
NetworkState dm_stationary_state(const Simulator& sim, const DmSpec& spec,
                                 const StationaryState& ss, double l1, double l2);

}  // namespace dmflow
