#pragma once

#include <optional>
#include <string>

#include "dmflow/ctm.hpp"
#include "dmflow/extended_networks.hpp"
#include "dmflow/network_model.hpp"

namespace dmflow {

/// Parsed scenario document. Numbers may be given as JSON numbers or as
/// "p/q" strings for exact rationals such as 1/3.
struct Scenario {
  TopologyKind kind = TopologyKind::Dm;
  DmSpec dm;
  DmnSpec dmn;
  BeltwaySpec beltway;
  double beltway_initial_flow = 0.5;
  LinkPhysics physics;

  SimulationOptions sim;
  double horizon = 400.0;
  double warmup_fraction = 0.5;
  double window_fraction = 0.25;
  double tol = 1e-3;

  double orbit_v0 = 0.0;
  int orbit_steps = 60;
  double xi_min = 0.0;
  double xi_max = 1.0;
  double xi_step = 0.001;

  std::string output_dir;
  std::string output_format = "csv";

  double xi() const;
  NetworkDescription network() const;
};

/// Throws ConfigError with "source:line:col: message" diagnostics.
Scenario parse_scenario(const std::string& text, const std::string& source = "<scenario>");
Scenario load_scenario(const std::string& path);

const char* to_string(TopologyKind k);

}  // namespace dmflow
