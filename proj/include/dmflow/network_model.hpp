#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dmflow/fundamental_diagram.hpp"

namespace dmflow {

enum class DiagramShape { Triangular, Greenshields };

/// Physical link parameters used only by the simulator. Capacities live in
/// the network specs; these set wave speeds and lengths. Greenshields links
/// ignore the congested wave speed and take jam density 4C/vf.
struct LinkPhysics {
  double free_flow_speed = 1.0;
  double congested_wave_speed = 0.5;
  double length = 1.0;
  DiagramShape shape = DiagramShape::Triangular;
};

FundamentalDiagram make_diagram(double capacity, const LinkPhysics& physics);

/// Diverge-merge network: link 0 feeds a FIFO diverge into parallel links 1
/// and 2, which rejoin at a priority merge into link 3.
struct DmSpec {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double beta = 0.5;  ///< merge priority of link 1
  double xi = 0.5;    ///< route-1 proportion at the diverge
  std::array<LinkPhysics, 4> links{};

  void validate() const;
  double capacity(int link) const;
  FundamentalDiagram diagram(int link) const;
  DmSpec with_xi(double new_xi) const {
    DmSpec s = *this;
    s.xi = new_xi;
    return s;
  }
};

enum class LinkRegime { C, SUC, SOC, ZS };

const char* to_string(LinkRegime r);

/// Admissible congested fraction l for a link regime. ZS is the open interval
/// (0, 1); the others are closed.
struct CongestionRange {
  double lo = 0.0;
  double hi = 1.0;
  bool open = false;
  bool contains(double l) const;
};

CongestionRange admissible_congestion(LinkRegime r);

/// One stationary solution of the DM network: link-1/link-2 regimes and the
/// total flow q (q1 = xi q, q2 = (1 - xi) q).
struct StationaryState {
  LinkRegime link1 = LinkRegime::SUC;
  LinkRegime link2 = LinkRegime::SUC;
  double q = 0.0;

  CongestionRange l1_range() const { return admissible_congestion(link1); }
  CongestionRange l2_range() const { return admissible_congestion(link2); }
  bool operator==(const StationaryState&) const = default;
};

/// All stationary states admitted by the spec. Boundary conditions with a
/// multivalued table entry return every admissible combination.
std::vector<StationaryState> stationary_states(const DmSpec& spec);

/// Two-plateau stationary density: under-critical on [0, shock), over-critical
/// on [shock, length].
struct LinkProfile {
  double length = 1.0;
  double shock_position = 1.0;
  double upstream_density = 0.0;
  double downstream_density = 0.0;

  double density_at(double x) const;
  double vehicles() const;
};

/// Density profiles of links 0..3 for a stationary state with congested
/// fractions l1, l2 on the intermediate links.
std::array<LinkProfile, 4> stationary_profile(const DmSpec& spec, const StationaryState& ss,
                                              double l1, double l2);

// ---------------------------------------------------------------------------
// Topology-generic network descriptions consumed by the simulator.

enum class JunctionKind { Origin, Destination, Diverge, Merge };

/// Time-dependent boundary value; empty means use the constant.
using BoundaryProfile = std::function<double(double t)>;

struct Junction {
  JunctionKind kind = JunctionKind::Origin;
  std::vector<int> in;   ///< incoming link indices
  std::vector<int> out;  ///< outgoing link indices

  double demand = 0.0;               ///< Origin: d_r
  BoundaryProfile demand_profile;    ///< Origin: optional d_r(t)
  double commodity1_fraction = 0.0;  ///< Origin: xi_r
  double supply = 0.0;               ///< Destination: s_w
  BoundaryProfile supply_profile;    ///< Destination: optional s_w(t)
  /// Merge: priority of in[0]; in[1] gets 1 - priority.
  double priority = 0.5;
  /// Diverge: fixed share to out[0]. Empty means split by the commodity-1
  /// fraction of the upstream cell (commodity 1 -> out[0]).
  std::optional<double> turning;

  double demand_at(double t) const { return demand_profile ? demand_profile(t) : demand; }
  double supply_at(double t) const { return supply_profile ? supply_profile(t) : supply; }
};

struct NetworkLink {
  std::string name;
  double capacity = 1.0;
  LinkPhysics physics;

  FundamentalDiagram diagram() const { return make_diagram(capacity, physics); }
};

/// Flux measured at the downstream end of a link.
struct Section {
  std::string name;
  int link = 0;
};

enum class TopologyKind { Dm, Dmn, Beltway, Custom };

struct NetworkDescription {
  TopologyKind kind = TopologyKind::Custom;
  std::vector<NetworkLink> links;
  std::vector<Junction> junctions;
  std::vector<Section> sections;
  /// Commodity-1 fraction reported for empty cells.
  double default_fraction = 0.0;

  int link_index(const std::string& name) const;
  void validate() const;
};

/// origin -> 0 -> diverge -> {1, 2} -> merge -> 3 -> destination,
/// with d_r = C0, s_w = C3, xi_r = xi. Sections "link1" and "link2".
NetworkDescription build_dm(const DmSpec& spec);

/// Symmetric (DM)^n ring: stage i has an origin link (cap 3s, demand 3s), a
/// diverge into congested link c_i (cap s, share xi) and free link f_i
/// (cap 2s), and a merge of c_i with f_{i-1} into an exit link (cap 2s) with
/// destination supply 2s. Sections "c0".."c{n-1}".
struct DmnSpec {
  int n = 1;
  double xi = 0.4;
  /// Merge priority of the congested link. Zero keeps the lower floor of the
  /// DM map inactive so the ring map is min{s, 2s - lambda v} exactly.
  double beta = 0.0;
  double scale = 1.0;
  LinkPhysics physics{};
};

NetworkDescription build_dmn(const DmnSpec& spec);

/// Ring road with n alternating off-ramp (FIFO diverge, share xi to the ramp)
/// and on-ramp (priority merge, on-ramp ratio beta) pairs. Ring segments are
/// a_i (merge i -> diverge i) and b_i (diverge i -> merge i+1). Sections
/// "b0".."b{n-1}" measure mainline flux entering each merge.
struct BeltwayLayout {
  double ring_capacity = 1.0;
  double ramp_capacity = 1.0;
  double on_ramp_demand = 1.0;
  double off_ramp_supply = 1.0;
  LinkPhysics ring_physics{};
  LinkPhysics ramp_physics{};
};

NetworkDescription build_beltway(int n_ramp_pairs, double beta, double xi,
                                 const BeltwayLayout& layout = {});

}  // namespace dmflow
