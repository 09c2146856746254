#include "dmflow/network_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dmflow/errors.hpp"

namespace dmflow {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw DomainError(message);
}

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

Junction junction(JunctionKind kind, std::vector<int> in, std::vector<int> out) {
  Junction j;
  j.kind = kind;
  j.in = std::move(in);
  j.out = std::move(out);
  return j;
}

}  // namespace

void DmSpec::validate() const {
  for (double c : {c0, c1, c2, c3}) {
    require(c > 0.0 && std::isfinite(c), "capacities must be positive");
  }
  require(in_unit(beta), "beta must lie in [0, 1]");
  require(in_unit(xi), "xi must lie in [0, 1]");
  for (const auto& l : links) {
    require(l.length > 0.0 && l.free_flow_speed > 0.0 && l.congested_wave_speed > 0.0,
            "link lengths and wave speeds must be positive");
  }
}

double DmSpec::capacity(int link) const {
  switch (link) {
    case 0: return c0;
    case 1: return c1;
    case 2: return c2;
    case 3: return c3;
    default: throw DomainError("DM link index must be 0..3");
  }
}

FundamentalDiagram make_diagram(double capacity, const LinkPhysics& physics) {
  if (physics.shape == DiagramShape::Greenshields) {
    return FundamentalDiagram::greenshields(physics.free_flow_speed,
                                            4.0 * capacity / physics.free_flow_speed);
  }
  return FundamentalDiagram::from_capacity(capacity, physics.free_flow_speed,
                                           physics.congested_wave_speed);
}

FundamentalDiagram DmSpec::diagram(int link) const {
  return make_diagram(capacity(link), links.at(static_cast<std::size_t>(link)));
}

const char* to_string(LinkRegime r) {
  switch (r) {
    case LinkRegime::C: return "C";
    case LinkRegime::SUC: return "SUC";
    case LinkRegime::SOC: return "SOC";
    case LinkRegime::ZS: return "ZS";
  }
  return "?";
}

bool CongestionRange::contains(double l) const {
  if (open) return l > lo && l < hi;
  return l >= lo && l <= hi;
}

CongestionRange admissible_congestion(LinkRegime r) {
  switch (r) {
    case LinkRegime::C: return {0.0, 1.0, false};
    case LinkRegime::SUC: return {0.0, 0.0, false};
    case LinkRegime::SOC: return {1.0, 1.0, false};
    case LinkRegime::ZS: return {0.0, 1.0, true};
  }
  return {};
}

std::vector<StationaryState> stationary_states(const DmSpec& spec) {
  spec.validate();
  const double c0 = spec.c0, c1 = spec.c1, c2 = spec.c2, c3 = spec.c3;
  const double xi = spec.xi, beta = spec.beta;
  using R = LinkRegime;
  constexpr R kAny[] = {R::SUC, R::SOC, R::ZS};

  std::vector<StationaryState> out;
  auto add = [&out](R a, R b, double q) { out.push_back({a, b, q}); };
  auto add_any_link1 = [&](R link2, double q) {
    for (R a : kAny) add(a, link2, q);
  };
  auto add_any_link2 = [&](R link1, double q) {
    for (R b : kAny) add(link1, b, q);
  };

  // Upstream bottleneck.
  if (definitely_less(c0, std::min(c1 + c2, c3))) {
    const double lo = (c0 - c2) / c0;
    const double hi = c1 / c0;
    if (less_or_near(xi, lo)) {
      add(R::SUC, R::C, c2 / (1.0 - xi));
    } else if (definitely_less(xi, hi)) {
      add(R::SUC, R::SUC, c0);
    } else {
      add(R::C, R::SUC, c1 / xi);
    }
    return out;
  }

  // Middle bottleneck.
  if (less_or_near(c1 + c2, std::min(c0, c3))) {
    const double split = c1 / (c1 + c2);
    if (near(xi, split)) {
      add(R::C, R::C, c1 / xi);
    } else if (xi < split) {
      add(R::SUC, R::C, c2 / (1.0 - xi));
    } else {
      add(R::C, R::SUC, c1 / xi);
    }
    return out;
  }

  // Downstream bottleneck: C3 <= C0 and C3 < C1 + C2.
  const bool equal_ends = near(c3, c0);
  const double lo = (c3 - c2) / c3;
  const double hi = c1 / c3;
  const bool xi_eq_beta = near(xi, beta);
  const bool xi_lt_beta = !xi_eq_beta && xi < beta;

  if (near(xi, lo)) {
    if (xi_lt_beta) {
      add(R::SUC, R::C, c3);
    } else {
      add_any_link1(R::C, c3);
    }
  } else if (xi < lo) {
    add(R::SUC, R::C, c2 / (1.0 - xi));
  } else if (near(xi, hi)) {
    if (xi_lt_beta || xi_eq_beta) {
      add_any_link2(R::C, c3);
    } else {
      add(R::C, R::SUC, c3);
    }
  } else if (xi > hi) {
    add(R::C, R::SUC, c1 / xi);
  } else if (equal_ends) {
    if (xi_lt_beta) {
      add_any_link2(R::SUC, c3);
    } else if (xi_eq_beta) {
      for (R a : kAny) {
        for (R b : kAny) add(a, b, c3);
      }
    } else {
      add_any_link1(R::SUC, c3);
    }
  } else {
    if (xi_lt_beta) {
      add(R::SUC, R::SOC, c3);
    } else if (xi_eq_beta) {
      add_any_link2(R::SOC, c3);
      add(R::SUC, R::SOC, c3);
      add(R::ZS, R::SOC, c3);
    } else {
      add(R::SOC, R::SUC, c3);
    }
  }
  return out;
}

double LinkProfile::density_at(double x) const {
  return x < shock_position ? upstream_density : downstream_density;
}

double LinkProfile::vehicles() const {
  return upstream_density * shock_position + downstream_density * (length - shock_position);
}

namespace {

LinkProfile intermediate_profile(const DmSpec& spec, int link, LinkRegime regime, double flow,
                                 double l) {
  if (!admissible_congestion(regime).contains(l)) {
    throw DomainError(std::string("congested fraction inconsistent with regime ") +
                      to_string(regime));
  }
  const FundamentalDiagram fd = spec.diagram(link);
  const double length = spec.links[static_cast<std::size_t>(link)].length;
  LinkProfile p;
  p.length = length;
  p.shock_position = (1.0 - l) * length;
  p.upstream_density = fd.undercritical_density(flow);
  p.downstream_density = fd.overcritical_density(flow);
  if (regime == LinkRegime::C) {
    p.upstream_density = p.downstream_density = fd.critical_density();
  }
  return p;
}

LinkProfile uniform_profile(double length, double density) {
  return {length, length, density, density};
}

}  // namespace

std::array<LinkProfile, 4> stationary_profile(const DmSpec& spec, const StationaryState& ss,
                                              double l1, double l2) {
  spec.validate();
  std::array<LinkProfile, 4> out;
  // Link 0 is over-critical at (C0, q); link 3 under-critical at (q, C3).
  out[0] = uniform_profile(spec.links[0].length,
                           spec.diagram(0).state_to_density({spec.c0, std::min(ss.q, spec.c0)}));
  out[1] = intermediate_profile(spec, 1, ss.link1, spec.xi * ss.q, l1);
  out[2] = intermediate_profile(spec, 2, ss.link2, (1.0 - spec.xi) * ss.q, l2);
  out[3] = uniform_profile(spec.links[3].length,
                           spec.diagram(3).state_to_density({std::min(ss.q, spec.c3), spec.c3}));
  return out;
}

int NetworkDescription::link_index(const std::string& name) const {
  for (std::size_t i = 0; i < links.size(); ++i) {
    if (links[i].name == name) return static_cast<int>(i);
  }
  throw ConfigError("unknown link '" + name + "'");
}

void NetworkDescription::validate() const {
  const int n = static_cast<int>(links.size());
  std::vector<int> upstream(links.size(), 0), downstream(links.size(), 0);
  auto check_link = [n](int idx) {
    if (idx < 0 || idx >= n) throw ConfigError("junction references unknown link");
  };
  for (const auto& j : junctions) {
    std::size_t want_in = 0, want_out = 0;
    switch (j.kind) {
      case JunctionKind::Origin: want_in = 0; want_out = 1; break;
      case JunctionKind::Destination: want_in = 1; want_out = 0; break;
      case JunctionKind::Diverge: want_in = 1; want_out = 2; break;
      case JunctionKind::Merge: want_in = 2; want_out = 1; break;
    }
    if (j.in.size() != want_in || j.out.size() != want_out) {
      throw ConfigError("junction has wrong number of incident links");
    }
    for (int l : j.in) {
      check_link(l);
      ++downstream[static_cast<std::size_t>(l)];
    }
    for (int l : j.out) {
      check_link(l);
      ++upstream[static_cast<std::size_t>(l)];
    }
    if (j.kind == JunctionKind::Merge && !in_unit(j.priority)) {
      throw ConfigError("merge priority must lie in [0, 1]");
    }
    if (j.kind == JunctionKind::Diverge && j.turning && !in_unit(*j.turning)) {
      throw ConfigError("diverge turning share must lie in [0, 1]");
    }
    if (j.kind == JunctionKind::Origin && (j.demand < 0.0 || !in_unit(j.commodity1_fraction))) {
      throw ConfigError("origin demand must be nonnegative and its fraction in [0, 1]");
    }
    if (j.kind == JunctionKind::Destination && j.supply < 0.0) {
      throw ConfigError("destination supply must be nonnegative");
    }
  }
  for (std::size_t i = 0; i < links.size(); ++i) {
    if (upstream[i] != 1 || downstream[i] != 1) {
      throw ConfigError("link '" + links[i].name + "' must have exactly one upstream and one "
                        "downstream junction");
    }
    if (!(links[i].capacity > 0.0)) throw ConfigError("link capacities must be positive");
  }
  for (const auto& s : sections) check_link(s.link);
}

NetworkDescription build_dm(const DmSpec& spec) {
  spec.validate();
  NetworkDescription net;
  net.kind = TopologyKind::Dm;
  for (int a = 0; a < 4; ++a) {
    net.links.push_back({"link" + std::to_string(a), spec.capacity(a),
                         spec.links[static_cast<std::size_t>(a)]});
  }
  Junction origin = junction(JunctionKind::Origin, {}, {0});
  origin.demand = spec.c0;
  origin.commodity1_fraction = spec.xi;
  Junction diverge = junction(JunctionKind::Diverge, {0}, {1, 2});
  Junction merge = junction(JunctionKind::Merge, {1, 2}, {3});
  merge.priority = spec.beta;
  Junction dest = junction(JunctionKind::Destination, {3}, {});
  dest.supply = spec.c3;
  net.junctions = {origin, diverge, merge, dest};
  net.sections = {{"link1", 1}, {"link2", 2}};
  net.default_fraction = spec.xi;
  return net;
}

NetworkDescription build_dmn(const DmnSpec& spec) {
  if (spec.n < 1) throw DomainError("(DM)^n needs n >= 1");
  require(in_unit(spec.xi), "xi must lie in [0, 1]");
  require(in_unit(spec.beta), "beta must lie in [0, 1]");
  require(spec.scale > 0.0, "scale must be positive");

  const int n = spec.n;
  const double s = spec.scale;
  NetworkDescription net;
  net.kind = TopologyKind::Dmn;
  net.default_fraction = spec.xi;
  auto in_link = [](int i) { return 4 * i; };
  auto congested = [](int i) { return 4 * i + 1; };
  auto free_link = [](int i) { return 4 * i + 2; };
  auto exit_link = [](int i) { return 4 * i + 3; };

  for (int i = 0; i < n; ++i) {
    const std::string id = std::to_string(i);
    net.links.push_back({"in" + id, 3.0 * s, spec.physics});
    net.links.push_back({"c" + id, 1.0 * s, spec.physics});
    net.links.push_back({"f" + id, 2.0 * s, spec.physics});
    net.links.push_back({"out" + id, 2.0 * s, spec.physics});
  }
  for (int i = 0; i < n; ++i) {
    Junction origin = junction(JunctionKind::Origin, {}, {in_link(i)});
    origin.demand = 3.0 * s;
    origin.commodity1_fraction = spec.xi;
    Junction diverge =
        junction(JunctionKind::Diverge, {in_link(i)}, {congested(i), free_link(i)});
    Junction merge = junction(JunctionKind::Merge, {congested(i), free_link((i + n - 1) % n)},
                              {exit_link(i)});
    merge.priority = spec.beta;
    Junction dest = junction(JunctionKind::Destination, {exit_link(i)}, {});
    dest.supply = 2.0 * s;
    net.junctions.insert(net.junctions.end(), {origin, diverge, merge, dest});
    net.sections.push_back({"c" + std::to_string(i), congested(i)});
  }
  return net;
}

NetworkDescription build_beltway(int n_ramp_pairs, double beta, double xi,
                                 const BeltwayLayout& layout) {
  if (n_ramp_pairs < 1) throw DomainError("beltway needs at least one ramp pair");
  require(in_unit(beta), "beta must lie in [0, 1]");
  require(in_unit(xi), "xi must lie in [0, 1]");

  const int n = n_ramp_pairs;
  NetworkDescription net;
  net.kind = TopologyKind::Beltway;
  auto a = [](int i) { return 4 * i; };
  auto b = [](int i) { return 4 * i + 1; };
  auto off = [](int i) { return 4 * i + 2; };
  auto on = [](int i) { return 4 * i + 3; };

  for (int i = 0; i < n; ++i) {
    const std::string id = std::to_string(i);
    net.links.push_back({"a" + id, layout.ring_capacity, layout.ring_physics});
    net.links.push_back({"b" + id, layout.ring_capacity, layout.ring_physics});
    net.links.push_back({"off" + id, layout.ramp_capacity, layout.ramp_physics});
    net.links.push_back({"on" + id, layout.ramp_capacity, layout.ramp_physics});
  }
  for (int i = 0; i < n; ++i) {
    Junction origin = junction(JunctionKind::Origin, {}, {on(i)});
    origin.demand = layout.on_ramp_demand;
    Junction merge = junction(JunctionKind::Merge, {on(i), b((i + n - 1) % n)}, {a(i)});
    merge.priority = beta;
    Junction diverge = junction(JunctionKind::Diverge, {a(i)}, {off(i), b(i)});
    diverge.turning = xi;
    Junction dest = junction(JunctionKind::Destination, {off(i)}, {});
    dest.supply = layout.off_ramp_supply;
    net.junctions.insert(net.junctions.end(), {origin, merge, diverge, dest});
    net.sections.push_back({"b" + std::to_string(i), b(i)});
  }
  return net;
}

}  // namespace dmflow
