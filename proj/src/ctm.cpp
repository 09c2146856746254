#include "dmflow/ctm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dmflow/errors.hpp"

namespace dmflow {

LinkFlux link_flux(double up_demand, double up_fraction, double down_supply) {
  const double q = std::max(0.0, std::min(up_demand, down_supply));
  return {q, up_fraction * q};
}

DivergeFlux diverge_flux(double d0, double s1, double s2, double xi) {
  if (!(xi >= 0.0 && xi <= 1.0)) throw DomainError("diverge share must lie in [0, 1]");
  double q0 = d0;
  if (xi > 0.0) q0 = std::min(q0, s1 / xi);
  if (xi < 1.0) q0 = std::min(q0, s2 / (1.0 - xi));
  q0 = std::max(q0, 0.0);
  return {q0, xi * q0, (1.0 - xi) * q0};
}

MergeFlux merge_flux(double d1, double d2, double s3, double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw DomainError("merge priority must lie in [0, 1]");
  const double q1 = std::min(d1, std::max(s3 - d2, beta * s3));
  const double q2 = std::min(d2, std::max(s3 - d1, (1.0 - beta) * s3));
  return {std::min(d1 + d2, s3), q1, q2};
}

double NetworkState::vehicles(const std::vector<LinkGrid>& grids) const {
  double total = 0.0;
  for (std::size_t a = 0; a < links.size(); ++a) {
    for (const auto& c : links[a]) total += c.density * grids[a].dx;
  }
  return total;
}

double NetworkState::vehicles1(const std::vector<LinkGrid>& grids) const {
  double total = 0.0;
  for (std::size_t a = 0; a < links.size(); ++a) {
    for (const auto& c : links[a]) total += c.density1 * grids[a].dx;
  }
  return total;
}

const std::vector<double>& RunRecord::section(const std::string& name) const {
  for (std::size_t i = 0; i < section_names.size(); ++i) {
    if (section_names[i] == name) return section_flux[i];
  }
  throw ConfigError("unknown section '" + name + "'");
}

Simulator::Simulator(NetworkDescription network, SimulationOptions options)
    : net_(std::move(network)) {
  net_.validate();
  if (options.cells_per_link < 1) throw ConfigError("cells_per_link must be >= 1");
  if (!(options.cfl > 0.0 && options.cfl <= 1.0)) throw ConfigError("cfl must lie in (0, 1]");

  double cfl_dt = std::numeric_limits<double>::infinity();
  for (const auto& link : net_.links) {
    if (!(link.physics.length > 0.0)) throw ConfigError("link '" + link.name + "' has no length");
    LinkGrid g{options.cells_per_link, link.physics.length / options.cells_per_link,
               link.diagram()};
    cfl_dt = std::min(cfl_dt, g.dx / g.fd.max_wave_speed());
    grids_.push_back(g);
  }
  if (options.dt) {
    if (!(*options.dt > 0.0) || *options.dt > cfl_dt * (1.0 + 1e-12)) {
      throw ConfigError("time step " + std::to_string(*options.dt) +
                        " violates the CFL bound " + std::to_string(cfl_dt));
    }
    dt_ = *options.dt;
  } else {
    dt_ = options.cfl * cfl_dt;
  }
}

NetworkState Simulator::empty_state() const {
  NetworkState s;
  for (const auto& g : grids_) s.links.emplace_back(static_cast<std::size_t>(g.cells));
  return s;
}

NetworkState Simulator::state_from_profiles(const std::vector<LinkProfile>& profiles,
                                            const std::vector<double>& fractions) const {
  if (profiles.size() != grids_.size() || fractions.size() != grids_.size()) {
    throw ConfigError("need one profile and one fraction per link");
  }
  NetworkState s = empty_state();
  for (std::size_t a = 0; a < grids_.size(); ++a) {
    const double scale = profiles[a].length / (grids_[a].dx * grids_[a].cells);
    for (int j = 0; j < grids_[a].cells; ++j) {
      const double x = (j + 0.5) * grids_[a].dx * scale;
      const double k = profiles[a].density_at(x);
      grids_[a].fd.flow(k);  // range check
      s.links[a][static_cast<std::size_t>(j)] = {k, fractions[a] * k};
    }
  }
  return s;
}

StepFluxes Simulator::step(NetworkState& state) const {
  const std::size_t n_links = grids_.size();
  const double fallback = net_.default_fraction;

  std::vector<std::vector<double>> demand(n_links), supply(n_links);
  for (std::size_t a = 0; a < n_links; ++a) {
    const auto& cells = state.links[a];
    demand[a].resize(cells.size());
    supply[a].resize(cells.size());
    for (std::size_t j = 0; j < cells.size(); ++j) {
      demand[a][j] = grids_[a].fd.demand(cells[j].density);
      supply[a][j] = grids_[a].fd.supply(cells[j].density);
    }
  }
  auto last_fraction = [&](int a) {
    return state.links[static_cast<std::size_t>(a)].back().fraction(fallback);
  };
  auto last_demand = [&](int a) { return demand[static_cast<std::size_t>(a)].back(); };
  auto first_supply = [&](int a) { return supply[static_cast<std::size_t>(a)].front(); };

  StepFluxes f;
  f.link_in.assign(n_links, {});
  f.link_out.assign(n_links, {});
  const double t = state.t;

  for (const auto& j : net_.junctions) {
    switch (j.kind) {
      case JunctionKind::Origin: {
        const int out = j.out[0];
        const LinkFlux q =
            link_flux(std::max(0.0, j.demand_at(t)), j.commodity1_fraction, first_supply(out));
        f.link_in[static_cast<std::size_t>(out)] = q;
        f.boundary_in.total += q.total;
        f.boundary_in.commodity1 += q.commodity1;
        break;
      }
      case JunctionKind::Destination: {
        const int in = j.in[0];
        const LinkFlux q =
            link_flux(last_demand(in), last_fraction(in), std::max(0.0, j.supply_at(t)));
        f.link_out[static_cast<std::size_t>(in)] = q;
        f.boundary_out.total += q.total;
        f.boundary_out.commodity1 += q.commodity1;
        break;
      }
      case JunctionKind::Diverge: {
        const int in = j.in[0], o1 = j.out[0], o2 = j.out[1];
        const double frac = last_fraction(in);
        const double share = j.turning ? *j.turning : frac;
        const DivergeFlux q = diverge_flux(last_demand(in), first_supply(o1), first_supply(o2),
                                           std::clamp(share, 0.0, 1.0));
        f.link_out[static_cast<std::size_t>(in)] = {q.q0, frac * q.q0};
        if (j.turning) {
          f.link_in[static_cast<std::size_t>(o1)] = {q.q1, frac * q.q1};
          f.link_in[static_cast<std::size_t>(o2)] = {q.q2, frac * q.q2};
        } else {
          f.link_in[static_cast<std::size_t>(o1)] = {q.q1, q.q1};
          f.link_in[static_cast<std::size_t>(o2)] = {q.q2, 0.0};
        }
        break;
      }
      case JunctionKind::Merge: {
        const int i1 = j.in[0], i2 = j.in[1], out = j.out[0];
        const double f1 = last_fraction(i1), f2 = last_fraction(i2);
        const MergeFlux q = merge_flux(last_demand(i1), last_demand(i2), first_supply(out),
                                       j.priority);
        f.link_out[static_cast<std::size_t>(i1)] = {q.q1, f1 * q.q1};
        f.link_out[static_cast<std::size_t>(i2)] = {q.q2, f2 * q.q2};
        f.link_in[static_cast<std::size_t>(out)] = {q.q1 + q.q2, f1 * q.q1 + f2 * q.q2};
        break;
      }
    }
  }

  for (std::size_t a = 0; a < n_links; ++a) {
    auto& cells = state.links[a];
    const std::size_t n = cells.size();
    // flux[j] enters cell j; flux[n] leaves the link.
    std::vector<LinkFlux> flux(n + 1);
    flux[0] = f.link_in[a];
    flux[n] = f.link_out[a];
    for (std::size_t j = 1; j < n; ++j) {
      flux[j] = link_flux(demand[a][j - 1], cells[j - 1].fraction(fallback), supply[a][j]);
    }
    const double r = dt_ / grids_[a].dx;
    const double kj = grids_[a].fd.jam_density();
    for (std::size_t j = 0; j < n; ++j) {
      double k = cells[j].density + r * (flux[j].total - flux[j + 1].total);
      double k1 = cells[j].density1 + r * (flux[j].commodity1 - flux[j + 1].commodity1);
      // Only rounding-level overshoots reach these clamps.
      k = std::clamp(k, 0.0, kj);
      k1 = std::clamp(k1, 0.0, k);
      cells[j] = {k, k1};
    }
  }
  state.t += dt_;
  return f;
}

RunRecord Simulator::run(NetworkState initial, double horizon) const {
  if (!(horizon >= 0.0)) throw ConfigError("horizon must be nonnegative");
  if (initial.links.size() != grids_.size()) throw ConfigError("state does not match network");
  const auto steps = static_cast<std::size_t>(std::ceil(horizon / dt_ - 1e-9));

  RunRecord rec;
  rec.dt = dt_;
  for (const auto& s : net_.sections) rec.section_names.push_back(s.name);
  rec.section_flux.assign(net_.sections.size(), {});
  for (auto& v : rec.section_flux) v.reserve(steps);
  rec.times.reserve(steps);
  rec.vehicles.push_back(initial.vehicles(grids_));
  rec.vehicles1.push_back(initial.vehicles1(grids_));

  NetworkState state = std::move(initial);
  for (std::size_t i = 0; i < steps; ++i) {
    const StepFluxes f = step(state);
    rec.times.push_back(state.t);
    for (std::size_t s = 0; s < net_.sections.size(); ++s) {
      rec.section_flux[s].push_back(f.link_out[static_cast<std::size_t>(net_.sections[s].link)].total);
    }
    rec.vehicles.push_back(state.vehicles(grids_));
    rec.vehicles1.push_back(state.vehicles1(grids_));
    rec.inflow.push_back(f.boundary_in.total);
    rec.outflow.push_back(f.boundary_out.total);
  }
  rec.final_state = std::move(state);
  return rec;
}

NetworkState dm_stationary_state(const Simulator& sim, const DmSpec& spec,
                                 const StationaryState& ss, double l1, double l2) {
  const auto profiles = stationary_profile(spec, ss, l1, l2);
  return sim.state_from_profiles({profiles.begin(), profiles.end()},
                                 {spec.xi, 1.0, 0.0, spec.xi});
}

}  // namespace dmflow
