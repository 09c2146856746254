#include "dmflow/fundamental_diagram.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dmflow/errors.hpp"

namespace dmflow {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError(std::string(what) + " must be positive and finite");
  }
}

}  // namespace

FundamentalDiagram FundamentalDiagram::triangular(double free_flow_speed,
                                                  double congested_wave_speed,
                                                  double jam_density) {
  require_positive(free_flow_speed, "free-flow speed");
  require_positive(congested_wave_speed, "congested wave speed");
  require_positive(jam_density, "jam density");
  const double kc = congested_wave_speed * jam_density / (free_flow_speed + congested_wave_speed);
  return {Triangular{free_flow_speed, congested_wave_speed, jam_density}, free_flow_speed * kc, kc};
}

FundamentalDiagram FundamentalDiagram::greenshields(double free_flow_speed, double jam_density) {
  require_positive(free_flow_speed, "free-flow speed");
  require_positive(jam_density, "jam density");
  return {Greenshields{free_flow_speed, jam_density}, free_flow_speed * jam_density / 4.0,
          jam_density / 2.0};
}

FundamentalDiagram FundamentalDiagram::from_capacity(double capacity, double free_flow_speed,
                                                     double congested_wave_speed) {
  require_positive(capacity, "capacity");
  require_positive(free_flow_speed, "free-flow speed");
  require_positive(congested_wave_speed, "congested wave speed");
  const double kc = capacity / free_flow_speed;
  const double kj = kc + capacity / congested_wave_speed;
  return {Triangular{free_flow_speed, congested_wave_speed, kj}, capacity, kc};
}

double FundamentalDiagram::jam_density() const {
  return std::visit([](const auto& s) { return s.jam_density; }, shape_);
}

double FundamentalDiagram::free_flow_speed() const {
  return std::visit([](const auto& s) { return s.free_flow_speed; }, shape_);
}

double FundamentalDiagram::max_wave_speed() const {
  return std::visit(Overloaded{
                        [](const Triangular& t) {
                          return std::max(t.free_flow_speed, t.congested_wave_speed);
                        },
                        // |Q'(k)| peaks at both ends with value vf.
                        [](const Greenshields& g) { return g.free_flow_speed; },
                    },
                    shape_);
}

void FundamentalDiagram::check_density(double k) const {
  const double kj = jam_density();
  if (!(k >= -kBoundaryTol * kj && k <= kj * (1.0 + kBoundaryTol))) {
    throw DomainError("density " + std::to_string(k) + " outside [0, " + std::to_string(kj) + "]");
  }
}

void FundamentalDiagram::check_flow(double q) const {
  if (!(q >= -kBoundaryTol * capacity_ && q <= capacity_ * (1.0 + 1e-9))) {
    throw DomainError("flow " + std::to_string(q) + " outside [0, capacity]");
  }
}

double FundamentalDiagram::flow(double k) const {
  check_density(k);
  k = std::clamp(k, 0.0, jam_density());
  return std::visit(Overloaded{
                        [k](const Triangular& t) {
                          return std::min(t.free_flow_speed * k,
                                          t.congested_wave_speed * (t.jam_density - k));
                        },
                        [k](const Greenshields& g) {
                          return g.free_flow_speed * k * (1.0 - k / g.jam_density);
                        },
                    },
                    shape_);
}

double FundamentalDiagram::demand(double k) const {
  check_density(k);
  return k >= critical_density_ ? capacity_ : flow(k);
}

double FundamentalDiagram::supply(double k) const {
  check_density(k);
  return k <= critical_density_ ? capacity_ : flow(k);
}

double FundamentalDiagram::undercritical_density(double q) const {
  check_flow(q);
  q = std::clamp(q, 0.0, capacity_);
  return std::visit(Overloaded{
                        [q](const Triangular& t) { return q / t.free_flow_speed; },
                        [q, this](const Greenshields&) {
                          return critical_density_ *
                                 (1.0 - std::sqrt(std::max(0.0, 1.0 - q / capacity_)));
                        },
                    },
                    shape_);
}

double FundamentalDiagram::overcritical_density(double q) const {
  check_flow(q);
  q = std::clamp(q, 0.0, capacity_);
  return std::visit(Overloaded{
                        [q](const Triangular& t) {
                          return t.jam_density - q / t.congested_wave_speed;
                        },
                        [q, this](const Greenshields&) {
                          return critical_density_ *
                                 (1.0 + std::sqrt(std::max(0.0, 1.0 - q / capacity_)));
                        },
                    },
                    shape_);
}

double FundamentalDiagram::state_to_density(TrafficState u) const {
  const double tol = 1e-9 * std::max(1.0, capacity_);
  if (u.demand < -tol || u.supply < -tol || std::abs(std::max(u.demand, u.supply) - capacity_) > tol) {
    throw DomainError("inconsistent traffic state: max(demand, supply) must equal capacity " +
                      std::to_string(capacity_));
  }
  return u.demand <= u.supply ? undercritical_density(u.demand) : overcritical_density(u.supply);
}

}  // namespace dmflow
