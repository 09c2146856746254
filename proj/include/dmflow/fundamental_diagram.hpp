#pragma once

#include <variant>

namespace dmflow {

struct Triangular {
  double free_flow_speed;
  double congested_wave_speed;
  double jam_density;
};

struct Greenshields {
  double free_flow_speed;
  double jam_density;
};

/// A point in demand-supply space. For a consistent state
/// max(demand, supply) equals the capacity of the owning link.
struct TrafficState {
  double demand = 0.0;
  double supply = 0.0;
};

/// Concave flow-density relation Q(k) with its demand/supply split
/// D(k) = Q(min{kc, k}), S(k) = Q(max{kc, k}).
class FundamentalDiagram {
 public:
  using Shape = std::variant<Triangular, Greenshields>;

  static FundamentalDiagram triangular(double free_flow_speed, double congested_wave_speed,
                                       double jam_density);
  static FundamentalDiagram greenshields(double free_flow_speed, double jam_density);

  /// Triangular diagram parameterized by capacity; jam density is derived
  /// as C/vf + C/w.
  static FundamentalDiagram from_capacity(double capacity, double free_flow_speed,
                                          double congested_wave_speed);

  const Shape& shape() const { return shape_; }
  double capacity() const { return capacity_; }
  double critical_density() const { return critical_density_; }
  double jam_density() const;
  double free_flow_speed() const;
  /// Largest characteristic speed magnitude; bounds the CFL number.
  double max_wave_speed() const;

  double flow(double k) const;
  double demand(double k) const;
  double supply(double k) const;
  TrafficState state(double k) const { return {demand(k), supply(k)}; }

  /// Inverse of state(): the unique density with the given demand/supply pair.
  double state_to_density(TrafficState u) const;
  /// Under-critical density carrying flow q (q <= capacity).
  double undercritical_density(double q) const;
  /// Over-critical density carrying flow q (q <= capacity).
  double overcritical_density(double q) const;

 private:
  FundamentalDiagram(Shape shape, double capacity, double critical_density)
      : shape_(shape), capacity_(capacity), critical_density_(critical_density) {}

  void check_density(double k) const;
  void check_flow(double q) const;

  Shape shape_;
  double capacity_;
  double critical_density_;
};

}  // namespace dmflow
