#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "dmflow/ctm.hpp"
#include "dmflow/errors.hpp"
#include "support.hpp"

using namespace dmflow;
using namespace dmflow::test;
using Catch::Approx;

namespace {

// origin -> one link -> destination.
NetworkDescription single_link(double demand, double supply) {
  NetworkDescription net;
  net.links.push_back({"road", 1.0, {}});
  Junction o;
  o.kind = JunctionKind::Origin;
  o.out = {0};
  o.demand = demand;
  o.commodity1_fraction = 0.5;
  Junction d;
  d.kind = JunctionKind::Destination;
  d.in = {0};
  d.supply = supply;
  net.junctions = {o, d};
  net.default_fraction = 0.5;
  return net;
}

void check_bounds(const Simulator& sim, const NetworkState& s) {
  for (std::size_t a = 0; a < s.links.size(); ++a) {
    const double kj = sim.grids()[a].fd.jam_density();
    for (const auto& c : s.links[a]) {
      REQUIRE(c.density >= 0.0);
      REQUIRE(c.density <= kj * (1 + 1e-12));
      REQUIRE(c.density1 >= 0.0);
      REQUIRE(c.density1 <= c.density * (1 + 1e-12) + 1e-15);
    }
  }
}

}  // namespace

TEST_CASE("link flux") {
  CHECK(link_flux(0.0, 0.5, 1.0).total == 0.0);
  const auto f = link_flux(0.8, 0.45, 1.0);
  CHECK(f.total == 0.8);
  CHECK(f.commodity1 == Approx(0.36).margin(1e-15));
  CHECK(link_flux(0.8, 0.45, 0.0).total == 0.0);
}

TEST_CASE("diverge flux") {
  const auto f = diverge_flux(3, 1, 2, 0.45);
  CHECK(f.q0 == Approx(1.0 / 0.45).margin(1e-14));
  CHECK(f.q1 == Approx(1.0).margin(1e-14));
  CHECK(f.q2 == Approx(0.55 / 0.45).margin(1e-14));
  const auto z = diverge_flux(3, 0.0, 2, 0.0);
  CHECK(z.q0 == 2.0);
  CHECK(z.q1 == 0.0);
  CHECK(diverge_flux(3, 1.0, 0.0, 1.0).q0 == 1.0);
  CHECK(diverge_flux(3, 0.0, 2, 0.3).q0 == 0.0);

  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 3.0), frac(0.01, 0.99);
  for (int i = 0; i < 10000; ++i) {
    const double d0 = u(rng), s1 = u(rng), s2 = u(rng), xi = frac(rng);
    const auto q = diverge_flux(d0, s1, s2, xi);
    CHECK(q.q1 + q.q2 == Approx(q.q0).margin(1e-14));
    CHECK(q.q0 <= d0);
    CHECK(q.q1 <= s1 * (1 + 1e-14));
    CHECK(q.q2 <= s2 * (1 + 1e-14));
    if (q.q1 > 0 && q.q2 > 0) CHECK(q.q1 / q.q2 == Approx(xi / (1 - xi)).epsilon(1e-12));
  }
}

TEST_CASE("merge flux") {
  const auto m = merge_flux(1, 2, 2, 1.0 / 3.0);
  CHECK(m.q1 == Approx(2.0 / 3.0).margin(1e-15));
  CHECK(m.q2 == Approx(4.0 / 3.0).margin(1e-15));
  CHECK(m.q3 == 2.0);
  const auto free = merge_flux(0.5, 0.7, 2, 0.3);
  CHECK(free.q1 == 0.5);
  CHECK(free.q2 == 0.7);
  const auto single = merge_flux(0.0, 2.5, 2, 0.3);
  CHECK(single.q1 == 0.0);
  CHECK(single.q2 == 2.0);

  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> u(0.0, 3.0), unit(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const double d1 = u(rng), d2 = u(rng), s3 = u(rng), beta = unit(rng);
    const auto q = merge_flux(d1, d2, s3, beta);
    CHECK(q.q1 + q.q2 == Approx(q.q3).margin(1e-14));
    CHECK(q.q1 <= d1);
    CHECK(q.q2 <= d2);
    CHECK(q.q3 == Approx(std::min(d1 + d2, s3)).margin(1e-14));
  }
}

TEST_CASE("simulator configuration") {
  const auto net = build_dm(small_network(0.45));
  const Simulator sim(net);
  CHECK(sim.dt() == Approx(0.9 / 20.0).epsilon(1e-15));
  SimulationOptions bad;
  bad.dt = 0.1;
  CHECK_THROWS_AS(Simulator(net, bad), ConfigError);
  SimulationOptions ok;
  ok.dt = 0.05;
  CHECK(Simulator(net, ok).dt() == 0.05);
  SimulationOptions cells;
  cells.cells_per_link = 0;
  CHECK_THROWS_AS(Simulator(net, cells), ConfigError);
}

TEST_CASE("trivial runs") {
  SECTION("zero demand keeps an empty network empty") {
    auto net = build_dm(small_network(0.45));
    net.junctions[0].demand = 0.0;
    const Simulator sim(net);
    const auto rec = sim.run(sim.empty_state(), 20.0);
    CHECK(rec.vehicles.back() == 0.0);
    for (const auto& series : rec.section_flux) {
      CHECK(*std::max_element(series.begin(), series.end()) == 0.0);
    }
  }
  SECTION("uniform under-critical plateau is translation invariant") {
    const Simulator sim(single_link(0.5, 1.0));
    auto s = sim.empty_state();
    for (auto& c : s.links[0]) c = {0.5, 0.25};
    const auto before = s;
    sim.step(s);
    for (std::size_t j = 0; j < s.links[0].size(); ++j) {
      CHECK(s.links[0][j].density == before.links[0][j].density);
      CHECK(s.links[0][j].density1 == Approx(before.links[0][j].density1).margin(1e-15));
    }
  }
  SECTION("zero horizon echoes the initial state") {
    const Simulator sim(build_dm(small_network(0.45)));
    const auto rec = sim.run(sim.empty_state(), 0.0);
    CHECK(rec.times.empty());
    CHECK(rec.vehicles.size() == 1);
    CHECK(rec.final_state.t == 0.0);
    CHECK(rec.section("link1").empty());
    CHECK_THROWS(rec.section("nope"));
  }
}

TEST_CASE("conservation and bounds") {
  for (auto shape : {DiagramShape::Triangular, DiagramShape::Greenshields}) {
    DmSpec spec = small_network(0.45);
    for (auto& l : spec.links) l.shape = shape;
    const Simulator sim(build_dm(spec));
    auto s = sim.empty_state();
    double n = 0.0, n1 = 0.0;
    for (int i = 0; i < 3000; ++i) {
      const auto f = sim.step(s);
      n += (f.boundary_in.total - f.boundary_out.total) * sim.dt();
      n1 += (f.boundary_in.commodity1 - f.boundary_out.commodity1) * sim.dt();
      REQUIRE(s.vehicles(sim.grids()) == Approx(n).margin(1e-10));
      REQUIRE(s.vehicles1(sim.grids()) == Approx(n1).margin(1e-10));
      check_bounds(sim, s);
    }
  }
  SECTION("rings conserve too") {
    DmnSpec d;
    d.n = 3;
    const Simulator sim(build_dmn(d));
    auto s = sim.empty_state();
    double n = 0.0;
    for (int i = 0; i < 2000; ++i) {
      const auto f = sim.step(s);
      n += (f.boundary_in.total - f.boundary_out.total) * sim.dt();
      REQUIRE(s.vehicles(sim.grids()) == Approx(n).margin(1e-10));
      check_bounds(sim, s);
    }
  }
}

TEST_CASE("diverge-merge run from empty") {
  const Simulator sim(build_dm(small_network(0.45)));
  const auto rec = sim.run(sim.empty_state(), 200.0);
  const auto& q1 = rec.section("link1");
  REQUIRE(q1.size() == rec.times.size());
  const auto tail_begin = q1.begin() + static_cast<long>(q1.size() / 2);
  const auto [lo, hi] = std::minmax_element(tail_begin, q1.end());
  CHECK(*hi - *lo > 0.1);
  // Record totals agree with the per-step boundary fluxes.
  for (std::size_t i = 0; i < rec.times.size(); ++i) {
    CHECK(rec.vehicles[i + 1] - rec.vehicles[i] ==
          Approx((rec.inflow[i] - rec.outflow[i]) * rec.dt).margin(1e-10));
  }
}

TEST_CASE("stationary states persist") {
  const std::vector<DmSpec> specs = {
      small_network(0.45),           sweep_network(0.25),         sweep_network(0.7),
      sweep_network(0.1),            sweep_network(0.3),          make(1, 1, 1, 3, 0.5, 0.5),
      make(1, 0.3, 1, 3, 0.5, 0.5),  make(1, 1, 0.3, 3, 0.5, 0.5), make(4, 1, 2, 4, 0.5, 1.0 / 3),
      make(4, 1, 2, 4, 0.5, 0.2),    make(4, 1, 2, 4, 0.5, 0.5),  make(2, 1.5, 1.5, 2, 0.3, 0.4),
      sweep_network(0.2),            sweep_network(0.6),
  };
  int checked = 0;
  bool zs_seen = false;
  for (const auto& spec : specs) {
    for (const auto& ss : stationary_states(spec)) {
      auto pick = [](LinkRegime r) {
        return r == LinkRegime::SUC ? 0.0 : r == LinkRegime::SOC ? 1.0 : 0.5;
      };
      const double l1 = pick(ss.link1), l2 = pick(ss.link2);
      zs_seen = zs_seen || ss.link1 == LinkRegime::ZS || ss.link2 == LinkRegime::ZS;
      const Simulator sim(build_dm(spec));
      auto s = dm_stationary_state(sim, spec, ss, l1, l2);
      const auto initial = s;
      for (int i = 0; i < 1000; ++i) sim.step(s);
      double worst = 0.0;
      for (std::size_t a = 0; a < s.links.size(); ++a) {
        for (std::size_t j = 0; j < s.links[a].size(); ++j) {
          worst = std::max(worst, std::abs(s.links[a][j].density - initial.links[a][j].density));
        }
      }
      INFO(to_string(ss.link1) << "-" << to_string(ss.link2) << " q=" << ss.q
                               << " xi=" << spec.xi);
      CHECK(worst < 1e-10);
      ++checked;
    }
  }
  CHECK(checked >= 20);
  CHECK(zs_seen);
}
