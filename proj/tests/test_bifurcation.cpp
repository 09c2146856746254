#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "dmflow/bifurcation.hpp"
#include "dmflow/errors.hpp"
#include "support.hpp"

using namespace dmflow;
using namespace dmflow::test;
using Catch::Approx;
using SC = StabilityClass;

namespace {

SC expected_sweep_class(double xi) {
  if (xi <= 0.2 || xi == 0.3 || xi >= 0.6) return SC::FiniteTime;
  if (xi < 0.3 || (xi > 0.5 && xi < 0.6)) return SC::Asymptotic;
  if (xi == 0.5) return SC::NeutralTwoCycleContinuum;
  return SC::Unstable;
}

}  // namespace

TEST_CASE("xi grid") {
  const auto g = xi_grid(0.0, 1.0, 0.1);
  REQUIRE(g.size() == 11);
  CHECK(g[3] == 0.3);
  CHECK(g[6] == 0.6);
  CHECK(g.back() == 1.0);
  CHECK(xi_grid(0.0, 1.0, 0.001).size() == 1001);
  CHECK(xi_grid(0.5, 0.4, 0.01).empty());
  CHECK(xi_grid(0.4, 0.41, 0.5) == std::vector<double>{0.4});
  CHECK_THROWS_AS(xi_grid(0.0, 1.0, 0.0), DomainError);
}

TEST_CASE("regime boundaries") {
  SECTION("sweep network") {
    const auto b = regime_boundaries(sweep_network(0.0));
    REQUIRE(b.size() == 4);
    CHECK(b[0].xi == 0.2);
    CHECK(b[1].xi == 0.3);
    CHECK(b[2].xi == 0.5);
    CHECK(b[3].xi == 0.6);
    CHECK(b[0].label == "1-C2/C3");
    CHECK(b[1].label == "beta");
    CHECK(b[1].left == SC::Asymptotic);
    CHECK(b[1].at == SC::FiniteTime);
    CHECK(b[1].right == SC::Unstable);
    CHECK(b[2].at == SC::NeutralTwoCycleContinuum);
    CHECK(b[2].right == SC::Asymptotic);
    CHECK(b[3].left == SC::Asymptotic);
    CHECK(b[3].right == SC::FiniteTime);
  }
  SECTION("small network") {
    const auto b = regime_boundaries(small_network(0.0));
    REQUIRE(b.size() == 3);
    CHECK(b[0].xi == 0.0);
    CHECK(b[1].xi == Approx(1.0 / 3.0).margin(1e-15));
    CHECK(b[2].xi == 0.5);
    CHECK(b[1].right == SC::Unstable);
  }
  SECTION("symmetric network has no unstable side") {
    for (const auto& b : regime_boundaries(symmetric_network(0.0))) {
      CHECK(b.left != SC::Unstable);
      CHECK(b.at != SC::Unstable);
      CHECK(b.right != SC::Unstable);
    }
  }
  SECTION("bottlenecks have none") {
    CHECK(regime_boundaries(make(1, 1, 1, 3, 0.5, 0.5)).empty());
  }
}

TEST_CASE("full sweep of the worked network") {
  const auto pts = sweep_xi(sweep_network(0.0), xi_grid(0.0, 1.0, 0.001));
  REQUIRE(pts.size() == 1001);
  for (double b : {0.2, 0.3, 0.5, 0.6}) {
    CHECK(std::any_of(pts.begin(), pts.end(), [b](const auto& p) { return p.xi == b; }));
  }
  CHECK(pts.front().v_star == 0.5);
  CHECK(pts.back().v_star == 1.5);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& p = pts[i];
    INFO("xi = " << p.xi);
    CHECK(p.stability == expected_sweep_class(p.xi));
    if (i > 0) {
      CHECK(p.xi > pts[i - 1].xi);
      // v* is continuous with slope at most C3.
      CHECK(std::abs(p.v_star - pts[i - 1].v_star) <= 2.5 * (p.xi - pts[i - 1].xi) + 1e-12);
    }
    if (p.stability == SC::Unstable) {
      REQUIRE(p.v_minus);
      CHECK(*p.v_plus - *p.v_minus > 0.0);
      CHECK(*p.v_minus < p.v_star);
      CHECK(p.v_star < *p.v_plus);
    } else if (p.stability != SC::NeutralTwoCycleContinuum) {
      CHECK_FALSE(p.v_minus);
    }
  }
}

TEST_CASE("sweep injects boundaries and handles degenerate grids") {
  const auto pts = sweep_xi(sweep_network(0.0), {0.25, 0.55});
  std::vector<double> xs;
  for (const auto& p : pts) xs.push_back(p.xi);
  CHECK(xs == std::vector<double>{0.25, 0.3, 0.5, 0.55});
  CHECK(sweep_xi(sweep_network(0.0), {}).empty());
  CHECK(sweep_xi(sweep_network(0.0), {0.4}).size() == 1);
  CHECK_THROWS_AS(sweep_xi(sweep_network(0.0), {1.5}), DomainError);
}

TEST_CASE("class is constant between boundaries") {
  for (const DmSpec& s : {sweep_network(0.0), small_network(0.0), symmetric_network(0.0)}) {
    auto bounds = regime_boundaries(s);
    std::vector<double> edges{0.0};
    for (const auto& b : bounds) edges.push_back(b.xi);
    edges.push_back(1.0);
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
      const double a = edges[k], b = edges[k + 1];
      if (b - a < 1e-9) continue;
      const SC first = evaluate_xi(s, a + (b - a) * 1e-3).stability;
      for (int i = 1; i < 200; ++i) {
        CHECK(evaluate_xi(s, a + (b - a) * i / 200.0).stability == first);
      }
    }
  }
}
