#include <catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "dmflow/errors.hpp"
#include "dmflow/network_model.hpp"

using namespace dmflow;
using Catch::Approx;
using R = LinkRegime;

namespace {

DmSpec make(double c0, double c1, double c2, double c3, double beta, double xi) {
  DmSpec s;
  s.c0 = c0;
  s.c1 = c1;
  s.c2 = c2;
  s.c3 = c3;
  s.beta = beta;
  s.xi = xi;
  return s;
}

bool has(const std::vector<StationaryState>& v, R a, R b) {
  return std::any_of(v.begin(), v.end(),
                     [&](const StationaryState& s) { return s.link1 == a && s.link2 == b; });
}

}  // namespace

TEST_CASE("stationary states for the worked networks") {
  SECTION("interior xi above beta with C3 < C0") {
    const auto ss = stationary_states(make(3, 1, 2, 2, 1.0 / 3.0, 0.45));
    REQUIRE(ss.size() == 1);
    CHECK(ss[0].link1 == R::SOC);
    CHECK(ss[0].link2 == R::SUC);
    CHECK(ss[0].q == 2.0);
  }
  SECTION("xi above C1/C3 saturates link 1") {
    const auto ss = stationary_states(make(3, 1.5, 2, 2.5, 0.3, 0.7));
    REQUIRE(ss.size() == 1);
    CHECK(ss[0].link1 == R::C);
    CHECK(ss[0].link2 == R::SUC);
    CHECK(ss[0].q == Approx(1.5 / 0.7).epsilon(1e-15));
  }
  SECTION("middle bottleneck at the capacity split") {
    const auto ss = stationary_states(make(4, 1, 2, 4, 0.5, 1.0 / 3.0));
    REQUIRE(ss.size() == 1);
    CHECK(ss[0].link1 == R::C);
    CHECK(ss[0].link2 == R::C);
    CHECK(ss[0].q == Approx(3.0).epsilon(1e-15));
  }
  SECTION("xi below beta mirrors onto link 2") {
    const auto ss = stationary_states(make(3, 1.5, 2, 2.5, 0.3, 0.25));
    REQUIRE(ss.size() == 1);
    CHECK(ss[0].link1 == R::SUC);
    CHECK(ss[0].link2 == R::SOC);
  }
  SECTION("upstream bottleneck carries C0 when both branches have room") {
    const auto ss = stationary_states(make(1, 1, 1, 3, 0.5, 0.5));
    REQUIRE(ss.size() == 1);
    CHECK(ss[0].link1 == R::SUC);
    CHECK(ss[0].link2 == R::SUC);
    CHECK(ss[0].q == 1.0);
  }
  SECTION("boundary rows are multivalued") {
    // C3 = C0 and xi = beta inside the interval: every link-1/link-2 pair.
    const auto ss = stationary_states(make(2, 1.5, 1.5, 2, 0.5, 0.5));
    CHECK(ss.size() == 9);
    CHECK(has(ss, R::ZS, R::SOC));
    CHECK(has(ss, R::SUC, R::SUC));
  }
}

TEST_CASE("stationary_states is total and respects capacity bounds") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> cap(0.2, 4.0), unit(0.0, 1.0);
  for (int trial = 0; trial < 5000; ++trial) {
    const DmSpec s = make(cap(rng), cap(rng), cap(rng), cap(rng), unit(rng), unit(rng));
    const auto ss = stationary_states(s);
    REQUIRE_FALSE(ss.empty());
    for (const auto& st : ss) {
      CHECK(st.q <= std::min(s.c0, s.c3) * (1 + 1e-12));
      if (s.xi > 0) CHECK(st.q <= s.c1 / s.xi * (1 + 1e-12));
      if (s.xi < 1) CHECK(st.q <= s.c2 / (1 - s.xi) * (1 + 1e-12));
      // A link flagged C carries its capacity.
      if (st.link1 == R::C) CHECK(s.xi * st.q == Approx(s.c1).epsilon(1e-9));
      if (st.link2 == R::C) CHECK((1 - s.xi) * st.q == Approx(s.c2).epsilon(1e-9));
    }
    // Downstream bottleneck with one queued branch: q = C3.
    if (s.c3 <= s.c0 && s.c3 < s.c1 + s.c2 && s.c0 >= std::min(s.c1 + s.c2, s.c3)) {
      for (const auto& st : ss) {
        if ((st.link1 == R::SOC && st.link2 == R::SUC) ||
            (st.link1 == R::SUC && st.link2 == R::SOC)) {
          CHECK(st.q == s.c3);
        }
      }
    }
  }
}

TEST_CASE("congestion ranges") {
  CHECK(admissible_congestion(R::SUC).contains(0.0));
  CHECK_FALSE(admissible_congestion(R::SUC).contains(0.5));
  CHECK(admissible_congestion(R::SOC).contains(1.0));
  CHECK(admissible_congestion(R::ZS).contains(0.5));
  CHECK_FALSE(admissible_congestion(R::ZS).contains(0.0));
  CHECK_FALSE(admissible_congestion(R::ZS).contains(1.0));
}

TEST_CASE("stationary profiles") {
  // Link 1 capacity 1 with vf = 1, w = 1/2: kc = 1, kj = 3.
  const DmSpec s = make(3, 1, 2, 2, 1.0 / 3.0, 0.25);
  const StationaryState zs{R::ZS, R::SUC, 2.0};  // link-1 flow 0.5
  SECTION("zero-speed shock splits the link") {
    const auto p = stationary_profile(s, zs, 0.5, 0.0);
    CHECK(p[1].shock_position == 0.5);
    CHECK(p[1].density_at(0.25) == 0.5);
    CHECK(p[1].density_at(0.75) == 2.0);
  }
  SECTION("SUC and SOC are uniform") {
    const auto suc = stationary_profile(s, {R::SUC, R::SUC, 2.0}, 0.0, 0.0);
    CHECK(suc[1].density_at(0.0) == suc[1].density_at(0.99));
    CHECK(suc[1].density_at(0.5) == 0.5);
    const auto soc = stationary_profile(s, {R::SOC, R::SUC, 2.0}, 1.0, 0.0);
    CHECK(soc[1].density_at(0.0) == 2.0);
    CHECK(soc[1].density_at(0.99) == 2.0);
  }
  SECTION("regime and fraction must agree") {
    CHECK_THROWS_AS(stationary_profile(s, zs, 0.0, 0.0), DomainError);
    CHECK_THROWS_AS(stationary_profile(s, {R::SUC, R::SUC, 2.0}, 0.3, 0.0), DomainError);
  }
  SECTION("vehicle count moves monotonically from SUC to SOC as l grows") {
    const double suc = stationary_profile(s, {R::SUC, R::SUC, 2.0}, 0.0, 0.0)[1].vehicles();
    const double soc = stationary_profile(s, {R::SOC, R::SUC, 2.0}, 1.0, 0.0)[1].vehicles();
    double prev = suc;
    for (int i = 1; i < 100; ++i) {
      const double v = stationary_profile(s, zs, i / 100.0, 0.0)[1].vehicles();
      CHECK(v > prev);
      CHECK(v < soc);
      prev = v;
    }
  }
}

TEST_CASE("network builders") {
  SECTION("DM network") {
    const auto net = build_dm(make(3, 1, 2, 2, 1.0 / 3.0, 0.45));
    CHECK(net.links.size() == 4);
    CHECK(net.junctions.size() == 4);
    CHECK(net.link_index("link2") == 2);
    CHECK_NOTHROW(net.validate());
  }
  SECTION("(DM)^n ring") {
    for (int n : {1, 2, 3}) {
      DmnSpec spec;
      spec.n = n;
      const auto net = build_dmn(spec);
      CHECK_NOTHROW(net.validate());
      const auto count = [&](JunctionKind k) {
        return std::count_if(net.junctions.begin(), net.junctions.end(),
                             [k](const Junction& j) { return j.kind == k; });
      };
      CHECK(count(JunctionKind::Diverge) == n);
      CHECK(count(JunctionKind::Merge) == n);
      CHECK(net.sections.size() == static_cast<std::size_t>(n));
      // Two intermediate links per stage: congested (cap 1) and free (cap 2).
      const auto intermediate = std::count_if(
          net.links.begin(), net.links.end(),
          [](const NetworkLink& l) { return l.name[0] == 'c' || l.name[0] == 'f'; });
      CHECK(intermediate == 2 * n);
    }
    DmnSpec bad;
    bad.n = 0;
    CHECK_THROWS_AS(build_dmn(bad), DomainError);
  }
  SECTION("beltway ring") {
    for (int n : {1, 4}) {
      const auto net = build_beltway(n, 0.3, 0.2);
      CHECK_NOTHROW(net.validate());
      CHECK(net.links.size() == static_cast<std::size_t>(4 * n));
    }
    CHECK_NOTHROW(build_beltway(2, 0.3, 0.0).validate());
    CHECK_THROWS_AS(build_beltway(0, 0.3, 0.2), DomainError);
    CHECK_THROWS_AS(build_beltway(1, 1.3, 0.2), DomainError);
  }
  SECTION("validation catches dangling links") {
    auto net = build_dm(make(3, 1, 2, 2, 0.5, 0.5));
    net.junctions.pop_back();
    CHECK_THROWS_AS(net.validate(), ConfigError);
  }
  SECTION("invalid specs") {
    CHECK_THROWS_AS(make(0, 1, 1, 1, 0.5, 0.5).validate(), DomainError);
    CHECK_THROWS_AS(make(1, 1, 1, 1, 1.5, 0.5).validate(), DomainError);
    CHECK_THROWS_AS(make(1, 1, 1, 1, 0.5, -0.1).validate(), DomainError);
  }
}
