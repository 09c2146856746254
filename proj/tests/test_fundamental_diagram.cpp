#include <catch_amalgamated.hpp>

#include <cmath>

#include "dmflow/errors.hpp"
#include "dmflow/fundamental_diagram.hpp"

using namespace dmflow;
using Catch::Approx;

namespace {

// vf = 1, w = 1/2, kj = 3: kc = 1, C = 1.
FundamentalDiagram tri() { return FundamentalDiagram::triangular(1.0, 0.5, 3.0); }
// vf = 1, kj = 4: kc = 2, C = 1.
FundamentalDiagram gs() { return FundamentalDiagram::greenshields(1.0, 4.0); }

}  // namespace

TEST_CASE("triangular demand and supply at the ends of the density range") {
  const auto fd = tri();
  CHECK(fd.capacity() == 1.0);
  CHECK(fd.critical_density() == 1.0);
  CHECK(fd.demand(0.0) == 0.0);
  CHECK(fd.demand(3.0) == 1.0);
  CHECK(fd.supply(0.0) == 1.0);
  CHECK(fd.supply(3.0) == 0.0);
}

TEST_CASE("greenshields demand and supply") {
  const auto fd = gs();
  CHECK(fd.capacity() == 1.0);
  CHECK(fd.demand(2.0) == 1.0);
  CHECK(fd.supply(3.0) == 0.75);
  CHECK(fd.supply(4.0) == 0.0);
}

TEST_CASE("state_to_density branches") {
  const auto fd = tri();
  CHECK(fd.state_to_density({1.0, 1.0}) == fd.critical_density());
  CHECK(fd.state_to_density({0.5, 1.0}) == 0.5);
  CHECK(fd.state_to_density({1.0, 0.5}) == 2.0);
  CHECK_THROWS_AS(fd.state_to_density({0.5, 0.5}), DomainError);
}

TEST_CASE("out-of-range density is a domain error") {
  const auto fd = tri();
  CHECK_THROWS_AS(fd.demand(-0.1), DomainError);
  CHECK_THROWS_AS(fd.supply(3.1), DomainError);
  CHECK_THROWS_AS(fd.flow(4.0), DomainError);
  CHECK_THROWS_AS(FundamentalDiagram::triangular(0.0, 0.5, 3.0), DomainError);
  CHECK_THROWS_AS(FundamentalDiagram::from_capacity(-1.0, 1.0, 0.5), DomainError);
}

TEST_CASE("from_capacity derives the jam density") {
  const auto fd = FundamentalDiagram::from_capacity(2.0, 1.0, 0.5);
  CHECK(fd.capacity() == 2.0);
  CHECK(fd.critical_density() == 2.0);
  CHECK(fd.jam_density() == 6.0);
  CHECK(fd.flow(fd.jam_density()) == 0.0);
  CHECK(fd.max_wave_speed() == 1.0);
}

TEST_CASE("diagram invariants on a dense grid") {
  for (const auto& fd : {tri(), gs(), FundamentalDiagram::from_capacity(1.5, 1.0, 0.5),
                         FundamentalDiagram::triangular(2.0, 1.0, 5.0)}) {
    const double kj = fd.jam_density();
    const double c = fd.capacity();
    CHECK(fd.flow(0.0) == 0.0);
    CHECK(fd.flow(kj) == Approx(0.0).margin(1e-12));
    CHECK(fd.flow(fd.critical_density()) == Approx(c).epsilon(1e-12));
    double prev_d = -1.0, prev_s = 2.0 * c;
    for (int i = 0; i <= 1000; ++i) {
      const double k = kj * i / 1000.0;
      const double d = fd.demand(k), s = fd.supply(k), q = fd.flow(k);
      CHECK(d >= prev_d);
      CHECK(s <= prev_s);
      CHECK(std::max(d, s) == Approx(c).epsilon(1e-12));
      CHECK(std::min(d, s) == Approx(q).margin(1e-12));
      CHECK(q <= c + 1e-12);
      prev_d = d;
      prev_s = s;
    }
  }
}

TEST_CASE("demand-supply round trip") {
  SECTION("triangular is exact to rounding") {
    const auto fd = tri();
    for (int i = 0; i <= 1000; ++i) {
      const double k = 3.0 * i / 1000.0;
      CHECK(fd.state_to_density(fd.state(k)) == Approx(k).margin(1e-12));
    }
  }
  SECTION("greenshields loses digits only near the critical density") {
    // sqrt(1 - q/C) amplifies rounding as q -> C.
    const auto fd = gs();
    for (int i = 0; i <= 1000; ++i) {
      const double k = 4.0 * i / 1000.0;
      const double tol = std::abs(k - 2.0) > 0.1 ? 1e-12 : 1e-7;
      CHECK(fd.state_to_density(fd.state(k)) == Approx(k).margin(tol));
    }
  }
}
