#include "dmflow/validation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dmflow/errors.hpp"

namespace dmflow {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Converged: return "Converged";
    case Verdict::PersistentOscillation: return "PersistentOscillation";
    case Verdict::Undetermined: return "Undetermined";
  }
  return "?";
}

OscillationReport detect_oscillation(const std::vector<double>& series, double dt, double warmup,
                                     double window, double tol) {
  if (!(dt > 0.0) || warmup < 0.0 || !(window > 0.0)) {
    throw DomainError("detect_oscillation needs dt > 0, warmup >= 0, window > 0");
  }
  const auto i0 = static_cast<std::size_t>(std::ceil(warmup / dt - 1e-9));
  const auto i1 = static_cast<std::size_t>(std::floor((warmup + window) / dt + 1e-9));
  if (i1 >= series.size() || i1 < i0 + 2) {
    throw InsufficientDataError("series of " + std::to_string(series.size()) +
                                " samples too short for warmup + window");
  }
  OscillationReport rep;
  rep.warmup_used = warmup;
  rep.window = window;

  const auto first = series.begin() + static_cast<std::ptrdiff_t>(i0);
  const auto last = series.begin() + static_cast<std::ptrdiff_t>(i1) + 1;
  const auto mid = first + (last - first) / 2;
  const auto [lo_it, hi_it] = std::minmax_element(first, last);
  rep.low = *lo_it;
  rep.high = *hi_it;
  const double range = rep.high - rep.low;
  if (range < tol) {
    rep.verdict = Verdict::Converged;
    rep.value = std::accumulate(first, last, 0.0) / static_cast<double>(last - first);
    return rep;
  }

  const auto [lo1, hi1] = std::minmax_element(first, mid);
  const auto [lo2, hi2] = std::minmax_element(mid, last);
  const double band = std::max(tol, 0.05 * range);
  if (std::abs(*hi1 - *hi2) > band || std::abs(*lo1 - *lo2) > band) return rep;

  const double level = 0.5 * (rep.high + rep.low);
  std::vector<double> crossings;
  for (std::size_t i = i0 + 1; i <= i1; ++i) {
    const double a = series[i - 1], b = series[i];
    if (a < level && b >= level) {
      crossings.push_back((static_cast<double>(i - 1) + (level - a) / (b - a)) * dt);
    }
  }
  if (crossings.size() < 2) return rep;
  rep.verdict = Verdict::PersistentOscillation;
  rep.period = (crossings.back() - crossings.front()) / static_cast<double>(crossings.size() - 1);
  return rep;
}

std::vector<double> map_series(const DmSpec& spec, const RunRecord& record) {
  const Regime r = classify_regime(spec);
  const bool clockwise =
      r.map_defined() && build_map(spec).branch == MapBranch::Clockwise;
  if (!clockwise) return record.section("link1");
  std::vector<double> out = record.section("link2");
  for (double& v : out) v = spec.c3 - v;
  return out;
}

namespace {

double rel_error(double measured, double reference) {
  const double denom = std::abs(reference) > 0.0 ? std::abs(reference) : 1.0;
  return std::abs(measured - reference) / denom;
}

}  // namespace

ValidationReport validate_spec(const DmSpec& spec, const ValidationOptions& options) {
  ValidationReport rep;
  rep.spec = spec;
  rep.analytic = classify_stability(spec);

  const Simulator sim(build_dm(spec), options.sim);
  const RunRecord rec = sim.run(sim.empty_state(), options.horizon);
  const std::vector<double> series = map_series(spec, rec);
  const Regime& regime = rep.analytic.regime;
  rep.series = regime.map_defined() && build_map(spec).branch == MapBranch::Clockwise
                   ? "C3-link2"
                   : "link1";
  rep.measured = detect_oscillation(series, sim.dt(), options.warmup_fraction * options.horizon,
                                    options.window_fraction * options.horizon, options.tol);

  switch (rep.analytic.stability) {
    case StabilityClass::FiniteTime:
    case StabilityClass::Asymptotic: rep.expected = Verdict::Converged; break;
    case StabilityClass::Unstable: rep.expected = Verdict::PersistentOscillation; break;
    case StabilityClass::NeutralTwoCycleContinuum: break;
  }
  rep.verdict_agrees = rep.expected ? rep.measured.verdict == *rep.expected
                                    : rep.measured.verdict != Verdict::Undetermined;

  bool within = true;
  if (rep.measured.verdict == Verdict::Converged) {
    rep.rel_error_value = rel_error(rep.measured.value, rep.analytic.v_star);
    within = *rep.rel_error_value <= options.converged_rel_tol;
  } else if (rep.measured.verdict == Verdict::PersistentOscillation && rep.analytic.period2) {
    rep.rel_error_low = rel_error(rep.measured.low, rep.analytic.period2->v_minus);
    rep.rel_error_high = rel_error(rep.measured.high, rep.analytic.period2->v_plus);
    within = std::max(*rep.rel_error_low, *rep.rel_error_high) <= options.ppo_rel_tol;
  }
  rep.passed = rep.verdict_agrees && within;
  return rep;
}

std::vector<std::pair<double, double>> compose_power(const PiecewiseMap& map, int order) {
  if (order < 1) throw DomainError("order must be >= 1");
  const std::vector<double> kinks = map.kinks();
  std::vector<std::pair<double, double>> g{{0.0, 0.0}, {map.c3, map.c3}};
  for (int k = 0; k < order; ++k) {
    std::vector<std::pair<double, double>> next;
    for (std::size_t i = 0; i + 1 < g.size(); ++i) {
      const auto [xa, ya] = g[i];
      const auto [xb, yb] = g[i + 1];
      next.emplace_back(xa, map.apply(ya));
      std::vector<std::pair<double, double>> inner;
      for (double c : kinks) {
        if (c > std::min(ya, yb) && c < std::max(ya, yb)) {
          inner.emplace_back(xa + (c - ya) * (xb - xa) / (yb - ya), map.apply(c));
        }
      }
      std::sort(inner.begin(), inner.end());
      next.insert(next.end(), inner.begin(), inner.end());
    }
    next.emplace_back(g.back().first, map.apply(g.back().second));
    g = std::move(next);
  }
  return g;
}

PeriodRoots brute_force_period_roots(const PiecewiseMap& map, int order) {
  const auto g = compose_power(map, order);
  const double eps = 1e-12 * std::max(1.0, map.c3);
  PeriodRoots out;
  auto residual = [&](std::size_t i) { return g[i].second - g[i].first; };
  auto add_point = [&](double x) {
    if (!out.points.empty() && std::abs(out.points.back() - x) <= 1e-10) return;
    out.points.push_back(x);
  };

  for (std::size_t i = 0; i + 1 < g.size(); ++i) {
    const double xa = g[i].first, xb = g[i + 1].first;
    const double ra = residual(i), rb = residual(i + 1);
    if (std::abs(ra) <= eps && std::abs(rb) <= eps && xb > xa) {
      if (!out.intervals.empty() && std::abs(out.intervals.back().second - xa) <= 1e-10) {
        out.intervals.back().second = xb;
      } else {
        out.intervals.emplace_back(xa, xb);
      }
      continue;
    }
    if (std::abs(ra) <= eps) {
      add_point(xa);
    } else if (std::abs(rb) > eps && (ra < 0.0) != (rb < 0.0)) {
      add_point(xa - ra * (xb - xa) / (rb - ra));
    }
  }
  if (std::abs(residual(g.size() - 1)) <= eps) add_point(g.back().first);

  // Points on an identity interval are already described by it.
  std::erase_if(out.points, [&](double x) {
    return std::any_of(out.intervals.begin(), out.intervals.end(), [x](const auto& iv) {
      return x >= iv.first - 1e-10 && x <= iv.second + 1e-10;
    });
  });
  return out;
}

std::vector<double> grid_scan_roots(const std::function<double(double)>& g, double lo, double hi,
                                    int points, double tol) {
  if (points < 2 || !(hi > lo)) throw DomainError("grid scan needs >= 2 points on a nonempty range");
  std::vector<double> roots;
  auto add = [&roots](double x) {
    if (roots.empty() || std::abs(roots.back() - x) > 1e-9) roots.push_back(x);
  };
  const double h = (hi - lo) / (points - 1);
  double x_prev = lo;
  double g_prev = g(lo);
  if (g_prev == 0.0) add(lo);
  for (int i = 1; i < points; ++i) {
    const double x = i == points - 1 ? hi : lo + i * h;
    const double gx = g(x);
    if (g_prev != 0.0 && gx != 0.0 && (g_prev < 0.0) != (gx < 0.0)) {
      double a = x_prev, b = x, ga = g_prev;
      while (b - a > tol) {
        const double m = 0.5 * (a + b);
        const double gm = g(m);
        if (gm == 0.0) {
          a = b = m;
          break;
        }
        if ((gm < 0.0) == (ga < 0.0)) {
          a = m;
          ga = gm;
        } else {
          b = m;
        }
      }
      add(0.5 * (a + b));
    }
    if (gx == 0.0) add(x);
    x_prev = x;
    g_prev = gx;
  }
  return roots;
}

DmnSimReport simulate_dmn(int n, double xi, std::optional<double> perturbation,
                          const ValidationOptions& options) {
  DmnSpec spec;
  spec.n = n;
  spec.xi = xi;
  const Simulator sim(build_dmn(spec), options.sim);

  NetworkState start = sim.empty_state();
  if (perturbation) {
    // Per stage: origin link OC at q, congested link SOC at xi q, free link
    // SUC at (1 - xi) q, exit link critical.
    const double q = 2.0 * spec.scale;
    std::vector<LinkProfile> profiles;
    std::vector<double> fractions;
    for (std::size_t a = 0; a < sim.grids().size(); ++a) {
      const FundamentalDiagram& fd = sim.grids()[a].fd;
      double k = 0.0, frac = xi;
      switch (a % 4) {
        case 0: k = fd.overcritical_density(q); break;
        case 1:
          k = fd.overcritical_density(xi * q + (a == 1 ? *perturbation : 0.0));
          frac = 1.0;
          break;
        case 2:
          k = fd.undercritical_density((1.0 - xi) * q);
          frac = 0.0;
          break;
        case 3: k = fd.critical_density(); break;
      }
      const double len = sim.network().links[a].physics.length;
      profiles.push_back({len, len, k, k});
      fractions.push_back(frac);
    }
    start = sim.state_from_profiles(profiles, fractions);
  }
  const RunRecord rec = sim.run(std::move(start), options.horizon);

  DmnSimReport rep;
  rep.determined = true;
  bool any_ppo = false;
  for (const auto& series : rec.section_flux) {
    const OscillationReport o =
        detect_oscillation(series, sim.dt(), options.warmup_fraction * options.horizon,
                           options.window_fraction * options.horizon, options.tol);
    rep.sections.push_back(o);
    rep.final_values.push_back(o.verdict == Verdict::Converged ? o.value : 0.5 * (o.low + o.high));
    if (o.verdict == Verdict::Undetermined) rep.determined = false;
    if (o.verdict == Verdict::PersistentOscillation) any_ppo = true;
  }
  const auto [lo, hi] = std::minmax_element(rep.final_values.begin(), rep.final_values.end());
  if (any_ppo) {
    rep.verdict = DmnClass::PpoOdd;
  } else if (*hi - *lo > 10.0 * options.tol) {
    rep.verdict = DmnClass::BistableEven;
  } else {
    rep.verdict = DmnClass::Stable;
  }
  return rep;
}

BeltwaySimReport simulate_beltway(int n, double beta, double xi, double horizon,
                                  double initial_flow, const SimulationOptions& sim_options) {
  const BeltwayLayout layout;
  const Simulator sim(build_beltway(n, beta, xi, layout), sim_options);
  const auto& net = sim.network();

  // Congested ring and on-ramps, free-flowing off-ramps.
  std::vector<LinkProfile> profiles;
  for (std::size_t a = 0; a < net.links.size(); ++a) {
    const FundamentalDiagram& fd = sim.grids()[a].fd;
    const double len = net.links[a].physics.length;
    double k = 0.0;
    switch (a % 4) {
      case 0:
      case 1: k = fd.overcritical_density(initial_flow); break;
      case 2: k = fd.undercritical_density(xi * initial_flow); break;
      case 3: k = fd.overcritical_density(beta * initial_flow); break;
    }
    profiles.push_back({len, len, k, k});
  }
  const RunRecord rec = sim.run(
      sim.state_from_profiles(profiles, std::vector<double>(net.links.size(), 0.0)), horizon);

  BeltwaySimReport rep;
  rep.dt = sim.dt();
  rep.flux = rec.section("b0");
  rep.pair_time = (layout.ring_physics.length * 2.0) / layout.ring_physics.congested_wave_speed;
  rep.analytic_per_pair = beltway_factor({beta, xi, n}).per_pair;

  // Least-squares slope of ln(flux) over the last three quarters of the run.
  double st = 0, sy = 0, stt = 0, sty = 0;
  int count = 0;
  for (std::size_t i = rep.flux.size() / 4; i < rep.flux.size(); ++i) {
    if (rep.flux[i] <= 1e-12) continue;
    const double t = rec.times[i];
    const double y = std::log(rep.flux[i]);
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
    ++count;
  }
  if (count < 2) throw InsufficientDataError("beltway flux vanished before the fit window");
  rep.decay_rate = (count * sty - st * sy) / (count * stt - st * st);
  rep.measured_per_pair = std::exp(rep.decay_rate * rep.pair_time);
  return rep;
}

}  // namespace dmflow
