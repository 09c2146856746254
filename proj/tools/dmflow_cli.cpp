#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "dmflow/bifurcation.hpp"
#include "dmflow/errors.hpp"
#include "dmflow/extended_networks.hpp"
#include "dmflow/io.hpp"
#include "dmflow/poincare_map.hpp"
#include "dmflow/scenario.hpp"
#include "dmflow/validation.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace dmflow;

namespace {

enum ExitCode { kOk = 0, kValidationFailed = 1, kConfigError = 2, kInternalError = 3 };

enum class LogLevel { Quiet, Warn, Info, Debug };

LogLevel log_level() {
  const char* env = std::getenv("DMFLOW_LOG");
  const std::string v = env ? env : "";
  if (v == "quiet") return LogLevel::Quiet;
  if (v == "info") return LogLevel::Info;
  if (v == "debug") return LogLevel::Debug;
  return LogLevel::Warn;
}

void log(LogLevel level, const std::string& msg) {
  static const LogLevel threshold = log_level();
  if (level <= threshold && threshold != LogLevel::Quiet) std::cerr << "dmflow: " << msg << "\n";
}

struct Options {
  std::string scenario;
  std::optional<double> xi;
  std::optional<double> v0;
  std::optional<int> steps;
  std::optional<double> xi_min, xi_max, xi_step;
  std::string out;
  std::string format;
  bool family = false;
};

Scenario load(const Options& o) {
  Scenario sc = load_scenario(o.scenario);
  if (o.xi) {
    if (!(*o.xi >= 0.0 && *o.xi <= 1.0)) throw ConfigError("--xi must lie in [0, 1]");
    sc.dm.xi = sc.dmn.xi = sc.beltway.xi = *o.xi;
  }
  if (!o.format.empty()) sc.output_format = o.format;
  if (!o.out.empty()) sc.output_dir = o.out;
  log(LogLevel::Info, "loaded " + o.scenario + " (" + to_string(sc.kind) + ")");
  return sc;
}

void emit(const Scenario& sc, const std::string& stem, const std::string& csv, const json& j) {
  const bool as_json = sc.output_format == "json";
  const std::string body = as_json ? j.dump(2) + "\n" : csv;
  if (sc.output_dir.empty()) {
    std::cout << body;
    return;
  }
  fs::create_directories(sc.output_dir);
  const fs::path path = fs::path(sc.output_dir) / (stem + (as_json ? ".json" : ".csv"));
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path.string());
  f << body;
  log(LogLevel::Info, "wrote " + path.string());
}

void require_dm(const Scenario& sc, const char* command) {
  if (sc.kind != TopologyKind::Dm) {
    throw ConfigError(std::string(command) + " needs a network of kind \"dm\"");
  }
}

SimulationOptions sim_options(const Scenario& sc) { return sc.sim; }

ValidationOptions validation_options(const Scenario& sc) {
  ValidationOptions v;
  v.sim = sc.sim;
  v.horizon = sc.horizon;
  v.warmup_fraction = sc.warmup_fraction;
  v.window_fraction = sc.window_fraction;
  v.tol = sc.tol;
  return v;
}

std::string describe(const StabilityReport& r) {
  std::string s;
  if (!r.regime.map_defined()) {
    s += "finite-time stable (";
    s += r.regime.kind == RegimeKind::UpstreamBottleneck ? "upstream bottleneck"
                                                         : "middle bottleneck";
    s += ")\nalways stable: no return map exists\n";
    s += "link-1 flow: " + format_number(r.v_star) + "\n";
    return s;
  }
  s += "regime: " + std::string(to_string(r.regime.kind)) + "\n";
  s += "v*: " + format_number(r.v_star) + "\n";
  s += "class: " + std::string(to_string(r.stability));
  if (r.stability == StabilityClass::FiniteTime) {
    s += " (at most " + std::to_string(r.max_steps) + " steps)";
  }
  if (r.linear_class != r.stability) s += " [linear label " + std::string(to_string(r.linear_class)) + "]";
  s += "\n";
  if (r.period2) {
    s += std::string(r.period2->continuum ? "period-2 continuum: [" : "period-2 cycle: (") +
         format_number(r.period2->v_minus) + ", " + format_number(r.period2->v_plus) +
         (r.period2->continuum ? "]\n" : ")\n");
  }
  return s;
}

int cmd_analyze(const Options& o) {
  const Scenario sc = load(o);
  json j;
  std::string text;
  switch (sc.kind) {
    case TopologyKind::Dm: {
      const StabilityReport r = classify_stability(sc.dm);
      j = to_json(r);
      j["spec"] = to_json(sc.dm);
      text = describe(r);
      break;
    }
    case TopologyKind::Dmn: {
      const DmnClassification c = dmn_classify(sc.dmn.n, sc.dmn.xi, sc.dmn.scale);
      j = to_json(c);
      j["perturbation_factor"] = dmn_perturbation_factor(sc.dmn.n, sc.dmn.xi);
      text = "(DM)^" + std::to_string(sc.dmn.n) + " class: " + to_string(c.kind) +
             (c.analyzed ? "\n" : " (outside the analyzed band 1/3 < xi < 1/2)\n");
      text += "perturbation factor per lap: " +
              format_number(dmn_perturbation_factor(sc.dmn.n, sc.dmn.xi)) + "\n";
      break;
    }
    case TopologyKind::Beltway: {
      const BeltwayFactor f = beltway_factor(sc.beltway);
      const GridlockClass g = beltway_classify(sc.beltway);
      j = {{"class", to_string(g)},
           {"per_pair", f.per_pair},
           {"per_lap", f.per_lap},
           {"alpha_mu_form", f.alpha_mu_form}};
      text = std::string("class: ") + to_string(g) + "\nper-pair ratio: " +
             format_number(f.per_pair) + "\nper-lap ratio: " + format_number(f.per_lap) + "\n";
      if (g == GridlockClass::GridlockStable) {
        const HalfLife h = beltway_half_life(sc.beltway);
        j["half_life_pairs"] = h.pairs;
        j["half_life_laps"] = h.laps;
        text += "half-life: " + format_number(h.pairs) + " pairs\n";
      }
      break;
    }
    case TopologyKind::Custom: throw ConfigError("unsupported network kind");
  }
  if (sc.output_format == "json" || !sc.output_dir.empty()) {
    Scenario out = sc;
    out.output_format = "json";
    emit(out, "analysis", "", j);
  }
  if (sc.output_format != "json") std::cout << text;
  return kOk;
}

int cmd_orbit(const Options& o) {
  const Scenario sc = load(o);
  const int steps = o.steps.value_or(sc.orbit_steps);
  if (steps < 0) throw ConfigError("--steps must be nonnegative");
  const double v0 = o.v0.value_or(sc.orbit_v0);
  switch (sc.kind) {
    case TopologyKind::Dm: {
      const PiecewiseMap m = build_map(sc.dm);
      const auto orbit = m.iterate(v0, steps);
      const auto segs = m.cobweb(v0, steps);
      if (sc.output_format == "json") {
        emit(sc, "orbit", "", orbit_json(orbit, segs));
      } else {
        emit(sc, "orbit", orbit_csv(orbit), {});
        if (!sc.output_dir.empty()) emit(sc, "cobweb", cobweb_csv(segs), {});
      }
      return kOk;
    }
    case TopologyKind::Dmn: {
      DmnMapState s;
      s.v.assign(static_cast<std::size_t>(sc.dmn.n), 2.0 * sc.dmn.xi * sc.dmn.scale);
      // v0 sets link 0; the offset from the symmetric value alternates in
      // sign around the ring. A single shifted link never couples to the
      // others in this map.
      if (o.v0 || sc.orbit_v0 != 0.0) {
        const double d = v0 - s.v[0];
        for (std::size_t i = 0; i < s.v.size(); ++i) s.v[i] += i % 2 == 0 ? d : -d;
      }
      const auto orbit = dmn_iterate(sc.dmn.xi, s, steps, sc.dmn.scale);
      json arr = json::array();
      for (const auto& st : orbit) arr.push_back(st.v);
      emit(sc, "orbit", dmn_orbit_csv(orbit), {{"orbit", arr}});
      return kOk;
    }
    case TopologyKind::Beltway: {
      const double r = beltway_factor(sc.beltway).per_pair;
      std::vector<double> orbit{o.v0 ? v0 : sc.beltway_initial_flow};
      for (int i = 0; i < steps; ++i) orbit.push_back(orbit.back() * r);
      emit(sc, "orbit", orbit_csv(orbit), {{"orbit", orbit}});
      return kOk;
    }
    case TopologyKind::Custom: break;
  }
  throw ConfigError("unsupported network kind");
}

int cmd_sweep(const Options& o) {
  const Scenario sc = load(o);
  require_dm(sc, "sweep");
  const auto grid = xi_grid(o.xi_min.value_or(sc.xi_min), o.xi_max.value_or(sc.xi_max),
                            o.xi_step.value_or(sc.xi_step));
  const auto points = sweep_xi(sc.dm, grid);
  log(LogLevel::Info, "swept " + std::to_string(points.size()) + " points");
  emit(sc, "bifurcation", bifurcation_csv(points), to_json(points));
  return kOk;
}

int cmd_simulate(const Options& o) {
  const Scenario sc = load(o);
  RunRecord rec;
  if (sc.kind == TopologyKind::Beltway) {
    const BeltwaySimReport b = simulate_beltway(sc.beltway.n, sc.beltway.beta, sc.beltway.xi,
                                                sc.horizon, sc.beltway_initial_flow, sc.sim);
    rec.dt = b.dt;
    rec.section_names = {"b0"};
    rec.section_flux = {b.flux};
    for (std::size_t i = 0; i < b.flux.size(); ++i) {
      rec.times.push_back(static_cast<double>(i + 1) * b.dt);
    }
  } else {
    const Simulator sim(sc.network(), sim_options(sc));
    rec = sim.run(sim.empty_state(), sc.horizon);
  }
  log(LogLevel::Info, "simulated " + std::to_string(rec.times.size()) + " steps");
  emit(sc, "run", run_record_csv(rec), to_json(rec));
  return kOk;
}

json validate_one(const Scenario& sc, bool& passed) {
  const ValidationOptions vo = validation_options(sc);
  switch (sc.kind) {
    case TopologyKind::Dm: {
      const ValidationReport r = validate_spec(sc.dm, vo);
      passed = r.passed;
      return to_json(r);
    }
    case TopologyKind::Dmn: {
      const DmnClassification c = dmn_classify(sc.dmn.n, sc.dmn.xi, sc.dmn.scale);
      json runs = json::array();
      passed = true;
      // Odd rings oscillate from any start; even rings need a perturbed one.
      const std::vector<std::optional<double>> starts =
          c.kind == DmnClass::BistableEven ? std::vector<std::optional<double>>{1e-3, -1e-3}
                                           : std::vector<std::optional<double>>{std::nullopt};
      for (const auto& start : starts) {
        const DmnSimReport r = simulate_dmn(sc.dmn.n, sc.dmn.xi, start, vo);
        passed = passed && r.determined && r.verdict == c.kind;
        json jr = to_json(r);
        jr["start"] = start ? json(*start) : json("empty");
        runs.push_back(jr);
      }
      return {{"analytic", to_json(c)}, {"runs", runs}, {"passed", passed}};
    }
    case TopologyKind::Beltway: {
      const BeltwaySimReport r = simulate_beltway(sc.beltway.n, sc.beltway.beta, sc.beltway.xi,
                                                  sc.horizon, sc.beltway_initial_flow, sc.sim);
      const double err = std::abs(r.measured_per_pair - r.analytic_per_pair) / r.analytic_per_pair;
      passed = err <= 0.05;
      json j = to_json(r);
      j["rel_error"] = err;
      j["passed"] = passed;
      return j;
    }
    case TopologyKind::Custom: break;
  }
  throw ConfigError("unsupported network kind");
}

int cmd_validate(const Options& o) {
  Scenario sc = load(o);
  json report;
  bool all_passed = true;
  if (o.family) {
    require_dm(sc, "validate --family");
    const auto boundaries = regime_boundaries(sc.dm);
    const auto grid = xi_grid(o.xi_min.value_or(sc.xi_min), o.xi_max.value_or(sc.xi_max),
                              o.xi_step.value_or(0.01));
    json cases = json::array();
    int checked = 0, skipped = 0;
    for (double xi : grid) {
      const bool near_boundary = std::any_of(boundaries.begin(), boundaries.end(),
                                             [xi](const RegimeBoundary& b) {
                                               return std::abs(b.xi - xi) <= 0.01 + 1e-12;
                                             });
      if (near_boundary) {
        ++skipped;
        continue;
      }
      const ValidationReport r = validate_spec(sc.dm.with_xi(xi), validation_options(sc));
      ++checked;
      all_passed = all_passed && r.verdict_agrees;
      cases.push_back({{"xi", xi},
                       {"class", to_string(r.analytic.stability)},
                       {"verdict", to_string(r.measured.verdict)},
                       {"agrees", r.verdict_agrees}});
      log(LogLevel::Debug, "xi=" + format_number(xi) + " " + to_string(r.measured.verdict));
    }
    report = {{"family", cases}, {"checked", checked}, {"skipped_near_boundary", skipped},
              {"passed", all_passed}};
  } else {
    report = validate_one(sc, all_passed);
  }
  sc.output_format = "json";
  emit(sc, "validation", "", report);
  if (!all_passed) log(LogLevel::Warn, "validation failed");
  return all_passed ? kOk : kValidationFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diverge-merge network dynamics: Poincare map analysis and CTM simulation"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&o](CLI::App* sub) {
    sub->add_option("scenario", o.scenario, "Scenario file (JSON)")->required();
    sub->add_option("--xi", o.xi, "Override the route proportion");
    sub->add_option("--out", o.out, "Write output files into this directory");
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  };
  auto* analyze = app.add_subcommand("analyze", "Regime, fixed point, stability, period-2 points");
  add_common(analyze);
  auto* orbit = app.add_subcommand("orbit", "Iterate the return map and emit orbit/cobweb data");
  add_common(orbit);
  orbit->add_option("--v0", o.v0, "Initial out-flux");
  orbit->add_option("--steps", o.steps, "Number of iterations");
  auto* sweep = app.add_subcommand("sweep", "Bifurcation data over xi");
  add_common(sweep);
  for (auto* sub : {sweep}) {
    sub->add_option("--xi-min", o.xi_min, "Sweep start");
    sub->add_option("--xi-max", o.xi_max, "Sweep end (inclusive)");
    sub->add_option("--xi-step", o.xi_step, "Grid spacing");
  }
  auto* simulate = app.add_subcommand("simulate", "Run the cell transmission model");
  add_common(simulate);
  auto* validate = app.add_subcommand("validate", "Compare simulation against the analytic map");
  add_common(validate);
  validate->add_flag("--family", o.family,
                     "Check verdict agreement over a xi sweep (0.01 step by default)");
  validate->add_option("--xi-min", o.xi_min, "Sweep start");
  validate->add_option("--xi-max", o.xi_max, "Sweep end (inclusive)");
  validate->add_option("--xi-step", o.xi_step, "Grid spacing");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*analyze) return cmd_analyze(o);
    if (*orbit) return cmd_orbit(o);
    if (*sweep) return cmd_sweep(o);
    if (*simulate) return cmd_simulate(o);
    if (*validate) return cmd_validate(o);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const UnsupportedRegimeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
  return kInternalError;
}
