#include "dmflow/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "dmflow/errors.hpp"

namespace dmflow {

using nlohmann::json;

const char* to_string(TopologyKind k) {
  switch (k) {
    case TopologyKind::Dm: return "dm";
    case TopologyKind::Dmn: return "dmn";
    case TopologyKind::Beltway: return "beltway";
    case TopologyKind::Custom: return "custom";
  }
  return "?";
}

double Scenario::xi() const {
  switch (kind) {
    case TopologyKind::Dmn: return dmn.xi;
    case TopologyKind::Beltway: return beltway.xi;
    default: return dm.xi;
  }
}

NetworkDescription Scenario::network() const {
  switch (kind) {
    case TopologyKind::Dmn: return build_dmn(dmn);
    case TopologyKind::Beltway: {
      BeltwayLayout layout;
      layout.ring_physics = layout.ramp_physics = physics;
      return build_beltway(beltway.n, beltway.beta, beltway.xi, layout);
    }
    default: return build_dm(dm);
  }
}

namespace {

class Parser {
 public:
  Parser(const std::string& text, std::string source) : text_(text), source_(std::move(source)) {}

  [[noreturn]] void fail_at(std::size_t offset, const std::string& msg) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < offset && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError(source_ + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " +
                      msg);
  }

  // Best-effort location of `"section"` then `"key"` in the raw text.
  [[noreturn]] void fail(const std::string& section, const std::string& key,
                         const std::string& msg) const {
    std::size_t pos = 0;
    if (!section.empty()) {
      const auto p = text_.find("\"" + section + "\"");
      if (p != std::string::npos) pos = p;
    }
    if (!key.empty()) {
      const auto p = text_.find("\"" + key + "\"", pos);
      if (p != std::string::npos) pos = p;
    }
    const std::string where = section.empty() ? key : (key.empty() ? section : section + "." + key);
    fail_at(pos, where + ": " + msg);
  }

  json parse() const {
    try {
      return json::parse(text_);
    } catch (const json::parse_error& e) {
      fail_at(e.byte == 0 ? 0 : e.byte - 1, std::string("parse error: ") + e.what());
    }
  }

  void check_keys(const json& obj, const std::string& section,
                  const std::set<std::string>& allowed) const {
    if (!obj.is_object()) fail(section, "", "must be an object");
    for (const auto& [k, v] : obj.items()) {
      if (!allowed.count(k)) fail(section, k, "unknown key");
    }
  }

  double number(const json& obj, const std::string& section, const std::string& key) const {
    if (!obj.contains(key)) fail(section, key, "required");
    const json& v = obj.at(key);
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
      const std::string s = v.get<std::string>();
      const auto slash = s.find('/');
      try {
        std::size_t used = 0;
        if (slash == std::string::npos) {
          const double x = std::stod(s, &used);
          if (used == s.size()) return x;
        } else {
          const double p = std::stod(s.substr(0, slash), &used);
          if (used == slash) {
            const std::string rest = s.substr(slash + 1);
            const double q = std::stod(rest, &used);
            if (used == rest.size() && q != 0.0) return p / q;
          }
        }
      } catch (const std::exception&) {
      }
    }
    fail(section, key, "expected a number or a \"p/q\" string");
  }

  double number_or(const json& obj, const std::string& section, const std::string& key,
                   double fallback) const {
    return obj.contains(key) ? number(obj, section, key) : fallback;
  }

  int integer(const json& obj, const std::string& section, const std::string& key) const {
    if (!obj.contains(key)) fail(section, key, "required");
    const json& v = obj.at(key);
    if (!v.is_number_integer()) fail(section, key, "expected an integer");
    return v.get<int>();
  }

  std::string string(const json& obj, const std::string& section, const std::string& key,
                     const std::string& fallback) const {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_string()) fail(section, key, "expected a string");
    return obj.at(key).get<std::string>();
  }

  void require(bool ok, const std::string& section, const std::string& key,
               const std::string& msg) const {
    if (!ok) fail(section, key, msg);
  }

 private:
  const std::string& text_;
  std::string source_;
};

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& source) {
  const Parser p(text, source);
  const json doc = p.parse();
  p.check_keys(doc, "", {"network", "diagram", "simulation", "orbit", "sweep", "output",
                         "description"});
  Scenario sc;

  if (doc.contains("diagram")) {
    const json& d = doc["diagram"];
    p.check_keys(d, "diagram", {"shape", "free_flow_speed", "congested_wave_speed"});
    const std::string shape = p.string(d, "diagram", "shape", "triangular");
    if (shape == "greenshields") {
      sc.physics.shape = DiagramShape::Greenshields;
    } else {
      p.require(shape == "triangular", "diagram", "shape",
                "must be \"triangular\" or \"greenshields\"");
    }
    sc.physics.free_flow_speed = p.number_or(d, "diagram", "free_flow_speed", 1.0);
    sc.physics.congested_wave_speed = p.number_or(d, "diagram", "congested_wave_speed", 0.5);
    p.require(sc.physics.free_flow_speed > 0.0, "diagram", "free_flow_speed", "must be positive");
    p.require(sc.physics.congested_wave_speed > 0.0, "diagram", "congested_wave_speed",
              "must be positive");
  }

  if (!doc.contains("network")) p.fail("", "network", "required section missing");
  const json& net = doc["network"];
  if (!net.is_object()) p.fail("network", "", "must be an object");
  const std::string kind = p.string(net, "network", "kind", "");
  auto in_unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (kind == "dm") {
    p.check_keys(net, "network", {"kind", "c0", "c1", "c2", "c3", "beta", "xi", "lengths"});
    sc.kind = TopologyKind::Dm;
    DmSpec& s = sc.dm;
    s.c0 = p.number(net, "network", "c0");
    s.c1 = p.number(net, "network", "c1");
    s.c2 = p.number(net, "network", "c2");
    s.c3 = p.number(net, "network", "c3");
    s.beta = p.number(net, "network", "beta");
    s.xi = p.number(net, "network", "xi");
    for (const char* c : {"c0", "c1", "c2", "c3"}) {
      p.require(p.number(net, "network", c) > 0.0, "network", c, "capacity must be positive");
    }
    p.require(in_unit(s.beta), "network", "beta", "must lie in [0, 1]");
    p.require(in_unit(s.xi), "network", "xi", "must lie in [0, 1]");
    for (auto& l : s.links) l = sc.physics;
    if (net.contains("lengths")) {
      const json& ls = net["lengths"];
      p.require(ls.is_array() && ls.size() == 4, "network", "lengths",
                "expected an array of 4 lengths");
      for (std::size_t i = 0; i < 4; ++i) {
        p.require(ls[i].is_number() && ls[i].get<double>() > 0.0, "network", "lengths",
                  "lengths must be positive numbers");
        s.links[i].length = ls[i].get<double>();
      }
    }
  } else if (kind == "dmn") {
    p.check_keys(net, "network", {"kind", "n", "xi", "beta", "scale", "length"});
    sc.kind = TopologyKind::Dmn;
    sc.dmn.n = p.integer(net, "network", "n");
    sc.dmn.xi = p.number(net, "network", "xi");
    sc.dmn.beta = p.number_or(net, "network", "beta", 0.0);
    sc.dmn.scale = p.number_or(net, "network", "scale", 1.0);
    sc.physics.length = p.number_or(net, "network", "length", 1.0);
    sc.dmn.physics = sc.physics;
    p.require(sc.dmn.n >= 1, "network", "n", "must be >= 1");
    p.require(sc.dmn.xi > 0.0 && sc.dmn.xi < 1.0, "network", "xi", "must lie in (0, 1)");
    p.require(in_unit(sc.dmn.beta), "network", "beta", "must lie in [0, 1]");
    p.require(sc.dmn.scale > 0.0, "network", "scale", "must be positive");
    p.require(sc.physics.length > 0.0, "network", "length", "must be positive");
  } else if (kind == "beltway") {
    p.check_keys(net, "network", {"kind", "n", "xi", "beta", "initial_flow", "length"});
    sc.kind = TopologyKind::Beltway;
    sc.beltway.n = p.integer(net, "network", "n");
    sc.beltway.beta = p.number(net, "network", "beta");
    sc.beltway.xi = p.number(net, "network", "xi");
    sc.beltway_initial_flow = p.number_or(net, "network", "initial_flow", 0.5);
    sc.physics.length = p.number_or(net, "network", "length", 1.0);
    p.require(sc.beltway.n >= 1, "network", "n", "must be >= 1");
    p.require(sc.beltway.beta >= 0.0 && sc.beltway.beta < 1.0, "network", "beta",
              "must lie in [0, 1)");
    p.require(sc.beltway.xi >= 0.0 && sc.beltway.xi < 1.0, "network", "xi", "must lie in [0, 1)");
    p.require(sc.beltway_initial_flow > 0.0 && sc.beltway_initial_flow <= 1.0, "network",
              "initial_flow", "must lie in (0, 1]");
    p.require(sc.physics.length > 0.0, "network", "length", "must be positive");
  } else {
    p.fail("network", "kind", "must be one of \"dm\", \"dmn\", \"beltway\"");
  }

  if (doc.contains("simulation")) {
    const json& s = doc["simulation"];
    p.check_keys(s, "simulation", {"cells_per_link", "cfl", "dt", "horizon", "warmup_fraction",
                                   "window_fraction", "tol"});
    if (s.contains("cells_per_link")) {
      sc.sim.cells_per_link = p.integer(s, "simulation", "cells_per_link");
      p.require(sc.sim.cells_per_link >= 1, "simulation", "cells_per_link", "must be >= 1");
    }
    sc.sim.cfl = p.number_or(s, "simulation", "cfl", sc.sim.cfl);
    p.require(sc.sim.cfl > 0.0 && sc.sim.cfl <= 1.0, "simulation", "cfl", "must lie in (0, 1]");
    if (s.contains("dt") && !(s["dt"].is_string() && s["dt"] == "auto")) {
      sc.sim.dt = p.number(s, "simulation", "dt");
    }
    sc.horizon = p.number_or(s, "simulation", "horizon", sc.horizon);
    p.require(sc.horizon >= 0.0, "simulation", "horizon", "must be nonnegative");
    sc.warmup_fraction = p.number_or(s, "simulation", "warmup_fraction", sc.warmup_fraction);
    sc.window_fraction = p.number_or(s, "simulation", "window_fraction", sc.window_fraction);
    p.require(sc.warmup_fraction >= 0.0 && sc.window_fraction > 0.0 &&
                  sc.warmup_fraction + sc.window_fraction <= 1.0,
              "simulation", "warmup_fraction", "warmup + window fractions must fit in (0, 1]");
    sc.tol = p.number_or(s, "simulation", "tol", sc.tol);
    p.require(sc.tol > 0.0, "simulation", "tol", "must be positive");
  }

  if (doc.contains("orbit")) {
    const json& o = doc["orbit"];
    p.check_keys(o, "orbit", {"v0", "steps"});
    sc.orbit_v0 = p.number_or(o, "orbit", "v0", sc.orbit_v0);
    if (o.contains("steps")) sc.orbit_steps = p.integer(o, "orbit", "steps");
    p.require(sc.orbit_steps >= 0, "orbit", "steps", "must be nonnegative");
  }

  if (doc.contains("sweep")) {
    const json& w = doc["sweep"];
    p.check_keys(w, "sweep", {"xi_min", "xi_max", "xi_step"});
    sc.xi_min = p.number_or(w, "sweep", "xi_min", sc.xi_min);
    sc.xi_max = p.number_or(w, "sweep", "xi_max", sc.xi_max);
    sc.xi_step = p.number_or(w, "sweep", "xi_step", sc.xi_step);
    p.require(sc.xi_step > 0.0, "sweep", "xi_step", "must be positive");
    p.require(in_unit(sc.xi_min) && in_unit(sc.xi_max), "sweep", "xi_min",
              "range must lie in [0, 1]");
  }

  if (doc.contains("output")) {
    const json& o = doc["output"];
    p.check_keys(o, "output", {"dir", "format"});
    sc.output_dir = p.string(o, "output", "dir", "");
    sc.output_format = p.string(o, "output", "format", "csv");
    p.require(sc.output_format == "csv" || sc.output_format == "json", "output", "format",
              "must be \"csv\" or \"json\"");
  }

  try {
    Simulator check(sc.network(), sc.sim);
  } catch (const ConfigError& e) {
    p.fail("simulation", "dt", e.what());
  } catch (const DomainError& e) {
    p.fail("network", "", e.what());
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open scenario file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

}  // namespace dmflow
