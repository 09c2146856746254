#include "dmflow/io.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace dmflow {

using nlohmann::json;

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return {buf.data(), res.ptr};
}

namespace {

std::string optional_number(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string();
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::string orbit_csv(const std::vector<double>& orbit) {
  std::string out = "step,v\n";
  for (std::size_t i = 0; i < orbit.size(); ++i) {
    out += std::to_string(i) + "," + format_number(orbit[i]) + "\n";
  }
  return out;
}

std::string cobweb_csv(const std::vector<CobwebSegment>& segments) {
  std::string out = "x0,y0,x1,y1\n";
  for (const auto& s : segments) {
    out += format_number(s.x0) + "," + format_number(s.y0) + "," + format_number(s.x1) + "," +
           format_number(s.y1) + "\n";
  }
  return out;
}

std::string bifurcation_csv(const std::vector<BifurcationPoint>& points) {
  std::string out = "xi,v_star,class,v_minus,v_plus\n";
  for (const auto& p : points) {
    out += format_number(p.xi) + "," + format_number(p.v_star) + "," + to_string(p.stability) +
           "," + optional_number(p.v_minus) + "," + optional_number(p.v_plus) + "\n";
  }
  return out;
}

std::string run_record_csv(const RunRecord& record) {
  std::string out = "t,section,flux\n";
  for (std::size_t i = 0; i < record.times.size(); ++i) {
    const std::string t = format_number(record.times[i]);
    for (std::size_t s = 0; s < record.section_names.size(); ++s) {
      out += t + "," + record.section_names[s] + "," + format_number(record.section_flux[s][i]) +
             "\n";
    }
  }
  return out;
}

std::string dmn_orbit_csv(const std::vector<DmnMapState>& orbit) {
  std::string out = "step";
  const std::size_t n = orbit.empty() ? 0 : orbit.front().v.size();
  for (std::size_t i = 0; i < n; ++i) out += ",v" + std::to_string(i);
  out += "\n";
  for (std::size_t k = 0; k < orbit.size(); ++k) {
    out += std::to_string(k);
    for (double v : orbit[k].v) out += "," + format_number(v);
    out += "\n";
  }
  return out;
}

json to_json(const DmSpec& s) {
  return {{"c0", s.c0}, {"c1", s.c1}, {"c2", s.c2}, {"c3", s.c3}, {"beta", s.beta}, {"xi", s.xi}};
}

json to_json(const StabilityReport& r) {
  json j = {{"regime", to_string(r.regime.kind)},
            {"map_defined", r.regime.map_defined()},
            {"v_star", r.v_star},
            {"class", to_string(r.stability)},
            {"linear_class", to_string(r.linear_class)},
            {"max_steps", r.max_steps}};
  if (r.period2) {
    j["period2"] = {{"v_minus", r.period2->v_minus},
                    {"v_plus", r.period2->v_plus},
                    {"continuum", r.period2->continuum}};
  } else {
    j["period2"] = nullptr;
  }
  return j;
}

json to_json(const BifurcationPoint& p) {
  return {{"xi", p.xi},
          {"regime", to_string(p.regime)},
          {"v_star", p.v_star},
          {"class", to_string(p.stability)},
          {"v_minus", optional_json(p.v_minus)},
          {"v_plus", optional_json(p.v_plus)},
          {"continuum", p.continuum}};
}

json to_json(const std::vector<BifurcationPoint>& points) {
  json arr = json::array();
  for (const auto& p : points) arr.push_back(to_json(p));
  return arr;
}

json to_json(const RunRecord& r) {
  json sections = json::object();
  for (std::size_t s = 0; s < r.section_names.size(); ++s) {
    sections[r.section_names[s]] = r.section_flux[s];
  }
  return {{"dt", r.dt},
          {"times", r.times},
          {"sections", sections},
          {"vehicles", r.vehicles},
          {"inflow", r.inflow},
          {"outflow", r.outflow}};
}

json to_json(const OscillationReport& o) {
  json j = {{"verdict", to_string(o.verdict)},
            {"low", o.low},
            {"high", o.high},
            {"warmup", o.warmup_used},
            {"window", o.window}};
  if (o.verdict == Verdict::Converged) j["value"] = o.value;
  if (o.verdict == Verdict::PersistentOscillation) j["period"] = o.period;
  return j;
}

json to_json(const ValidationReport& r) {
  return {{"spec", to_json(r.spec)},
          {"analytic", to_json(r.analytic)},
          {"measured", to_json(r.measured)},
          {"series", r.series},
          {"expected", r.expected ? json(to_string(*r.expected)) : json(nullptr)},
          {"verdict_agrees", r.verdict_agrees},
          {"rel_error_low", optional_json(r.rel_error_low)},
          {"rel_error_high", optional_json(r.rel_error_high)},
          {"rel_error_value", optional_json(r.rel_error_value)},
          {"passed", r.passed}};
}

json to_json(const DmnClassification& c) {
  json fps = json::array();
  for (const auto& f : c.fixed_points) fps.push_back(f.v);
  return {{"class", to_string(c.kind)},
          {"analyzed", c.analyzed},
          {"symmetric", c.symmetric.v},
          {"fixed_points", fps},
          {"cycle", c.cycle}};
}

json to_json(const DmnSimReport& r) {
  json secs = json::array();
  for (const auto& s : r.sections) secs.push_back(to_json(s));
  return {{"class", to_string(r.verdict)},
          {"determined", r.determined},
          {"sections", secs},
          {"final_values", r.final_values}};
}

json to_json(const BeltwaySimReport& r) {
  return {{"decay_rate", r.decay_rate},
          {"pair_time", r.pair_time},
          {"measured_per_pair", r.measured_per_pair},
          {"analytic_per_pair", r.analytic_per_pair}};
}

json orbit_json(const std::vector<double>& orbit, const std::vector<CobwebSegment>& segments) {
  json segs = json::array();
  for (const auto& s : segments) segs.push_back({s.x0, s.y0, s.x1, s.y1});
  return {{"orbit", orbit}, {"cobweb", segs}};
}

}  // namespace dmflow
