#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "json.hpp"

#include "dmflow/bifurcation.hpp"
#include "dmflow/errors.hpp"
#include "dmflow/extended_networks.hpp"
#include "dmflow/io.hpp"
#include "dmflow/poincare_map.hpp"
#include "dmflow/scenario.hpp"
#include "dmflow/validation.hpp"

namespace py = pybind11;
using nlohmann::json;
using namespace dmflow;

namespace {

py::object to_py(const json& j) {
  switch (j.type()) {
    case json::value_t::null: return py::none();
    case json::value_t::boolean: return py::bool_(j.get<bool>());
    case json::value_t::number_integer: return py::int_(j.get<long long>());
    case json::value_t::number_unsigned: return py::int_(j.get<unsigned long long>());
    case json::value_t::number_float: return py::float_(j.get<double>());
    case json::value_t::string: return py::str(j.get<std::string>());
    case json::value_t::array: {
      py::list out;
      for (const auto& e : j) out.append(to_py(e));
      return out;
    }
    case json::value_t::object: {
      py::dict out;
      for (const auto& [k, v] : j.items()) out[py::str(k)] = to_py(v);
      return out;
    }
    default: return py::none();
  }
}

}  // namespace

PYBIND11_MODULE(_dmflow, m) {
  m.doc() = "Diverge-merge traffic network dynamics";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<UnsupportedRegimeError>(m, "UnsupportedRegimeError", PyExc_ValueError);
  py::register_exception<InsufficientDataError>(m, "InsufficientDataError", PyExc_ValueError);

  py::class_<DmSpec>(m, "DmSpec")
      .def(py::init([](double c0, double c1, double c2, double c3, double beta, double xi) {
             DmSpec s;
             s.c0 = c0;
             s.c1 = c1;
             s.c2 = c2;
             s.c3 = c3;
             s.beta = beta;
             s.xi = xi;
             s.validate();
             return s;
           }),
           py::arg("c0"), py::arg("c1"), py::arg("c2"), py::arg("c3"), py::arg("beta"),
           py::arg("xi"))
      .def_readonly("c0", &DmSpec::c0)
      .def_readonly("c1", &DmSpec::c1)
      .def_readonly("c2", &DmSpec::c2)
      .def_readonly("c3", &DmSpec::c3)
      .def_readonly("beta", &DmSpec::beta)
      .def_readonly("xi", &DmSpec::xi)
      .def("with_xi", &DmSpec::with_xi)
      .def("__repr__", [](const DmSpec& s) { return "DmSpec(" + to_json(s).dump() + ")"; });

  py::class_<PiecewiseMap>(m, "PiecewiseMap")
      .def_property_readonly("branch", [](const PiecewiseMap& p) { return to_string(p.branch); })
      .def_readonly("slope", &PiecewiseMap::slope)
      .def_readonly("lower", &PiecewiseMap::lower)
      .def_readonly("upper", &PiecewiseMap::upper)
      .def("__call__", &PiecewiseMap::apply)
      .def("kinks", &PiecewiseMap::kinks)
      .def("iterate", &PiecewiseMap::iterate, py::arg("v0"), py::arg("n"))
      .def("cobweb", [](const PiecewiseMap& p, double v0, int n) {
        std::vector<std::tuple<double, double, double, double>> out;
        for (const auto& s : p.cobweb(v0, n)) out.emplace_back(s.x0, s.y0, s.x1, s.y1);
        return out;
      });

  m.def("regime", [](const DmSpec& s) { return std::string(to_string(classify_regime(s).kind)); });
  m.def("build_map", [](const DmSpec& s) { return build_map(s); });
  m.def("fixed_point", &fixed_point);
  m.def("analyze", [](const DmSpec& s) { return to_py(to_json(classify_stability(s))); });
  m.def("xi_grid", &xi_grid);
  m.def(
      "sweep",
      [](const DmSpec& s, double xi_min, double xi_max, double step) {
        return to_py(to_json(sweep_xi(s, xi_grid(xi_min, xi_max, step))));
      },
      py::arg("spec"), py::arg("xi_min") = 0.0, py::arg("xi_max") = 1.0, py::arg("step") = 0.001);
  m.def("sweep_csv", [](const DmSpec& s, double xi_min, double xi_max, double step) {
    return bifurcation_csv(sweep_xi(s, xi_grid(xi_min, xi_max, step)));
  });
  m.def("regime_boundaries", [](const DmSpec& s) {
    py::list out;
    for (const auto& b : regime_boundaries(s)) {
      out.append(py::dict(py::arg("xi") = b.xi, py::arg("label") = b.label,
                          py::arg("left") = to_string(b.left), py::arg("at") = to_string(b.at),
                          py::arg("right") = to_string(b.right)));
    }
    return out;
  });
  m.def(
      "validate",
      [](const DmSpec& s, double horizon) {
        ValidationOptions o;
        o.horizon = horizon;
        return to_py(to_json(validate_spec(s, o)));
      },
      py::arg("spec"), py::arg("horizon") = 400.0);

  m.def("dmn_step", [](double xi, const std::vector<double>& v) {
    return dmn_step(xi, DmnMapState{v}).v;
  });
  m.def("dmn_classify", [](int n, double xi) { return to_py(to_json(dmn_classify(n, xi))); });
  m.def("beltway", [](double beta, double xi, int n) {
    const BeltwaySpec spec{beta, xi, n};
    const BeltwayFactor f = beltway_factor(spec);
    json j = {{"class", to_string(beltway_classify(spec))},
              {"per_pair", f.per_pair},
              {"per_lap", f.per_lap},
              {"alpha_mu_form", f.alpha_mu_form}};
    if (f.per_pair < 1.0) j["half_life_pairs"] = beltway_half_life(spec).pairs;
    return to_py(j);
  });

  m.def("scenario_spec", [](const std::string& path) {
    const Scenario sc = load_scenario(path);
    if (sc.kind != TopologyKind::Dm) throw ConfigError(path + ": not a dm scenario");
    return sc.dm;
  });
}
