// Python bindings: scenario handling, single runs, the three sweeps and the
// invariant checks. Scenarios are plain dicts of setting name to value.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <set>
#include <sstream>

#include "oceansim/experiment.hpp"
#include "oceansim/simulation.hpp"
#include "oceansim/validate.hpp"

namespace py = pybind11;
using namespace oceansim;

namespace {

std::string as_setting(const py::handle& v) {
  if (py::isinstance<py::bool_>(v)) return v.cast<bool>() ? "true" : "false";
  if (py::isinstance<py::float_>(v)) return metrics::format_number(v.cast<double>());
  return py::str(v).cast<std::string>();
}

ScenarioConfig build(const py::dict& settings) {
  ScenarioConfig cfg;
  std::set<std::string, std::less<>> keys;
  for (const auto& [k, v] : settings) {
    const std::string key = py::str(k).cast<std::string>();
    apply_setting(cfg, key, as_setting(v));
    keys.insert(key);
  }
  finalize(cfg, keys);
  return cfg;
}

py::dict scenario_dict(const ScenarioConfig& cfg) {
  py::dict out;
  for (const auto& f : config_fields()) out[py::str(std::string(f.key))] = f.get(cfg);
  return out;
}

// Numeric cells become floats (ints for counters), empty cells None.
py::dict run_dict(std::uint64_t seed, const metrics::RunMetrics& m) {
  py::dict out;
  const auto& cols = metrics::run_csv_columns();
  const auto cells = metrics::run_csv_cells(seed, m);
  for (std::size_t i = 0; i < cols.size(); ++i) {
    const std::string& c = cells[i];
    if (c.empty())
      out[py::str(cols[i])] = py::none();
    else if (c.find_first_of(".eE") == std::string::npos)
      out[py::str(cols[i])] = py::int_(std::stoll(c));
    else
      out[py::str(cols[i])] = py::float_(std::stod(c));
  }
  return out;
}

py::list summary_rows(const harness::ExperimentResult& r) {
  py::list rows;
  for (const auto& p : r.points) {
    py::dict row;
    for (const auto& l : p.point.labels) row[py::str(l.name)] = l.value;
    for (const auto& metric : harness::summary_metrics()) {
      const auto s = harness::summarize(p, metric);
      row[py::str(metric.name + "_mean")] = s.mean ? py::object(py::float_(*s.mean)) : py::object(py::none());
      row[py::str(metric.name + "_std")] = s.std ? py::object(py::float_(*s.std)) : py::object(py::none());
    }
    row["runs"] = p.runs.size();
    rows.append(row);
  }
  return rows;
}

template <class Fn>
harness::ExperimentResult experiment(const char* name, const py::dict& settings, std::size_t jobs, Fn points) {
  const ScenarioConfig cfg = build(settings);
  const auto sweep = points(cfg);
  py::gil_scoped_release release;
  return harness::run_experiment(name, cfg, sweep, jobs);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Mobile ad hoc network simulator: DSR with optional OCEAN cooperation enforcement";
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("default_scenario", [] { return scenario_dict(ScenarioConfig{}); },
        "Every setting with its default value, as strings.");
  m.def("resolve_scenario", [](const py::dict& settings) { return scenario_dict(build(settings)); },
        py::arg("settings") = py::dict(), "Applies overrides and fills paired settings.");
  m.def("parse_scenario", [](const std::string& text) { return scenario_dict(parse_scenario(text)); },
        "Parses `key = value` scenario text.");
  m.def("describe", [](const py::dict& settings) { return describe(build(settings)); },
        py::arg("settings") = py::dict(), "Comment header listing every resolved setting.");

  m.def(
      "run",
      [](const py::dict& settings, std::optional<std::uint64_t> seed, bool detail) {
        const ScenarioConfig cfg = build(settings);
        const std::uint64_t s = seed.value_or(cfg.base_seed);
        metrics::RunMetrics out;
        {
          py::gil_scoped_release release;
          Simulation sim(cfg, s);
          out = sim.run();
        }
        py::dict d = run_dict(s, out);
        if (detail) d["detail"] = metrics::detail_report(out);
        return d;
      },
      py::arg("settings") = py::dict(), py::arg("seed") = py::none(), py::arg("detail") = false,
      "One run; returns the per-run metrics.");

  m.def(
      "sweep_malicious",
      [](const py::dict& settings, std::vector<double> fractions, std::vector<double> pauses, std::size_t jobs) {
        return summary_rows(experiment("sweep-malicious", settings, jobs, [&](const ScenarioConfig& c) {
          return harness::malicious_sweep(c, fractions, pauses);
        }));
      },
      py::arg("settings") = py::dict(), py::arg("fractions") = harness::kDefaultMaliciousGrid,
      py::arg("pauses") = harness::kDefaultPauseGrid, py::arg("jobs") = 1);

  m.def(
      "sweep_threshold",
      [](const py::dict& settings, std::vector<int> thresholds, std::vector<double> fractions,
         std::vector<double> pauses, std::size_t jobs) {
        return summary_rows(experiment("sweep-threshold", settings, jobs, [&](const ScenarioConfig& c) {
          return harness::threshold_sweep(c, thresholds, fractions, pauses);
        }));
      },
      py::arg("settings") = py::dict(), py::arg("thresholds") = harness::kThresholdRows,
      py::arg("fractions") = harness::kThresholdMaliciousGrid, py::arg("pauses") = harness::kDefaultPauseGrid,
      py::arg("jobs") = 1);

  m.def(
      "compare_dsr",
      [](const py::dict& settings, std::vector<double> fractions, double pause, std::size_t jobs) {
        return summary_rows(experiment("compare-dsr", settings, jobs, [&](const ScenarioConfig& c) {
          return harness::compare_sweep(c, fractions, pause);
        }));
      },
      py::arg("settings") = py::dict(), py::arg("fractions") = harness::kCompareMaliciousGrid,
      py::arg("pause") = harness::kComparePause, py::arg("jobs") = 1);

  m.def(
      "validate",
      [](unsigned topologies) {
        std::vector<harness::CheckResult> checks;
        {
          py::gil_scoped_release release;
          checks = harness::run_validation(topologies);
        }
        py::list out;
        for (const auto& c : checks) out.append(py::make_tuple(c.name, c.passed, c.detail));
        return out;
      },
      py::arg("topologies") = 20, "Invariant checks as (name, passed, detail) tuples.");

  m.def("received_power", [](double d) { return radio::received_power(d, radio::RadioParams{}); },
        "Two-ray ground received power (W) at distance d with default radio settings.");
  m.def("crossover_distance", [] { return radio::crossover_distance(radio::RadioParams{}); });
  m.def("nominal_range", [] { return radio::nominal_range(radio::RadioParams{}); });
  m.attr("__version__") = std::string(kGeneratorVersion.substr(kGeneratorVersion.find(' ') + 1));
}
