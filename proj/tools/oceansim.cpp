// Command-line front end: single runs, the three figure sweeps, and the
// canned invariant checks.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "oceansim/experiment.hpp"
#include "oceansim/simulation.hpp"
#include "oceansim/validate.hpp"

namespace fs = std::filesystem;
using namespace oceansim;

namespace {

constexpr int kRunFailure = 1;
constexpr int kUsage = 2;

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> runs;
  std::string out = ".";
  std::size_t jobs = 1;
  bool quiet = false;
};

ScenarioConfig resolve(const Globals& g) {
  ScenarioConfig cfg = g.config.empty() ? parse_scenario("") : load_scenario(g.config);
  if (g.seed) cfg.base_seed = *g.seed;
  if (g.runs) cfg.n_runs = *g.runs;
  cfg.validate();
  return cfg;
}

harness::Progress progress_for(const Globals& g, const std::string& name) {
  if (g.quiet) return {};
  return [name](std::size_t done, std::size_t total) {
    std::fprintf(stderr, "\r%s: %zu/%zu runs", name.c_str(), done, total);
    if (done == total) std::fputc('\n', stderr);
  };
}

int cmd_run(const Globals& g, bool detail) {
  const ScenarioConfig cfg = resolve(g);
  Simulation sim(cfg, cfg.base_seed);
  const metrics::RunMetrics m = sim.run();
  std::string text = describe(cfg);
  text += "# seed = " + std::to_string(cfg.base_seed) + '\n';
  const auto& cols = metrics::run_csv_columns();
  const auto cells = metrics::run_csv_cells(cfg.base_seed, m);
  for (std::size_t i = 0; i < cols.size(); ++i) text += cols[i] + " = " + cells[i] + '\n';
  std::cout << text;
  if (detail) std::cout << '\n' << metrics::detail_report(m);
  if (g.out != ".") {
    const fs::path dir = g.out;
    std::string csv = describe(cfg);
    for (std::size_t i = 0; i < cols.size(); ++i) csv += (i ? "," : "") + cols[i];
    csv += '\n';
    for (std::size_t i = 0; i < cells.size(); ++i) csv += (i ? "," : "") + cells[i];
    csv += '\n';
    const std::string stem = "run_seed" + std::to_string(cfg.base_seed);
    harness::write_file(dir / (stem + ".csv"), csv);
    harness::write_file(dir / (stem + "_detail.csv"), describe(cfg) + metrics::detail_report(m));
  }
  return 0;
}

void write_summary(const fs::path& dir, const std::string& stem, const harness::ExperimentResult& r,
                   const std::string& x, const std::string& series,
                   const std::vector<std::pair<std::string, std::string>>& plots) {
  const std::string csv = stem + ".csv";
  harness::write_file(dir / csv, harness::summary_csv(r));
  for (const auto& [column, ylabel] : plots)
    harness::write_file(dir / (stem + "_" + column + ".gp"), harness::plot_script(csv, r, x, series, column, ylabel));
}

int cmd_sweep_malicious(const Globals& g, const std::vector<double>& fractions, const std::vector<double>& pauses) {
  const ScenarioConfig cfg = resolve(g);
  const auto r = harness::run_experiment("sweep-malicious", cfg, harness::malicious_sweep(cfg, fractions, pauses),
                                         g.jobs, progress_for(g, "sweep-malicious"));
  const fs::path dir = g.out;
  write_summary(dir, "malicious_sweep", r, "malicious_fraction", "pause_time",
                {{"throughput", "throughput (%)"},
                 {"routing_packets", "routing packets"},
                 {"final_energy", "final energy (J)"}});
  harness::write_file(dir / "malicious_sweep_runs.csv", harness::runs_csv(r));
  return 0;
}

int cmd_sweep_threshold(const Globals& g, const std::vector<int>& thresholds, const std::vector<double>& fractions,
                        const std::vector<double>& pauses) {
  const ScenarioConfig cfg = resolve(g);
  const auto r =
      harness::run_experiment("sweep-threshold", cfg, harness::threshold_sweep(cfg, thresholds, fractions, pauses),
                              g.jobs, progress_for(g, "sweep-threshold"));
  const fs::path dir = g.out;
  // One file per malicious fraction so every plot has a single series axis.
  for (double f : fractions) {
    harness::ExperimentResult part{r.name, r.base, {}};
    const std::string fv = metrics::format_number(f);
    for (const auto& p : r.points)
      for (const auto& l : p.point.labels)
        if (l.name == "malicious_fraction" && l.value == fv) part.points.push_back(p);
    write_summary(dir, "threshold_sweep_malicious_" + fv, part, "faulty_threshold", "pause_time",
                  {{"throughput_2hop", "throughput over 2+ hop routes (%)"}, {"routing_packets", "routing packets"}});
  }
  harness::write_file(dir / "threshold_sweep_runs.csv", harness::runs_csv(r));
  return 0;
}

int cmd_compare(const Globals& g, const std::vector<double>& fractions, double pause) {
  const ScenarioConfig cfg = resolve(g);
  const auto r = harness::run_experiment("compare-dsr", cfg, harness::compare_sweep(cfg, fractions, pause), g.jobs,
                                         progress_for(g, "compare-dsr"));
  const fs::path dir = g.out;
  harness::write_file(dir / "compare_dsr.csv", harness::comparison_csv(r));
  for (const auto& [metric, ylabel] : std::vector<std::pair<std::string, std::string>>{
           {"throughput", "throughput (%)"},
           {"routing_packets", "routing packets"},
           {"avg_delay", "average delay (s)"},
           {"final_energy", "final energy (J)"},
           {"normalized_overhead", "normalized routing overhead"}})
    harness::write_file(dir / ("compare_dsr_" + metric + ".gp"),
                        harness::comparison_plot_script("compare_dsr.csv", r, metric, ylabel));
  harness::write_file(dir / "compare_dsr_runs.csv", harness::runs_csv(r));
  return 0;
}

int cmd_validate(unsigned topologies) {
  bool all = true;
  for (const auto& c : harness::run_validation(topologies)) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    all = all && c.passed;
  }
  return all ? 0 : kRunFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mobile ad hoc network simulator: DSR with optional OCEAN cooperation enforcement"};
  app.fallthrough();
  app.require_subcommand(1);

  Globals g;
  app.add_option("--config", g.config, "Scenario file (key = value lines)")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Seed of a single run, or the first seed of a sweep");
  app.add_option("--runs", g.runs, "Seeds per sweep point")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--jobs", g.jobs, "Parallel runs")->check(CLI::PositiveNumber);
  app.add_flag("--quiet", g.quiet, "No progress output");

  bool detail = false;
  auto* run = app.add_subcommand("run", "Single scenario; metrics to standard output");
  run->add_flag("--detail", detail, "Append per-node energy, per-flow and per-hop tables");

  std::vector<double> fractions = harness::kDefaultMaliciousGrid;
  std::vector<double> pauses = harness::kDefaultPauseGrid;
  auto* sm = app.add_subcommand("sweep-malicious", "Throughput, routing packets and energy against malicious share");
  sm->add_option("--fractions", fractions, "Malicious fractions")->delimiter(',');
  sm->add_option("--pauses", pauses, "Pause times (s)")->delimiter(',');

  std::vector<int> thresholds = harness::kThresholdRows;
  std::vector<double> th_fractions = harness::kThresholdMaliciousGrid;
  std::vector<double> th_pauses = harness::kDefaultPauseGrid;
  auto* st = app.add_subcommand("sweep-threshold", "Throughput and routing packets against the faulty threshold");
  st->add_option("--thresholds", thresholds, "Faulty thresholds")->delimiter(',');
  st->add_option("--fractions", th_fractions, "Malicious fractions")->delimiter(',');
  st->add_option("--pauses", th_pauses, "Pause times (s)")->delimiter(',');

  std::vector<double> cmp_fractions = harness::kCompareMaliciousGrid;
  double cmp_pause = harness::kComparePause;
  auto* cd = app.add_subcommand("compare-dsr", "OCEAN against plain DSR, side by side");
  cd->add_option("--fractions", cmp_fractions, "Malicious fractions")->delimiter(',');
  cd->add_option("--pause", cmp_pause, "Pause time (s)");

  unsigned topologies = 20;
  auto* va = app.add_subcommand("validate", "Invariant checks on canned topologies");
  va->add_option("--topologies", topologies, "Random static topologies for the discovery check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  try {
    if (*run) return cmd_run(g, detail);
    if (*sm) return cmd_sweep_malicious(g, fractions, pauses);
    if (*st) return cmd_sweep_threshold(g, thresholds, th_fractions, th_pauses);
    if (*cd) return cmd_compare(g, cmp_fractions, cmp_pause);
    if (*va) return cmd_validate(topologies);
  } catch (const ConfigError& e) {
    std::cerr << "scenario error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid setting: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRunFailure;
  }
  return kUsage;
}
