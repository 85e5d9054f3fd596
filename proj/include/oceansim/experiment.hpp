#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "oceansim/config.hpp"
#include "oceansim/metrics.hpp"

namespace oceansim::harness {

/// One swept parameter value, e.g. {"pause_time", "400"}.
struct Label {
  std::string name;
  std::string value;
};

struct SweepPoint {
  std::vector<Label> labels;
  ScenarioConfig cfg;

  std::string describe() const;
};

struct RunRecord {
  std::uint64_t seed = 0;
  metrics::RunMetrics metrics;
};

struct PointResult {
  SweepPoint point;
  std::vector<RunRecord> runs;  // ordered by seed
};

struct ExperimentResult {
  std::string name;
  ScenarioConfig base;
  std::vector<PointResult> points;  // in sweep order
};

class ExperimentError : public std::runtime_error {
 public:
  ExperimentError(const std::string& point, std::uint64_t seed, const std::string& why)
      : std::runtime_error("run failed at " + point + ", seed " + std::to_string(seed) + ": " + why),
        m_point(point),
        m_seed(seed) {}
  const std::string& point() const { return m_point; }
  std::uint64_t seed() const { return m_seed; }

 private:
  std::string m_point;
  std::uint64_t m_seed;
};

/// Called after each finished run with (completed, total).
using Progress = std::function<void(std::size_t, std::size_t)>;

/// Runs every point with seeds cfg.base_seed .. cfg.base_seed + cfg.n_runs - 1
/// on up to `jobs` threads. Results do not depend on `jobs`.
ExperimentResult run_experiment(const std::string& name, const ScenarioConfig& base,
                                const std::vector<SweepPoint>& points, std::size_t jobs = 1,
                                const Progress& progress = {});

inline const std::vector<double> kDefaultMaliciousGrid{0.0, 0.125, 0.25, 0.375, 0.5, 0.625, 0.75};
inline const std::vector<double> kDefaultPauseGrid{0.0, 400.0, 1000.0};
inline const std::vector<int> kThresholdRows{0, -40, -80, -120, -160, -200};
inline const std::vector<double> kThresholdMaliciousGrid{0.25, 0.5};
inline const std::vector<double> kCompareMaliciousGrid{0.0, 0.125, 0.25, 0.375};
inline constexpr double kComparePause = 400.0;

std::vector<SweepPoint> malicious_sweep(const ScenarioConfig& base, const std::vector<double>& fractions,
                                        const std::vector<double>& pauses);
/// Each threshold carries its paired second-chance timeout and re-entry rating.
std::vector<SweepPoint> threshold_sweep(const ScenarioConfig& base, const std::vector<int>& thresholds,
                                        const std::vector<double>& fractions, const std::vector<double>& pauses);
/// OCEAN and plain DSR at each fraction; labels carry `protocol`.
std::vector<SweepPoint> compare_sweep(const ScenarioConfig& base, const std::vector<double>& fractions,
                                      double pause);

/// A per-run statistic; empty when undefined for that run.
struct Metric {
  std::string name;
  std::function<std::optional<double>(const metrics::RunMetrics&)> value;
};

/// Aggregated statistics, in CSV column order.
const std::vector<Metric>& summary_metrics();
const Metric& summary_metric(std::string_view name);

struct Summary {
  std::optional<double> mean;
  std::optional<double> std;  // sample standard deviation, needs two values
  std::size_t count = 0;
};

Summary summarize(const std::vector<std::optional<double>>& values);
Summary summarize(const PointResult& point, const Metric& metric);

/// Finds the point whose labels include every given name/value pair.
const PointResult* find_point(const ExperimentResult& r, const std::vector<Label>& labels);

/// Comment header shared by every output file: experiment name, generator,
/// and the fully resolved base scenario.
std::string metadata_header(const ExperimentResult& r);

/// Summary CSV: one row per point, label columns then <metric>_mean and
/// <metric>_std. Absent values are empty cells.
std::string summary_csv(const ExperimentResult& r);
/// Paired layout for a protocol comparison: one row per fraction with
/// ocean_<metric>_* and dsr_<metric>_* columns side by side.
std::string comparison_csv(const ExperimentResult& r);
/// One row per run: label columns followed by metrics::run_csv_columns().
std::string runs_csv(const ExperimentResult& r);

/// gnuplot script plotting `column`_mean with error bars against `x`, one
/// line per value of `series`.
std::string plot_script(const std::string& csv_name, const ExperimentResult& r, const std::string& x,
                        const std::string& series, const std::string& column, const std::string& ylabel);
/// gnuplot script for comparison_csv(): OCEAN and DSR lines for `metric`.
std::string comparison_plot_script(const std::string& csv_name, const ExperimentResult& r,
                                   const std::string& metric, const std::string& ylabel);

/// Writes `text` to `path`, creating parent directories. Throws
/// std::runtime_error when the file cannot be written.
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace oceansim::harness
