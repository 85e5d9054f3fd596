#include "oceansim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "oceansim/simulation.hpp"

namespace oceansim::harness {

namespace {

std::string num(double v) { return metrics::format_number(v); }

std::string cell(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

std::string join(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  out += '\n';
  return out;
}

std::vector<std::string> label_names(const ExperimentResult& r) {
  std::vector<std::string> out;
  if (!r.points.empty())
    for (const Label& l : r.points.front().point.labels) out.push_back(l.name);
  return out;
}

const std::string* label_value(const SweepPoint& p, std::string_view name) {
  for (const Label& l : p.labels)
    if (l.name == name) return &l.value;
  return nullptr;
}

}  // namespace

std::string SweepPoint::describe() const {
  std::string out;
  for (const Label& l : labels) {
    if (!out.empty()) out += ' ';
    out += l.name + '=' + l.value;
  }
  return out.empty() ? "base" : out;
}

ExperimentResult run_experiment(const std::string& name, const ScenarioConfig& base,
                                const std::vector<SweepPoint>& points, std::size_t jobs,
                                const Progress& progress) {
  ExperimentResult result{name, base, {}};
  struct Task {
    std::size_t point;
    std::size_t run;
  };
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < points.size(); ++i) {
    points[i].cfg.validate();
    result.points.push_back({points[i], std::vector<RunRecord>(points[i].cfg.n_runs)});
    for (std::size_t k = 0; k < points[i].cfg.n_runs; ++k) tasks.push_back({i, k});
  }

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex lock;
  std::exception_ptr first_error;
  std::size_t first_error_task = tasks.size();

  auto worker = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks.size()) return;
      const Task task = tasks[t];
      PointResult& pr = result.points[task.point];
      const std::uint64_t seed = pr.point.cfg.base_seed + task.run;
      try {
        Simulation sim(pr.point.cfg, seed);
        pr.runs[task.run] = {seed, sim.run()};
      } catch (const std::exception& e) {
        std::lock_guard guard(lock);
        // Report the earliest failing (point, seed) so the message is stable.
        if (t < first_error_task) {
          first_error_task = t;
          first_error = std::make_exception_ptr(ExperimentError(pr.point.describe(), seed, e.what()));
        }
      }
      const std::size_t finished = done.fetch_add(1) + 1;
      if (progress) {
        std::lock_guard guard(lock);
        progress(finished, tasks.size());
      }
    }
  };

  const std::size_t threads = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(tasks.size(), 1));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return result;
}

std::vector<SweepPoint> malicious_sweep(const ScenarioConfig& base, const std::vector<double>& fractions,
                                        const std::vector<double>& pauses) {
  std::vector<SweepPoint> out;
  for (double f : fractions)
    for (double p : pauses) {
      SweepPoint pt{{{"malicious_fraction", num(f)}, {"pause_time", num(p)}}, base};
      pt.cfg.malicious_fraction = f;
      pt.cfg.mobility.pause_time = p;
      out.push_back(std::move(pt));
    }
  return out;
}

std::vector<SweepPoint> threshold_sweep(const ScenarioConfig& base, const std::vector<int>& thresholds,
                                        const std::vector<double>& fractions, const std::vector<double>& pauses) {
  std::vector<SweepPoint> out;
  for (double f : fractions)
    for (int th : thresholds)
      for (double p : pauses) {
        const auto [timeout, reentry] = ocean::paired_second_chance(th, base.ocean.second_chance_timeout);
        SweepPoint pt{{{"malicious_fraction", num(f)},
                       {"faulty_threshold", std::to_string(th)},
                       {"second_chance_timeout", num(timeout)},
                       {"reentry_rating", std::to_string(reentry)},
                       {"pause_time", num(p)}},
                      base};
        pt.cfg.malicious_fraction = f;
        pt.cfg.mobility.pause_time = p;
        pt.cfg.ocean.faulty_threshold = th;
        pt.cfg.ocean.second_chance_timeout = timeout;
        pt.cfg.ocean.reentry_rating = reentry;
        out.push_back(std::move(pt));
      }
  return out;
}

std::vector<SweepPoint> compare_sweep(const ScenarioConfig& base, const std::vector<double>& fractions,
                                      double pause) {
  std::vector<SweepPoint> out;
  for (double f : fractions)
    for (bool ocean_on : {true, false}) {
      SweepPoint pt{{{"malicious_fraction", num(f)}, {"pause_time", num(pause)}, {"protocol", ocean_on ? "ocean" : "dsr"}},
                    base};
      pt.cfg.malicious_fraction = f;
      pt.cfg.mobility.pause_time = pause;
      pt.cfg.ocean_enabled = ocean_on;
      out.push_back(std::move(pt));
    }
  return out;
}

const std::vector<Metric>& summary_metrics() {
  using metrics::RunMetrics;
  static const std::vector<Metric> all{
      {"throughput", [](const RunMetrics& m) { return metrics::throughput_pct(m); }},
      {"throughput_2hop", [](const RunMetrics& m) { return metrics::throughput_pct_min_hops(m, 2); }},
      {"avg_delay", [](const RunMetrics& m) { return metrics::avg_delay(m); }},
      {"routing_packets",
       [](const RunMetrics& m) { return std::optional<double>(static_cast<double>(metrics::routing_packets(m))); }},
      {"normalized_overhead", [](const RunMetrics& m) { return metrics::normalized_overhead(m); }},
      {"final_energy", [](const RunMetrics& m) { return std::optional<double>(metrics::final_energy_avg(m)); }},
      {"mean_hops", [](const RunMetrics& m) { return metrics::mean_hops(m); }},
      {"dead_nodes",
       [](const RunMetrics& m) { return std::optional<double>(static_cast<double>(metrics::dead_nodes(m))); }},
      {"data_sent", [](const RunMetrics& m) { return std::optional<double>(static_cast<double>(m.data_sent)); }},
      {"data_delivered",
       [](const RunMetrics& m) { return std::optional<double>(static_cast<double>(m.data_delivered)); }},
  };
  return all;
}

const Metric& summary_metric(std::string_view name) {
  for (const Metric& m : summary_metrics())
    if (m.name == name) return m;
  throw std::invalid_argument("unknown metric " + std::string(name));
}

Summary summarize(const std::vector<std::optional<double>>& values) {
  Summary s;
  double sum = 0.0;
  for (const auto& v : values)
    if (v) {
      sum += *v;
      ++s.count;
    }
  if (s.count == 0) return s;
  const double mean = sum / static_cast<double>(s.count);
  s.mean = mean;
  if (s.count >= 2) {
    double sq = 0.0;
    for (const auto& v : values)
      if (v) sq += (*v - mean) * (*v - mean);
    s.std = std::sqrt(sq / static_cast<double>(s.count - 1));
  }
  return s;
}

Summary summarize(const PointResult& point, const Metric& metric) {
  std::vector<std::optional<double>> values;
  for (const RunRecord& r : point.runs) values.push_back(metric.value(r.metrics));
  return summarize(values);
}

const PointResult* find_point(const ExperimentResult& r, const std::vector<Label>& labels) {
  for (const PointResult& p : r.points) {
    bool all = true;
    for (const Label& want : labels) {
      const std::string* have = label_value(p.point, want.name);
      if (!have || *have != want.value) {
        all = false;
        break;
      }
    }
    if (all) return &p;
  }
  return nullptr;
}

std::string metadata_header(const ExperimentResult& r) {
  std::ostringstream out;
  out << "# experiment = " << r.name << '\n';
  out << "# points = " << r.points.size() << '\n';
  out << "# swept =";
  for (const std::string& n : label_names(r)) out << ' ' << n;
  out << '\n';
  out << describe(r.base);
  return out.str();
}

std::string summary_csv(const ExperimentResult& r) {
  std::string out = metadata_header(r);
  std::vector<std::string> header = label_names(r);
  for (const Metric& m : summary_metrics()) {
    header.push_back(m.name + "_mean");
    header.push_back(m.name + "_std");
  }
  header.push_back("runs");
  out += join(header);
  for (const PointResult& p : r.points) {
    std::vector<std::string> row;
    for (const Label& l : p.point.labels) row.push_back(l.value);
    for (const Metric& m : summary_metrics()) {
      const Summary s = summarize(p, m);
      row.push_back(cell(s.mean));
      row.push_back(cell(s.std));
    }
    row.push_back(std::to_string(p.runs.size()));
    out += join(row);
  }
  return out;
}

std::string comparison_csv(const ExperimentResult& r) {
  std::string out = metadata_header(r);
  std::vector<std::string> header{"malicious_fraction", "pause_time"};
  for (const char* proto : {"ocean", "dsr"})
    for (const Metric& m : summary_metrics()) {
      header.push_back(std::string(proto) + "_" + m.name + "_mean");
      header.push_back(std::string(proto) + "_" + m.name + "_std");
    }
  out += join(header);
  std::vector<std::string> fractions;
  for (const PointResult& p : r.points) {
    const std::string* f = label_value(p.point, "malicious_fraction");
    if (f && std::find(fractions.begin(), fractions.end(), *f) == fractions.end()) fractions.push_back(*f);
  }
  for (const std::string& f : fractions) {
    const PointResult* ocean_pt = find_point(r, {{"malicious_fraction", f}, {"protocol", "ocean"}});
    const PointResult* dsr_pt = find_point(r, {{"malicious_fraction", f}, {"protocol", "dsr"}});
    const PointResult* any = ocean_pt ? ocean_pt : dsr_pt;
    const std::string* pause = any ? label_value(any->point, "pause_time") : nullptr;
    std::vector<std::string> row{f, pause ? *pause : std::string()};
    for (const PointResult* p : {ocean_pt, dsr_pt})
      for (const Metric& m : summary_metrics()) {
        const Summary s = p ? summarize(*p, m) : Summary{};
        row.push_back(cell(s.mean));
        row.push_back(cell(s.std));
      }
    out += join(row);
  }
  return out;
}

std::string runs_csv(const ExperimentResult& r) {
  std::string out = metadata_header(r);
  std::vector<std::string> header = label_names(r);
  for (const std::string& c : metrics::run_csv_columns()) header.push_back(c);
  out += join(header);
  for (const PointResult& p : r.points)
    for (const RunRecord& run : p.runs) {
      std::vector<std::string> row;
      for (const Label& l : p.point.labels) row.push_back(l.value);
      for (std::string& c : metrics::run_csv_cells(run.seed, run.metrics)) row.push_back(std::move(c));
      out += join(row);
    }
  return out;
}

namespace {

std::size_t column_index(const std::vector<std::string>& header, const std::string& name) {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw std::invalid_argument("no column " + name);
  return static_cast<std::size_t>(it - header.begin()) + 1;  // gnuplot counts from 1
}

std::string gnuplot_preamble(const std::string& csv_name, const std::string& x, const std::string& ylabel) {
  std::ostringstream out;
  const std::string stem = csv_name.substr(0, csv_name.rfind('.'));
  out << "set datafile separator ','\n"
      << "set terminal pngcairo size 800,560\n"
      << "set output '" << stem << "_" << ylabel.substr(0, ylabel.find(' ')) << ".png'\n"
      << "set xlabel '" << x << "'\n"
      << "set ylabel '" << ylabel << "'\n"
      << "set key outside right\n"
      << "data = \"< grep -v '^#' " << csv_name << " | tail -n +2\"\n";
  return out.str();
}

}  // namespace

std::string plot_script(const std::string& csv_name, const ExperimentResult& r, const std::string& x,
                        const std::string& series, const std::string& column, const std::string& ylabel) {
  std::vector<std::string> header = label_names(r);
  for (const Metric& m : summary_metrics()) {
    header.push_back(m.name + "_mean");
    header.push_back(m.name + "_std");
  }
  const std::size_t xc = column_index(header, x);
  const std::size_t sc = column_index(header, series);
  const std::size_t mc = column_index(header, column + "_mean");
  const std::size_t dc = column_index(header, column + "_std");
  std::vector<std::string> values;
  for (const PointResult& p : r.points) {
    const std::string* v = label_value(p.point, series);
    if (v && std::find(values.begin(), values.end(), *v) == values.end()) values.push_back(*v);
  }
  std::ostringstream out;
  out << "# " << r.name << ": " << column << " against " << x << " per " << series << "\n";
  out << gnuplot_preamble(csv_name, x, ylabel);
  out << "plot \\\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    out << "  data using " << xc << ":($" << sc << "==" << values[i] << " ? $" << mc << " : 1/0):" << dc
        << " with yerrorlines title '" << series << " " << values[i] << "'";
    out << (i + 1 < values.size() ? ", \\\n" : "\n");
  }
  return out.str();
}

std::string comparison_plot_script(const std::string& csv_name, const ExperimentResult& r,
                                   const std::string& metric, const std::string& ylabel) {
  std::vector<std::string> header{"malicious_fraction", "pause_time"};
  for (const char* proto : {"ocean", "dsr"})
    for (const Metric& m : summary_metrics()) {
      header.push_back(std::string(proto) + "_" + m.name + "_mean");
      header.push_back(std::string(proto) + "_" + m.name + "_std");
    }
  std::ostringstream out;
  out << "# " << r.name << ": " << metric << ", OCEAN against plain DSR\n";
  out << gnuplot_preamble(csv_name, "malicious_fraction", ylabel);
  out << "plot \\\n";
  const char* protos[] = {"ocean", "dsr"};
  for (int i = 0; i < 2; ++i) {
    const std::string p = protos[i];
    out << "  data using 1:" << column_index(header, p + "_" + metric + "_mean") << ":"
        << column_index(header, p + "_" + metric + "_std") << " with yerrorlines title '" << p << "'"
        << (i == 0 ? ", \\\n" : "\n");
  }
  return out.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  out.close();
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace oceansim::harness
