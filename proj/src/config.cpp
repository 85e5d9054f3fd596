#include "oceansim/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "oceansim/metrics.hpp"

namespace oceansim {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view text) {
  T v{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  return v;
}

bool parse_bool(std::string_view text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw std::invalid_argument("not a boolean: '" + std::string(text) + "'");
}

template <typename T, typename Ref, typename Ok>
ConfigField number(std::string_view key, Provenance prov, Ref ref, Ok ok, std::string rule) {
  return ConfigField{
      key, prov,
      [ref, ok, rule](ScenarioConfig& c, std::string_view text) {
        const T v = parse_number<T>(text);
        if (!ok(v)) throw std::invalid_argument("value must be " + rule);
        ref(c) = v;
      },
      [ref](const ScenarioConfig& c) {
        if constexpr (std::is_floating_point_v<T>)
          return metrics::format_number(ref(c));
        else
          return std::to_string(ref(c));
      }};
}

template <typename Ref>
ConfigField real(std::string_view key, Provenance prov, Ref ref, bool allow_zero = false) {
  if (allow_zero)
    return number<double>(key, prov, ref, [](double v) { return v >= 0; }, "non-negative");
  return number<double>(key, prov, ref, [](double v) { return v > 0; }, "positive");
}

template <typename Ref>
ConfigField count(std::string_view key, Provenance prov, Ref ref, bool allow_zero = false) {
  return number<std::size_t>(key, prov, ref, [allow_zero](std::size_t v) { return allow_zero || v > 0; },
                             allow_zero ? "non-negative" : "positive");
}

template <typename Ref>
ConfigField integer(std::string_view key, Provenance prov, Ref ref) {
  return number<int>(key, prov, ref, [](int) { return true; }, "an integer");
}

template <typename Ref>
ConfigField boolean(std::string_view key, Provenance prov, Ref ref) {
  return ConfigField{key, prov, [ref](ScenarioConfig& c, std::string_view t) { ref(c) = parse_bool(t); },
                     [ref](const ScenarioConfig& c) { return std::string(ref(c) ? "true" : "false"); }};
}

std::vector<ConfigField> build_fields() {
  using P = Provenance;
  std::vector<ConfigField> f;
  f.push_back(count("n_nodes", P::Published, [](auto& c) -> auto& { return c.n_nodes; }));
  f.push_back(real("arena_width", P::Published, [](auto& c) -> auto& { return c.mobility.arena.width; }));
  f.push_back(real("arena_height", P::Published, [](auto& c) -> auto& { return c.mobility.arena.height; }));
  f.push_back(real("max_speed", P::Published, [](auto& c) -> auto& { return c.mobility.max_speed; }));
  f.push_back(real("min_speed", P::Implementation, [](auto& c) -> auto& { return c.mobility.min_speed; }));
  f.push_back(real("pause_time", P::Published, [](auto& c) -> auto& { return c.mobility.pause_time; }, true));
  f.push_back(real("sim_duration", P::Published, [](auto& c) -> auto& { return c.mobility.sim_duration; }));

  f.push_back(real("send_rate", P::Published, [](auto& c) -> auto& { return c.workload.send_rate; }));
  f.push_back(count("packet_size", P::Published, [](auto& c) -> auto& { return c.workload.packet_size; }));
  f.push_back(count("max_connections", P::Published, [](auto& c) -> auto& { return c.workload.max_connections; }, true));
  f.push_back(real("flow_start_window", P::Implementation, [](auto& c) -> auto& { return c.workload.start_window; }, true));

  f.push_back(real("tx_power_signal", P::Implementation, [](auto& c) -> auto& { return c.radio.tx_power_signal; }));
  f.push_back(real("antenna_gain_tx", P::Implementation, [](auto& c) -> auto& { return c.radio.antenna_gain_tx; }));
  f.push_back(real("antenna_gain_rx", P::Implementation, [](auto& c) -> auto& { return c.radio.antenna_gain_rx; }));
  f.push_back(real("antenna_height", P::Implementation, [](auto& c) -> auto& { return c.radio.antenna_height; }));
  f.push_back(real("wavelength", P::Implementation, [](auto& c) -> auto& { return c.radio.wavelength; }));
  f.push_back(real("rx_threshold", P::Implementation, [](auto& c) -> auto& { return c.radio.rx_threshold; }));
  f.push_back(real("link_rate", P::Implementation, [](auto& c) -> auto& { return c.radio.link_rate; }));

  f.push_back(real("initial_energy", P::Published, [](auto& c) -> auto& { return c.energy.initial; }));
  f.push_back(real("p_tx", P::Published, [](auto& c) -> auto& { return c.energy.p_tx; }, true));
  f.push_back(real("p_rx", P::Published, [](auto& c) -> auto& { return c.energy.p_rx; }, true));
  f.push_back(real("p_idle", P::Published, [](auto& c) -> auto& { return c.energy.p_idle; }, true));
  f.push_back(real("p_sleep", P::Published, [](auto& c) -> auto& { return c.energy.p_sleep; }, true));

  f.push_back(count("send_buffer_capacity", P::Implementation, [](auto& c) -> auto& { return c.dsr.send_buffer_capacity; }));
  f.push_back(real("send_buffer_timeout", P::Implementation, [](auto& c) -> auto& { return c.dsr.send_buffer_timeout; }));
  f.push_back(real("rreq_retry_base", P::Implementation, [](auto& c) -> auto& { return c.dsr.rreq_retry_base; }));
  f.push_back(real("rreq_retry_factor", P::Implementation, [](auto& c) -> auto& { return c.dsr.rreq_retry_factor; }));
  f.push_back(count("rreq_max_retries", P::Implementation, [](auto& c) -> auto& { return c.dsr.rreq_max_retries; }, true));
  f.push_back(real("rreq_holdoff", P::Implementation, [](auto& c) -> auto& { return c.dsr.rreq_holdoff; }, true));
  f.push_back(count("rreq_hop_limit", P::Implementation, [](auto& c) -> auto& { return c.dsr.rreq_hop_limit; }));
  f.push_back(count("control_packet_size", P::Implementation, [](auto& c) -> auto& { return c.dsr.control_packet_size; }));

  f.push_back(boolean("ocean_enabled", P::Published, [](auto& c) -> auto& { return c.ocean_enabled; }));
  f.push_back(integer("rating_increment", P::Published, [](auto& c) -> auto& { return c.ocean.rating_increment; }));
  f.push_back(integer("rating_decrement", P::Published, [](auto& c) -> auto& { return c.ocean.rating_decrement; }));
  f.push_back(integer("faulty_threshold", P::Published, [](auto& c) -> auto& { return c.ocean.faulty_threshold; }));
  f.push_back(real("second_chance_timeout", P::Published, [](auto& c) -> auto& { return c.ocean.second_chance_timeout; }));
  f.push_back(integer("reentry_rating", P::Published, [](auto& c) -> auto& { return c.ocean.reentry_rating; }));
  f.push_back(real("watch_timeout", P::Published, [](auto& c) -> auto& { return c.ocean.watch_timeout; }));
  f.push_back(ConfigField{
      "chip_scheme", P::Published,
      [](ScenarioConfig& c, std::string_view t) {
        auto s = ocean::parse_chip_scheme(t);
        if (!s) throw std::invalid_argument("chip_scheme must be optimistic or pessimistic");
        c.ocean.chip_scheme = *s;
      },
      [](const ScenarioConfig& c) { return std::string(ocean::to_string(c.ocean.chip_scheme)); }});
  f.push_back(real("chip_initial", P::Implementation, [](auto& c) -> auto& { return c.ocean.chip_initial; }, true));
  f.push_back(real("chip_debit", P::Implementation, [](auto& c) -> auto& { return c.ocean.chip_debit; }, true));
  f.push_back(real("chip_credit", P::Implementation, [](auto& c) -> auto& { return c.ocean.chip_credit; }, true));
  f.push_back(real("chip_accrual_rate", P::Implementation, [](auto& c) -> auto& { return c.ocean.chip_accrual_rate; }, true));
  f.push_back(real("chip_accrual_period", P::Implementation, [](auto& c) -> auto& { return c.ocean.chip_accrual_period; }));
  f.push_back(real("chip_cap", P::Implementation, [](auto& c) -> auto& { return c.ocean.chip_cap; }, true));

  f.push_back(number<double>(
      "malicious_fraction", P::Published, [](auto& c) -> auto& { return c.malicious_fraction; },
      [](double v) { return v >= 0 && v <= 1; }, "within [0, 1]"));
  f.push_back(ConfigField{
      "malicious_kind", P::Published,
      [](ScenarioConfig& c, std::string_view t) {
        auto p = adversary::parse_profile(t);
        if (!p || *p == adversary::Profile::Cooperative)
          throw std::invalid_argument("malicious_kind must be misleading or selfish");
        c.malicious_kind = *p;
      },
      [](const ScenarioConfig& c) { return std::string(adversary::to_string(c.malicious_kind)); }});
  f.push_back(number<double>(
      "drop_prob", P::Implementation, [](auto& c) -> auto& { return c.drop_prob; },
      [](double v) { return v >= 0 && v <= 1; }, "within [0, 1]"));
  f.push_back(boolean("exclude_malicious_endpoints", P::Implementation,
                      [](auto& c) -> auto& { return c.exclude_malicious_endpoints; }));
  f.push_back(number<std::uint64_t>(
      "base_seed", P::Implementation, [](auto& c) -> auto& { return c.base_seed; }, [](std::uint64_t) { return true; },
      "an unsigned integer"));
  f.push_back(count("n_runs", P::Published, [](auto& c) -> auto& { return c.n_runs; }));
  return f;
}

}  // namespace

void ScenarioConfig::validate() const {
  if (n_nodes < 2) throw ConfigError("n_nodes must be at least 2");
  if (mobility.max_speed < mobility.min_speed) throw ConfigError("max_speed must be at least min_speed");
  try {
    radio.validate();
    energy.validate();
    dsr.validate();
    ocean.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

const std::vector<ConfigField>& config_fields() {
  static const std::vector<ConfigField> fields = build_fields();
  return fields;
}

void apply_setting(ScenarioConfig& cfg, std::string_view key, std::string_view value) {
  for (const ConfigField& f : config_fields()) {
    if (f.key != key) continue;
    try {
      f.set(cfg, value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string(key) + ": " + e.what());
    }
    return;
  }
  throw ConfigError("unknown key '" + std::string(key) + "'");
}

void finalize(ScenarioConfig& cfg, const std::set<std::string, std::less<>>& explicit_keys) {
  if (explicit_keys.contains("faulty_threshold")) {
    const auto [timeout, reentry] =
        ocean::paired_second_chance(cfg.ocean.faulty_threshold, cfg.ocean.second_chance_timeout);
    if (!explicit_keys.contains("second_chance_timeout")) cfg.ocean.second_chance_timeout = timeout;
    if (!explicit_keys.contains("reentry_rating")) cfg.ocean.reentry_rating = reentry;
  }
  cfg.validate();
}

ScenarioConfig parse_scenario(std::string_view text) {
  ScenarioConfig cfg;
  std::set<std::string, std::less<>> seen;
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", line_no);
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) throw ConfigError("expected 'key = value'", line_no);
    try {
      apply_setting(cfg, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(e.what(), line_no);
    }
    seen.emplace(key);
  }
  finalize(cfg, seen);
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string describe(const ScenarioConfig& cfg) {
  std::ostringstream os;
  os << "# generator = " << kGeneratorVersion << '\n';
  os << "# rng = " << RngStream::kAlgorithm << '\n';
  for (const ConfigField& f : config_fields())
    os << "# " << f.key << " = " << f.get(cfg) << (f.provenance == Provenance::Published ? " [published]" : " [implementation]")
       << '\n';
  return os.str();
}

}  // namespace oceansim
