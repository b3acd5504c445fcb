/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include "ipred/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <fmt/format.h>


namespace ipred {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view text) {
  const std::string s(trim(text));
  if (s.empty()) throw ConfigError("expected a number, got an empty value");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v))
    throw ConfigError(fmt::format("'{}' is not a finite number", s));
  return v;
}

std::uint64_t parse_unsigned(std::string_view text) {
  const std::string s(trim(text));
  if (s.empty() || s.front() == '-') throw ConfigError(fmt::format("'{}' is not a non-negative integer", s));
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size() || errno == ERANGE)
    throw ConfigError(fmt::format("'{}' is not a non-negative integer", s));
  return v;
}

bool parse_bool(std::string_view text) {
  const auto s = trim(text);
  if (s == "true" || s == "on" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "off" || s == "no" || s == "0") return false;
  throw ConfigError(fmt::format("'{}' is not a boolean (true/false)", s));
}

std::vector<double> parse_list(std::string_view text) {
  auto s = trim(text);
  if (!s.empty() && s.front() == '[') {
    if (s.back() != ']') throw ConfigError("unterminated list, expected ']'");
    s = trim(s.substr(1, s.size() - 2));
  }
  std::vector<double> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    out.push_back(parse_double(s.substr(start, comma == std::string_view::npos ? s.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

// Shortest text that parses back to the same double.
std::string format_double(double x) { return fmt::format("{}", x); }

std::string format_list(const std::vector<double>& values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += format_double(values[i]);
  }
  return out + "]";
}

std::string format_bool(bool b) { return b ? "true" : "false"; }

struct Field {
  std::string_view key;
  std::function<void(ScenarioConfig&, std::string_view)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

template <typename T>
Field double_field(std::string_view key, T ScenarioConfig::*member) {
  return {key, [member](ScenarioConfig& c, std::string_view v) { c.*member = parse_double(v); },
          [member](const ScenarioConfig& c) { return format_double(c.*member); }};
}

Field size_field(std::string_view key, std::size_t ScenarioConfig::*member) {
  return {key,
          [member](ScenarioConfig& c, std::string_view v) { c.*member = static_cast<std::size_t>(parse_unsigned(v)); },
          [member](const ScenarioConfig& c) { return std::to_string(c.*member); }};
}

Field bool_field(std::string_view key, bool ScenarioConfig::*member) {
  return {key, [member](ScenarioConfig& c, std::string_view v) { c.*member = parse_bool(v); },
          [member](const ScenarioConfig& c) { return format_bool(c.*member); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      double_field("desired_snr_db", &ScenarioConfig::desired_snr_db),
      {"interferer_inrs_db", [](ScenarioConfig& c, std::string_view v) { c.interferer_inrs_db = parse_list(v); },
       [](const ScenarioConfig& c) { return format_list(c.interferer_inrs_db); }},
      double_field("coherence", &ScenarioConfig::coherence),
      {"fading_model",
       [](ScenarioConfig& c, std::string_view v) {
         const auto s = trim(v);
         if (s == "gaussian")
           c.fading_model = CorrelationModel::gaussian;
         else if (s == "ar1")
           c.fading_model = CorrelationModel::autoregressive;
         else
           throw ConfigError(fmt::format("fading_model must be 'gaussian' or 'ar1', got '{}'", s));
       },
       [](const ScenarioConfig& c) {
         return std::string(c.fading_model == CorrelationModel::gaussian ? "gaussian" : "ar1");
       }},
      bool_field("desired_fading", &ScenarioConfig::desired_fading),
      {"output_scale", [](ScenarioConfig& c, std::string_view v) { c.kernel.output_scale = parse_double(v); },
       [](const ScenarioConfig& c) { return format_double(c.kernel.output_scale); }},
      {"length_scale", [](ScenarioConfig& c, std::string_view v) { c.kernel.length_scale = parse_double(v); },
       [](const ScenarioConfig& c) { return format_double(c.kernel.length_scale); }},
      double_field("noise_eps", &ScenarioConfig::noise_eps),
      bool_field("tune", &ScenarioConfig::tune),
      {"grid_output_scale_min", [](ScenarioConfig& c, std::string_view v) { c.grid.output_scale_min = parse_double(v); },
       [](const ScenarioConfig& c) { return format_double(c.grid.output_scale_min); }},
      {"grid_output_scale_max", [](ScenarioConfig& c, std::string_view v) { c.grid.output_scale_max = parse_double(v); },
       [](const ScenarioConfig& c) { return format_double(c.grid.output_scale_max); }},
      {"grid_output_scale_points",
       [](ScenarioConfig& c, std::string_view v) { c.grid.output_scale_points = static_cast<std::size_t>(parse_unsigned(v)); },
       [](const ScenarioConfig& c) { return std::to_string(c.grid.output_scale_points); }},
      {"grid_length_scale_min", [](ScenarioConfig& c, std::string_view v) { c.grid.length_scale_min = parse_double(v); },
       [](const ScenarioConfig& c) { return format_double(c.grid.length_scale_min); }},
      {"grid_length_scale_max", [](ScenarioConfig& c, std::string_view v) { c.grid.length_scale_max = parse_double(v); },
       [](const ScenarioConfig& c) { return format_double(c.grid.length_scale_max); }},
      {"grid_length_scale_points",
       [](ScenarioConfig& c, std::string_view v) { c.grid.length_scale_points = static_cast<std::size_t>(parse_unsigned(v)); },
       [](const ScenarioConfig& c) { return std::to_string(c.grid.length_scale_points); }},
      size_field("window", &ScenarioConfig::window),
      size_field("horizon", &ScenarioConfig::horizon),
      bool_field("conservative", &ScenarioConfig::conservative),
      double_field("alpha", &ScenarioConfig::alpha),
      {"ma_mode",
       [](ScenarioConfig& c, std::string_view v) {
         const auto s = trim(v);
         if (s == "iir")
           c.ma_mode = MovingAverageMode::iir;
         else if (s == "raw")
           c.ma_mode = MovingAverageMode::raw;
         else
           throw ConfigError(fmt::format("ma_mode must be 'iir' or 'raw', got '{}'", s));
       },
       [](const ScenarioConfig& c) { return std::string(c.ma_mode == MovingAverageMode::iir ? "iir" : "raw"); }},
      {"payload_bits",
       [](ScenarioConfig& c, std::string_view v) { c.payload_bits = static_cast<std::int64_t>(parse_unsigned(v)); },
       [](const ScenarioConfig& c) { return std::to_string(c.payload_bits); }},
      {"targets", [](ScenarioConfig& c, std::string_view v) { c.targets = parse_list(v); },
       [](const ScenarioConfig& c) { return format_list(c.targets); }},
      size_field("n_slots", &ScenarioConfig::n_slots),
      size_field("trace_slots", &ScenarioConfig::trace_slots),
      size_field("train_len", &ScenarioConfig::train_len),
      bool_field("empirical", &ScenarioConfig::empirical),
      {"master_seed", [](ScenarioConfig& c, std::string_view v) { c.master_seed = parse_unsigned(v); },
       [](const ScenarioConfig& c) { return std::to_string(c.master_seed); }},
  };
  return table;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

void ScenarioConfig::validate() const {
  require(std::isfinite(desired_snr_db), "desired_snr_db must be finite");
  require(!interferer_inrs_db.empty(), "interferer_inrs_db must list at least one interferer");
  for (double inr : interferer_inrs_db) require(std::isfinite(inr), "interferer_inrs_db entries must be finite");
  require(coherence >= 0.0 && coherence < 1.0, fmt::format("coherence must lie in [0, 1), got {}", coherence));
  require(kernel.output_scale > 0.0, fmt::format("output_scale must be positive, got {}", kernel.output_scale));
  require(kernel.length_scale > 0.0, fmt::format("length_scale must be positive, got {}", kernel.length_scale));
  require(noise_eps >= 0.0, fmt::format("noise_eps must be non-negative, got {}", noise_eps));
  require(grid.output_scale_points >= 1 && grid.length_scale_points >= 1,
          "grid_*_points must be at least 1");
  require(grid.output_scale_min > 0.0 && grid.output_scale_max >= grid.output_scale_min,
          "grid_output_scale range must satisfy 0 < min <= max");
  require(grid.length_scale_min > 0.0 && grid.length_scale_max >= grid.length_scale_min,
          "grid_length_scale range must satisfy 0 < min <= max");
  require(window >= 2, fmt::format("window must be at least 2, got {}", window));
  require(horizon >= 1, fmt::format("horizon must be at least 1, got {}", horizon));
  require(alpha > 0.0 && alpha < 1.0, fmt::format("alpha must lie in (0, 1), got {}", alpha));
  require(payload_bits >= 1, fmt::format("payload_bits must be at least 1, got {}", payload_bits));
  require(!targets.empty(), "targets must list at least one target error");
  for (double t : targets)
    require(t > 0.0 && t < 0.5, fmt::format("targets must lie in (0, 0.5), got {}", t));
  require(n_slots >= 1, "n_slots must be at least 1");
  require(train_len >= 1, "train_len must be at least 1");
  require(trace_slots > train_len,
          fmt::format("trace_slots ({}) must exceed train_len ({})", trace_slots, train_len));
}

LinkConfig ScenarioConfig::desired_link() const {
  return LinkConfig::from_db(desired_snr_db, coherence, fading_model);
}

std::vector<LinkConfig> ScenarioConfig::interferer_links() const {
  std::vector<LinkConfig> out;
  for (double inr : interferer_inrs_db) out.push_back(LinkConfig::from_db(inr, coherence, fading_model));
  return out;
}

GprSlidingWindow ScenarioConfig::gpr() const {
  GprSlidingWindow g;
  g.window = window;
  g.horizon = horizon;
  g.kernel = kernel;
  g.noise_variance = noise_eps;
  g.tune = tune;
  g.conservative = conservative;
  g.grid = grid;
  return g;
}

MovingAverage ScenarioConfig::moving_average() const { return MovingAverage{alpha, ma_mode}; }

CodingSpec ScenarioConfig::coding_spec(double target) const { return CodingSpec{payload_bits, target}; }

ScenarioConfig parse_config(std::string_view text, std::string_view source) {
  ScenarioConfig cfg;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto where = [&] { return fmt::format("{}:{}", source, line_no); };
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(fmt::format("{}: expected 'key = value'", where()));
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));

    const auto& table = fields();
    const auto it = std::find_if(table.begin(), table.end(), [&](const Field& f) { return f.key == key; });
    if (it == table.end()) throw ConfigError(fmt::format("{}: unknown key '{}'", where(), key));
    if (!seen.emplace(key).second) throw ConfigError(fmt::format("{}: key '{}' given twice", where(), key));
    try {
      it->set(cfg, value);
    } catch (const ConfigError& e) {
      throw ConfigError(fmt::format("{}: {}: {}", where(), key, e.what()));
    }
  }
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: {}", source, e.what()));
  }
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot read config file '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

std::vector<std::pair<std::string, std::string>> config_entries(const ScenarioConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& f : fields()) out.emplace_back(std::string(f.key), f.get(cfg));
  return out;
}

std::string serialize_config(const ScenarioConfig& cfg) {
  std::string out;
  for (const auto& [key, value] : config_entries(cfg)) out += fmt::format("{} = {}\n", key, value);
  return out;
}

}  // namespace ipred
