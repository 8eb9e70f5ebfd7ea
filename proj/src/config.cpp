#include "ptfourwell/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "ptfourwell/errors.hpp"

namespace ptfw {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string where(int line, std::string_view key) {
  std::string out = line > 0 ? "line " + std::to_string(line) + ": " : std::string{};
  return out + "key '" + std::string(key) + "'";
}

double parse_number(std::string_view value, int line, std::string_view key) {
  double out = 0.0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end || !std::isfinite(out)) {
    throw InputError(where(line, key) + ": '" + std::string(value) + "' is not a number");
  }
  return out;
}

double positive(std::string_view value, int line, std::string_view key) {
  const double v = parse_number(value, line, key);
  if (!(v > 0.0)) throw InputError(where(line, key) + ": must be positive, got " + std::string(value));
  return v;
}

double non_negative(std::string_view value, int line, std::string_view key) {
  const double v = parse_number(value, line, key);
  if (v < 0.0) throw InputError(where(line, key) + ": must be non-negative, got " + std::string(value));
  return v;
}

double negative(std::string_view value, int line, std::string_view key) {
  const double v = parse_number(value, line, key);
  if (!(v < 0.0)) throw InputError(where(line, key) + ": must be negative, got " + std::string(value));
  return v;
}

using Setter = std::function<void(ScenarioConfig&, std::string_view, int, std::string_view)>;

Setter real(double ScenarioConfig::*field) {
  return [field](ScenarioConfig& c, std::string_view v, int line, std::string_view key) {
    c.*field = parse_number(v, line, key);
  };
}
Setter pos(double ScenarioConfig::*field) {
  return [field](ScenarioConfig& c, std::string_view v, int line, std::string_view key) {
    c.*field = positive(v, line, key);
  };
}
Setter nonneg(double ScenarioConfig::*field) {
  return [field](ScenarioConfig& c, std::string_view v, int line, std::string_view key) {
    c.*field = non_negative(v, line, key);
  };
}
Setter neg(double ScenarioConfig::*field) {
  return [field](ScenarioConfig& c, std::string_view v, int line, std::string_view key) {
    c.*field = negative(v, line, key);
  };
}
Setter opt_pos(std::optional<double> ScenarioConfig::*field) {
  return [field](ScenarioConfig& c, std::string_view v, int line, std::string_view key) {
    c.*field = positive(v, line, key);
  };
}

const std::vector<std::pair<std::string, Setter>>& setters() {
  static const std::vector<std::pair<std::string, Setter>> table = {
      {"scenario",
       [](ScenarioConfig& c, std::string_view v, int line, std::string_view key) {
         if (v == "stationary") c.scenario = ScenarioKind::stationary;
         else if (v == "oscillatory") c.scenario = ScenarioKind::oscillatory;
         else if (v == "adiabatic") c.scenario = ScenarioKind::adiabatic;
         else if (v == "physical") c.scenario = ScenarioKind::physical;
         else throw InputError(where(line, key) + ": unknown scenario '" + std::string(v) + "'");
       }},
      {"gamma", nonneg(&ScenarioConfig::gamma)},
      {"gamma_f", nonneg(&ScenarioConfig::gamma_f)},
      {"t_f", pos(&ScenarioConfig::t_f)},
      {"j12", pos(&ScenarioConfig::j12)},
      {"c", nonneg(&ScenarioConfig::c)},
      {"d",
       [](ScenarioConfig& c, std::string_view v, int line, std::string_view key) {
         if (v == "auto") c.d.reset();
         else c.d = positive(v, line, key);
       }},
      {"n0", opt_pos(&ScenarioConfig::n0)},
      {"n3", opt_pos(&ScenarioConfig::n3)},
      {"t_end", opt_pos(&ScenarioConfig::t_end)},
      {"dt", pos(&ScenarioConfig::dt)},
      {"tol", pos(&ScenarioConfig::tol)},
      {"residual_tol", pos(&ScenarioConfig::residual_tol)},
      {"equivalence_tol", pos(&ScenarioConfig::equivalence_tol)},
      {"norm_tol", pos(&ScenarioConfig::norm_tol)},
      {"balance_tol", pos(&ScenarioConfig::balance_tol)},
      {"robustness_tol", pos(&ScenarioConfig::robustness_tol)},
      {"reservoir_floor", nonneg(&ScenarioConfig::reservoir_floor)},
      {"weight", real(&ScenarioConfig::weight)},
      {"perturbation", nonneg(&ScenarioConfig::perturbation)},
      {"seed",
       [](ScenarioConfig& c, std::string_view v, int line, std::string_view key) {
         std::uint64_t s = 0;
         const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), s);
         if (ec != std::errc{} || ptr != v.data() + v.size()) {
           throw InputError(where(line, key) + ": '" + std::string(v) + "' is not an unsigned integer");
         }
         c.seed = s;
       }},
      {"e0", real(&ScenarioConfig::e0)},
      {"e3", real(&ScenarioConfig::e3)},
      {"j01", pos(&ScenarioConfig::j01)},
      {"j23", pos(&ScenarioConfig::j23)},
      {"length_um", pos(&ScenarioConfig::length_um)},
      {"wx", pos(&ScenarioConfig::wx)},
      {"wy", pos(&ScenarioConfig::wy)},
      {"wz", pos(&ScenarioConfig::wz)},
      {"v_middle", neg(&ScenarioConfig::v_middle)},
      {"v_outer", neg(&ScenarioConfig::v_outer)},
      {"atoms", nonneg(&ScenarioConfig::atoms)},
      {"a_bohr", real(&ScenarioConfig::a_bohr)},
      {"output",
       [](ScenarioConfig& c, std::string_view v, int line, std::string_view key) {
         if (v.empty()) throw InputError(where(line, key) + ": empty file name");
         c.output = std::string(v);
       }},
  };
  return table;
}

const Setter* find_setter(std::string_view key) {
  for (const auto& [name, setter] : setters()) {
    if (name == key) return &setter;
  }
  return nullptr;
}

}  // namespace

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::stationary:
      return "stationary";
    case ScenarioKind::oscillatory:
      return "oscillatory";
    case ScenarioKind::adiabatic:
      return "adiabatic";
    case ScenarioKind::physical:
      return "physical";
  }
  return "unknown";
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& entry : setters()) k.push_back(entry.first);
    return k;
  }();
  return keys;
}

void apply_setting(ScenarioConfig& cfg, std::string_view key, std::string_view value) {
  const Setter* setter = find_setter(key);
  if (!setter) throw InputError("unknown key '" + std::string(key) + "'");
  (*setter)(cfg, trim(value), 0, key);
}

ScenarioConfig parse_config(std::string_view text) {
  ScenarioConfig cfg;
  std::set<std::string, std::less<>> seen;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw InputError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    const Setter* setter = find_setter(key);
    if (!setter) throw InputError(where(line_no, key) + ": unknown key");
    if (!seen.insert(std::string(key)).second) throw InputError(where(line_no, key) + ": duplicate key");
    if (value.empty()) throw InputError(where(line_no, key) + ": missing value");
    (*setter)(cfg, value, line_no, key);
  }

  auto require = [&](const char* key) {
    if (!seen.count(key)) {
      throw InputError("missing required key '" + std::string(key) + "' for scenario " +
                       to_string(cfg.scenario));
    }
  };
  require("scenario");
  switch (cfg.scenario) {
    case ScenarioKind::stationary:
    case ScenarioKind::oscillatory:
      require("gamma");
      if (!(cfg.gamma < 1.0)) {
        throw InputError("key 'gamma': Γ/J12 must be below 1 (unbroken PT phase)");
      }
      break;
    case ScenarioKind::adiabatic:
    case ScenarioKind::physical:
      require("gamma_f");
      require("t_f");
      if (!(cfg.gamma_f < 1.0)) {
        throw InputError("key 'gamma_f': Γf/J12 must be below 1 (unbroken PT phase)");
      }
      break;
  }
  return cfg;
}

}  // namespace ptfw
