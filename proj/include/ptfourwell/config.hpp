#pragma once

// Scenario configuration: line-oriented `key = value` text with '#' comments.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ptfw {

enum class ScenarioKind { stationary, oscillatory, adiabatic, physical };

std::string to_string(ScenarioKind kind);

struct ScenarioConfig {
  ScenarioKind scenario = ScenarioKind::stationary;

  // Γ and Γf are given relative to J12.
  double gamma = 0.5;
  double gamma_f = 0.5;
  double t_f = 70.0;
  double j12 = 1.0;
  double c = 0.0;
  std::optional<double> d;  ///< unset: automatic
  std::optional<double> n0;
  std::optional<double> n3;
  std::optional<double> t_end;
  double dt = 0.01;

  double tol = 1e-10;  ///< step-halving agreement
  double residual_tol = 1e-8;
  double equivalence_tol = 1e-6;
  double norm_tol = 1e-10;
  double balance_tol = 0.05;
  double robustness_tol = 0.05;
  double reservoir_floor = 1e-3;

  double weight = 0.3;  ///< ψ- admixture of the oscillatory initial state
  double perturbation = 0.0;
  std::uint64_t seed = 1;

  // Hermitian chain the adiabatic ramp starts from.
  double e0 = -10.0;
  double e3 = -10.0;
  double j01 = 0.5;
  double j23 = 0.5;

  // Optical trap (physical scenario); lengths in l, depths in E_l.
  double length_um = 2.0;
  double wx = 4.0;
  double wy = 4.0;
  double wz = 0.5;
  double v_middle = -80.0;
  double v_outer = -122.0;
  double atoms = 1e5;
  double a_bohr = 10.9;

  std::string output = "series.csv";
};

/// Parses config text. Throws InputError naming the line and key on bad input,
/// unknown keys, duplicates or missing scenario-required keys.
ScenarioConfig parse_config(std::string_view text);

/// Sets one key as if it appeared in the config text (used by parameter sweeps).
void apply_setting(ScenarioConfig& cfg, std::string_view key, std::string_view value);

/// Keys accepted by parse_config, in documentation order.
const std::vector<std::string>& config_keys();

}  // namespace ptfw
