#pragma once

// Scenario runner: builds the initial state for each scenario kind, runs the
// controlled four-well system next to the two-mode reference and checks the
// configured tolerances.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ptfourwell/config.hpp"
#include "ptfourwell/four_mode.hpp"
#include "ptfourwell/physical_map.hpp"
#include "ptfourwell/two_mode.hpp"

namespace ptfw {

enum ExitStatus : int { kSuccess = 0, kToleranceFailure = 1, kInputError = 2, kNumericalFailure = 3 };

struct RunReport {
  int exit_status = kSuccess;
  std::string scenario;
  std::string termination;  ///< four_mode::Termination, or "error"
  std::string reason;       ///< early termination or error message
  std::vector<std::string> failures;

  double gamma = 0.0;  ///< Γ (or Γf) in model units
  double J12 = 0.0;
  double c = 0.0;
  double d = 0.0;
  double t_end = 0.0;
  int substeps = 0;
  std::size_t rows = 0;

  double max_residual = 0.0;     ///< max |r1|, |r2|
  double max_residual_r3 = 0.0;  ///< max |r3|
  double equivalence_error = 0.0;
  bool equivalence_checked = false;
  double norm_drift = 0.0;
  double max_imbalance = 0.0;  ///< max |n1 - n2| / (n1 + n2)
  double adiabaticity_margin = 0.0;

  std::optional<double> robustness_deviation;
  std::optional<double> plateau_variation;      ///< ramps: relative n1, n2 spread after t_f
  std::optional<double> final_ground_distance;  ///< ramps: final middle state vs two-mode ground state

  // Physical runs.
  std::optional<double> energy_unit_hz;
  std::optional<double> time_unit_ms;
  std::optional<double> max_abs_delta;
  std::optional<physical::ModeElements> elements;
  std::optional<physical::GaussianAnsatz> widths;
};

struct ScenarioRun {
  RunReport report;
  four_mode::TrajectoryRecord record;
  std::optional<four_mode::TrajectoryRecord> unperturbed;
  two_mode::Trajectory oracle;
  std::vector<physical::TrapSolution> trap;  ///< physical runs, one per record row
};

/// Runs one scenario. Module errors are caught and mapped to the exit status.
ScenarioRun run_scenario(const ScenarioConfig& cfg);

/// Writes <dir>/<cfg.output> (series), <dir>/report.json and, for perturbed
/// runs, <dir>/unperturbed_<cfg.output>.
void write_outputs(const ScenarioRun& run, const ScenarioConfig& cfg,
                   const std::filesystem::path& dir);

std::string report_json(const RunReport& report);

struct SweepSpec {
  std::string key;
  double from = 0.0;
  double to = 0.0;
  int count = 1;
};

/// Parses "key=a:b:n". Throws InputError.
SweepSpec parse_sweep(const std::string& text);

/// Runs the swept configurations concurrently; run k writes into <dir>/sweep_<k>.
std::vector<RunReport> run_sweep(const ScenarioConfig& base, const SweepSpec& sweep,
                                 const std::filesystem::path& dir);

}  // namespace ptfw
