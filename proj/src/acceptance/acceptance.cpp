#include "ptfourwell/acceptance/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <ostream>
#include <random>

#include "ptfourwell/acceptance/quadrature_oracle.hpp"
#include "ptfourwell/config.hpp"
#include "ptfourwell/errors.hpp"
#include "ptfourwell/physical_map.hpp"
#include "ptfourwell/scenario.hpp"
#include "ptfourwell/two_mode.hpp"

namespace ptfw::acceptance {

namespace {

std::string fmt(const char* format, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

// Scenario runs shared between criteria, computed on first use.
class Runs {
 public:
  const ScenarioRun& get(const std::string& name) {
    auto it = cache_.find(name);
    if (it == cache_.end()) it = cache_.emplace(name, run_scenario(parse_config(text(name)))).first;
    return it->second;
  }
  /// Every suite run, so the run-wide checks see all of them.
  const std::map<std::string, ScenarioRun>& everything() {
    for (const char* name : {"stationary", "oscillatory", "oscillatory_long", "oscillatory_interacting",
                             "oscillatory_interacting_coarse", "physical", "perturbed"}) {
      get(name);
    }
    return cache_;
  }

  static std::string text(const std::string& name) {
    if (name == "stationary") return "scenario = stationary\ngamma = 0.5\nj12 = 1.0\n";
    if (name == "oscillatory") return "scenario = oscillatory\ngamma = 0.5\nj12 = 1.0\n";
    if (name == "oscillatory_long") return "scenario = oscillatory\ngamma = 0.5\nt_end = 40\n";
    if (name == "oscillatory_interacting")
      return "scenario = oscillatory\ngamma = 0.5\nc = 0.5\nt_end = 10\n";
    if (name == "oscillatory_interacting_coarse")
      return "scenario = oscillatory\ngamma = 0.5\nc = 0.5\nt_end = 10\ndt = 0.02\n";
    if (name == "physical") return "scenario = physical\ngamma_f = 0.5\nt_f = 70\nt_end = 80\n";
    if (name == "perturbed")
      return "scenario = stationary\ngamma = 0.5\nperturbation = 1e-3\nseed = 7\n";
    throw InputError("no acceptance run named " + name);
  }

 private:
  std::map<std::string, ScenarioRun> cache_;
};

CriterionResult eigenstructure() {
  CriterionResult r{1, "eigenstructure", true, ""};
  double worst_value = 0.0, worst_unbroken = 0.0, least_broken = std::numeric_limits<double>::infinity();
  const double J = 1.0;
  for (double g : {0.0, 0.25, 0.5, 0.75, 0.99, 1.01, 1.5, 2.0}) {
    const auto es = two_mode::eigensystem({J, g});
    const auto s = std::sqrt(std::complex<double>(J * J - g * g, 0.0));
    worst_value = std::max({worst_value, std::abs(es.plus.value - s), std::abs(es.minus.value + s)});
    for (const auto* pair : {&es.plus, &es.minus}) {
      const double res = two_mode::pt_symmetry_residual(pair->normalized);
      if (g < J) worst_unbroken = std::max(worst_unbroken, res);
      else least_broken = std::min(least_broken, res);
    }
  }
  r.passed = worst_value <= 1e-12 && worst_unbroken <= 1e-12 && least_broken > 0.1;
  r.detail = fmt("max eigenvalue error %.2e, PT residual below EP %.2e, above EP min %.3f",
                 worst_value, worst_unbroken, least_broken);
  return r;
}

CriterionResult linear_equivalence(Runs& runs) {
  CriterionResult r{2, "linear equivalence", true, ""};
  const auto& st = runs.get("stationary").report;
  const auto& os = runs.get("oscillatory").report;
  r.passed = st.exit_status == 0 && os.exit_status == 0 && st.equivalence_error <= 1e-6 &&
             os.equivalence_error <= 1e-6;
  r.detail = fmt("max middle deviation stationary %.2e, oscillatory %.2e (tol 1e-6)",
                 st.equivalence_error, os.equivalence_error);
  return r;
}

CriterionResult stationary_reproduction(Runs& runs) {
  CriterionResult r{3, "stationary populations and reservoir drift", true, ""};
  const auto& run = runs.get("stationary");
  const double gamma = run.report.gamma;
  const auto& first = run.record.rows.front();
  double middle = 0.0, drift = 0.0;
  for (const auto& row : run.record.rows) {
    middle = std::max({middle, std::abs(row.obs.n[1] - 0.5), std::abs(row.obs.n[2] - 0.5)});
    drift = std::max({drift, std::abs(row.obs.n[0] - first.obs.n[0] + gamma * row.t),
                      std::abs(row.obs.n[3] - first.obs.n[3] - gamma * row.t)});
  }
  r.passed = run.report.exit_status == 0 && middle <= 1e-6 && drift <= 1e-6;
  r.detail = fmt("max |n1,2 - 0.5| %.2e, max reservoir drift error %.2e", middle, drift);
  return r;
}

CriterionResult condition_preservation(Runs& runs) {
  CriterionResult r{4, "condition preservation", true, ""};
  double worst = 0.0;
  int checked = 0;
  for (const auto& [name, run] : runs.everything()) {
    if (run.report.robustness_deviation || run.record.rows.empty()) continue;
    ++checked;
    worst = std::max(worst, run.report.max_residual);
    for (const auto& row : run.record.rows) {
      const double scale = std::abs(row.J01 * row.obs.C(0, 2)) + std::abs(row.J23 * row.obs.C(1, 3));
      if (std::abs(row.residuals.r3) > 4.0 * std::numeric_limits<double>::epsilon() * scale) {
        r.passed = false;
      }
    }
  }
  r.passed = r.passed && checked > 0 && worst <= 1e-8;
  r.detail = fmt("%d runs, max |r1|,|r2| %.2e, r3 at rounding level: %s", checked, worst,
                 r.passed ? "yes" : "no");
  return r;
}

CriterionResult norm_conservation(Runs& runs) {
  CriterionResult r{5, "norm conservation", true, ""};
  double worst = 0.0;
  for (const auto& [name, run] : runs.everything()) worst = std::max(worst, run.report.norm_drift);
  r.passed = worst <= 1e-10;
  r.detail = fmt("%zu runs, max |sum n(t) - sum n(0)| %.2e", runs.everything().size(), worst);
  return r;
}

// Mean spacing of upward crossings through the midpoint of the signal range.
double crossing_frequency(const std::vector<double>& t, const std::vector<double>& x) {
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  const double level = 0.5 * (*lo + *hi);
  std::vector<double> ups;
  for (std::size_t k = 1; k < x.size(); ++k) {
    if (x[k - 1] < level && x[k] >= level) {
      const double f = (level - x[k - 1]) / (x[k] - x[k - 1]);
      ups.push_back(t[k - 1] + f * (t[k] - t[k - 1]));
    }
  }
  if (ups.size() < 2) return 0.0;
  return 2.0 * std::acos(-1.0) * static_cast<double>(ups.size() - 1) / (ups.back() - ups.front());
}

CriterionResult rabi_frequency(Runs& runs) {
  CriterionResult r{6, "Rabi frequency", true, ""};
  const auto& run = runs.get("oscillatory_long");
  std::vector<double> t, n1;
  for (const auto& row : run.record.rows) {
    t.push_back(row.t);
    n1.push_back(row.obs.n[1]);
  }
  const double expected = 2.0 * std::sqrt(run.report.J12 * run.report.J12 - run.report.gamma * run.report.gamma);
  const double measured = crossing_frequency(t, n1);
  const double rel = std::abs(measured - expected) / expected;
  r.passed = run.report.exit_status == 0 && rel <= 0.01;
  r.detail = fmt("measured %.6f, expected %.6f, relative error %.2e", measured, expected, rel);
  return r;
}

// max |finite-difference dj12/dt - linear part - J12 c (n1-n2) C12|
double interaction_term_error(const ScenarioRun& run) {
  const auto& rows = run.record.rows;
  const double J12 = run.report.J12, c = run.report.c;
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < rows.size(); ++k) {
    const auto& o = rows[k].obs;
    const double fd = (rows[k + 1].obs.j12 - rows[k - 1].obs.j12) / (rows[k + 1].t - rows[k - 1].t);
    const double linear =
        2.0 * J12 * J12 * (o.n[1] - o.n[2]) + J12 * (rows[k].J23 * o.C(1, 3) - rows[k].J01 * o.C(0, 2));
    const double interaction = J12 * c * (o.n[1] - o.n[2]) * o.C(1, 2);
    worst = std::max(worst, std::abs(fd - linear - interaction));
  }
  return worst;
}

CriterionResult interacting_diagnostics(Runs& runs) {
  CriterionResult r{7, "interacting diagnostics", true, ""};
  const auto& fine = runs.get("oscillatory_interacting");
  const auto& coarse = runs.get("oscillatory_interacting_coarse");
  const double e_fine = interaction_term_error(fine);
  const double e_coarse = interaction_term_error(coarse);
  double term = 0.0;
  for (const auto& row : fine.record.rows) {
    term = std::max(term, std::abs(fine.report.J12 * fine.report.c * (row.obs.n[1] - row.obs.n[2]) *
                                   row.obs.C(1, 2)));
  }
  // central differences: halving dt must cut the error by about four
  const double ratio = e_coarse / e_fine;
  const bool second_order = ratio > 3.0 && e_fine < 1e-3 * std::max(term, 1e-12);
  const auto& phys = runs.get("physical").report;
  const bool balanced = phys.exit_status == 0 && phys.max_imbalance <= 0.05;
  r.passed = fine.report.termination == "completed" && coarse.report.termination == "completed" &&
             term > 0.0 && second_order && balanced;
  r.detail = fmt("fd error %.2e (dt 0.01) %.2e (dt 0.02), ratio %.2f, |term| up to %.2e; "
                 "ramp imbalance %.2e (tol 0.05, c = %.2f)",
                 e_fine, e_coarse, ratio, term, phys.max_imbalance, phys.c);
  return r;
}

CriterionResult adiabatic_ramp(Runs& runs) {
  CriterionResult r{8, "adiabatic ramp", true, ""};
  const auto& rep = runs.get("physical").report;
  const double plateau = rep.plateau_variation.value_or(1.0);
  const double dist = rep.final_ground_distance.value_or(1.0);
  r.passed = rep.exit_status == 0 && plateau <= 1e-3 && dist <= 1e-2;
  r.detail = fmt("n1, n2 spread after t_f %.2e of n1+n2, distance to two-mode ground state %.2e",
                 plateau, dist);
  return r;
}

CriterionResult physical_units() {
  CriterionResult r{9, "physical units", true, ""};
  const auto constants = physical::PhysicalConstants::rubidium87(1e5, 10.9);
  const auto u = physical::physical_units(2e-6, constants);
  const double hz = u.energy / physical::kPlanck;
  const double ms = u.time * 1e3;
  r.passed = std::abs(hz / 29.1 - 1.0) <= 0.005 && std::abs(ms / 5.47 - 1.0) <= 0.005;
  r.detail = fmt("E_l/h = %.4f Hz, t_l = %.4f ms", hz, ms);
  return r;
}

CriterionResult matrix_element_oracle() {
  CriterionResult r{10, "matrix elements vs quadrature", true, ""};
  const auto constants = physical::PhysicalConstants::rubidium87(1e5, 10.9);
  const double interaction = physical::reduced_interaction(constants, 2e-6);
  const auto trap = physical::lattice_trap(-122.0, -80.0, -122.0, 4.0, 4.0, 0.5);
  const auto widths = physical::optimize_widths(trap, interaction, physical::harmonic_width_guess(trap));
  const auto m = physical::matrix_elements(trap, widths.ansatz, interaction);
  double worst_e = 0.0, worst_j = 0.0;
  for (int k = 0; k < 3; ++k) {
    const auto q = quadrature_pair(trap, widths.ansatz, k);
    worst_j = std::max(worst_j, std::abs(m.J[k] - q.J) / std::abs(q.J));
    worst_e = std::max({worst_e, std::abs(m.E[k] - q.E_left) / std::abs(q.E_left),
                        std::abs(m.E[k + 1] - q.E_right) / std::abs(q.E_right)});
  }
  r.passed = worst_e <= 0.05 && worst_j <= 0.05;
  r.detail = fmt("max relative deviation E %.2e, J %.2e (tol 5e-2)", worst_e, worst_j);
  return r;
}

CriterionResult trap_round_trip(Runs& runs) {
  CriterionResult r{11, "trap inversion round trip", true, ""};
  const auto constants = physical::PhysicalConstants::rubidium87(1e5, 10.9);
  const double interaction = physical::reduced_interaction(constants, 2e-6);
  const auto trap = physical::lattice_trap(-122.0, -80.0, -122.0, 4.0, 4.0, 0.5);
  const auto widths = physical::optimize_widths(trap, interaction, physical::harmonic_width_guess(trap));
  const double ref = physical::energy_reference(physical::matrix_elements(trap, widths.ansatz, interaction));

  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> depth(-135.0, -110.0), shift(-0.08, 0.08);
  std::vector<physical::TrapSolution> truth(100);
  std::vector<physical::OuterTargets> targets;
  for (auto& s : truth) {
    s = {depth(rng), depth(rng), shift(rng), shift(rng)};
    targets.push_back(physical::outer_targets(s, trap, widths.ansatz, ref));
  }
  double worst = 0.0;
  int failed = 0;
  try {
    const auto back = physical::invert_trap_series(targets, trap, widths.ansatz, ref);
    for (std::size_t k = 0; k < truth.size(); ++k) {
      worst = std::max({worst, std::abs(back[k].V0 - truth[k].V0) / std::abs(truth[k].V0),
                        std::abs(back[k].V3 - truth[k].V3) / std::abs(truth[k].V3),
                        std::abs(back[k].delta0 - truth[k].delta0),
                        std::abs(back[k].delta3 - truth[k].delta3)});
    }
  } catch (const NumericalError&) {
    failed = 1;
  }
  const auto& phys = runs.get("physical").report;
  const double delta = phys.max_abs_delta.value_or(1.0);
  r.passed = !failed && worst <= 1e-8 && phys.exit_status == 0 && delta <= 0.1;
  r.detail = fmt("100 configurations, max error %.2e (V relative, delta in l); ramp max |delta| %.4f l",
                 worst, delta);
  if (failed) r.detail += "; inversion failed";
  return r;
}

CriterionResult robustness(Runs& runs) {
  CriterionResult r{12, "robustness to controller noise", true, ""};
  const auto& rep = runs.get("perturbed").report;
  const double dev = rep.robustness_deviation.value_or(1.0);
  r.passed = rep.termination == "completed" && dev <= 0.05;
  r.detail = fmt("termination %s, max middle deviation %.2e (tol 5e-2)", rep.termination.c_str(), dev);
  return r;
}

}  // namespace

std::vector<CriterionResult> run_suite(std::ostream& out) {
  Runs runs;
  struct Entry {
    int id;
    const char* name;
    std::function<CriterionResult()> check;
  };
  const std::vector<Entry> criteria = {
      {1, "eigenstructure", [] { return eigenstructure(); }},
      {2, "linear equivalence", [&] { return linear_equivalence(runs); }},
      {3, "stationary populations and reservoir drift", [&] { return stationary_reproduction(runs); }},
      {4, "condition preservation", [&] { return condition_preservation(runs); }},
      {5, "norm conservation", [&] { return norm_conservation(runs); }},
      {6, "Rabi frequency", [&] { return rabi_frequency(runs); }},
      {7, "interacting diagnostics", [&] { return interacting_diagnostics(runs); }},
      {8, "adiabatic ramp", [&] { return adiabatic_ramp(runs); }},
      {9, "physical units", [] { return physical_units(); }},
      {10, "matrix elements vs quadrature", [] { return matrix_element_oracle(); }},
      {11, "trap inversion round trip", [&] { return trap_round_trip(runs); }},
      {12, "robustness to controller noise", [&] { return robustness(runs); }},
  };
  std::vector<CriterionResult> results;
  for (const auto& criterion : criteria) {
    CriterionResult res{criterion.id, criterion.name, false, ""};
    try {
      res = criterion.check();
    } catch (const std::exception& e) {
      res.detail = std::string("error: ") + e.what();
    }
    out << (res.passed ? "PASS" : "FAIL") << "  criterion " << res.id << " (" << res.name
        << "): " << res.detail << '\n'
        << std::flush;
    results.push_back(res);
  }
  return results;
}

int suite_status(const std::vector<CriterionResult>& results) {
  for (const auto& r : results) {
    if (!r.passed) return 1;
  }
  return 0;
}

}  // namespace ptfw::acceptance
