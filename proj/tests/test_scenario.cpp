#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ptfourwell/config.hpp"
#include "ptfourwell/scenario.hpp"
#include "ptfourwell/series_io.hpp"

using namespace ptfw;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("stationary run keeps the middle wells balanced") {
  const auto run = run_scenario(parse_config("scenario = stationary\ngamma = 0.5\nj12 = 1.0\n"));
  CHECK(run.report.exit_status == 0);
  CHECK(run.report.termination == "completed");
  CHECK(run.record.rows.size() == 1001);
  for (const auto& row : run.record.rows) {
    CHECK(row.obs.n[1] == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(row.obs.n[2] == doctest::Approx(0.5).epsilon(1e-6));
  }
  // default reservoir survives the whole run with margin
  CHECK(run.record.rows.back().obs.n[0] == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(run.report.equivalence_checked);
  CHECK(run.report.equivalence_error <= 1e-6);
}

TEST_CASE("with large reservoirs the controller outputs vary only slightly") {
  const auto run = run_scenario(parse_config("scenario = stationary\ngamma = 0.5\nn0 = 100\nn3 = 100\n"));
  CHECK(run.report.exit_status == 0);
  double lo = 1e9, hi = -1e9, elo = 1e9, ehi = -1e9;
  for (const auto& row : run.record.rows) {
    lo = std::min(lo, row.J01);
    hi = std::max(hi, row.J01);
    elo = std::min(elo, row.E0);
    ehi = std::max(ehi, row.E0);
  }
  CHECK((hi - lo) / hi < 0.05);
  CHECK((ehi - elo) / std::abs(ehi) < 0.05);
}

TEST_CASE("identical config gives byte-identical series") {
  const auto cfg = parse_config("scenario = oscillatory\ngamma = 0.5\nt_end = 3\n");
  CHECK(format_series(run_scenario(cfg).record) == format_series(run_scenario(cfg).record));
}

TEST_CASE("perturbed run reports its deviation from the clean run") {
  const auto run = run_scenario(parse_config("scenario = stationary\ngamma = 0.5\nt_end = 5\nperturbation = 1e-3\n"));
  REQUIRE(run.unperturbed.has_value());
  REQUIRE(run.report.robustness_deviation.has_value());
  CHECK(*run.report.robustness_deviation > 0.0);
  CHECK(*run.report.robustness_deviation <= 0.05);
  CHECK(run.report.exit_status == 0);
}

TEST_CASE("tolerance failures give exit status 1") {
  // a reservoir too small for the run
  const auto run = run_scenario(parse_config("scenario = stationary\ngamma = 0.5\nn0 = 3\nreservoir_floor = 1\n"));
  CHECK(run.report.exit_status == 1);
  CHECK(run.report.termination == "reservoir_depleted");
  CHECK_FALSE(run.report.failures.empty());
}

TEST_CASE("impossible embedding is a numerical failure") {
  const auto run = run_scenario(parse_config("scenario = oscillatory\ngamma = 0.5\nweight = 1\nd = 0.3\n"));
  CHECK(run.report.exit_status == 3);
  CHECK(run.report.termination == "error");
  CHECK(run.record.rows.empty());
}

TEST_CASE("outputs land in the requested directory") {
  const auto dir = std::filesystem::temp_directory_path() / "ptfw_scenario_out";
  std::filesystem::remove_all(dir);
  const auto cfg = parse_config("scenario = stationary\ngamma = 0.5\nt_end = 1\noutput = st.csv\n");
  const auto run = run_scenario(cfg);
  write_outputs(run, cfg, dir);
  CHECK(std::filesystem::exists(dir / "st.csv"));
  const auto report = slurp(dir / "report.json");
  CHECK(report.find("\"exit_status\": 0") != std::string::npos);
  CHECK(report.find("\"scenario\": \"stationary\"") != std::string::npos);
  CHECK(read_series(dir / "st.csv").rows.size() == 101);
  std::filesystem::remove_all(dir);
}

TEST_CASE("sweep runs are isolated and ordered") {
  const auto dir = std::filesystem::temp_directory_path() / "ptfw_sweep_out";
  std::filesystem::remove_all(dir);
  const auto cfg = parse_config("scenario = stationary\ngamma = 0.5\nt_end = 1\n");
  const auto reports = run_sweep(cfg, parse_sweep("gamma=0.2:0.6:3"), dir);
  REQUIRE(reports.size() == 3);
  CHECK(reports[0].gamma == doctest::Approx(0.2));
  CHECK(reports[1].gamma == doctest::Approx(0.4));
  CHECK(reports[2].gamma == doctest::Approx(0.6));
  for (const char* sub : {"sweep_000", "sweep_001", "sweep_002"}) {
    CHECK(std::filesystem::exists(dir / sub / "series.csv"));
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("adiabatic ramp of the abstract chain") {
  const auto run = run_scenario(parse_config("scenario = adiabatic\ngamma_f = 0.5\nt_f = 30\ndt = 0.05\n"));
  CHECK(run.report.exit_status == 0);
  REQUIRE(run.report.final_ground_distance.has_value());
  CHECK(*run.report.final_ground_distance < 0.05);
  CHECK(run.report.adiabaticity_margin == doctest::Approx(2 * std::sqrt(0.75) * 2 * 30 / std::acos(-1.0)).epsilon(1e-4));
}
