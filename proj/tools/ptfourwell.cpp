// ptfourwell run --config <path> [--out <dir>] [--sweep key=a:b:n]
// ptfourwell check

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ptfourwell/acceptance/acceptance.hpp"
#include "ptfourwell/config.hpp"
#include "ptfourwell/errors.hpp"
#include "ptfourwell/scenario.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ptfw::InputError("cannot open config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void summarize(const ptfw::RunReport& r, std::ostream& os) {
  os << r.scenario << ": " << r.termination << ", exit " << r.exit_status << ", rows " << r.rows
     << ", max|r1,r2| " << r.max_residual << ", two-mode deviation " << r.equivalence_error
     << ", norm drift " << r.norm_drift << '\n';
  for (const auto& f : r.failures) os << "  failed: " << f << '\n';
}

int run_command(const std::string& config_path, const std::string& out_dir, const std::string& sweep) {
  const auto cfg = ptfw::parse_config(read_file(config_path));
  if (!sweep.empty()) {
    const auto spec = ptfw::parse_sweep(sweep);
    const auto reports = ptfw::run_sweep(cfg, spec, out_dir);
    int status = 0;
    for (const auto& r : reports) {
      summarize(r, std::cout);
      status = std::max(status, r.exit_status);
    }
    return status;
  }
  const auto run = ptfw::run_scenario(cfg);
  ptfw::write_outputs(run, cfg, out_dir);
  summarize(run.report, std::cout);
  return run.report.exit_status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Controlled four-well realization of a PT-symmetric double well"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", sweep;
  auto* run = app.add_subcommand("run", "run one scenario, or a sweep over one config key");
  run->add_option("--config", config_path, "scenario config file")->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--sweep", sweep, "key=a:b:n, n evenly spaced values from a to b");

  auto* check = app.add_subcommand("check", "run the built-in acceptance suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ptfw::kInputError;
  }

  try {
    if (check->parsed()) {
      const auto results = ptfw::acceptance::run_suite(std::cout);
      return ptfw::acceptance::suite_status(results);
    }
    return run_command(config_path, out_dir, sweep);
  } catch (const ptfw::InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return ptfw::kInputError;
  } catch (const ptfw::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return ptfw::kNumericalFailure;
  }
}
