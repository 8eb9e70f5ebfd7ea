#include "doctest.h"

#include <string>

#include "ptfourwell/config.hpp"
#include "ptfourwell/errors.hpp"
#include "ptfourwell/scenario.hpp"

using namespace ptfw;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("stationary config with defaults") {
  const auto cfg = parse_config("scenario = stationary\ngamma = 0.5\nj12 = 1.0");
  CHECK(cfg.scenario == ScenarioKind::stationary);
  CHECK(cfg.gamma == 0.5);
  CHECK(cfg.j12 == 1.0);
  CHECK(cfg.c == 0.0);
  CHECK_FALSE(cfg.d.has_value());
  CHECK(cfg.dt == 0.01);
  CHECK(cfg.tol == 1e-10);
  CHECK(cfg.output == "series.csv");
}

TEST_CASE("ramp config") {
  const auto cfg = parse_config("scenario = adiabatic\ngamma_f = 0.5\nt_f = 70");
  CHECK(cfg.scenario == ScenarioKind::adiabatic);
  CHECK(cfg.gamma_f == 0.5);
  CHECK(cfg.t_f == 70.0);
}

TEST_CASE("comments, blank lines and spacing") {
  const auto cfg = parse_config(
      "# header\n\nscenario=oscillatory   # trailing\n  gamma =0.25\r\nd = 0.4\nseed = 99\n");
  CHECK(cfg.scenario == ScenarioKind::oscillatory);
  CHECK(cfg.gamma == 0.25);
  CHECK(*cfg.d == 0.4);
  CHECK(cfg.seed == 99);
  CHECK_FALSE(parse_config("scenario = physical\ngamma_f = 0.5\nt_f = 70\nd = auto").d.has_value());
}

TEST_CASE("negative dt names key and line") {
  const auto msg = error_of("scenario = stationary\ngamma = 0.5\ndt = -1\n");
  CHECK(msg.find("line 3") != std::string::npos);
  CHECK(msg.find("'dt'") != std::string::npos);
}

TEST_CASE("unknown, duplicate and malformed entries") {
  CHECK(error_of("scenario = stationary\ngama = 0.5\n").find("line 2: key 'gama': unknown key") != std::string::npos);
  CHECK(error_of("scenario = stationary\ngamma = 0.5\ngamma = 0.4\n").find("duplicate") != std::string::npos);
  CHECK(error_of("scenario = stationary\ngamma 0.5\n").find("line 2") != std::string::npos);
  CHECK(error_of("scenario = stationary\ngamma = 0.5x\n").find("not a number") != std::string::npos);
  CHECK(error_of("scenario = stationary\ngamma = nan\n").find("'gamma'") != std::string::npos);
  CHECK(error_of("scenario = sideways\n").find("unknown scenario") != std::string::npos);
  CHECK(error_of("scenario = stationary\ngamma =\n").find("missing value") != std::string::npos);
  CHECK(error_of("scenario = stationary\ngamma = 0.5\nt_end = 0\n").find("'t_end'") != std::string::npos);
  CHECK(error_of("scenario = physical\ngamma_f = 0.5\nt_f = 70\nv_middle = 80\n").find("must be negative") != std::string::npos);
}

TEST_CASE("scenario-required keys") {
  CHECK(error_of("gamma = 0.5\n").find("'scenario'") != std::string::npos);
  CHECK(error_of("scenario = stationary\n").find("'gamma'") != std::string::npos);
  CHECK(error_of("scenario = adiabatic\ngamma_f = 0.5\n").find("'t_f'") != std::string::npos);
  CHECK(error_of("scenario = stationary\ngamma = 1.0\n").find("unbroken") != std::string::npos);
}

TEST_CASE("every documented key is accepted by apply_setting") {
  ScenarioConfig cfg;
  CHECK_THROWS_AS(apply_setting(cfg, "nope", "1"), InputError);
  apply_setting(cfg, "c", " 0.25 ");
  CHECK(cfg.c == 0.25);
  CHECK(config_keys().size() > 30);
  CHECK(config_keys().front() == "scenario");
}

TEST_CASE("sweep specification") {
  const auto s = parse_sweep("gamma=0.1:0.8:4");
  CHECK(s.key == "gamma");
  CHECK(s.from == 0.1);
  CHECK(s.to == 0.8);
  CHECK(s.count == 4);
  CHECK_THROWS_AS(parse_sweep("gamma=0.1:0.8"), InputError);
  CHECK_THROWS_AS(parse_sweep("gamma=0.1:0.8:0"), InputError);
  CHECK_THROWS_AS(parse_sweep("bogus=0:1:3"), InputError);
  CHECK_THROWS_AS(parse_sweep("dt=-1:1:3"), InputError);
}
