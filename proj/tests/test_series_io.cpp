#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ptfourwell/errors.hpp"
#include "ptfourwell/series_io.hpp"

using namespace ptfw;

namespace {

four_mode::TrajectoryRecord sample_record() {
  four_mode::TrajectoryRecord rec;
  for (int k = 0; k < 3; ++k) {
    four_mode::Row row;
    row.t = 0.1 * k;
    row.obs.n = {1.0 / 3.0, 0.5 + k * 1e-17, std::sqrt(2.0), 1e-300};
    row.obs.j01 = -2.5e-8;
    row.obs.j12 = std::acos(-1.0);
    row.E0 = -29.28477412345678;
    row.gamma = 0.5;
    row.residuals.r1 = 1.2345678901234567e-15;
    rec.rows.push_back(row);
  }
  return rec;
}

std::filesystem::path temp_file(const char* name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("empty record writes only the header") {
  const auto text = format_series({});
  CHECK(text == "t,n0,n1,n2,n3,j01,j12,j23,E0,E3,J01,J23,Gamma,r1,r2,r3\n");
}

TEST_CASE("physical runs carry the trap columns") {
  std::vector<physical::TrapSolution> trap(3, {-120.0, -124.0, -0.01, 0.02});
  const auto text = format_series(sample_record(), &trap);
  CHECK(text.substr(0, text.find('\n')) ==
        "t,n0,n1,n2,n3,j01,j12,j23,E0,E3,J01,J23,Gamma,r1,r2,r3,V0,V3,delta0,delta3");
  std::vector<physical::TrapSolution> short_trap(2);
  CHECK_THROWS_AS(format_series(sample_record(), &short_trap), InputError);
}

TEST_CASE("values use 15 significant digits and LF line endings") {
  const auto text = format_series(sample_record());
  CHECK(text.find('\r') == std::string::npos);
  CHECK(text.find("0.333333333333333,") != std::string::npos);
  CHECK(text.find("3.14159265358979,") != std::string::npos);
  CHECK(text.find("1.23456789012346e-15") != std::string::npos);
}

TEST_CASE("round trip through a file") {
  const auto path = temp_file("ptfw_series_roundtrip.csv");
  const auto rec = sample_record();
  write_series(rec, path);
  const auto table = read_series(path);
  CHECK(table.header.size() == 16);
  REQUIRE(table.rows.size() == 3);
  const auto n0 = table.column("n0");
  const auto j12 = table.column("j12");
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(table.rows[k][n0] == doctest::Approx(rec.rows[k].obs.n[0]).epsilon(1e-14));
    CHECK(table.rows[k][j12] == doctest::Approx(rec.rows[k].obs.j12).epsilon(1e-14));
    // the written text is recovered exactly
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", table.rows[k][n0]);
    CHECK(std::stod(buf) == table.rows[k][n0]);
  }
  CHECK(table.rows[0][table.column("n3")] == 1e-300);
  CHECK_THROWS_AS(table.column("nope"), InputError);
  std::filesystem::remove(path);
}

TEST_CASE("unwritable path is an input error naming the path") {
  try {
    write_series({}, "/nonexistent-dir/series.csv");
    FAIL("expected an error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("/nonexistent-dir/series.csv") != std::string::npos);
  }
}

TEST_CASE("malformed series text") {
  CHECK_THROWS_AS(parse_series("t,n0\n1,2,3\n"), InputError);
  CHECK_THROWS_AS(parse_series("t,n0\n1,abc\n"), InputError);
  CHECK(parse_series("").rows.empty());
}
