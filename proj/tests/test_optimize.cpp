#include "doctest.h"

#include <cmath>

#include "ptfourwell/optimize.hpp"

using namespace ptfw::numerics;

TEST_CASE("newton finds the intersection of a circle and a line") {
  auto f = [](const Vec2& x) -> Vec2 { return {x[0] * x[0] + x[1] * x[1] - 4.0, x[0] - x[1]}; };
  const auto r = newton2d(f, {1.0, 0.5});
  CHECK(r.converged);
  CHECK(r.x[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(r.x[1] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("newton reports failure when there is no root") {
  auto f = [](const Vec2& x) -> Vec2 { return {x[0] * x[0] + 1.0, x[1]}; };
  NewtonOptions opts;
  opts.max_iterations = 30;
  CHECK_FALSE(newton2d(f, {0.3, 0.0}, opts).converged);
}

TEST_CASE("nelder-mead minimizes the Rosenbrock valley") {
  auto f = [](const std::vector<double>& x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
  };
  const auto r = nelder_mead(f, {-1.2, 1.0});
  CHECK(r.converged);
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("nelder-mead on a shifted quadratic in three dimensions") {
  auto f = [](const std::vector<double>& x) {
    return std::pow(x[0] - 1, 2) + 2 * std::pow(x[1] + 2, 2) + 3 * std::pow(x[2] - 0.5, 2);
  };
  const auto r = nelder_mead(f, {0, 0, 0});
  CHECK(r.x[1] == doctest::Approx(-2.0).epsilon(1e-7));
  CHECK(r.value <= 1e-12);
}
