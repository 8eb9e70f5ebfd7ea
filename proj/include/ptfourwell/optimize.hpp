#pragma once

#include <array>
#include <functional>
#include <vector>

namespace ptfw::numerics {

using Vec2 = std::array<double, 2>;

struct NewtonOptions {
  double tol = 1e-12;            ///< max |residual| accepted as a root
  int max_iterations = 100;
  double fd_step = 1e-7;         ///< central-difference step for the Jacobian (relative to |x|+1)
  double max_step = 0.5;         ///< cap on the Newton step length
};

struct NewtonResult {
  Vec2 x{};
  Vec2 residual{};
  int iterations = 0;
  bool converged = false;
};

/// Damped Newton on a 2D residual with a central-difference Jacobian.
/// Backtracks on the step length until max|F| decreases.
NewtonResult newton2d(const std::function<Vec2(const Vec2&)>& f, Vec2 x0,
                      const NewtonOptions& opts = {});

struct SimplexOptions {
  double rel_diameter = 1e-10;  ///< stop when the simplex diameter falls below this (relative)
  double f_tol = 0.0;           ///< optional spread-of-values stop (0: off)
  int max_iterations = 20000;
  double initial_step = 0.1;
};

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Nelder-Mead downhill simplex (standard coefficients 1, 2, 1/2, 1/2).
SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> x0, const SimplexOptions& opts = {});

}  // namespace ptfw::numerics
