#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace ptfw {

/// Classical fourth-order Runge-Kutta step for y' = f(t, y).
template <class State, class Rhs>
State rk4_step(Rhs&& f, double t, const State& y, double h) {
  const State k1 = f(t, y);
  const State k2 = f(t + 0.5 * h, State(y + (0.5 * h) * k1));
  const State k3 = f(t + 0.5 * h, State(y + (0.5 * h) * k2));
  const State k4 = f(t + h, State(y + h * k3));
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Output times 0, dt, 2dt, ... ending exactly at t_end (last interval may be shorter).
inline std::vector<double> time_grid(double t_end, double dt) {
  std::vector<double> grid{0.0};
  if (t_end <= 0.0) return grid;
  const double ratio = t_end / dt;
  auto n = static_cast<std::size_t>(std::llround(ratio));
  if (std::abs(ratio - static_cast<double>(n)) > 1e-9 * std::max(1.0, ratio)) {
    n = static_cast<std::size_t>(std::ceil(ratio));
  }
  grid.reserve(n + 1);
  for (std::size_t k = 1; k < n; ++k) grid.push_back(static_cast<double>(k) * dt);
  grid.push_back(t_end);
  return grid;
}

/// Step-halving control shared by the two- and four-mode integrators.
struct Refinement {
  double rel_tol = 1e-10;  ///< successive refinements must agree to this
  int max_halvings = 14;
  int initial_substeps = 1;
};

/// Runs `run(substeps)` with doubling substep counts until `distance(coarse, fine)`
/// drops below the tolerance. Returns the finest result and reports the substep count used.
/// Throws whatever `run` throws; gives up silently at max_halvings and returns the last result
/// with `converged = false`.
template <class Result>
struct Refined {
  Result result;
  int substeps = 1;
  double last_change = 0.0;
  bool converged = false;
};

template <class Run, class Distance>
auto refine(Run&& run, Distance&& distance, const Refinement& opts) {
  using Result = decltype(run(1));
  int m = std::max(1, opts.initial_substeps);
  Refined<Result> out{run(m), m, 0.0, false};
  for (int level = 0; level < opts.max_halvings; ++level) {
    Result finer = run(2 * m);
    const double change = distance(out.result, finer);
    m *= 2;
    out.result = std::move(finer);
    out.substeps = m;
    out.last_change = change;
    if (change <= opts.rel_tol) {
      out.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace ptfw
