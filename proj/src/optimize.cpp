#include "ptfourwell/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ptfw::numerics {

namespace {

double max_abs(const Vec2& v) { return std::max(std::abs(v[0]), std::abs(v[1])); }

}  // namespace

NewtonResult newton2d(const std::function<Vec2(const Vec2&)>& f, Vec2 x0,
                      const NewtonOptions& opts) {
  NewtonResult res;
  res.x = x0;
  res.residual = f(x0);
  for (int it = 0; it < opts.max_iterations; ++it) {
    res.iterations = it;
    if (!std::isfinite(res.residual[0]) || !std::isfinite(res.residual[1])) return res;
    if (max_abs(res.residual) <= opts.tol) {
      res.converged = true;
      return res;
    }
    double jac[2][2];
    for (int j = 0; j < 2; ++j) {
      const double h = opts.fd_step * (std::abs(res.x[j]) + 1.0);
      Vec2 xp = res.x;
      Vec2 xm = res.x;
      xp[j] += h;
      xm[j] -= h;
      const Vec2 fp = f(xp);
      const Vec2 fm = f(xm);
      jac[0][j] = (fp[0] - fm[0]) / (2.0 * h);
      jac[1][j] = (fp[1] - fm[1]) / (2.0 * h);
    }
    const double det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
    if (det == 0.0 || !std::isfinite(det)) return res;
    Vec2 dx{-(jac[1][1] * res.residual[0] - jac[0][1] * res.residual[1]) / det,
            -(jac[0][0] * res.residual[1] - jac[1][0] * res.residual[0]) / det};
    const double len = std::hypot(dx[0], dx[1]);
    if (len > opts.max_step) {
      dx[0] *= opts.max_step / len;
      dx[1] *= opts.max_step / len;
    }
    const double current = max_abs(res.residual);
    double lambda = 1.0;
    bool accepted = false;
    for (int back = 0; back < 30; ++back) {
      const Vec2 trial{res.x[0] + lambda * dx[0], res.x[1] + lambda * dx[1]};
      const Vec2 ft = f(trial);
      if (std::isfinite(ft[0]) && std::isfinite(ft[1]) && max_abs(ft) < current) {
        res.x = trial;
        res.residual = ft;
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!accepted) break;
  }
  res.converged = max_abs(res.residual) <= opts.tol;
  return res;
}

SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> x0, const SimplexOptions& opts) {
  const std::size_t n = x0.size();
  std::vector<std::vector<double>> pts(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) {
    pts[i + 1][i] += opts.initial_step * (std::abs(x0[i]) > 0.0 ? std::abs(x0[i]) : 1.0);
  }
  std::vector<double> vals(n + 1);
  for (std::size_t i = 0; i <= n; ++i) vals[i] = f(pts[i]);

  auto combine = [&](const std::vector<double>& a, const std::vector<double>& b, double t) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + t * (b[i] - a[i]);
    return out;
  };

  SimplexResult res;
  std::vector<std::size_t> order(n + 1);
  for (int it = 0; it < opts.max_iterations; ++it) {
    res.iterations = it;
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const auto& best = pts[order.front()];

    double diameter = 0.0;
    double size = 0.0;
    for (std::size_t i = 0; i < n; ++i) size = std::max(size, std::abs(best[i]));
    for (std::size_t k = 1; k <= n; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        diameter = std::max(diameter, std::abs(pts[order[k]][i] - best[i]));
      }
    }
    const double spread = vals[order.back()] - vals[order.front()];
    if (diameter <= opts.rel_diameter * std::max(1.0, size) ||
        (opts.f_tol > 0.0 && spread <= opts.f_tol)) {
      res.converged = true;
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) centroid[i] += pts[order[k]][i] / static_cast<double>(n);
    }
    const std::size_t worst = order.back();
    const std::size_t second = order[n - 1];

    const auto reflected = combine(centroid, pts[worst], -1.0);
    const double fr = f(reflected);
    if (fr < vals[order.front()]) {
      const auto expanded = combine(centroid, pts[worst], -2.0);
      const double fe = f(expanded);
      if (fe < fr) {
        pts[worst] = expanded;
        vals[worst] = fe;
      } else {
        pts[worst] = reflected;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = reflected;
      vals[worst] = fr;
      continue;
    }
    const bool outside = fr < vals[worst];
    const auto contracted = outside ? combine(centroid, reflected, 0.5)
                                    : combine(centroid, pts[worst], 0.5);
    const double fc = f(contracted);
    if (fc < std::min(fr, vals[worst])) {
      pts[worst] = contracted;
      vals[worst] = fc;
      continue;
    }
    const std::size_t b = order.front();
    for (std::size_t k = 0; k <= n; ++k) {
      if (k == b) continue;
      pts[k] = combine(pts[b], pts[k], 0.5);
      vals[k] = f(pts[k]);
    }
  }
  const auto best_it = std::min_element(vals.begin(), vals.end());
  res.x = pts[static_cast<std::size_t>(best_it - vals.begin())];
  res.value = *best_it;
  return res;
}

}  // namespace ptfw::numerics
