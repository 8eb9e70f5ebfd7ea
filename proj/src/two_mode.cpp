#include "ptfourwell/two_mode.hpp"

#include <algorithm>
#include <cmath>

#include "ptfourwell/errors.hpp"

namespace ptfw::two_mode {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

State rhs_at(const State& psi, double J, double gamma, double c) {
  // ψ' = -i H ψ
  const std::complex<double> h11 = kI * gamma + c * std::norm(psi(0));
  const std::complex<double> h22 = -kI * gamma + c * std::norm(psi(1));
  State out;
  out(0) = -kI * (h11 * psi(0) - J * psi(1));
  out(1) = -kI * (-J * psi(0) + h22 * psi(1));
  return out;
}

Trajectory fixed_step(const State& psi0, const Params& p, double c, double t_end, double dt) {
  const auto grid = time_grid(t_end, dt);
  Trajectory out;
  out.reserve(grid.size());
  State psi = psi0;
  out.push_back({0.0, psi});
  auto f = [&](double, const State& y) { return rhs_at(y, p.J, p.gamma, c); };
  for (std::size_t k = 1; k < grid.size(); ++k) {
    psi = rk4_step(f, grid[k - 1], psi, grid[k] - grid[k - 1]);
    out.push_back({grid[k], psi});
  }
  return out;
}

}  // namespace

Eigen::Matrix2cd hamiltonian(const Params& p, double c, const State& psi) {
  Eigen::Matrix2cd h;
  h << kI * p.gamma + c * std::norm(psi(0)), -p.J, -p.J, -kI * p.gamma + c * std::norm(psi(1));
  return h;
}

Eigensystem eigensystem(const Params& p) {
  if (!(p.J > 0.0)) throw InputError("two-mode eigensystem needs J > 0");
  const double disc = p.J * p.J - p.gamma * p.gamma;
  const std::complex<double> s =
      disc >= 0.0 ? std::complex<double>(std::sqrt(disc), 0.0)
                  : std::complex<double>(0.0, std::sqrt(-disc));
  auto make = [&](std::complex<double> e) {
    EigenPair pair;
    pair.value = e;
    pair.raw << kI * p.gamma + e, -p.J;
    pair.normalized = pair.raw / pair.raw.norm();
    return pair;
  };
  Eigensystem sys{make(s), make(-s), false};
  sys.degenerate = std::abs(disc) <= 1e-14 * p.J * p.J;
  return sys;
}

double pt_symmetry_residual(const State& psi) {
  const double norm2 = psi.squaredNorm();
  if (norm2 == 0.0) throw InputError("PT residual of the zero state is undefined");
  State pt;
  pt << std::conj(psi(1)), std::conj(psi(0));
  // best phase is arg<ψ, PTψ>; take the norm directly, the closed form cancels
  const std::complex<double> overlap = psi.dot(pt);
  const std::complex<double> phase =
      std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : std::complex<double>(1.0, 0.0);
  return (pt - phase * psi).norm() / std::sqrt(norm2);
}

double phase_distance(const State& a, const State& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) throw InputError("phase distance of a zero state");
  const std::complex<double> overlap = b.dot(a);
  const std::complex<double> phase =
      std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : std::complex<double>(1.0, 0.0);
  return (a / na - phase * b / nb).norm();
}

Observables observables(const State& psi, const Params& p) {
  // j12 = iJ(ψ1ψ2* - ψ1*ψ2) = -2J Im(ψ1ψ2*)
  const std::complex<double> cross = psi(0) * std::conj(psi(1));
  return {std::norm(psi(0)), std::norm(psi(1)), -2.0 * p.J * cross.imag()};
}

Rates observable_ode_rhs(const Observables& o, const Params& p) {
  return {-o.j12 + 2.0 * p.gamma * o.n1, o.j12 - 2.0 * p.gamma * o.n2,
          2.0 * p.J * p.J * (o.n1 - o.n2)};
}

State schrodinger_rhs(const State& psi, const Params& p, double c) {
  return rhs_at(psi, p.J, p.gamma, c);
}

Trajectory propagate(const State& psi0, const Params& p, double t_end, double dt) {
  if (!(dt > 0.0)) throw InputError("propagate needs dt > 0");
  return fixed_step(psi0, p, 0.0, t_end, dt);
}

Trajectory nonlinear_propagate(const State& psi0, const Params& p, double c, double t_end,
                               double dt) {
  if (!(dt > 0.0)) throw InputError("propagate needs dt > 0");
  return fixed_step(psi0, p, c, t_end, dt);
}

Refined<Trajectory> propagate_refined(const State& psi0, const Params& p, double c, double t_end,
                                      double dt_out, const Refinement& opts,
                                      const GammaOfTime& gamma_of_t) {
  if (!(dt_out > 0.0)) throw InputError("propagate needs dt > 0");
  const auto grid = time_grid(t_end, dt_out);

  auto run = [&](int substeps) {
    Trajectory out;
    out.reserve(grid.size());
    State psi = psi0;
    out.push_back({0.0, psi});
    auto f = [&](double t, const State& y) {
      const double g = gamma_of_t ? gamma_of_t(t) : p.gamma;
      return rhs_at(y, p.J, g, c);
    };
    for (std::size_t k = 1; k < grid.size(); ++k) {
      const double h = (grid[k] - grid[k - 1]) / substeps;
      for (int s = 0; s < substeps; ++s) psi = rk4_step(f, grid[k - 1] + s * h, psi, h);
      out.push_back({grid[k], psi});
    }
    return out;
  };

  auto distance = [](const Trajectory& a, const Trajectory& b) {
    double diff = 0.0;
    double scale = 1.0;
    for (std::size_t k = 0; k < std::min(a.size(), b.size()); ++k) {
      diff = std::max(diff, (a[k].psi - b[k].psi).cwiseAbs().maxCoeff());
      scale = std::max(scale, b[k].psi.cwiseAbs().maxCoeff());
    }
    return diff / scale;
  };

  return refine(run, distance, opts);
}

}  // namespace ptfw::two_mode
