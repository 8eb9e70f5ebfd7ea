#include "ptfourwell/four_mode.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "ptfourwell/errors.hpp"

namespace ptfw::four_mode {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

Params with_zero_onsite(Params p) {
  p.E0 = 0.0;
  p.E3 = 0.0;
  return p;
}

// splitmix64, used to derive reproducible noise from (seed, interval).
std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double unit_interval(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

bool finite(const State& psi) { return psi.allFinite(); }

}  // namespace

Observables observables(const State& psi, const Params& p) {
  Observables o;
  const Eigen::Matrix4cd rho = psi * psi.adjoint();  // ρ_kl = ψk ψl*
  o.C = 2.0 * rho.real();
  o.jt = -2.0 * rho.imag();
  for (int k = 0; k < 4; ++k) o.n[k] = std::norm(psi(k));
  o.j01 = p.J01 * o.jt(0, 1);
  o.j12 = p.J12 * o.jt(1, 2);
  o.j23 = p.J23 * o.jt(2, 3);
  return o;
}

Tunneling controller_tunneling(const Observables& obs, double d) {
  return {d * obs.C(1, 3), d * obs.C(0, 2)};
}

Eigen::Matrix4d hamiltonian(const State& psi, const Params& p) {
  Eigen::Matrix4d h = Eigen::Matrix4d::Zero();
  h(0, 0) = p.E0 + p.c * std::norm(psi(0));
  h(1, 1) = p.c * std::norm(psi(1));
  h(2, 2) = p.c * std::norm(psi(2));
  h(3, 3) = p.E3 + p.c * std::norm(psi(3));
  h(0, 1) = h(1, 0) = -p.J01;
  h(1, 2) = h(2, 1) = -p.J12;
  h(2, 3) = h(3, 2) = -p.J23;
  return h;
}

OnsiteEnergies controller_onsite(const State& psi, const Params& p, double gamma,
                                 double gamma_rate, const ControllerOptions& opts, double t) {
  const Observables o = observables(psi, p);
  const double d = p.d;

  Eigen::Matrix2d m;
  m << p.J01 * o.C(0, 1), d * o.jt(0, 1) * o.jt(1, 3),
      -d * o.jt(0, 2) * o.jt(2, 3), -p.J23 * o.C(2, 3);

  // Time derivative of ρ under the Hamiltonian with E0 = E3 = 0; everything
  // else (tunneling, interaction diagonal) is known and goes to the right-hand side.
  const Eigen::Matrix4cd h = hamiltonian(psi, with_zero_onsite(p)).cast<std::complex<double>>();
  const State dpsi = -kI * (h * psi);
  const Eigen::Matrix4cd drho = dpsi * psi.adjoint() + psi * dpsi.adjoint();
  const Eigen::Matrix4d dC = 2.0 * drho.real();
  const Eigen::Matrix4d djt = -2.0 * drho.imag();

  // j01 = d C13 j̃01 and j23 = d C02 j̃23
  const double base01 = d * dC(1, 3) * o.jt(0, 1) + p.J01 * djt(0, 1);
  const double base23 = d * dC(0, 2) * o.jt(2, 3) + p.J23 * djt(2, 3);
  const double target01 = 2.0 * gamma_rate * o.n[1] + 2.0 * gamma * (o.j01 - o.j12);
  const double target23 = 2.0 * gamma_rate * o.n[2] + 2.0 * gamma * (o.j12 - o.j23);

  const double det = m.determinant();
  const double scale = m.cwiseAbs().maxCoeff();
  if (!(std::abs(det) > opts.det_threshold * scale * scale) || !std::isfinite(det)) {
    throw NearSingularController(det, scale, t);
  }
  const double v0 = target01 - base01;
  const double v3 = target23 - base23;
  return {(m(1, 1) * v0 - m(0, 1) * v3) / det, (m(0, 0) * v3 - m(1, 0) * v0) / det, det};
}

Params apply_controller(const State& psi, const Params& p, const GammaValue& g,
                        const ControllerOptions& opts, double t) {
  Params out = p;
  const Tunneling tun = controller_tunneling(observables(psi, p), p.d);
  out.J01 = tun.J01;
  out.J23 = tun.J23;
  const OnsiteEnergies e = controller_onsite(psi, out, g.value, g.rate, opts, t);
  out.E0 = e.E0;
  out.E3 = e.E3;
  return out;
}

ConditionResiduals condition_residuals(const State& psi, const Params& p, double gamma) {
  const Observables o = observables(psi, p);
  return {o.j01 - 2.0 * gamma * o.n[1], o.j23 - 2.0 * gamma * o.n[2],
          p.J01 * o.C(0, 2) - p.J23 * o.C(1, 3)};
}

State controlled_rhs(double t, const State& psi, const GammaSchedule& schedule, const Params& p,
                     const ControllerOptions& opts, const Perturbation& noise) {
  Params q = apply_controller(psi, p, schedule.at(t), opts, t);
  q.E0 *= noise.E0;
  q.E3 *= noise.E3;
  q.J01 *= noise.J01;
  q.J23 *= noise.J23;
  return -kI * (hamiltonian(psi, q).cast<std::complex<double>>() * psi);
}

State step(const State& psi, const GammaSchedule& schedule, const Params& p, double t, double dt,
           const ControllerOptions& opts, const Perturbation& noise) {
  auto f = [&](double tau, const State& y) {
    return controlled_rhs(tau, y, schedule, p, opts, noise);
  };
  return rk4_step(f, t, psi, dt);
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::completed:
      return "completed";
    case Termination::reservoir_depleted:
      return "reservoir_depleted";
    case Termination::singular_controller:
      return "singular_controller";
  }
  return "unknown";
}

Perturbation perturbation_for_interval(std::uint64_t seed, std::size_t k, double amplitude) {
  if (amplitude == 0.0) return {};
  std::uint64_t state = mix(seed ^ mix(static_cast<std::uint64_t>(k) + 0x632be59bd9b4e019ULL));
  auto draw = [&] {
    state = mix(state);
    return 1.0 + amplitude * (2.0 * unit_interval(state) - 1.0);
  };
  Perturbation out;
  out.E0 = draw();
  out.E3 = draw();
  out.J01 = draw();
  out.J23 = draw();
  return out;
}

TrajectoryRecord run_trajectory(const State& initial, const GammaSchedule& schedule,
                                const Params& p, double t_end, const RunOptions& opts) {
  if (!(opts.dt_out > 0.0)) throw InputError("run_trajectory needs dt > 0");
  {
    Params q = p;
    const Tunneling tun = controller_tunneling(observables(initial, p), p.d);
    q.J01 = tun.J01;
    q.J23 = tun.J23;
    const ConditionResiduals r = condition_residuals(initial, q, schedule.at(0.0).value);
    const double worst = std::max(std::abs(r.r1), std::abs(r.r2));
    if (!(worst <= opts.initial_residual_tol)) {
      throw InitialConditionViolated("initial state violates the PT conditions (max |r1|,|r2| = " +
                                     std::to_string(worst) + ")");
    }
  }
  const auto grid = time_grid(t_end, opts.dt_out);

  auto run = [&](int substeps) {
    TrajectoryRecord rec;
    rec.substeps = substeps;
    rec.rows.reserve(grid.size());
    State psi = initial;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double t = grid[k];
      const Perturbation noise = perturbation_for_interval(opts.seed, k, opts.perturbation);
      try {
        if (k > 0) {
          const Perturbation prev = perturbation_for_interval(opts.seed, k - 1, opts.perturbation);
          const double h = (t - grid[k - 1]) / substeps;
          for (int s = 0; s < substeps; ++s) {
            psi = step(psi, schedule, p, grid[k - 1] + s * h, h, opts.controller, prev);
          }
          if (!finite(psi)) throw NearSingularController(0.0, 0.0, t);
        }
        const GammaValue g = schedule.at(t);
        Params q = apply_controller(psi, p, g, opts.controller, t);
        q.E0 *= noise.E0;
        q.E3 *= noise.E3;
        q.J01 *= noise.J01;
        q.J23 *= noise.J23;
        Row row;
        row.t = t;
        row.psi = psi;
        row.obs = observables(psi, q);
        row.E0 = q.E0;
        row.E3 = q.E3;
        row.J01 = q.J01;
        row.J23 = q.J23;
        row.gamma = g.value;
        row.residuals = condition_residuals(psi, q, g.value);
        rec.rows.push_back(row);
        if (std::max(std::abs(row.residuals.r1), std::abs(row.residuals.r2)) > opts.residual_abort) {
          rec.termination = Termination::singular_controller;
          rec.reason = "conditions lost at t=" + std::to_string(t) +
                       " after crossing a singular point of the on-site controller";
          break;
        }
        if (row.obs.n[0] < opts.reservoir_floor || row.obs.n[3] < opts.reservoir_floor) {
          rec.termination = Termination::reservoir_depleted;
          rec.reason = "reservoir population below floor at t=" + std::to_string(t);
          break;
        }
      } catch (const NearSingularController& e) {
        rec.termination = Termination::singular_controller;
        rec.reason = e.what();
        break;
      }
    }
    return rec;
  };

  if (!opts.refine) return run(std::max(1, opts.refinement.initial_substeps));

  auto distance = [](const TrajectoryRecord& a, const TrajectoryRecord& b) {
    const std::size_t n = std::min(a.rows.size(), b.rows.size());
    if (n == 0) return 0.0;
    double diff = 0.0;
    double scale = 1.0;
    // ψψ† drops the global phase, which carries no observable and collects roundoff.
    for (std::size_t k = 0; k < n; ++k) {
      const Eigen::Matrix4cd ra = a.rows[k].psi * a.rows[k].psi.adjoint();
      const Eigen::Matrix4cd rb = b.rows[k].psi * b.rows[k].psi.adjoint();
      diff = std::max(diff, (ra - rb).cwiseAbs().maxCoeff());
      scale = std::max(scale, rb.cwiseAbs().maxCoeff());
    }
    return diff / scale;
  };
  auto refined = refine(run, distance, opts.refinement);
  refined.result.refinement_converged = refined.converged;
  return std::move(refined.result);
}

}  // namespace ptfw::four_mode
