#include "ptfourwell/init.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include <omp.h>

#include "ptfourwell/errors.hpp"
#include "ptfourwell/optimize.hpp"

namespace ptfw::init {

namespace {

using four_mode::State;

State assemble(const EmbeddingSpec& s, double phi0, double phi3) {
  State psi;
  psi << std::polar(std::sqrt(s.n0), phi0), s.middle(0), s.middle(1),
      std::polar(std::sqrt(s.n3), phi3);
  return psi;
}

double wrap(double phi) {
  const double two_pi = 2.0 * std::numbers::pi;
  phi = std::fmod(phi, two_pi);
  return phi < 0.0 ? phi + two_pi : phi;
}

numerics::Vec2 embedding_residual(const EmbeddingSpec& s, const numerics::Vec2& phi) {
  const State psi = assemble(s, phi[0], phi[1]);
  four_mode::Params p;
  p.d = s.d;
  const auto obs = four_mode::observables(psi, p);
  const auto tun = four_mode::controller_tunneling(obs, s.d);
  p.J01 = tun.J01;
  p.J23 = tun.J23;
  const auto r = four_mode::condition_residuals(psi, p, s.gamma);
  return {r.r1, r.r2};
}

double relative_controller_det(const EmbeddingSpec& s, const State& psi) {
  four_mode::Params p;
  p.d = s.d;
  const auto o = four_mode::observables(psi, p);
  const auto tun = four_mode::controller_tunneling(o, s.d);
  Eigen::Matrix2d m;
  m << tun.J01 * o.C(0, 1), s.d * o.jt(0, 1) * o.jt(1, 3), -s.d * o.jt(0, 2) * o.jt(2, 3),
      -tun.J23 * o.C(2, 3);
  const double scale = m.cwiseAbs().maxCoeff();
  return scale > 0.0 ? std::abs(m.determinant()) / (scale * scale) : 0.0;
}

std::optional<State> try_start(const EmbeddingSpec& s, const EmbeddingOptions& opts, int index) {
  const double step = 2.0 * std::numbers::pi / opts.grid;
  const numerics::Vec2 x0{(index / opts.grid + 0.5) * step, (index % opts.grid + 0.5) * step};
  numerics::NewtonOptions nopts;
  nopts.tol = opts.tol;
  auto f = [&](const numerics::Vec2& phi) { return embedding_residual(s, phi); };
  const auto res = numerics::newton2d(f, x0, nopts);
  if (!res.converged) return std::nullopt;
  const State psi = assemble(s, wrap(res.x[0]), wrap(res.x[1]));
  const auto r = embedding_residual(s, {wrap(res.x[0]), wrap(res.x[1])});
  if (std::max(std::abs(r[0]), std::abs(r[1])) > opts.tol) return std::nullopt;
  if (s.gamma != 0.0 && relative_controller_det(s, psi) < opts.min_relative_det) {
    return std::nullopt;
  }
  return psi;
}

}  // namespace

double default_oscillation_frequency(double J12, double gamma_f) {
  const double disc = J12 * J12 - gamma_f * gamma_f;
  if (disc <= 0.0) throw BrokenPhase("no real oscillation frequency for |Γ| >= J12");
  return 2.0 * std::sqrt(disc);
}

double adiabaticity_margin(const GammaSchedule& schedule, double omega, int grid_points) {
  if (!(omega > 0.0)) throw InputError("adiabaticity margin needs omega > 0");
  if (schedule.kind == GammaSchedule::Kind::constant || schedule.gamma_f == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  double max_rate = 0.0;
  for (int i = 1; i < grid_points; ++i) {
    const double t = schedule.t_f * static_cast<double>(i) / grid_points;
    max_rate = std::max(max_rate, std::abs(schedule.at(t).rate));
  }
  if (max_rate == 0.0) return std::numeric_limits<double>::infinity();
  return omega * std::abs(schedule.gamma_f) / max_rate;
}

two_mode::State two_mode_stationary_middle(double J12, double gamma) {
  if (!(std::abs(gamma) < J12)) {
    throw BrokenPhase("stationary middle state requires |Γ| < J12 (Γ=" + std::to_string(gamma) +
                      ", J12=" + std::to_string(J12) + ")");
  }
  return two_mode::eigensystem({J12, gamma}).plus.normalized;
}

two_mode::State two_mode_superposition(double J12, double gamma, double weight) {
  if (!(std::abs(gamma) < J12)) throw BrokenPhase("superposition requires |Γ| < J12");
  const auto sys = two_mode::eigensystem({J12, gamma});
  const two_mode::State mix = sys.plus.normalized + weight * sys.minus.normalized;
  const double norm = mix.norm();
  if (norm == 0.0) throw InputError("superposition weight annihilates the state");
  return mix / norm;
}

four_mode::State embed_pt_state(const EmbeddingSpec& spec, const EmbeddingOptions& opts) {
  if (!(spec.n0 > 0.0) || !(spec.n3 > 0.0)) {
    throw InputError("embedding needs positive reservoir populations");
  }
  if (spec.gamma == 0.0) {
    // Zero currents are required; reservoir phases aligned with a real frame
    // or with the adjacent middle amplitudes are tried first.
    const numerics::Vec2 candidates[] = {
        {0.0, 0.0}, {wrap(std::arg(spec.middle(0))), wrap(std::arg(spec.middle(1)))}};
    for (const auto& phi : candidates) {
      const auto r = embedding_residual(spec, phi);
      if (std::max(std::abs(r[0]), std::abs(r[1])) <= opts.tol) {
        return assemble(spec, phi[0], phi[1]);
      }
    }
  }
  const int starts = opts.grid * opts.grid;
  if (opts.execution == Execution::serial) {
    for (int i = 0; i < starts; ++i) {
      if (auto psi = try_start(spec, opts, i)) return *psi;
    }
  } else {
    // Blocks of one start per thread, in order; the first block with a root
    // decides, lowest index first, which is the serial answer.
    const int block = std::max(1, omp_get_max_threads());
    std::vector<std::optional<State>> found(static_cast<std::size_t>(block));
    for (int first = 0; first < starts; first += block) {
      const int count = std::min(block, starts - first);
#pragma omp parallel for schedule(static)
      for (int j = 0; j < count; ++j) found[static_cast<std::size_t>(j)] = try_start(spec, opts, first + j);
      for (int j = 0; j < count; ++j) {
        if (found[static_cast<std::size_t>(j)]) return *found[static_cast<std::size_t>(j)];
      }
    }
  }
  throw NoEmbedding("no reservoir phases satisfy the PT conditions (n0=" +
                    std::to_string(spec.n0) + ", n3=" + std::to_string(spec.n3) +
                    ", d=" + std::to_string(spec.d) + ")");
}

double auto_controller_scale(EmbeddingSpec spec, double J12, const EmbeddingOptions& opts) {
  const double a1 = std::abs(spec.middle(0));
  const double a2 = std::abs(spec.middle(1));
  double d = J12 / std::max(2.0 * std::sqrt(spec.n3) * a1, 2.0 * std::sqrt(spec.n0) * a2);
  double failed_below = 0.0;  // largest d seen without an embedding
  std::optional<double> feasible;
  for (int it = 0; it < 40; ++it) {
    spec.d = d;
    try {
      const State psi = embed_pt_state(spec, opts);
      feasible = d;
      four_mode::Params p;
      const auto tun = four_mode::controller_tunneling(four_mode::observables(psi, p), d);
      const double largest = std::max(std::abs(tun.J01), std::abs(tun.J23));
      if (largest == 0.0) return d;
      if (std::abs(largest / J12 - 1.0) < 1e-3) return d;
      const double next = d * J12 / largest;
      // J ≈ J12 is out of reach when it needs a scale that already failed
      if (next <= failed_below) return d;
      d = next;
    } catch (const NoEmbedding&) {
      failed_below = std::max(failed_below, d);
      d *= 2.0;
    }
  }
  if (!feasible) throw NoEmbedding("no controller scale admits a PT-consistent embedding");
  return *feasible;
}

double rayleigh_quotient(const four_mode::State& psi, const four_mode::Params& p) {
  const Eigen::Matrix4cd h = four_mode::hamiltonian(psi, p).cast<std::complex<double>>();
  return (psi.dot(h * psi)).real() / psi.squaredNorm();
}

four_mode::State hermitian_ground_state(const four_mode::Params& p, const GroundStateOptions& opts) {
  four_mode::Params linear = p;
  linear.c = 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> solver(
      four_mode::hamiltonian(State::Zero(), linear));
  Eigen::Vector4d psi = solver.eigenvectors().col(0);

  if (p.c != 0.0) {
    double dtau = opts.dtau;
    if (dtau <= 0.0) {
      dtau = 0.1 / std::abs(p.J12);
      dtau = std::min(dtau, 0.1 / std::abs(p.c));
    }
    bool converged = false;
    for (long it = 0; it < opts.max_iterations; ++it) {
      // exp(-H(ψ) dτ) ψ with the mean-field Hamiltonian frozen over the step
      const Eigen::Matrix4d h = four_mode::hamiltonian(psi.cast<std::complex<double>>(), p);
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(h);
      const Eigen::Vector4d lam = es.eigenvalues();
      Eigen::Vector4d coeff = es.eigenvectors().transpose() * psi;
      for (int k = 0; k < 4; ++k) coeff(k) *= std::exp(-(lam(k) - lam(0)) * dtau);
      psi = es.eigenvectors() * coeff;
      psi.normalize();
      const Eigen::Matrix4d hn = four_mode::hamiltonian(psi.cast<std::complex<double>>(), p);
      const Eigen::Vector4d hpsi = hn * psi;
      const double mu = psi.dot(hpsi);
      if ((hpsi - mu * psi).norm() < opts.tol) {
        converged = true;
        break;
      }
    }
    if (!converged) throw NonConvergence("imaginary-time ground state did not converge");
  }

  Eigen::Index big = 0;
  psi.cwiseAbs().maxCoeff(&big);
  if (psi(big) < 0.0) psi = -psi;
  return psi.cast<std::complex<double>>();
}

}  // namespace ptfw::init
