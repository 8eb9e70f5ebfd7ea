#include "ptfourwell/physical_map.hpp"

#include <cmath>
#include <exception>
#include <numbers>
#include <optional>
#include <string>

#include "ptfourwell/errors.hpp"
#include "ptfourwell/init.hpp"
#include "ptfourwell/optimize.hpp"

namespace ptfw::physical {

PhysicalConstants PhysicalConstants::rubidium87(double particle_number,
                                                double scattering_length_bohr) {
  PhysicalConstants c;
  c.mass = kRubidium87Mass * kAtomicMassUnit;
  c.scattering_length = scattering_length_bohr * kBohrRadius;
  c.particle_number = particle_number;
  return c;
}

PhysicalUnits physical_units(double l, const PhysicalConstants& constants) {
  if (!(l > 0.0)) throw InputError("length unit must be positive");
  PhysicalUnits u;
  u.length = l;
  u.energy = constants.hbar * constants.hbar / (constants.mass * l * l);
  u.time = constants.hbar / u.energy;
  return u;
}

double reduced_interaction(const PhysicalConstants& constants, double l) {
  return constants.particle_number * constants.scattering_length / l;
}

TrapGeometry lattice_trap(double v_outer0, double v_middle, double v_outer3, double wx, double wy,
                          double wz, double delta0, double delta3) {
  TrapGeometry t;
  t.depth = {v_outer0, v_middle, v_middle, v_outer3};
  t.position = {-1.5 + delta0, -0.5, 0.5, 1.5 + delta3};
  t.wx = wx;
  t.wy = wy;
  t.wz = wz;
  return t;
}

double delta0_of(const TrapGeometry& trap) { return trap.position[0] + 1.5; }
double delta3_of(const TrapGeometry& trap) { return trap.position[3] - 1.5; }

GaussianAnsatz pinned_ansatz(const TrapGeometry& trap, double Ax, double Ay, double Az) {
  return {Ax, Ay, Az, trap.position};
}

std::array<double, 3> harmonic_width_guess(const TrapGeometry& trap) {
  // V(r) ≈ V (1 - 2 r²/w²)  =>  ω² = 4|V|/w², ground-state Gaussian exp(-ω r²/2)
  const double v = std::abs(trap.depth[1]);
  auto width = [&](double w) { return 0.5 * std::sqrt(4.0 * v / (w * w)); };
  return {width(trap.wx), width(trap.wy), width(trap.wz)};
}

double width_factor(double A, double w) {
  const double aw2 = A * w * w;
  return std::sqrt(aw2 / (1.0 + aw2));
}

double overlap_factor(double Az, double dq) { return std::exp(-0.5 * Az * dq * dq); }

double pair_tunneling(double Vl, double Vk, double dq, const GaussianAnsatz& a,
                      const TrapGeometry& trap) {
  const double beta = width_factor(a.Ax, trap.wx) * width_factor(a.Ay, trap.wy) *
                      width_factor(a.Az, trap.wz);
  const double gamma = overlap_factor(a.Az, dq);
  const double tail = std::pow(gamma, 1.0 / (1.0 + a.Az * trap.wz * trap.wz));
  return 0.5 * a.Az * a.Az * dq * dq * gamma + (Vl + Vk) * beta * gamma * (0.5 - tail);
}

ModeElements matrix_elements(const TrapGeometry& trap, const GaussianAnsatz& a,
                             double interaction) {
  if (!(a.Ax > 0.0 && a.Ay > 0.0 && a.Az > 0.0)) throw InputError("ansatz widths must be positive");
  ModeElements m;
  const double beta = width_factor(a.Ax, trap.wx) * width_factor(a.Ay, trap.wy) *
                      width_factor(a.Az, trap.wz);
  const double kinetic = 0.5 * (a.Ax + a.Ay + a.Az);
  for (int k = 0; k < 4; ++k) m.E[k] = kinetic + trap.depth[k] * beta;
  for (int k = 0; k < 3; ++k) {
    m.J[k] = pair_tunneling(trap.depth[k], trap.depth[k + 1], a.center[k + 1] - a.center[k], a,
                            trap);
  }
  m.c = 4.0 * interaction * std::sqrt(a.Ax * a.Ay * a.Az / std::numbers::pi);
  return m;
}

double energy_reference(const ModeElements& m) { return 0.5 * (m.E[1] + m.E[2]); }

four_mode::Params to_four_mode(const ModeElements& m, double d) {
  const double ref = energy_reference(m);
  four_mode::Params p;
  p.E0 = m.E[0] - ref;
  p.E3 = m.E[3] - ref;
  p.J01 = m.J[0];
  p.J12 = m.J[1];
  p.J23 = m.J[2];
  p.c = m.c;
  p.d = d;
  return p;
}

namespace {

Eigen::Matrix4d linear_hamiltonian(const ModeElements& m) {
  Eigen::Matrix4d h = Eigen::Matrix4d::Zero();
  for (int k = 0; k < 4; ++k) h(k, k) = m.E[k];
  for (int k = 0; k < 3; ++k) h(k, k + 1) = h(k + 1, k) = -m.J[k];
  return h;
}

double energy_of(const ModeElements& m, const Eigen::Vector4cd& amplitudes) {
  const double norm2 = amplitudes.squaredNorm();
  if (norm2 == 0.0) throw InputError("mean-field energy of the zero state");
  const Eigen::Vector4cd psi = amplitudes / std::sqrt(norm2);
  const Eigen::Matrix4cd h = linear_hamiltonian(m).cast<std::complex<double>>();
  double quartic = 0.0;
  for (int k = 0; k < 4; ++k) quartic += std::norm(psi(k)) * std::norm(psi(k));
  return psi.dot(h * psi).real() + 0.5 * m.c * quartic;
}

four_mode::Params absolute_params(const ModeElements& m) {
  // ground states do not care about the energy reference; keep E1 = E2 = 0
  return to_four_mode(m, 1.0);
}

}  // namespace

double mean_field_energy(const TrapGeometry& trap, const GaussianAnsatz& ansatz,
                         double interaction, const Eigen::Vector4cd& amplitudes) {
  return energy_of(matrix_elements(trap, ansatz, interaction), amplitudes);
}

WidthOptimum optimize_widths(const TrapGeometry& trap, double interaction,
                             const std::array<double, 3>& initial, const WidthOptions& opts) {
  for (double a : initial) {
    if (!(a > 0.0)) throw InputError("initial ansatz widths must be positive");
  }
  auto ansatz_of = [&](const std::vector<double>& x) {
    return pinned_ansatz(trap, std::exp(x[0]), std::exp(x[1]), std::exp(x[2]));
  };
  auto objective = [&](const std::vector<double>& x) {
    const GaussianAnsatz a = ansatz_of(x);
    const ModeElements m = matrix_elements(trap, a, interaction);
    const auto psi = init::hermitian_ground_state(absolute_params(m));
    return energy_of(m, psi);
  };
  numerics::SimplexOptions sopts;
  sopts.rel_diameter = opts.rel_diameter;
  sopts.max_iterations = opts.max_iterations;
  sopts.initial_step = 0.2;
  const auto res = numerics::nelder_mead(
      objective, {std::log(initial[0]), std::log(initial[1]), std::log(initial[2])}, sopts);
  if (!res.converged) throw NonConvergence("width optimization hit its iteration cap");

  WidthOptimum out;
  out.ansatz = ansatz_of(res.x);
  out.energy = res.value;
  out.iterations = res.iterations;
  out.amplitudes =
      init::hermitian_ground_state(absolute_params(matrix_elements(trap, out.ansatz, interaction)));
  return out;
}

namespace {

struct OuterWell {
  int index;      // 0 or 3
  int neighbour;  // 1 or 2
  double sign;    // position = ±1.5 + δ
};

double outer_energy(double V, const GaussianAnsatz& a, const TrapGeometry& ref,
                    double energy_ref) {
  const double beta =
      width_factor(a.Ax, ref.wx) * width_factor(a.Ay, ref.wy) * width_factor(a.Az, ref.wz);
  return 0.5 * (a.Ax + a.Ay + a.Az) + V * beta - energy_ref;
}

double outer_tunneling(const OuterWell& w, double V, double delta, const GaussianAnsatz& a,
                       const TrapGeometry& ref) {
  const double pos = w.sign * 1.5 + delta;
  const double dq = std::abs(pos - ref.position[w.neighbour]);
  return pair_tunneling(V, ref.depth[w.neighbour], dq, a, ref);
}

std::pair<double, double> invert_outer(const OuterWell& w, double E_target, double J_target,
                                       const TrapGeometry& ref, const GaussianAnsatz& a,
                                       double energy_ref, const InversionOptions& opts) {
  const double v_scale = std::abs(ref.depth[w.neighbour]);
  const double e_scale = std::max(1.0, std::abs(E_target));
  const double j_scale = std::max(std::abs(J_target), 1e-300);
  auto f = [&](const numerics::Vec2& x) -> numerics::Vec2 {
    const double V = -x[0] * v_scale;
    return {(outer_energy(V, a, ref, energy_ref) - E_target) / e_scale,
            (outer_tunneling(w, V, x[1], a, ref) - J_target) / j_scale};
  };
  numerics::NewtonOptions nopts;
  nopts.tol = opts.tol;
  nopts.max_step = 0.25;
  const int g = opts.grid;
  for (int i = 0; i < g * g; ++i) {
    const double fv = g > 1 ? static_cast<double>(i / g) / (g - 1) : 0.5;
    const double fd = g > 1 ? static_cast<double>(i % g) / (g - 1) : 0.5;
    const numerics::Vec2 x0{1.5 - fv, -0.1 + 0.2 * fd};
    const auto res = numerics::newton2d(f, x0, nopts);
    // a well that turns repulsive or slides halfway to its neighbour is outside the model
    if (res.converged && res.x[0] > 0.0 && std::abs(res.x[1]) <= opts.max_shift) {
      return {-res.x[0] * v_scale, res.x[1]};
    }
  }
  throw OutOfRange("trap inversion failed for outer well " + std::to_string(w.index) +
                   " (E target " + std::to_string(E_target) + ", J target " +
                   std::to_string(J_target) + ")");
}

constexpr OuterWell kLeft{0, 1, -1.0};
constexpr OuterWell kRight{3, 2, 1.0};

}  // namespace

TrapSolution invert_trap_parameters(const OuterTargets& t, const TrapGeometry& reference,
                                    const GaussianAnsatz& widths, double energy_ref,
                                    const InversionOptions& opts) {
  const auto [v0, d0] = invert_outer(kLeft, t.E0, t.J01, reference, widths, energy_ref, opts);
  const auto [v3, d3] = invert_outer(kRight, t.E3, t.J23, reference, widths, energy_ref, opts);
  return {v0, v3, d0, d3};
}

OuterTargets outer_targets(const TrapSolution& s, const TrapGeometry& reference,
                           const GaussianAnsatz& widths, double energy_ref) {
  return {outer_energy(s.V0, widths, reference, energy_ref),
          outer_energy(s.V3, widths, reference, energy_ref),
          outer_tunneling(kLeft, s.V0, s.delta0, widths, reference),
          outer_tunneling(kRight, s.V3, s.delta3, widths, reference)};
}

std::vector<TrapSolution> invert_trap_series(const std::vector<OuterTargets>& series,
                                             const TrapGeometry& reference,
                                             const GaussianAnsatz& widths, double energy_ref,
                                             Execution execution, const InversionOptions& opts) {
  std::vector<TrapSolution> out(series.size());
  if (execution == Execution::serial) {
    for (std::size_t i = 0; i < series.size(); ++i) {
      out[i] = invert_trap_parameters(series[i], reference, widths, energy_ref, opts);
    }
    return out;
  }
  std::vector<std::optional<std::string>> failures(series.size());
  const auto n = static_cast<long>(series.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      out[k] = invert_trap_parameters(series[k], reference, widths, energy_ref, opts);
    } catch (const std::exception& e) {
      failures[k] = e.what();
    }
  }
  for (const auto& f : failures) {
    if (f) throw OutOfRange(*f);
  }
  return out;
}

}  // namespace ptfw::physical
