#pragma once

// Hermitian four-well chain whose outer wells are driven by a feedback
// controller so that the middle pair follows the PT-symmetric two-mode flow.
//
//   H = [ E0+c n0   -J01                       ]
//       [ -J01      c n1     -J12              ]
//       [           -J12     c n2      -J23    ]
//       [                    -J23      E3+c n3 ]
//
// The controller sets J01 = d C13, J23 = d C02 and solves a 2x2 linear system
// for E0, E3 so that dj01/dt and dj23/dt match the derivatives of 2Γn1, 2Γn2.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ptfourwell/gamma_schedule.hpp"
#include "ptfourwell/integrator.hpp"

namespace ptfw::four_mode {

using State = Eigen::Vector4cd;

struct Params {
  double E0 = 0.0;
  double E3 = 0.0;
  double J01 = 0.0;
  double J12 = 1.0;
  double J23 = 0.0;
  double c = 0.0;  ///< mean-field interaction strength
  double d = 1.0;  ///< controller scale, constant in time
};

struct Observables {
  std::array<double, 4> n{};
  double j01 = 0.0;
  double j12 = 0.0;
  double j23 = 0.0;
  Eigen::Matrix4d C = Eigen::Matrix4d::Zero();   ///< C_kl = ψkψl* + ψk*ψl
  Eigen::Matrix4d jt = Eigen::Matrix4d::Zero();  ///< modified currents i(ψkψl* - ψk*ψl)
};

struct ConditionResiduals {
  double r1 = 0.0;  ///< j01 - 2Γ n1
  double r2 = 0.0;  ///< j23 - 2Γ n2
  double r3 = 0.0;  ///< J01 C02 - J23 C13
};

struct Tunneling {
  double J01 = 0.0;
  double J23 = 0.0;
};

struct OnsiteEnergies {
  double E0 = 0.0;
  double E3 = 0.0;
  double det = 0.0;
};

struct ControllerOptions {
  /// |det| below det_threshold * (matrix entry scale)² is treated as singular.
  double det_threshold = 1e-12;
};

Observables observables(const State& psi, const Params& p);

Tunneling controller_tunneling(const Observables& obs, double d);

/// Solves for E0, E3 given J01/J23 already in `p`. With c != 0 the interaction
/// terms are carried on the diagonal and moved to the right-hand side.
/// Throws NearSingularController (tagged with `t`) when the system is singular.
OnsiteEnergies controller_onsite(const State& psi, const Params& p, double gamma,
                                 double gamma_rate, const ControllerOptions& opts = {},
                                 double t = 0.0);

/// Sets J01, J23 then E0, E3 from the controller laws.
Params apply_controller(const State& psi, const Params& p, const GammaValue& g,
                        const ControllerOptions& opts = {}, double t = 0.0);

/// Real symmetric tridiagonal matrix including the mean-field diagonal.
Eigen::Matrix4d hamiltonian(const State& psi, const Params& p);

ConditionResiduals condition_residuals(const State& psi, const Params& p, double gamma);

/// Multiplicative factors applied to the controller outputs (robustness runs).
struct Perturbation {
  double E0 = 1.0;
  double E3 = 1.0;
  double J01 = 1.0;
  double J23 = 1.0;
};

/// i ψ' = H(ψ, t) ψ with the controller re-evaluated at the given state and time.
State controlled_rhs(double t, const State& psi, const GammaSchedule& schedule, const Params& p,
                     const ControllerOptions& opts = {}, const Perturbation& noise = {});

/// One RK4 step of the controlled system; the controller is re-solved at every stage.
State step(const State& psi, const GammaSchedule& schedule, const Params& p, double t, double dt,
           const ControllerOptions& opts = {}, const Perturbation& noise = {});

struct Row {
  double t = 0.0;
  State psi = State::Zero();
  Observables obs;
  double E0 = 0.0;
  double E3 = 0.0;
  double J01 = 0.0;
  double J23 = 0.0;
  double gamma = 0.0;
  ConditionResiduals residuals;
};

enum class Termination { completed, reservoir_depleted, singular_controller };

std::string to_string(Termination t);

struct TrajectoryRecord {
  std::vector<Row> rows;
  Termination termination = Termination::completed;
  std::string reason;
  int substeps = 1;
  bool refinement_converged = true;
};

struct RunOptions {
  double dt_out = 0.01;
  Refinement refinement{};
  bool refine = true;                  ///< false: single pass with refinement.initial_substeps
  double initial_residual_tol = 1e-10; ///< |r1|, |r2| allowed at t = 0
  double reservoir_floor = 1e-3;       ///< stop when n0 or n3 drops below
  /// Stop when |r1| or |r2| exceeds this at an output time: a step jumped across a
  /// zero of the controller determinant and the feedback lost the conditions.
  double residual_abort = 1e-6;
  ControllerOptions controller{};
  double perturbation = 0.0;           ///< amplitude of multiplicative noise on E0, E3, J01, J23
  std::uint64_t seed = 1;
};

/// Integrates the controlled system and records all observables every dt_out.
/// Throws InitialConditionViolated when the t = 0 state violates the conditions.
TrajectoryRecord run_trajectory(const State& initial, const GammaSchedule& schedule,
                                const Params& p, double t_end, const RunOptions& opts = {});

/// Deterministic noise factors for output interval `k` (uniform in [1-a, 1+a]).
Perturbation perturbation_for_interval(std::uint64_t seed, std::size_t k, double amplitude);

}  // namespace ptfw::four_mode
