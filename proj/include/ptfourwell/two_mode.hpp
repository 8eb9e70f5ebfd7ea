#pragma once

// Non-Hermitian PT-symmetric double well in the two-mode approximation.
//
//   H = [ iΓ  -J ]
//       [ -J  -iΓ]
//
// Time is measured in units of ħ (ħ = 1). Serves as the reference the
// four-mode middle wells are compared against.

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "ptfourwell/integrator.hpp"

namespace ptfw::two_mode {

using State = Eigen::Vector2cd;

struct Params {
  double J = 1.0;      ///< tunneling amplitude, J > 0
  double gamma = 0.0;  ///< gain/loss strength
};

struct Observables {
  double n1 = 0.0;
  double n2 = 0.0;
  double j12 = 0.0;
};

struct Rates {
  double dn1 = 0.0;
  double dn2 = 0.0;
  double dj12 = 0.0;
};

struct EigenPair {
  std::complex<double> value;
  State raw;         ///< (iΓ ± sqrt(J²-Γ²), -J), unnormalized
  State normalized;  ///< raw / |raw|
};

struct Eigensystem {
  EigenPair plus;
  EigenPair minus;
  bool degenerate = false;  ///< exceptional point Γ = J: plus and minus coincide
};

struct Sample {
  double t = 0.0;
  State psi;
};

using Trajectory = std::vector<Sample>;
using GammaOfTime = std::function<double(double)>;

Eigen::Matrix2cd hamiltonian(const Params& p, double c = 0.0, const State& psi = State::Zero());

Eigensystem eigensystem(const Params& p);

/// min over φ of |PT ψ - e^{iφ} ψ| / |ψ|, PT = swap components then conjugate.
double pt_symmetry_residual(const State& psi);

/// Smallest |a/|a| - e^{iφ} b/|b|| over the global phase φ.
double phase_distance(const State& a, const State& b);

Observables observables(const State& psi, const Params& p);

/// Closed observable equations: ṅ1 = -j12 + 2Γn1, ṅ2 = j12 - 2Γn2, j̇12 = 2J²(n1-n2).
Rates observable_ode_rhs(const Observables& obs, const Params& p);

/// Right-hand side of i ψ' = (H + c diag|ψ|²) ψ.
State schrodinger_rhs(const State& psi, const Params& p, double c);

/// Fixed-step RK4, one sample per step.
Trajectory propagate(const State& psi0, const Params& p, double t_end, double dt);

/// Interacting variant with diagonal c(|ψ1|², |ψ2|²).
Trajectory nonlinear_propagate(const State& psi0, const Params& p, double c, double t_end,
                               double dt);

/// Samples every dt_out; substeps are doubled until successive runs agree to
/// `opts.rel_tol` relative to the largest amplitude. `gamma_of_t` overrides p.gamma
/// when set.
Refined<Trajectory> propagate_refined(const State& psi0, const Params& p, double c, double t_end,
                                      double dt_out, const Refinement& opts = {},
                                      const GammaOfTime& gamma_of_t = {});

}  // namespace ptfw::two_mode
