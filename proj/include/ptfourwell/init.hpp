#pragma once

// Initial states for the controlled four-well runs: PT-consistent embeddings
// of a two-mode state, Hermitian ground states for the adiabatic protocol,
// and the Γ(t) ramp with its adiabaticity check.

#include <Eigen/Dense>

#include "ptfourwell/four_mode.hpp"
#include "ptfourwell/gamma_schedule.hpp"
#include "ptfourwell/two_mode.hpp"

namespace ptfw::init {

/// min over the ramp of ω Γf / Γ̇(t); +inf for a constant schedule.
double adiabaticity_margin(const GammaSchedule& schedule, double omega, int grid_points = 1000);

/// Default ω: the two-mode oscillation frequency 2 sqrt(J12² - Γf²) at the final Γ.
double default_oscillation_frequency(double J12, double gamma_f);

/// Normalized ψ+ of the two-mode model (n1 + n2 = 1). Throws BrokenPhase when |Γ| >= J12.
two_mode::State two_mode_stationary_middle(double J12, double gamma);

/// Normalized combination ψ+ + weight ψ- of the two-mode eigenvectors (n1 + n2 = 1).
two_mode::State two_mode_superposition(double J12, double gamma, double weight);

struct EmbeddingSpec {
  two_mode::State middle = two_mode::State::Zero();
  double n0 = 1.0;
  double n3 = 1.0;
  double gamma = 0.0;
  double d = 1.0;
};

enum class Execution { serial, parallel };

struct EmbeddingOptions {
  int grid = 8;                    ///< multi-start grid is grid x grid over (φ0, φ3)
  double tol = 1e-12;              ///< max |r1|, |r2| of the returned state
  double min_relative_det = 1e-6;  ///< reject roots where the E0/E3 controller is singular
  Execution execution = Execution::parallel;
};

/// Chooses the reservoir phases φ0, φ3 so that j01 = 2Γn1 and j23 = 2Γn2 at t = 0
/// with J01 = d C13, J23 = d C02. Lowest multi-start index wins. Throws NoEmbedding.
four_mode::State embed_pt_state(const EmbeddingSpec& spec, const EmbeddingOptions& opts = {});

/// Controller scale d for which max(|J01|, |J23|) ≈ J12 on the embedded state.
double auto_controller_scale(EmbeddingSpec spec, double J12, const EmbeddingOptions& opts = {});

struct GroundStateOptions {
  double dtau = 0.0;              ///< imaginary-time step; 0 picks min(0.1/J12, 0.1/|c|)
  double tol = 1e-11;             ///< |H(ψ)ψ - μψ| at convergence
  long max_iterations = 2'000'000;
};

/// Lowest state of the Hermitian chain (unit norm, real, largest component positive).
/// c = 0: dense diagonalization. c != 0: normalized imaginary-time propagation.
four_mode::State hermitian_ground_state(const four_mode::Params& p,
                                        const GroundStateOptions& opts = {});

/// Chemical potential ⟨ψ|H(ψ)|ψ⟩ / ⟨ψ|ψ⟩.
double rayleigh_quotient(const four_mode::State& psi, const four_mode::Params& p);

}  // namespace ptfw::init
