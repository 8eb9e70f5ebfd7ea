#pragma once

// Frozen-Gaussian reduction of the four-beam optical trap onto the four-mode
// matrix elements, and the inverse map used to translate controller output
// into trap depths and well displacements.
//
// Everything here is dimensionless: lengths in l (distance of the middle
// wells), energies in E_l = ħ²/(m l²), times in t_l = ħ/E_l, so ħ = m = 1.

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "ptfourwell/four_mode.hpp"

namespace ptfw::physical {

/// SI constants of the condensate.
struct PhysicalConstants {
  double mass = 0.0;               ///< kg
  double scattering_length = 0.0;  ///< m
  double particle_number = 0.0;
  double hbar = 1.054571817e-34;   ///< J s

  /// ⁸⁷Rb with a scattering length given in Bohr radii.
  static PhysicalConstants rubidium87(double particle_number, double scattering_length_bohr);
};

inline constexpr double kBohrRadius = 5.29177210903e-11;      // m
inline constexpr double kAtomicMassUnit = 1.66053906660e-27;  // kg
inline constexpr double kRubidium87Mass = 86.909180527;       // u
inline constexpr double kPlanck = 6.62607015e-34;             // J s

struct PhysicalUnits {
  double length = 0.0;  ///< l, m
  double energy = 0.0;  ///< E_l = ħ²/(m l²), J
  double time = 0.0;    ///< t_l = ħ/E_l, s
};

PhysicalUnits physical_units(double l, const PhysicalConstants& constants);

/// N a_s / l, the only combination of constants entering c.
double reduced_interaction(const PhysicalConstants& constants, double l);

struct TrapGeometry {
  std::array<double, 4> depth{};     ///< V_i < 0
  std::array<double, 4> position{};  ///< s_z^i
  double wx = 4.0;
  double wy = 4.0;
  double wz = 0.5;
};

/// Wells at -3/2 + δ0, -1/2, 1/2, 3/2 + δ3.
TrapGeometry lattice_trap(double v_outer0, double v_middle, double v_outer3, double wx, double wy,
                          double wz, double delta0 = 0.0, double delta3 = 0.0);

double delta0_of(const TrapGeometry& trap);
double delta3_of(const TrapGeometry& trap);

struct GaussianAnsatz {
  double Ax = 1.0;
  double Ay = 1.0;
  double Az = 1.0;
  std::array<double, 4> center{};  ///< pinned to the well positions
};

GaussianAnsatz pinned_ansatz(const TrapGeometry& trap, double Ax, double Ay, double Az);

/// Widths of the harmonic approximation to the middle wells.
std::array<double, 3> harmonic_width_guess(const TrapGeometry& trap);

/// β = sqrt(A w² / (1 + A w²))
double width_factor(double A, double w);

/// γ = exp(-A_z Δq² / 2)
double overlap_factor(double Az, double dq);

/// Nearest-neighbour tunneling between packets at distance dq in wells of depth Vl, Vk.
double pair_tunneling(double Vl, double Vk, double dq, const GaussianAnsatz& a,
                      const TrapGeometry& trap);

struct ModeElements {
  std::array<double, 4> E{};
  std::array<double, 3> J{};  ///< J01, J12, J23
  double c = 0.0;
};

ModeElements matrix_elements(const TrapGeometry& trap, const GaussianAnsatz& ansatz,
                             double interaction);

/// Mean of the middle on-site energies; the four-mode model measures E0, E3 from here.
double energy_reference(const ModeElements& m);

/// Four-mode parameters with E1 = E2 = 0.
four_mode::Params to_four_mode(const ModeElements& m, double d);

/// ⟨ψ|H_lin|ψ⟩ + (c/2) Σ|ψk|⁴ for the normalized amplitudes.
double mean_field_energy(const TrapGeometry& trap, const GaussianAnsatz& ansatz,
                         double interaction, const Eigen::Vector4cd& amplitudes);

struct WidthOptimum {
  GaussianAnsatz ansatz;
  double energy = 0.0;
  Eigen::Vector4cd amplitudes = Eigen::Vector4cd::Zero();
  int iterations = 0;
};

struct WidthOptions {
  double rel_diameter = 1e-10;
  int max_iterations = 4000;
};

/// Minimizes the mean-field energy over (A_x, A_y, A_z) with the amplitudes set to the
/// ground state at every evaluation. Widths are optimized in log space. Throws NonConvergence.
WidthOptimum optimize_widths(const TrapGeometry& trap, double interaction,
                             const std::array<double, 3>& initial, const WidthOptions& opts = {});

/// Four-mode controller output to realize: on-site energies relative to the reference.
struct OuterTargets {
  double E0 = 0.0;
  double E3 = 0.0;
  double J01 = 0.0;
  double J23 = 0.0;
};

struct TrapSolution {
  double V0 = 0.0;
  double V3 = 0.0;
  double delta0 = 0.0;
  double delta3 = 0.0;
};

struct InversionOptions {
  double tol = 1e-10;  ///< relative residual
  int grid = 5;        ///< multi-start grid per outer well
  double max_shift = 0.5;  ///< roots with |δ| above this (in l) are rejected
};

/// Solves (V0, δ0) from (E0, J01) and (V3, δ3) from (E3, J23) with the middle wells,
/// widths and energy reference held fixed. Throws OutOfRange when no root with V < 0 and
/// |δ| <= max_shift exists.
TrapSolution invert_trap_parameters(const OuterTargets& targets, const TrapGeometry& reference,
                                    const GaussianAnsatz& widths, double energy_ref,
                                    const InversionOptions& opts = {});

/// Forward map restricted to the outer wells; inverse of invert_trap_parameters.
OuterTargets outer_targets(const TrapSolution& s, const TrapGeometry& reference,
                           const GaussianAnsatz& widths, double energy_ref);

enum class Execution { serial, openmp };

/// Inverts a whole controller time series. The OpenMP path splits samples across threads;
/// results are identical to the serial path.
std::vector<TrapSolution> invert_trap_series(const std::vector<OuterTargets>& series,
                                             const TrapGeometry& reference,
                                             const GaussianAnsatz& widths, double energy_ref,
                                             Execution execution = Execution::openmp,
                                             const InversionOptions& opts = {});

}  // namespace ptfw::physical
