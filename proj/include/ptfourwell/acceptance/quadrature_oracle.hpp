#pragma once

// Brute-force check of the closed-form matrix elements: Gaussian overlap and
// Hamiltonian integrals by adaptive 1D quadrature, followed by exact
// symmetric orthogonalization of each adjacent pair.

#include "ptfourwell/physical_map.hpp"

namespace ptfw::acceptance {

struct PairElements {
  double E_left = 0.0;
  double E_right = 0.0;
  double J = 0.0;
  double overlap = 0.0;
};

/// Wells `left` and `left + 1`, only their own two trap beams in the potential.
PairElements quadrature_pair(const physical::TrapGeometry& trap,
                             const physical::GaussianAnsatz& ansatz, int left);

}  // namespace ptfw::acceptance
