#pragma once

// Curvature-term energy of a (map, spinor) pair and its Euler-Lagrange residuals.
//
// Discrete energy:
//   dirichlet = 1/2 sum |D+ phi|^2 h^2            (forward differences)
//   spinor    = 1/2 Re sum <psi, P dirac psi> h^2
//   curvature = -1/12 sum Q(psi) h^2,  Q = R_ijkl <psi^i,psi^k><psi^j,psi^l>
// With forward differences in the Dirichlet term, P(lap5 phi) is its exact
// discrete gradient, so the residuals below are exact first variations.

#include "sigma/clifford.hpp"

namespace sigma {

struct EnergyBreakdown {
  double dirichlet = 0.0;
  double spinor = 0.0;
  double curvature = 0.0;
  double total = 0.0;
};

struct ResidualPair {
  RealField map_residual;
  SpinorField spinor_residual;
  double map_linf = 0.0, map_l2 = 0.0;
  double spinor_linf = 0.0, spinor_l2 = 0.0;
  double linf = 0.0;  // max of the two
  double l2 = 0.0;    // sqrt of the summed squares
};

EnergyBreakdown energy(const MapField& phi, const SpinorField& psi);

/// Map-equation coupling term B with B^i = -Re <psi^i, sum_k phi^k (dirac psi)^k>.
/// Equals the pairing R(e_a . psi, psi) dphi(e_a)/2 up to discretization.
RealField spinor_coupling(const MapField& phi, const SpinorField& psi);

/// map_residual = P(lap phi) - P(B); spinor_residual = D psi - R(psi,psi)psi / 3.
/// First variation along phi_e = retract(phi + e v), psi_e = P_{phi_e}(psi + e chi):
///   dE = -<map_residual, v> + Re <spinor_residual, chi>.
ResidualPair el_residuals(const MapField& phi, const SpinorField& psi);

}  // namespace sigma
