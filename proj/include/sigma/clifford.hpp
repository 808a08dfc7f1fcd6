#pragma once

// Clifford multiplication on C^2, the flat and twisted Dirac operators, and
// the discrete Weitzenboeck identity check.

#include <array>

#include "sigma/kernels.hpp"
#include "sigma/sphere.hpp"

namespace sigma {

Mat2 mat_mul(const Mat2& a, const Mat2& b);
Mat2 mat_add(const Mat2& a, const Mat2& b);
Mat2 mat_adjoint(const Mat2& a);
double mat_dist(const Mat2& a, const Mat2& b);  // max entry |a - b|

/// e1., e2. on the spinor fiber. The constructor checks gamma^2 = -I,
/// anticommutation and skew-adjointness, all exactly.
class CliffordRep {
 public:
  CliffordRep();
  CliffordRep(const Mat2& g1, const Mat2& g2);

  const Mat2& gamma(int alpha) const { return alpha == 1 ? g1_ : g2_; }
  const Mat2& gamma1() const { return g1_; }
  const Mat2& gamma2() const { return g2_; }

  /// Largest entry of g_a^2 + I, {g1,g2}, g_a + g_a^dagger.
  double invariant_defect() const;

 private:
  Mat2 g1_, g2_;
};

const CliffordRep& default_clifford();

/// (X1 g1 + X2 g2) s on each of the q complex 2-vectors in s.
std::vector<cplx> clifford_mul(std::array<double, 2> X, std::span<const cplx> s,
                               const CliffordRep& rep = default_clifford());

/// Apply a 2x2 matrix to every C^2 block of a spinor field.
ComplexField apply_blocks(const Mat2& m, const ComplexField& psi);

/// g1 d_x psi + g2 d_y psi with centered differences.
ComplexField dirac(const ComplexField& psi, const CliffordRep& rep = default_clifford());
SpinorField dirac(const SpinorField& psi, const CliffordRep& rep = default_clifford());

/// P_phi(d_axis psi). Requires psi tangent along phi.
SpinorField twisted_covariant_derivative(const MapField& phi, const SpinorField& psi, Axis axis);
/// sum_a g_a P d_a psi = P(dirac psi).
SpinorField twisted_dirac(const MapField& phi, const SpinorField& psi, const CliffordRep& rep = default_clifford());
/// Same operator without the tangency precondition (internal use on fields that
/// are tangent only up to roundoff of a previous projection).
ComplexField twisted_dirac_unchecked(const MapField& phi, const ComplexField& psi,
                                     const CliffordRep& rep = default_clifford());
/// sum_a nabla_a nabla_a psi.
SpinorField twisted_laplacian(const MapField& phi, const SpinorField& psi);

struct SpinorOpReport {
  double residual_linf = 0.0;
  double residual_l2 = 0.0;
  int grid_n = 0;
};

/// D^2 psi - ( -sum_a nabla_a nabla_a psi + g1 g2 R(phi_x, phi_y) psi ).
/// The scalar-curvature term of the domain vanishes on the flat torus.
SpinorField weitzenboeck_defect(const MapField& phi, const SpinorField& psi,
                                const CliffordRep& rep = default_clifford());
SpinorOpReport weitzenboeck_residual(const MapField& phi, const SpinorField& psi,
                                     const CliffordRep& rep = default_clifford());

}  // namespace sigma
