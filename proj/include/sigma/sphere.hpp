#pragma once

// Round sphere S^{q-1} in R^q: constrained field types, tangent projection,
// retraction and the constant-curvature tensor R(X,Y)Z = <Y,Z>X - <X,Z>Y.

#include <vector>

#include "sigma/calculus.hpp"

namespace sigma {

inline constexpr double kSphereTol = 1e-12;
inline constexpr double kTangencyTol = 1e-10;
inline constexpr double kTangencyPreTol = 1e-8;

class ConstraintError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unit-sphere valued map, q >= 3 components per point.
class MapField {
 public:
  /// Validates |phi| = 1 pointwise to `tol`.
  explicit MapField(RealField values, double tol = kSphereTol);

  const Grid2D& grid() const { return v_.grid(); }
  int q() const { return v_.ncomp(); }
  const RealField& values() const { return v_; }
  double operator()(std::size_t p, int i) const { return v_(p, i); }

  /// Largest | |phi| - 1 | over the grid.
  static double sphere_defect(const RealField& v);

 private:
  RealField v_;
};

/// Vector spinor: q complex 2-vectors per point, fiber index c = 2 i + s.
class SpinorField {
 public:
  SpinorField(Grid2D g, int q) : v_(g, 2 * q) { check_q(q); }
  explicit SpinorField(ComplexField values);

  const Grid2D& grid() const { return v_.grid(); }
  int q() const { return v_.ncomp() / 2; }
  const ComplexField& values() const { return v_; }
  ComplexField& values() { return v_; }
  cplx& operator()(std::size_t p, int i, int s) { return v_(p, 2 * i + s); }
  cplx operator()(std::size_t p, int i, int s) const { return v_(p, 2 * i + s); }

  bool is_zero() const;

 private:
  static void check_q(int q);
  ComplexField v_;
};

/// phi / |phi| pointwise; throws on a (near) zero vector.
MapField retract(const RealField& v);

/// v - <v, phi> phi pointwise.
RealField project_tangent(const MapField& phi, const RealField& v);
/// Projection on the R^q index of a spinor field.
ComplexField project_tangent(const MapField& phi, const ComplexField& psi);
SpinorField project_tangent(const MapField& phi, const SpinorField& psi);

/// max_x |sum_i phi^i psi^i| (C^2 norm).
double tangency_defect(const MapField& phi, const ComplexField& psi);
double tangency_defect(const MapField& phi, const SpinorField& psi);
/// max_x |<v, phi>|.
double tangency_defect(const MapField& phi, const RealField& v);

void require_tangent(const MapField& phi, const SpinorField& psi, double tol = kTangencyPreTol);

/// R(X,Y)Z on real tangent vectors at a point of the sphere.
std::vector<double> curvature_apply(std::span<const double> at, std::span<const double> x,
                                    std::span<const double> y, std::span<const double> z);

/// R(X,Y) applied to a spinor fiber (C^2 (x) R^q): (R psi)^i = <Y,psi> X^i - <X,psi> Y^i.
void curvature_apply_spinor(std::span<const double> x, std::span<const double> y,
                            std::span<const cplx> psi, std::span<cplx> out);

/// Pointwise contraction R_ijkl <psi^i,psi^k><psi^j,psi^l> for one fiber.
double curvature_contraction_fiber(std::span<const cplx> psi, int q);
/// R(psi,psi)psi for one fiber: S psi^i - sum_j <psi^j,psi^i> psi^j.
void curvature_cubic_fiber(std::span<const cplx> psi, int q, std::span<cplx> out);

/// Throws ConstraintError when the discrete contraction's imaginary part
/// exceeds 1e-12 relative to |psi|^4 (see the complex evaluation below).
ScalarField curvature_contraction(const MapField& phi, const SpinorField& psi);
/// R(psi,psi)psi as a spinor field (tangent along phi).
SpinorField curvature_cubic(const MapField& phi, const SpinorField& psi);

}  // namespace sigma
