#include "sigma/functional.hpp"

#include <cmath>

namespace sigma {

EnergyBreakdown energy(const MapField& phi, const SpinorField& psi) {
  require_tangent(phi, psi);
  EnergyBreakdown e;
  const RealField fx = forward_difference(phi.values(), Axis::x);
  const RealField fy = forward_difference(phi.values(), Axis::y);
  ScalarField grad2 = pointwise_norm2(fx);
  grad2 += pointwise_norm2(fy);
  e.dirichlet = 0.5 * integrate(grad2);

  if (!psi.is_zero()) {
    const ComplexField dpsi = twisted_dirac_unchecked(phi, psi.values());
    const cplx pair = inner(psi.values(), dpsi);
    const double scale = std::max(1.0, l2_norm(psi.values()) * l2_norm(dpsi));
    if (std::abs(pair.imag()) > 1e-10 * scale)
      throw ConstraintError("energy: spinor term has a non-negligible imaginary part");
    e.spinor = 0.5 * pair.real();
    e.curvature = -integrate(curvature_contraction(phi, psi)) / 12.0;
  }
  e.total = e.dirichlet + e.spinor + e.curvature;
  return e;
}

RealField spinor_coupling(const MapField& phi, const SpinorField& psi) {
  const int q = phi.q();
  RealField B(phi.grid(), q);
  if (psi.is_zero()) return B;
  const ComplexField d = dirac(psi.values());
  for (std::size_t p = 0; p < B.points(); ++p) {
    cplx n0 = 0.0, n1 = 0.0;
    for (int k = 0; k < q; ++k) {
      n0 += phi(p, k) * d(p, 2 * k);
      n1 += phi(p, k) * d(p, 2 * k + 1);
    }
    for (int i = 0; i < q; ++i)
      B(p, i) = -(std::conj(psi(p, i, 0)) * n0 + std::conj(psi(p, i, 1)) * n1).real();
  }
  return B;
}

ResidualPair el_residuals(const MapField& phi, const SpinorField& psi) {
  require_tangent(phi, psi);
  RealField lap = laplacian(phi.values());
  if (!psi.is_zero()) lap -= spinor_coupling(phi, psi);
  RealField map_res = project_tangent(phi, lap);

  SpinorField spin_res(phi.grid(), phi.q());
  if (!psi.is_zero()) {
    ComplexField r = twisted_dirac_unchecked(phi, psi.values());
    r.axpy(-1.0 / 3.0, curvature_cubic(phi, psi).values());
    spin_res = SpinorField(project_tangent(phi, r));
  }

  ResidualPair out{std::move(map_res), std::move(spin_res)};
  out.map_linf = linf_norm(out.map_residual);
  out.map_l2 = l2_norm(out.map_residual);
  out.spinor_linf = linf_norm(out.spinor_residual.values());
  out.spinor_l2 = l2_norm(out.spinor_residual.values());
  out.linf = std::max(out.map_linf, out.spinor_linf);
  out.l2 = std::sqrt(out.map_l2 * out.map_l2 + out.spinor_l2 * out.spinor_l2);
  return out;
}

}  // namespace sigma
