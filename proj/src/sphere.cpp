#include "sigma/sphere.hpp"

#include <cmath>
#include <string>

namespace sigma {

namespace {

cplx herm(std::span<const cplx> psi, int i, int j) {
  // <psi^i, psi^j> = psi^i^dagger psi^j on C^2
  return std::conj(psi[2 * i]) * psi[2 * j] + std::conj(psi[2 * i + 1]) * psi[2 * j + 1];
}

}  // namespace

MapField::MapField(RealField values, double tol) : v_(std::move(values)) {
  if (v_.ncomp() < 3) throw std::invalid_argument("MapField: q must be >= 3");
  for (double x : v_.data())
    if (!std::isfinite(x)) throw ConstraintError("MapField: non-finite value");
  const double d = sphere_defect(v_);
  if (d > tol) throw ConstraintError("MapField: sphere constraint violated, max ||phi|-1| = " + std::to_string(d));
}

double MapField::sphere_defect(const RealField& v) {
  double worst = 0.0;
  for (std::size_t p = 0; p < v.points(); ++p) {
    double s = 0.0;
    for (int c = 0; c < v.ncomp(); ++c) s += v(p, c) * v(p, c);
    worst = std::max(worst, std::abs(std::sqrt(s) - 1.0));
  }
  return worst;
}

void SpinorField::check_q(int q) {
  if (q < 3) throw std::invalid_argument("SpinorField: q must be >= 3");
}

SpinorField::SpinorField(ComplexField values) : v_(std::move(values)) {
  if (v_.ncomp() % 2 != 0) throw std::invalid_argument("SpinorField: fiber dimension must be 2q");
  check_q(v_.ncomp() / 2);
  for (const cplx& z : v_.data())
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw ConstraintError("SpinorField: non-finite value");
}

bool SpinorField::is_zero() const {
  for (const cplx& z : v_.data())
    if (z != cplx(0.0)) return false;
  return true;
}

MapField retract(const RealField& v) {
  RealField out(v.grid(), v.ncomp());
  for (std::size_t p = 0; p < v.points(); ++p) {
    double s = 0.0;
    for (int c = 0; c < v.ncomp(); ++c) s += v(p, c) * v(p, c);
    const double nrm = std::sqrt(s);
    if (!(nrm > 1e-12) || !std::isfinite(nrm)) throw ConstraintError("retract: vector too small or non-finite");
    for (int c = 0; c < v.ncomp(); ++c) out(p, c) = v(p, c) / nrm;
  }
  return MapField(std::move(out));
}

RealField project_tangent(const MapField& phi, const RealField& v) {
  phi.values().check_same(v);
  RealField out(v.grid(), v.ncomp());
  const int q = phi.q();
#pragma omp parallel for schedule(static)
  for (std::size_t p = 0; p < v.points(); ++p) {
    double d = 0.0;
    for (int i = 0; i < q; ++i) d += v(p, i) * phi(p, i);
    for (int i = 0; i < q; ++i) out(p, i) = v(p, i) - d * phi(p, i);
  }
  return out;
}

ComplexField project_tangent(const MapField& phi, const ComplexField& psi) {
  const int q = phi.q();
  if (psi.ncomp() != 2 * q || !(psi.grid() == phi.grid()))
    throw std::invalid_argument("project_tangent: spinor does not match map");
  ComplexField out(psi.grid(), psi.ncomp());
#pragma omp parallel for schedule(static)
  for (std::size_t p = 0; p < psi.points(); ++p) {
    for (int s = 0; s < 2; ++s) {
      cplx d = 0.0;
      for (int i = 0; i < q; ++i) d += phi(p, i) * psi(p, 2 * i + s);
      for (int i = 0; i < q; ++i) out(p, 2 * i + s) = psi(p, 2 * i + s) - phi(p, i) * d;
    }
  }
  return out;
}

SpinorField project_tangent(const MapField& phi, const SpinorField& psi) {
  return SpinorField(project_tangent(phi, psi.values()));
}

double tangency_defect(const MapField& phi, const ComplexField& psi) {
  const int q = phi.q();
  double worst = 0.0;
  for (std::size_t p = 0; p < psi.points(); ++p) {
    double n2 = 0.0;
    for (int s = 0; s < 2; ++s) {
      cplx d = 0.0;
      for (int i = 0; i < q; ++i) d += phi(p, i) * psi(p, 2 * i + s);
      n2 += std::norm(d);
    }
    worst = std::max(worst, std::sqrt(n2));
  }
  return worst;
}

double tangency_defect(const MapField& phi, const SpinorField& psi) { return tangency_defect(phi, psi.values()); }

double tangency_defect(const MapField& phi, const RealField& v) {
  double worst = 0.0;
  for (std::size_t p = 0; p < v.points(); ++p) {
    double d = 0.0;
    for (int i = 0; i < phi.q(); ++i) d += phi(p, i) * v(p, i);
    worst = std::max(worst, std::abs(d));
  }
  return worst;
}

void require_tangent(const MapField& phi, const SpinorField& psi, double tol) {
  if (!(psi.grid() == phi.grid()) || psi.q() != phi.q())
    throw std::invalid_argument("spinor and map live on different grids or targets");
  const double d = tangency_defect(phi, psi);
  if (d > tol) throw ConstraintError("spinor not tangent along map: defect " + std::to_string(d));
}

std::vector<double> curvature_apply(std::span<const double> at, std::span<const double> x,
                                    std::span<const double> y, std::span<const double> z) {
  (void)at;  // constant curvature: the tensor does not depend on the base point
  double yz = 0.0, xz = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    yz += y[i] * z[i];
    xz += x[i] * z[i];
  }
  std::vector<double> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = yz * x[i] - xz * y[i];
  return out;
}

void curvature_apply_spinor(std::span<const double> x, std::span<const double> y,
                            std::span<const cplx> psi, std::span<cplx> out) {
  const std::size_t q = x.size();
  for (int s = 0; s < 2; ++s) {
    cplx ypsi = 0.0, xpsi = 0.0;
    for (std::size_t i = 0; i < q; ++i) {
      ypsi += y[i] * psi[2 * i + s];
      xpsi += x[i] * psi[2 * i + s];
    }
    for (std::size_t i = 0; i < q; ++i) out[2 * i + s] = ypsi * x[i] - xpsi * y[i];
  }
}

double curvature_contraction_fiber(std::span<const cplx> psi, int q) {
  double S = 0.0;
  for (int i = 0; i < q; ++i) S += herm(psi, i, i).real();
  double off = 0.0;
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) off += std::norm(herm(psi, i, j));
  return S * S - off;
}

void curvature_cubic_fiber(std::span<const cplx> psi, int q, std::span<cplx> out) {
  double S = 0.0;
  for (int i = 0; i < q; ++i) S += herm(psi, i, i).real();
  for (int i = 0; i < q; ++i) {
    cplx o0 = S * psi[2 * i], o1 = S * psi[2 * i + 1];
    for (int j = 0; j < q; ++j) {
      const cplx m = herm(psi, j, i);
      o0 -= m * psi[2 * j];
      o1 -= m * psi[2 * j + 1];
    }
    out[2 * i] = o0;
    out[2 * i + 1] = o1;
  }
}

ScalarField curvature_contraction(const MapField& phi, const SpinorField& psi) {
  require_tangent(phi, psi);
  const int q = psi.q();
  ScalarField out(psi.grid(), 1);
  const ComplexField& v = psi.values();
  for (std::size_t p = 0; p < v.points(); ++p) {
    const auto f = v.fiber(p);
    // complex evaluation of the 4-index sum; its imaginary part is roundoff
    cplx full = 0.0;
    double scale = 0.0;
    for (int i = 0; i < q; ++i) {
      scale += herm(f, i, i).real();
      for (int j = 0; j < q; ++j) full += herm(f, i, i) * herm(f, j, j) - herm(f, i, j) * herm(f, j, i);
    }
    if (std::abs(full.imag()) > 1e-12 * std::max(1.0, scale * scale))
      throw ConstraintError("curvature_contraction: imaginary part above tolerance");
    out(p, 0) = curvature_contraction_fiber(f, q);
  }
  return out;
}

SpinorField curvature_cubic(const MapField& phi, const SpinorField& psi) {
  require_tangent(phi, psi);
  SpinorField out(psi.grid(), psi.q());
  const int q = psi.q();
  for (std::size_t p = 0; p < psi.values().points(); ++p)
    curvature_cubic_fiber(psi.values().fiber(p), q, out.values().fiber(p));
  return out;
}

}  // namespace sigma
