#include "sigma/clifford.hpp"

#include <cmath>

namespace sigma {

Mat2 mat_mul(const Mat2& a, const Mat2& b) {
  Mat2 c{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return c;
}

Mat2 mat_add(const Mat2& a, const Mat2& b) {
  Mat2 c{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c[i][j] = a[i][j] + b[i][j];
  return c;
}

Mat2 mat_adjoint(const Mat2& a) {
  Mat2 c{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c[i][j] = std::conj(a[j][i]);
  return c;
}

double mat_dist(const Mat2& a, const Mat2& b) {
  double d = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) d = std::max(d, std::abs(a[i][j] - b[i][j]));
  return d;
}

namespace {

const cplx I{0.0, 1.0};

Mat2 standard_g1() { return {{{0.0, 1.0}, {-1.0, 0.0}}}; }
Mat2 standard_g2() { return {{{0.0, I}, {I, 0.0}}}; }

}  // namespace

CliffordRep::CliffordRep() : CliffordRep(standard_g1(), standard_g2()) {}

CliffordRep::CliffordRep(const Mat2& g1, const Mat2& g2) : g1_(g1), g2_(g2) {
  if (invariant_defect() != 0.0) throw std::invalid_argument("CliffordRep: Clifford relations violated");
}

double CliffordRep::invariant_defect() const {
  const Mat2 minus_id{{{-1.0, 0.0}, {0.0, -1.0}}};
  const Mat2 zero{};
  double d = 0.0;
  d = std::max(d, mat_dist(mat_mul(g1_, g1_), minus_id));
  d = std::max(d, mat_dist(mat_mul(g2_, g2_), minus_id));
  d = std::max(d, mat_dist(mat_add(mat_mul(g1_, g2_), mat_mul(g2_, g1_)), zero));
  d = std::max(d, mat_dist(mat_add(g1_, mat_adjoint(g1_)), zero));
  d = std::max(d, mat_dist(mat_add(g2_, mat_adjoint(g2_)), zero));
  return d;
}

const CliffordRep& default_clifford() {
  static const CliffordRep rep;
  return rep;
}

std::vector<cplx> clifford_mul(std::array<double, 2> X, std::span<const cplx> s, const CliffordRep& rep) {
  if (s.size() % 2 != 0) throw std::invalid_argument("clifford_mul: fiber length must be even");
  const Mat2& a = rep.gamma1();
  const Mat2& b = rep.gamma2();
  std::vector<cplx> out(s.size());
  for (std::size_t k = 0; k < s.size(); k += 2) {
    for (int r = 0; r < 2; ++r)
      out[k + r] = X[0] * (a[r][0] * s[k] + a[r][1] * s[k + 1]) + X[1] * (b[r][0] * s[k] + b[r][1] * s[k + 1]);
  }
  return out;
}

ComplexField apply_blocks(const Mat2& m, const ComplexField& psi) {
  ComplexField out(psi.grid(), psi.ncomp());
  const int q = psi.ncomp() / 2;
  for (std::size_t p = 0; p < psi.points(); ++p)
    for (int i = 0; i < q; ++i) {
      const cplx a = psi(p, 2 * i), b = psi(p, 2 * i + 1);
      out(p, 2 * i) = m[0][0] * a + m[0][1] * b;
      out(p, 2 * i + 1) = m[1][0] * a + m[1][1] * b;
    }
  return out;
}

ComplexField dirac(const ComplexField& psi, const CliffordRep& rep) {
  if (psi.ncomp() % 2 != 0) throw std::invalid_argument("dirac: fiber length must be even");
  ComplexField out(psi.grid(), psi.ncomp());
  kernels::omp::dirac(psi, rep.gamma1(), rep.gamma2(), out);
  return out;
}

SpinorField dirac(const SpinorField& psi, const CliffordRep& rep) { return SpinorField(dirac(psi.values(), rep)); }

SpinorField twisted_covariant_derivative(const MapField& phi, const SpinorField& psi, Axis axis) {
  require_tangent(phi, psi);
  return SpinorField(project_tangent(phi, derivative(psi.values(), axis)));
}

ComplexField twisted_dirac_unchecked(const MapField& phi, const ComplexField& psi, const CliffordRep& rep) {
  return project_tangent(phi, dirac(psi, rep));
}

SpinorField twisted_dirac(const MapField& phi, const SpinorField& psi, const CliffordRep& rep) {
  require_tangent(phi, psi);
  return SpinorField(twisted_dirac_unchecked(phi, psi.values(), rep));
}

SpinorField twisted_laplacian(const MapField& phi, const SpinorField& psi) {
  require_tangent(phi, psi);
  ComplexField acc(psi.grid(), psi.values().ncomp());
  for (Axis a : {Axis::x, Axis::y}) {
    const ComplexField d1 = project_tangent(phi, derivative(psi.values(), a));
    acc += project_tangent(phi, derivative(d1, a));
  }
  return SpinorField(std::move(acc));
}

SpinorField weitzenboeck_defect(const MapField& phi, const SpinorField& psi, const CliffordRep& rep) {
  require_tangent(phi, psi);
  const ComplexField d1 = twisted_dirac_unchecked(phi, psi.values(), rep);
  ComplexField out = twisted_dirac_unchecked(phi, d1, rep);
  out += twisted_laplacian(phi, psi).values();

  const RealField px = derivative(phi.values(), Axis::x);
  const RealField py = derivative(phi.values(), Axis::y);
  const Mat2 g12 = mat_mul(rep.gamma1(), rep.gamma2());
  const int q = phi.q();
  std::vector<cplx> rpsi(std::size_t(2 * q));
  for (std::size_t p = 0; p < psi.values().points(); ++p) {
    curvature_apply_spinor(px.fiber(p), py.fiber(p), psi.values().fiber(p), rpsi);
    for (int i = 0; i < q; ++i) {
      const cplx a = rpsi[2 * i], b = rpsi[2 * i + 1];
      out(p, 2 * i) -= g12[0][0] * a + g12[0][1] * b;
      out(p, 2 * i + 1) -= g12[1][0] * a + g12[1][1] * b;
    }
  }
  return SpinorField(std::move(out));
}

SpinorOpReport weitzenboeck_residual(const MapField& phi, const SpinorField& psi, const CliffordRep& rep) {
  const SpinorField d = weitzenboeck_defect(phi, psi, rep);
  return {linf_norm(d.values()), l2_norm(d.values()), phi.grid().n()};
}

}  // namespace sigma
