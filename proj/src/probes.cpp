#include <algorithm>
#include <cmath>
#include <limits>

#include "sigma/estimates.hpp"

namespace sigma {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Re <a, M b> over all C^2 blocks.
double re_pair(const Mat2& M, std::span<const cplx> a, std::span<const cplx> b) {
  cplx s = 0.0;
  for (std::size_t k = 0; k + 1 < a.size(); k += 2) {
    const cplx m0 = M[0][0] * b[k] + M[0][1] * b[k + 1];
    const cplx m1 = M[1][0] * b[k] + M[1][1] * b[k + 1];
    s += std::conj(a[k]) * m0 + std::conj(a[k + 1]) * m1;
  }
  return s.real();
}

Mat2 combo(double u, const Mat2& a, double v, const Mat2& b) {
  Mat2 c{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c[i][j] = u * a[i][j] + v * b[i][j];
  return c;
}

// Spinor-tangent projection of one fiber along a unit vector.
void project_fiber(std::span<const double> phi, std::vector<cplx>& v) {
  const std::size_t q = phi.size();
  for (int s = 0; s < 2; ++s) {
    cplx d = 0.0;
    for (std::size_t i = 0; i < q; ++i) d += phi[i] * v[2 * i + s];
    for (std::size_t i = 0; i < q; ++i) v[2 * i + s] -= phi[i] * d;
  }
}

double rel_mismatch(double a, double b) {
  const double den = std::max({std::abs(a), std::abs(b), 1e-14});
  return std::abs(a - b) / den;
}

}  // namespace

HopfResult hopf_differential(const MapField& phi, const SpinorField& psi) {
  require_tangent(phi, psi);
  const Grid2D& g = phi.grid();
  const int q = phi.q();
  const RealField px = derivative(phi.values(), Axis::x);
  const RealField py = derivative(phi.values(), Axis::y);
  ComplexField T(g, 1);
  for (std::size_t p = 0; p < g.size(); ++p) {
    const double xx = dot(px.fiber(p), px.fiber(p)), yy = dot(py.fiber(p), py.fiber(p));
    const double xy = dot(px.fiber(p), py.fiber(p));
    T(p, 0) = cplx(xx - yy, -2.0 * xy);
  }
  if (!psi.is_zero()) {
    const Mat2& g1 = default_clifford().gamma1();
    const ComplexField nx = project_tangent(phi, derivative(psi.values(), Axis::x));
    const ComplexField ny = project_tangent(phi, derivative(psi.values(), Axis::y));
    for (std::size_t p = 0; p < g.size(); ++p) {
      const auto f = psi.values().fiber(p);
      const double a = re_pair(g1, f, nx.fiber(p));
      const double b = re_pair(g1, f, ny.fiber(p));
      const double Q = curvature_contraction_fiber(f, q);
      T(p, 0) += cplx(a - Q / 3.0, -b);
    }
  }
  ComplexField dbar = derivative(T, Axis::x);
  const ComplexField ty = derivative(T, Axis::y);
  for (std::size_t p = 0; p < g.size(); ++p) dbar(p, 0) = 0.5 * (dbar(p, 0) + cplx(0.0, 1.0) * ty(p, 0));
  const double defect = l2_norm(dbar);
  return {std::move(T), std::move(dbar), defect};
}

AuditReport polar_identity_audit(const MapField& phi, const SpinorField& psi, Point center,
                                 const std::vector<double>& radii, double tolerance, std::vector<PolarRow>* rows_out) {
  require_tangent(phi, psi);
  const Grid2D& g = phi.grid();
  const int q = phi.q();
  for (double r : radii)
    if (!(r > 0.0) || !(r + 2.0 * g.h() < 0.5))
      throw EstimateError("invalid-config", "polar radius violates the chart guard r + 2h < 1/2");

  const RealField px = derivative(phi.values(), Axis::x);
  const RealField py = derivative(phi.values(), Axis::y);
  const bool spin = !psi.is_zero();
  std::optional<ComplexField> sx, sy;
  if (spin) {
    sx = derivative(psi.values(), Axis::x);
    sy = derivative(psi.values(), Axis::y);
  }
  const Mat2& g1 = default_clifford().gamma1();
  const Mat2& g2 = default_clifford().gamma2();

  AuditReport rep;
  rep.name = "polar";
  rep.columns = {"r", "samples", "lhs", "rhs1", "rhs2", "mismatch1", "mismatch2", "mismatch12"};
  rep.tolerance = tolerance;
  double worst = -std::numeric_limits<double>::infinity();
  std::vector<PolarRow> rows;
  for (double r : radii) {
    const int m = std::max(64, int(std::ceil(8.0 * r / g.h())));
    const auto P = sample_circle(phi.values(), center, r, m);
    const auto PX = sample_circle(px, center, r, m);
    const auto PY = sample_circle(py, center, r, m);
    std::vector<std::vector<cplx>> S, SX, SY;
    if (spin) {
      S = sample_circle(psi.values(), center, r, m);
      SX = sample_circle(*sx, center, r, m);
      SY = sample_circle(*sy, center, r, m);
    }
    double L = 0.0, R1 = 0.0, R2 = 0.0;
    for (int j = 0; j < m; ++j) {
      const double th = 2.0 * M_PI * j / m;
      const double c = std::cos(th), s = std::sin(th);
      double phir2 = 0.0, phit2 = 0.0;  // |phi_r|^2, |phi_theta|^2 / r^2
      for (int i = 0; i < q; ++i) {
        const double a = PX[j][i], b = PY[j][i];
        phir2 += (c * a + s * b) * (c * a + s * b);
        phit2 += (-s * a + c * b) * (-s * a + c * b);
      }
      double term_r = 0.0, term_t = 0.0, Q = 0.0;
      if (spin) {
        std::vector<double> u(P[j]);
        const double nu = std::sqrt(dot(u, u));
        for (double& x : u) x /= nu;
        std::vector<cplx> f = S[j];
        project_fiber(u, f);
        std::vector<cplx> dr(f.size()), dt(f.size());
        for (std::size_t k = 0; k < f.size(); ++k) {
          dr[k] = c * SX[j][k] + s * SY[j][k];
          dt[k] = -s * SX[j][k] + c * SY[j][k];  // nabla_theta / r
        }
        project_fiber(u, dr);
        project_fiber(u, dt);
        term_r = re_pair(combo(c, g1, s, g2), f, dr);    // <psi, d_r . nabla_r psi>
        term_t = re_pair(combo(-s, g1, c, g2), f, dt);   // <psi, d_theta . nabla_theta psi> / r^2
        Q = curvature_contraction_fiber(f, q);
      }
      L += phit2;
      R1 += phir2 + term_r - (1.0 + s * s) * Q / 3.0;
      R2 += phir2 - term_t - s * s * Q / 3.0;
    }
    const double w = 2.0 * M_PI / m;
    PolarRow row{r, m, L * w, R1 * w, R2 * w, 0, 0, 0};
    row.mismatch1 = rel_mismatch(row.lhs, row.rhs1);
    row.mismatch2 = rel_mismatch(row.lhs, row.rhs2);
    row.mismatch12 = rel_mismatch(row.rhs1, row.rhs2);
    const double mm = std::max({row.mismatch1, row.mismatch2, row.mismatch12});
    if (mm > worst) {
      worst = mm;
      rep.location_r = r;
    }
    rep.rows.push_back({row.r, double(row.samples), row.lhs, row.rhs1, row.rhs2, row.mismatch1, row.mismatch2,
                        row.mismatch12});
    rows.push_back(row);
  }
  rep.worst_margin = radii.empty() ? 0.0 : -worst;
  rep.info["center_x"] = center.x;
  rep.info["center_y"] = center.y;
  rep.finalize();
  if (rows_out) *rows_out = std::move(rows);
  return rep;
}

EpsProbeReport epsilon_regularity_probe(const MapField& phi, const SpinorField& psi, const DiscRegion& D,
                                        const std::vector<double>& nested) {
  const Grid2D& g = phi.grid();
  const RealField px = derivative(phi.values(), Axis::x);
  const RealField py = derivative(phi.values(), Axis::y);
  ScalarField dphi2 = pointwise_norm2(px);
  dphi2 += pointwise_norm2(py);
  const ScalarField s = pointwise_norm2(psi.values());
  ScalarField psi4(g, 1);
  for (std::size_t p = 0; p < g.size(); ++p) psi4(p, 0) = s(p, 0) * s(p, 0);
  ScalarField nab2(g, 1);
  const bool spin = !psi.is_zero();
  if (spin) {
    for (Axis a : {Axis::x, Axis::y}) nab2 += pointwise_norm2(project_tangent(phi, derivative(psi.values(), a)));
  }

  EpsProbeReport out;
  out.energy = local_energy(phi, psi, D);
  const double l2D = std::sqrt(integrate(dphi2, D));
  const double l4D = std::pow(integrate(psi4, D), 0.25);
  const double denom1 = l2D + l4D * l4D;

  for (double f : nested) {
    if (!(f > 0.0) || f > 1.0) throw std::invalid_argument("epsilon probe: shrink factors must lie in (0, 1]");
    EpsProbeRow row;
    row.factor = f;
    row.radius = f * D.radius;
    const DiscRegion sub(D.center, row.radius);
    double sup2 = 0.0;
    for (std::size_t p = 0; p < g.size(); ++p)
      if (in_disc(g, p, sub)) sup2 = std::max(sup2, dphi2(p, 0));
    row.sup_dphi = std::sqrt(sup2);
    if (denom1 > 0.0) row.ratio1 = row.sup_dphi / denom1;

    // scaling form at |x| = s_r inside the half disc
    const double sr = 0.5 * row.radius;
    if (sr > 2.0 * g.h()) {
      const DiscRegion twice(D.center, 2.0 * sr);
      const double l2 = std::sqrt(integrate(dphi2, twice));
      const double l4 = std::pow(integrate(psi4, twice), 0.25);
      double best_map = 0.0, best_spin = 0.0;
      for (int j = 0; j < 16; ++j) {
        const double th = 2.0 * M_PI * j / 16;
        const Point x{D.center.x + sr * std::cos(th), D.center.y + sr * std::sin(th)};
        const double dp = std::sqrt(std::max(0.0, interpolate(dphi2, x)[0]));
        best_map = std::max(best_map, dp * sr);
        if (spin) {
          const double ps = std::sqrt(std::sqrt(std::max(0.0, interpolate(s, x)[0])));
          const double nb = std::sqrt(std::max(0.0, interpolate(nab2, x)[0]));
          best_spin = std::max(best_spin, ps * std::sqrt(sr) + nb * std::pow(sr, 1.5));
        }
      }
      if (l2 + l4 > 0.0) row.ratio_map = best_map / (l2 + l4);
      if (spin && l4 > 0.0) row.ratio_spin = best_spin / l4;
    }
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace sigma
