#pragma once

// Generators shared by the unit and acceptance tests.

#include <cstdint>
#include <random>

#include "sigma/solver.hpp"

namespace sigma::testing {

inline ComplexField random_complex(const Grid2D& g, int ncomp, int bandwidth, std::uint64_t seed) {
  const RealField re = random_smooth_field(g, ncomp, bandwidth, seed);
  const RealField im = random_smooth_field(g, ncomp, bandwidth, seed ^ 0x9e3779b97f4a7c15ULL);
  ComplexField out(g, ncomp);
  for (std::size_t k = 0; k < out.data().size(); ++k) out.data()[k] = {re.data()[k], im.data()[k]};
  return out;
}

inline MapField random_map(const Grid2D& g, int q, int bandwidth, std::uint64_t seed, double amp = 0.6) {
  RealField v = random_smooth_field(g, q, bandwidth, seed);
  v *= amp;
  for (std::size_t p = 0; p < g.size(); ++p) v(p, 2) += 1.0;  // keeps |v| away from 0
  return retract(v);
}

inline SpinorField random_tangent_spinor(const MapField& phi, int bandwidth, std::uint64_t seed, double amp = 1.0) {
  ComplexField c = random_complex(phi.grid(), 2 * phi.q(), bandwidth, seed);
  c *= amp;
  return SpinorField(project_tangent(phi, c));
}

inline RealField random_tangent_vector(const MapField& phi, int bandwidth, std::uint64_t seed) {
  return project_tangent(phi, random_smooth_field(phi.grid(), phi.q(), bandwidth, seed));
}

/// Arbitrary tangent vector at a unit point p of R^q.
inline std::vector<double> random_tangent_at(const std::vector<double>& p, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  std::vector<double> v(p.size());
  double d = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = nd(rng);
    d += v[i] * p[i];
  }
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= d * p[i];
  return v;
}

inline std::vector<double> random_unit(int q, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  std::vector<double> v(std::size_t(q), 0.0);
  double n2 = 0.0;
  for (auto& x : v) {
    x = nd(rng);
    n2 += x * x;
  }
  for (auto& x : v) x /= std::sqrt(n2);
  return v;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

inline double max_abs_diff(const RealField& a, const RealField& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k) m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
  return m;
}

inline double max_abs_diff(const ComplexField& a, const ComplexField& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k) m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
  return m;
}

struct VariationalSample {
  double fd = 0.0;        // central difference of the energy
  double predicted = 0.0; // -<map_residual, v> + Re <spinor_residual, chi>
  double rel = 0.0;
};

/// Central difference of the energy along phi_e = retract(phi + e v),
/// psi_e = P_{phi_e}(psi + e chi), against the residual pairing.
inline VariationalSample variational_sample(const MapField& phi, const SpinorField& psi, const RealField& v,
                                            const ComplexField& chi, const ResidualPair& res, double eps = 1e-5) {
  auto at = [&](double e) {
    RealField pv = phi.values();
    pv.axpy(e, v);
    const MapField pe = retract(pv);
    ComplexField se = psi.values();
    se.axpy(cplx(e), chi);
    return energy(pe, SpinorField(project_tangent(pe, se))).total;
  };
  VariationalSample s;
  s.fd = (at(eps) - at(-eps)) / (2.0 * eps);
  s.predicted = -inner(res.map_residual, v) + inner(res.spinor_residual.values(), chi).real();
  s.rel = std::abs(s.fd - s.predicted) / std::max(std::abs(s.predicted), 1e-300);
  return s;
}

}  // namespace sigma::testing
