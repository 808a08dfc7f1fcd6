#include <gtest/gtest.h>

#include <random>

#include "sigma/sphere.hpp"
#include "support.hpp"

using namespace sigma;
using namespace sigma::testing;

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// <psi^a, psi^b> on C^2 blocks
cplx herm(std::span<const cplx> f, int a, int b) {
  return std::conj(f[2 * a]) * f[2 * b] + std::conj(f[2 * a + 1]) * f[2 * b + 1];
}

}  // namespace

TEST(MapField, RejectsOffSphereValues) {
  const Grid2D g(8);
  RealField v(g, 3);
  for (std::size_t p = 0; p < g.size(); ++p) v(p, 2) = 1.0;
  EXPECT_NO_THROW(MapField{v});
  v(5, 2) = 1.0 + 1e-9;
  EXPECT_THROW(MapField{v}, ConstraintError);
  EXPECT_THROW(MapField(RealField(g, 2, 0.5)), std::invalid_argument);
}

TEST(Retract, NormalizesPointwise) {
  const Grid2D g(16);
  RealField v = random_smooth_field(g, 4, 3, 2);
  for (std::size_t p = 0; p < g.size(); ++p) v(p, 0) += 2.0;
  const MapField phi = retract(v);
  EXPECT_LT(MapField::sphere_defect(phi.values()), 1e-15);
  for (std::size_t p = 0; p < g.size(); ++p) {
    double n = 0.0;
    for (int c = 0; c < 4; ++c) n += v(p, c) * v(p, c);
    for (int c = 0; c < 4; ++c) EXPECT_NEAR(phi(p, c), v(p, c) / std::sqrt(n), 1e-15);
  }
  EXPECT_THROW(retract(RealField(g, 3, 0.0)), ConstraintError);
}

TEST(ProjectTangent, NormalDirectionVanishes) {
  const MapField phi = random_map(Grid2D(16), 3, 3, 1);
  EXPECT_LT(linf_norm(project_tangent(phi, phi.values())), 1e-15);
}

TEST(ProjectTangent, TangentVectorsAreFixedAndProjectionIsIdempotent) {
  for (std::uint64_t s = 1; s <= 10; ++s) {
    const MapField phi = random_map(Grid2D(16), 3 + int(s % 3), 3, s);
    const RealField v = random_smooth_field(phi.grid(), phi.q(), 3, s + 11);
    const RealField pv = project_tangent(phi, v);
    EXPECT_LT(tangency_defect(phi, pv), 1e-14);
    EXPECT_LT(max_abs_diff(project_tangent(phi, pv), pv), 1e-14);
    const SpinorField psi = random_tangent_spinor(phi, 3, s + 13);
    EXPECT_LT(tangency_defect(phi, psi), 1e-14);
    EXPECT_LT(max_abs_diff(project_tangent(phi, psi).values(), psi.values()), 1e-14);
  }
}

TEST(RequireTangent, ThrowsOnNonTangentSpinor) {
  const MapField phi = random_map(Grid2D(16), 3, 3, 4);
  SpinorField psi(phi.grid(), 3);
  for (std::size_t p = 0; p < phi.grid().size(); ++p)
    for (int i = 0; i < 3; ++i) psi(p, i, 0) = phi(p, i);
  EXPECT_THROW(require_tangent(phi, psi), ConstraintError);
}

TEST(SpinorField, RequiresEvenFiberAndQAtLeastThree) {
  const Grid2D g(8);
  EXPECT_THROW(SpinorField(g, 2), std::invalid_argument);
  EXPECT_THROW(SpinorField(ComplexField(g, 7)), std::invalid_argument);
  EXPECT_TRUE(SpinorField(g, 3).is_zero());
}

TEST(Curvature, AntisymmetricAndUnitSectional) {
  std::mt19937_64 rng(5);
  for (int q : {3, 4, 6}) {
    for (int t = 0; t < 20; ++t) {
      const auto p = random_unit(q, rng);
      const auto X = random_tangent_at(p, rng), Z = random_tangent_at(p, rng);
      for (double v : curvature_apply(p, X, X, Z)) EXPECT_NEAR(v, 0.0, 1e-14);
      // orthonormal pair from Gram-Schmidt
      auto e1 = X;
      const double n1 = std::sqrt(dot(e1, e1));
      for (auto& v : e1) v /= n1;
      auto e2 = Z;
      for (int pass = 0; pass < 2; ++pass) {  // second pass restores orthogonality lost to rounding
        const double d = dot(e2, e1);
        for (std::size_t i = 0; i < e2.size(); ++i) e2[i] -= d * e1[i];
      }
      const double n2 = std::sqrt(dot(e2, e2));
      for (auto& v : e2) v /= n2;
      const auto r = curvature_apply(p, e1, e2, e2);
      for (std::size_t i = 0; i < r.size(); ++i) EXPECT_NEAR(r[i], e1[i], 1e-14);
    }
  }
}

TEST(Curvature, FirstBianchiIdentity) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 100; ++t) {
    const int q = 3 + t % 4;
    const auto p = random_unit(q, rng);
    const auto X = random_tangent_at(p, rng), Y = random_tangent_at(p, rng), Z = random_tangent_at(p, rng);
    const auto a = curvature_apply(p, X, Y, Z), b = curvature_apply(p, Y, Z, X), c = curvature_apply(p, Z, X, Y);
    for (int i = 0; i < q; ++i) EXPECT_NEAR(a[i] + b[i] + c[i], 0.0, 1e-13);
  }
}

TEST(Curvature, ContractionVanishesForZeroAndSingleComponent) {
  const MapField phi = random_map(Grid2D(12), 3, 2, 3);
  EXPECT_EQ(linf_norm(curvature_contraction(phi, SpinorField(phi.grid(), 3))), 0.0);

  // constant map e3 with psi only in the e1 slot
  RealField v(Grid2D(12), 3);
  for (std::size_t p = 0; p < v.points(); ++p) v(p, 2) = 1.0;
  const MapField north(v);
  SpinorField psi(north.grid(), 3);
  for (std::size_t p = 0; p < v.points(); ++p) psi(p, 0, 0) = cplx(0.3, -1.2), psi(p, 0, 1) = cplx(2.0, 0.1);
  EXPECT_LT(linf_norm(curvature_contraction(north, psi)), 1e-14);
}

TEST(Curvature, ContractionMatchesFourIndexSum) {
  for (std::uint64_t s = 1; s <= 4; ++s) {
    const int q = 3 + int(s % 2);
    const MapField phi = random_map(Grid2D(12), q, 2, s);
    const SpinorField psi = random_tangent_spinor(phi, 2, s + 30);
    const ScalarField Q = curvature_contraction(phi, psi);
    for (std::size_t p = 0; p < phi.grid().size(); ++p) {
      // R_ijkl = <R(E_i, E_j) E_l, E_k> with E_i the projected ambient basis
      std::vector<double> at(q);
      for (int i = 0; i < q; ++i) at[i] = phi(p, i);
      std::vector<std::vector<double>> E(q, std::vector<double>(q));
      for (int i = 0; i < q; ++i)
        for (int k = 0; k < q; ++k) E[i][k] = (i == k) - at[i] * at[k];
      const auto f = psi.values().fiber(p);
      cplx sum = 0.0;
      for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j)
          for (int l = 0; l < q; ++l) {
            const auto r = curvature_apply(at, E[i], E[j], E[l]);
            for (int k = 0; k < q; ++k) sum += dot(r, E[k]) * herm(f, i, k) * herm(f, j, l);
          }
      EXPECT_NEAR(sum.imag(), 0.0, 1e-12);
      EXPECT_NEAR(Q(p, 0), sum.real(), 1e-12 * std::max(1.0, std::abs(sum.real())));
    }
  }
}

TEST(Curvature, CubicTermPairsToContraction) {
  const MapField phi = random_map(Grid2D(16), 4, 3, 8);
  const SpinorField psi = random_tangent_spinor(phi, 3, 9);
  const SpinorField c = curvature_cubic(phi, psi);
  const ScalarField Q = curvature_contraction(phi, psi);
  EXPECT_LT(tangency_defect(phi, c), 1e-12);
  for (std::size_t p = 0; p < phi.grid().size(); ++p) {
    cplx pair = 0.0;
    const auto a = psi.values().fiber(p), b = c.values().fiber(p);
    for (int k = 0; k < 8; ++k) pair += std::conj(a[k]) * b[k];
    EXPECT_NEAR(pair.real(), Q(p, 0), 1e-12 * std::max(1.0, Q(p, 0)));
    EXPECT_NEAR(pair.imag(), 0.0, 1e-12 * std::max(1.0, Q(p, 0)));
  }
}

TEST(Curvature, SpinorActionMatchesVectorFormula) {
  std::mt19937_64 rng(12);
  const auto p = random_unit(3, rng);
  const auto X = random_tangent_at(p, rng), Y = random_tangent_at(p, rng);
  std::vector<cplx> psi(6), out(6);
  std::normal_distribution<double> nd;
  for (auto& z : psi) z = {nd(rng), nd(rng)};
  curvature_apply_spinor(X, Y, psi, out);
  for (int s = 0; s < 2; ++s) {
    cplx yp = 0.0, xp = 0.0;
    for (int i = 0; i < 3; ++i) yp += Y[i] * psi[2 * i + s], xp += X[i] * psi[2 * i + s];
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(std::abs(out[2 * i + s] - (yp * X[i] - xp * Y[i])), 0.0, 1e-14);
  }
}
