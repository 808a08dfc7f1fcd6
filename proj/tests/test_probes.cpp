#include <gtest/gtest.h>

#include "sigma/estimates.hpp"
#include "support.hpp"

using namespace sigma;
using namespace sigma::testing;

namespace {

FieldPair seeded(SeedKind k, int n, int wind = 1) {
  SeedSpec s;
  s.kind = k;
  s.k = wind;
  return seed(s, Grid2D(n), 3);
}

const std::vector<double> kRadii{0.10, 0.15, 0.20};

}  // namespace

TEST(Hopf, ConstantMapHasZeroDifferential) {
  const FieldPair f = seeded(SeedKind::constant, 16);
  const HopfResult h = hopf_differential(f.phi, f.psi);
  EXPECT_EQ(linf_norm(h.T), 0.0);
  EXPECT_EQ(h.defect_l2, 0.0);
}

TEST(Hopf, GeodesicHasConstantDifferential) {
  for (int k : {1, 2, 3}) {
    const FieldPair f = seeded(SeedKind::geodesic, 64, k);
    const HopfResult h = hopf_differential(f.phi, f.psi);
    const double exact = 4.0 * M_PI * M_PI * k * k;
    const double kh = 2.0 * M_PI * k / 64.0;
    for (std::size_t p = 0; p < h.T.points(); ++p) {
      EXPECT_NEAR(h.T(p, 0).real(), exact, exact * kh * kh / 3.0);
      EXPECT_NEAR(h.T(p, 0).imag(), 0.0, 1e-10);
    }
    EXPECT_LT(h.defect_l2, 1e-10);
  }
}

TEST(Hopf, ConformalMapHasSmallDefectUnderRefinement) {
  // the elliptic seed is conformal, so T vanishes in the continuum
  double prev = 0.0;
  for (int n : {32, 64, 128}) {
    const FieldPair f = seeded(SeedKind::elliptic, n);
    const double d = hopf_differential(f.phi, f.psi).defect_l2;
    if (prev > 0.0) {
      EXPECT_GE(prev / d, 3.0) << n;
    }
    prev = d;
  }
}

TEST(Polar, ConstantMapBothSidesZero) {
  const FieldPair f = seeded(SeedKind::constant, 32);
  std::vector<PolarRow> rows;
  const AuditReport r = polar_identity_audit(f.phi, f.psi, {0.5, 0.5}, kRadii, 1e-12, &rows);
  EXPECT_TRUE(r.pass);
  for (const auto& row : rows) {
    EXPECT_EQ(row.lhs, 0.0);
    EXPECT_EQ(row.rhs1, 0.0);
    EXPECT_EQ(row.rhs2, 0.0);
  }
}

TEST(Polar, GeodesicSatisfiesIdentity) {
  // |phi_r|^2 and |phi_theta|^2 / r^2 have equal circle averages for a geodesic
  // along x: the angular weights cos^2 and sin^2 integrate to the same value
  const FieldPair f = seeded(SeedKind::geodesic, 64);
  std::vector<PolarRow> rows;
  const AuditReport r = polar_identity_audit(f.phi, f.psi, {0.5, 0.5}, kRadii, 5.0 / 64.0, &rows);
  EXPECT_TRUE(r.pass);
  EXPECT_LT(-r.worst_margin, 1e-3);
  for (const auto& row : rows) EXPECT_NEAR(row.lhs, 4.0 * M_PI * M_PI * M_PI, 0.01 * 4.0 * M_PI * M_PI * M_PI);
}

TEST(Polar, RadialTwistIsFlagged) {
  const FieldPair f = seeded(SeedKind::radial_twist, 64);
  const double tol = 5.0 / 64.0;
  const AuditReport r = polar_identity_audit(f.phi, f.psi, {0.5, 0.5}, kRadii, tol);
  EXPECT_FALSE(r.pass);
  EXPECT_GT(-r.worst_margin, 10.0 * tol);
}

TEST(Polar, RejectsRadiusOutsideChart) {
  const FieldPair f = seeded(SeedKind::constant, 32);
  EXPECT_THROW(polar_identity_audit(f.phi, f.psi, {0.5, 0.5}, {0.48}, 1.0), EstimateError);
}

TEST(Polar, CoupledFieldsEvaluateAllForms) {
  const MapField phi = random_map(Grid2D(32), 3, 3, 3);
  const SpinorField psi = random_tangent_spinor(phi, 3, 4);
  std::vector<PolarRow> rows;
  polar_identity_audit(phi, psi, {0.5, 0.5}, kRadii, 1.0, &rows);
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& row : rows) {
    EXPECT_TRUE(std::isfinite(row.rhs1));
    EXPECT_TRUE(std::isfinite(row.rhs2));
    EXPECT_GE(row.samples, 64);
  }
}

TEST(EpsProbe, GeodesicRatioMatchesAnalytic) {
  const FieldPair f = seeded(SeedKind::geodesic, 128);
  const double r = 0.25;
  const EpsProbeReport rep = epsilon_regularity_probe(f.phi, f.psi, DiscRegion({0.5, 0.5}, r), {1.0, 0.5});
  const double expect = 1.0 / std::sqrt(M_PI * r * r);
  for (const auto& row : rep.rows) {
    ASSERT_TRUE(row.ratio1.has_value());
    EXPECT_NEAR(*row.ratio1, expect, 0.05 * expect);
  }
}

TEST(EpsProbe, ConstantMapIsNotApplicable) {
  const FieldPair f = seeded(SeedKind::constant, 32);
  const EpsProbeReport rep = epsilon_regularity_probe(f.phi, f.psi, DiscRegion({0.5, 0.5}, 0.25), {1.0, 0.5});
  EXPECT_EQ(rep.energy, 0.0);
  for (const auto& row : rep.rows) {
    EXPECT_FALSE(row.ratio1.has_value());
    EXPECT_FALSE(row.ratio_map.has_value());
    EXPECT_FALSE(row.ratio_spin.has_value());
  }
}

TEST(EpsProbe, RatioStableUnderRefinement) {
  std::vector<double> r1;
  for (int n : {64, 128, 256}) {
    const FieldPair f = seeded(SeedKind::elliptic, n);
    const EpsProbeReport rep = epsilon_regularity_probe(f.phi, f.psi, DiscRegion({0.5, 0.5}, 0.25), {1.0, 0.5});
    r1.push_back(*rep.rows[1].ratio1);
  }
  for (double v : r1) EXPECT_NEAR(v, r1.back(), 0.1 * r1.back());
}

TEST(EpsProbe, RejectsBadFactors) {
  const FieldPair f = seeded(SeedKind::constant, 32);
  EXPECT_THROW(epsilon_regularity_probe(f.phi, f.psi, DiscRegion({0.5, 0.5}, 0.25), {1.5}), std::invalid_argument);
}
