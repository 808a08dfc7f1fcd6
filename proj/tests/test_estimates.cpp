#include <gtest/gtest.h>

#include <random>

#include "sigma/clifford.hpp"
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

GradientEstimateConfig cap_config() {
  GradientEstimateConfig c;
  c.y0 = north_pole(3);
  return c;
}

}  // namespace

TEST(Constants, SphereDefaultsMatchHandArithmetic) {
  const EstimateConstants k = EstimateConstants::sphere_defaults(3);
  const double c4 = k.c4;
  EXPECT_DOUBLE_EQ(k.t, 0.5);
  EXPECT_DOUBLE_EQ(k.p, 0.75);
  EXPECT_NEAR(k.c10, 1.0 + 0.1 + c4 * c4 / 0.5, 1e-15);
  const double c11 = c4 * c4 / 2.0 + 2.0 * 1.0;
  const double c12 = 2.0 * (1.0 / 36.0) / 0.5;
  EXPECT_NEAR(k.c11, c11, 1e-15);
  EXPECT_NEAR(k.c12, c12, 1e-15);
  EXPECT_NEAR(k.c13, 2.0 * k.c10, 1e-15);
  EXPECT_NEAR(k.c14, 2.0 * c11 + 2.0 * c12, 1e-14);
  EXPECT_NEAR(k.c10, 1.6, 1e-6);
  EXPECT_NEAR(k.c14, 4.4722, 1e-4);
}

TEST(Constants, ValidationRejectsBadEntries) {
  EstimateConstants k = EstimateConstants::sphere_defaults(3);
  k.delta3 = 0.0;
  EXPECT_THROW(k.derive(), std::invalid_argument);
  k = EstimateConstants::sphere_defaults(3);
  k.c2 = 1.0;  // needs delta2 > 0
  EXPECT_THROW(k.derive(), std::invalid_argument);
  k.delta2 = 0.2;
  EXPECT_NO_THROW(k.derive());
  k.c10 += 1.0;
  EXPECT_THROW(k.validate(), std::invalid_argument);
}

TEST(Constants, PairingNormBoundsRandomSamples) {
  const double c4 = sphere_pairing_norm(3);
  EXPECT_LE(c4, std::sqrt(2.0) + 1e-12);
  EXPECT_NEAR(c4, 0.5, 1e-6);
  // direct evaluation at the north pole: tangent slots are the first two
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  const CliffordRep& rep = default_clifford();
  double best = 0.0;
  for (int t = 0; t < 20000; ++t) {
    std::vector<cplx> psi(6, 0.0);
    for (int k = 0; k < 4; ++k) psi[k] = {nd(rng), nd(rng)};
    double dphi[3][2] = {};
    double dn = 0.0, pn = 0.0;
    for (int k = 0; k < 2; ++k)
      for (int a = 0; a < 2; ++a) dphi[k][a] = nd(rng), dn += dphi[k][a] * dphi[k][a];
    for (auto z : psi) pn += std::norm(z);
    double bn = 0.0;
    for (int i = 0; i < 3; ++i) {
      double b = 0.0;
      for (int a = 0; a < 2; ++a) {
        std::array<double, 2> e{a == 0 ? 1.0 : 0.0, a == 1 ? 1.0 : 0.0};
        const auto gpsi = clifford_mul(e, psi, rep);
        for (int k = 0; k < 3; ++k) {
          const cplx s = std::conj(psi[2 * i]) * gpsi[2 * k] + std::conj(psi[2 * i + 1]) * gpsi[2 * k + 1];
          b += s.real() * dphi[k][a];
        }
      }
      bn += b * b;
    }
    best = std::max(best, std::sqrt(bn) / (pn * std::sqrt(dn)));
  }
  EXPECT_LE(best, c4 + 1e-9);
  EXPECT_GE(best, 0.8 * c4);
}

TEST(EnergyDensity, ConstantAndGeodesic) {
  EXPECT_EQ(linf_norm(energy_density(seeded(SeedKind::constant, 16).phi, seeded(SeedKind::constant, 16).psi)), 0.0);
  for (int k : {1, 2}) {
    const FieldPair f = seeded(SeedKind::geodesic, 64, k);
    const ScalarField e = energy_density(f.phi, f.psi);
    const double exact = 2.0 * M_PI * M_PI * k * k;
    for (std::size_t p = 0; p < e.points(); ++p) EXPECT_NEAR(e(p, 0), exact, exact * std::pow(2 * M_PI * k / 64, 2));
  }
}

TEST(EnergyDensity, SpinorScaling) {
  const MapField phi = random_map(Grid2D(16), 3, 3, 1);
  const SpinorField psi = random_tangent_spinor(phi, 3, 2);
  SpinorField psi2 = psi;
  psi2.values() *= 1.5;
  const ScalarField a = energy_density(phi, psi), b = energy_density(phi, psi2);
  const ScalarField s = pointwise_norm2(psi.values());
  for (std::size_t p = 0; p < a.points(); ++p)
    EXPECT_NEAR(b(p, 0) - a(p, 0), 0.5 * (std::pow(1.5, 4) - 1.0) * s(p, 0) * s(p, 0), 1e-12 * (1 + b(p, 0)));
}

TEST(LocalEnergy, GeodesicDiscAndMonotone) {
  const FieldPair f = seeded(SeedKind::geodesic, 128);
  const double e = local_energy(f.phi, f.psi, DiscRegion({0.5, 0.5}, 0.25));
  const double exact = 4.0 * M_PI * M_PI * M_PI * 0.25 * 0.25;
  EXPECT_NEAR(e, exact, 0.03 * exact);
  const FieldPair c = seeded(SeedKind::constant, 32);
  EXPECT_EQ(local_energy(c.phi, c.psi, DiscRegion({0.5, 0.5}, 0.25)), 0.0);
  const MapField phi = random_map(Grid2D(32), 3, 3, 7);
  const SpinorField psi = random_tangent_spinor(phi, 3, 8);
  double prev = 0.0;
  for (double r : {0.05, 0.1, 0.2, 0.3, 0.4}) {
    const double v = local_energy(phi, psi, DiscRegion({0.3, 0.6}, r));
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(Kato, ZeroSpinorRandomMaps) {
  for (std::uint64_t s = 1; s <= 50; ++s) {
    const MapField phi = random_map(Grid2D(32), 3, 3, s);
    const AuditReport r = kato_audit(phi, SpinorField(phi.grid(), 3), 1e-8);
    EXPECT_TRUE(r.pass) << s << " margin " << r.worst_margin;
  }
}

TEST(Kato, GeodesicHasFlatDensity) {
  const FieldPair f = seeded(SeedKind::geodesic, 64, 2);
  EXPECT_TRUE(kato_audit(f.phi, f.psi).pass);
}

TEST(Kato, RandomCoupledPairs) {
  for (std::uint64_t s = 1; s <= 10; ++s) {
    const MapField phi = random_map(Grid2D(32), 3, 3, s);
    const SpinorField psi = random_tangent_spinor(phi, 3, s + 1000, 0.7);
    EXPECT_TRUE(kato_audit(phi, psi).pass) << s;
  }
}

TEST(Bochner, ConstantPassesExactly) {
  const FieldPair f = seeded(SeedKind::constant, 16);
  const AuditReport r = bochner_audit(f.phi, f.psi, EstimateConstants::sphere_defaults());
  EXPECT_TRUE(r.pass);
  EXPECT_GE(r.worst_margin, 0.0);
}

TEST(Bochner, GeodesicPassesWithDefaultDeltas) {
  // Delta e = 0 and |Hess|^2 = |dphi|^4 for the geodesic; the right side is
  // ((1 - t) - c10 ...)|dphi|^4 which the default ledger keeps non-positive
  for (int k : {1, 2}) {
    const FieldPair f = seeded(SeedKind::geodesic, 64, k);
    const EstimateConstants c = EstimateConstants::sphere_defaults();
    EXPECT_LE(1.0 - c.t - c.c10, 0.0);
    EXPECT_TRUE(bochner_audit(f.phi, f.psi, c).pass) << k;
  }
}

TEST(Bochner, RejectsLargeResiduals) {
  const MapField phi = random_map(Grid2D(32), 3, 3, 2);
  EXPECT_THROW(bochner_audit(phi, SpinorField(phi.grid(), 3), EstimateConstants::sphere_defaults()), EstimateError);
}

TEST(GradientEstimate, ConstantAtBasePointPasses) {
  const FieldPair f = seeded(SeedKind::constant, 32);
  EXPECT_TRUE(gradient_estimate_audit(f.phi, f.psi, cap_config(), EstimateConstants::sphere_defaults()).pass);
}

TEST(GradientEstimate, CapFamilyPassesAndXiIsBounded) {
  const FieldPair f = seeded(SeedKind::cap_geodesic, 64);
  const GradientEstimateConfig c = cap_config();
  const AuditReport r = gradient_estimate_audit(f.phi, f.psi, c, EstimateConstants::sphere_defaults());
  EXPECT_TRUE(r.pass) << r.worst_margin;
  EXPECT_GT(r.info.at("min_xi"), 0.0);
  EXPECT_LE(r.info.at("max_xi"), std::sqrt(c.d1));
}

TEST(GradientEstimate, IncreasingD1KeepsPassing) {
  const FieldPair f = seeded(SeedKind::cap_geodesic, 64);
  const EstimateConstants k = EstimateConstants::sphere_defaults();
  for (double d1 : {6.0, 8.0, 10.0, 11.0, 12.0}) {
    GradientEstimateConfig c = cap_config();
    c.d1 = d1;
    c.R = 0.9 * M_PI / (2.0 * std::sqrt(d1));
    EXPECT_TRUE(gradient_estimate_audit(f.phi, f.psi, c, k).pass) << d1;
  }
}

TEST(GradientEstimate, InfeasibleD1RaisesStructuredError) {
  const FieldPair f = seeded(SeedKind::cap_geodesic, 32);
  GradientEstimateConfig c = cap_config();
  c.d1 = 2.0;
  try {
    gradient_estimate_audit(f.phi, f.psi, c, EstimateConstants::sphere_defaults());
    FAIL() << "expected infeasibility";
  } catch (const EstimateError& e) {
    EXPECT_EQ(e.code(), "infeasible-dtilde");
  }
}

TEST(GradientEstimate, RangeViolationRaises) {
  const FieldPair f = seeded(SeedKind::geodesic, 32);
  try {
    gradient_estimate_audit(f.phi, f.psi, cap_config(), EstimateConstants::sphere_defaults());
    FAIL() << "expected range violation";
  } catch (const EstimateError& e) {
    EXPECT_EQ(e.code(), "range-violation");
  }
}

TEST(Xi, ClosedForm) {
  EXPECT_DOUBLE_EQ(xi_of(4.0, 0.0), 2.0);
  EXPECT_NEAR(xi_of(4.0, M_PI / 4.0), 0.0, 1e-15);
}

TEST(Maximizer, ConstantIsDegenerate) {
  const FieldPair f = seeded(SeedKind::constant, 32);
  EXPECT_TRUE(maximizer_diagnostic(f.phi, f.psi, cap_config(), EstimateConstants::sphere_defaults()).degenerate);
}

TEST(Maximizer, CapFamilyHasInteriorArgmax) {
  const FieldPair f = seeded(SeedKind::cap_geodesic, 64);
  const MaximizerResult m = maximizer_diagnostic(f.phi, f.psi, cap_config(), EstimateConstants::sphere_defaults());
  EXPECT_FALSE(m.degenerate);
  EXPECT_TRUE(m.interior);
  EXPECT_GT(m.value, 0.0);
  EXPECT_LT(m.r, 0.9 * 0.4);
}

TEST(Feasibility, ZeroC2ReducesToSimpleBranch) {
  FeasibilityRanges r;
  r.c1 = {0.0};
  r.c2 = {0.0};
  r.kappa2 = {1.0};
  r.R = {0.5};
  r.d1 = {3.0};
  r.delta2 = {0.0};
  r.delta3 = {0.1};
  r.delta4 = {1.0};
  r.delta10 = {0.1};
  r.c4 = 0.0;
  const auto out = feasibility_scan_A_nonzero(r);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_TRUE(out[0].feasible);
  // d1 - (1 + delta4)(kappa2 + delta3) - delta10 = 3 - 2.2 - 0.1
  EXPECT_NEAR(out[0].best_margin, 0.7, 1e-12);
  ASSERT_TRUE(out[0].d1_threshold.has_value());
  EXPECT_NEAR(*out[0].d1_threshold, 2.3, 1e-12);
}

TEST(Feasibility, LargeC2IsInfeasible) {
  FeasibilityRanges r;
  r.c1 = {0.0};
  r.c2 = {100.0, 1e4};
  r.kappa2 = {1.0};
  r.R = {0.5};
  r.d1 = {1.0, 3.0, 5.0, 8.0};
  r.delta2 = {0.1, 1.0, 10.0};
  r.delta3 = {0.1};
  r.delta4 = {0.5, 1.0};
  r.delta10 = {0.1};
  for (const auto& e : feasibility_scan_A_nonzero(r)) {
    EXPECT_FALSE(e.feasible) << e.c2;
    EXPECT_FALSE(e.d1_threshold.has_value());
  }
}

TEST(Feasibility, EmptyRangesGiveEmptyReport) {
  EXPECT_TRUE(feasibility_scan_A_nonzero(FeasibilityRanges{}).empty());
}

TEST(Feasibility, RangeConditionOnR) {
  EXPECT_EQ(dtilde_general(4.0, 0.0, 0.1, 1.0, 0.1, 0.0, 0.0, 1.0, 0.0, M_PI / 4.0),
            -std::numeric_limits<double>::infinity());
  EXPECT_GT(dtilde_general(4.0, 0.0, 0.1, 1.0, 0.1, 0.0, 0.0, 1.0, 0.0, 0.5), 0.0);
}
