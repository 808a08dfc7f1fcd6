#include <gtest/gtest.h>
#include <omp.h>

#include "sigma/clifford.hpp"
#include "sigma/kernels.hpp"
#include "support.hpp"

using namespace sigma;

namespace {

template <class T>
bool bitwise_equal(const Field<T>& a, const Field<T>& b) {
  if (a.data().size() != b.data().size()) return false;
  for (std::size_t k = 0; k < a.data().size(); ++k)
    if (!(a.data()[k] == b.data()[k])) return false;
  return true;
}

class KernelThreads : public ::testing::TestWithParam<int> {
 protected:
  void SetUp() override {
    saved_ = omp_get_max_threads();
    omp_set_num_threads(GetParam());
  }
  void TearDown() override { omp_set_num_threads(saved_); }
  int saved_ = 1;
};

}  // namespace

TEST_P(KernelThreads, StencilsMatchSerialBitForBit) {
  for (int n : {16, 17 * 2, 64}) {
    const Grid2D g(n);
    const RealField f = random_smooth_field(g, 3, 3, std::uint64_t(n));
    const ComplexField c = sigma::testing::random_complex(g, 6, 3, std::uint64_t(n) + 1);
    for (Axis a : {Axis::x, Axis::y}) {
      RealField s(g, 3), o(g, 3);
      kernels::serial::centered_diff(f, a, s);
      kernels::omp::centered_diff(f, a, o);
      EXPECT_TRUE(bitwise_equal(s, o));
      kernels::serial::forward_diff(f, a, s);
      kernels::omp::forward_diff(f, a, o);
      EXPECT_TRUE(bitwise_equal(s, o));
      ComplexField cs(g, 6), co(g, 6);
      kernels::serial::centered_diff(c, a, cs);
      kernels::omp::centered_diff(c, a, co);
      EXPECT_TRUE(bitwise_equal(cs, co));
    }
    RealField s(g, 3), o(g, 3);
    kernels::serial::laplacian5(f, s);
    kernels::omp::laplacian5(f, o);
    EXPECT_TRUE(bitwise_equal(s, o));
    ComplexField cs(g, 6), co(g, 6);
    kernels::serial::laplacian5(c, cs);
    kernels::omp::laplacian5(c, co);
    EXPECT_TRUE(bitwise_equal(cs, co));
    const CliffordRep& rep = default_clifford();
    kernels::serial::dirac(c, rep.gamma1(), rep.gamma2(), cs);
    kernels::omp::dirac(c, rep.gamma1(), rep.gamma2(), co);
    EXPECT_TRUE(bitwise_equal(cs, co));
  }
}

TEST_P(KernelThreads, SumIsDeterministicAndAccurate) {
  const Grid2D g(128);
  const RealField f = random_smooth_field(g, 2, 5, 3);
  const double ref = kernels::serial::sum(f, 1);
  const double a = kernels::omp::sum(f, 1);
  EXPECT_NEAR(a, ref, 1e-12 * g.size());
  omp_set_num_threads(1);
  EXPECT_EQ(kernels::omp::sum(f, 1), a);  // independent of thread count
}

INSTANTIATE_TEST_SUITE_P(Threads, KernelThreads, ::testing::Values(1, 2, 4));

TEST(Kernels, PublicCalculusUsesParallelPath) {
  const Grid2D g(32);
  const RealField f = random_smooth_field(g, 3, 3, 9);
  RealField s(g, 3);
  kernels::serial::laplacian5(f, s);
  EXPECT_TRUE(bitwise_equal(laplacian(f), s));
}

TEST(Kernels, ReportsThreadCount) { EXPECT_GE(kernels::max_threads(), 1); }
