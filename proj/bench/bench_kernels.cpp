// Serial reference vs OpenMP kernels on n x n grids.

#include <benchmark/benchmark.h>

#include "sigma/clifford.hpp"
#include "sigma/kernels.hpp"
#include "sigma/solver.hpp"

namespace {

using namespace sigma;

RealField map_values(int n) { return random_smooth_field(Grid2D(n), 3, 3, 7); }

ComplexField spinor_values(int n) {
  const RealField re = random_smooth_field(Grid2D(n), 6, 3, 8);
  const RealField im = random_smooth_field(Grid2D(n), 6, 3, 9);
  ComplexField out(Grid2D(n), 6);
  for (std::size_t k = 0; k < out.data().size(); ++k) out.data()[k] = {re.data()[k], im.data()[k]};
  return out;
}

template <bool Parallel>
void BM_laplacian(benchmark::State& st) {
  const RealField f = map_values(int(st.range(0)));
  RealField out(f.grid(), f.ncomp());
  for (auto _ : st) {
    if constexpr (Parallel)
      kernels::omp::laplacian5(f, out);
    else
      kernels::serial::laplacian5(f, out);
    benchmark::DoNotOptimize(out.data().data());
  }
}

template <bool Parallel>
void BM_centered(benchmark::State& st) {
  const RealField f = map_values(int(st.range(0)));
  RealField out(f.grid(), f.ncomp());
  for (auto _ : st) {
    if constexpr (Parallel)
      kernels::omp::centered_diff(f, Axis::x, out);
    else
      kernels::serial::centered_diff(f, Axis::x, out);
    benchmark::DoNotOptimize(out.data().data());
  }
}

template <bool Parallel>
void BM_dirac(benchmark::State& st) {
  const ComplexField psi = spinor_values(int(st.range(0)));
  ComplexField out(psi.grid(), psi.ncomp());
  const CliffordRep& rep = default_clifford();
  for (auto _ : st) {
    if constexpr (Parallel)
      kernels::omp::dirac(psi, rep.gamma1(), rep.gamma2(), out);
    else
      kernels::serial::dirac(psi, rep.gamma1(), rep.gamma2(), out);
    benchmark::DoNotOptimize(out.data().data());
  }
}

template <bool Parallel>
void BM_sum(benchmark::State& st) {
  const RealField f = map_values(int(st.range(0)));
  for (auto _ : st) {
    double s = Parallel ? kernels::omp::sum(f, 0) : kernels::serial::sum(f, 0);
    benchmark::DoNotOptimize(s);
  }
}

}  // namespace

BENCHMARK(BM_laplacian<false>)->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_laplacian<true>)->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_centered<false>)->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_centered<true>)->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_dirac<false>)->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_dirac<true>)->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_sum<false>)->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_sum<true>)->Arg(64)->Arg(256)->Arg(1024);

BENCHMARK_MAIN();
