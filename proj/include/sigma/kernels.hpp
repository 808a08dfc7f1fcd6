#pragma once

// Stencil and reduction kernels. Every kernel exists twice: a plain serial
// reference in `kernels::serial` (kept simple, used as the test oracle for the
// fast path) and an OpenMP row-parallel version in `kernels::omp` that the
// rest of the library calls. Both evaluate the same arithmetic expression per
// point, so stencil results agree bit for bit; reductions agree to roundoff.

#include <array>

#include "sigma/grid.hpp"

namespace sigma {

using Mat2 = std::array<std::array<cplx, 2>, 2>;

namespace kernels {

namespace serial {

template <class T>
void centered_diff(const Field<T>& f, Axis axis, Field<T>& out);
template <class T>
void forward_diff(const Field<T>& f, Axis axis, Field<T>& out);
template <class T>
void laplacian5(const Field<T>& f, Field<T>& out);
/// out = g1 * d_x psi + g2 * d_y psi on each complex 2-vector (c = 2i + s) of the fiber.
void dirac(const ComplexField& psi, const Mat2& g1, const Mat2& g2, ComplexField& out);
double sum(const RealField& f, int comp);

}  // namespace serial

namespace omp {

template <class T>
void centered_diff(const Field<T>& f, Axis axis, Field<T>& out);
template <class T>
void forward_diff(const Field<T>& f, Axis axis, Field<T>& out);
template <class T>
void laplacian5(const Field<T>& f, Field<T>& out);
void dirac(const ComplexField& psi, const Mat2& g1, const Mat2& g2, ComplexField& out);
/// Per-row partial sums in parallel, rows accumulated in order: deterministic
/// for any thread count.
double sum(const RealField& f, int comp);

}  // namespace omp

/// Threads the OpenMP kernels will use (1 when built without OpenMP).
int max_threads();

}  // namespace kernels
}  // namespace sigma
