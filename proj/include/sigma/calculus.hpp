#pragma once

// Discrete calculus on the periodic grid: centered derivatives, the 5-point
// Laplacian, quadrature over the torus or a disc, and bilinear circle sampling.

#include <optional>
#include <vector>

#include "sigma/grid.hpp"

namespace sigma {

using ScalarField = RealField;  // ncomp == 1

/// Centered second-order difference along `axis`, periodic wraparound.
template <class T>
Field<T> derivative(const Field<T>& f, Axis axis);

/// Forward difference (f(x + h e_axis) - f(x)) / h.
template <class T>
Field<T> forward_difference(const Field<T>& f, Axis axis);

/// 5-point Laplacian. Symmetric under the h^2-weighted inner product.
template <class T>
Field<T> laplacian(const Field<T>& f);

/// derivative(derivative(f, x), x) + derivative(derivative(f, y), y): the
/// 2h-step Laplacian that the centered Dirac operator squares to.
template <class T>
Field<T> composed_laplacian(const Field<T>& f);

/// Plain h^2-weighted sum over the torus (comp selects the fiber entry).
double integrate(const ScalarField& f, int comp = 0);
/// Indicator-weighted sum: a point counts with weight h^2 iff its torus
/// distance to the disc center is <= radius.
double integrate(const ScalarField& f, const DiscRegion& region, int comp = 0);

bool in_disc(const Grid2D& g, std::size_t p, const DiscRegion& region);

/// h^2 sum of sum_c f_c g_c (real) or sum_c conj(f_c) g_c (complex).
double inner(const RealField& f, const RealField& g);
cplx inner(const ComplexField& f, const ComplexField& g);
double l2_norm(const RealField& f);
double l2_norm(const ComplexField& f);
double linf_norm(const RealField& f);
double linf_norm(const ComplexField& f);

/// Bilinear interpolation of f at m points center + r(cos t_j, sin t_j),
/// t_j = 2 pi j / m. Requires r + 2h < 1/2.
template <class T>
std::vector<std::vector<T>> sample_circle(const Field<T>& f, Point center, double r, int m);

/// Bilinear interpolation of one fiber at an arbitrary (wrapped) point.
template <class T>
std::vector<T> interpolate(const Field<T>& f, Point at);

/// Pointwise fiber norm squared as a scalar field.
ScalarField pointwise_norm2(const RealField& f);
ScalarField pointwise_norm2(const ComplexField& f);

/// Fill a scalar field from a function of (x, y).
template <class F>
ScalarField tabulate(const Grid2D& g, F&& fn) {
  ScalarField out(g, 1);
  for (std::size_t p = 0; p < g.size(); ++p) {
    const Point pt = g.point(p);
    out(p, 0) = fn(pt.x, pt.y);
  }
  return out;
}

}  // namespace sigma
