#include "sigma/calculus.hpp"

#include <cmath>
#include <stdexcept>

#include "sigma/kernels.hpp"

namespace sigma {

template <class T>
Field<T> derivative(const Field<T>& f, Axis axis) {
  Field<T> out(f.grid(), f.ncomp());
  kernels::omp::centered_diff(f, axis, out);
  return out;
}

template <class T>
Field<T> forward_difference(const Field<T>& f, Axis axis) {
  Field<T> out(f.grid(), f.ncomp());
  kernels::omp::forward_diff(f, axis, out);
  return out;
}

template <class T>
Field<T> laplacian(const Field<T>& f) {
  Field<T> out(f.grid(), f.ncomp());
  kernels::omp::laplacian5(f, out);
  return out;
}

template <class T>
Field<T> composed_laplacian(const Field<T>& f) {
  Field<T> out = derivative(derivative(f, Axis::x), Axis::x);
  out += derivative(derivative(f, Axis::y), Axis::y);
  return out;
}

template RealField derivative(const RealField&, Axis);
template ComplexField derivative(const ComplexField&, Axis);
template RealField forward_difference(const RealField&, Axis);
template ComplexField forward_difference(const ComplexField&, Axis);
template RealField laplacian(const RealField&);
template ComplexField laplacian(const ComplexField&);
template RealField composed_laplacian(const RealField&);
template ComplexField composed_laplacian(const ComplexField&);

double integrate(const ScalarField& f, int comp) {
  const double h = f.grid().h();
  return kernels::omp::sum(f, comp) * h * h;
}

bool in_disc(const Grid2D& g, std::size_t p, const DiscRegion& region) {
  return torus_distance(g.point(p), region.center) <= region.radius;
}

double integrate(const ScalarField& f, const DiscRegion& region, int comp) {
  const Grid2D& g = f.grid();
  const double h = g.h();
  double s = 0.0;
  for (std::size_t p = 0; p < g.size(); ++p)
    if (in_disc(g, p, region)) s += f(p, comp);
  return s * h * h;
}

double inner(const RealField& f, const RealField& g) {
  f.check_same(g);
  ScalarField prod(f.grid(), 1);
  for (std::size_t p = 0; p < f.points(); ++p) {
    double s = 0.0;
    for (int c = 0; c < f.ncomp(); ++c) s += f(p, c) * g(p, c);
    prod(p, 0) = s;
  }
  return integrate(prod);
}

cplx inner(const ComplexField& f, const ComplexField& g) {
  f.check_same(g);
  RealField prod(f.grid(), 2);
  for (std::size_t p = 0; p < f.points(); ++p) {
    cplx s = 0.0;
    for (int c = 0; c < f.ncomp(); ++c) s += std::conj(f(p, c)) * g(p, c);
    prod(p, 0) = s.real();
    prod(p, 1) = s.imag();
  }
  return {integrate(prod, 0), integrate(prod, 1)};
}

double l2_norm(const RealField& f) { return std::sqrt(inner(f, f)); }
double l2_norm(const ComplexField& f) { return std::sqrt(inner(f, f).real()); }

ScalarField pointwise_norm2(const RealField& f) {
  ScalarField out(f.grid(), 1);
  for (std::size_t p = 0; p < f.points(); ++p) {
    double s = 0.0;
    for (int c = 0; c < f.ncomp(); ++c) s += f(p, c) * f(p, c);
    out(p, 0) = s;
  }
  return out;
}

ScalarField pointwise_norm2(const ComplexField& f) {
  ScalarField out(f.grid(), 1);
  for (std::size_t p = 0; p < f.points(); ++p) {
    double s = 0.0;
    for (int c = 0; c < f.ncomp(); ++c) s += std::norm(f(p, c));
    out(p, 0) = s;
  }
  return out;
}

double linf_norm(const RealField& f) {
  double m = 0.0;
  const ScalarField n2 = pointwise_norm2(f);
  for (std::size_t p = 0; p < f.points(); ++p) m = std::max(m, n2(p, 0));
  return std::sqrt(m);
}

double linf_norm(const ComplexField& f) {
  double m = 0.0;
  const ScalarField n2 = pointwise_norm2(f);
  for (std::size_t p = 0; p < f.points(); ++p) m = std::max(m, n2(p, 0));
  return std::sqrt(m);
}

template <class T>
std::vector<T> interpolate(const Field<T>& f, Point at) {
  const Grid2D& g = f.grid();
  const double n = g.n();
  double u = at.x * n, v = at.y * n;
  const double fu = std::floor(u), fv = std::floor(v);
  const double tx = u - fu, ty = v - fv;
  const int i0 = g.wrap(int(fu)), j0 = g.wrap(int(fv));
  const int i1 = g.wrap(i0 + 1), j1 = g.wrap(j0 + 1);
  const std::size_t p00 = g.index(i0, j0), p10 = g.index(i1, j0);
  const std::size_t p01 = g.index(i0, j1), p11 = g.index(i1, j1);
  std::vector<T> out(std::size_t(f.ncomp()));
  for (int c = 0; c < f.ncomp(); ++c) {
    const T a = f(p00, c) * (1.0 - tx) + f(p10, c) * tx;
    const T b = f(p01, c) * (1.0 - tx) + f(p11, c) * tx;
    out[std::size_t(c)] = a * (1.0 - ty) + b * ty;
  }
  return out;
}

template <class T>
std::vector<std::vector<T>> sample_circle(const Field<T>& f, Point center, double r, int m) {
  if (m <= 0) throw std::invalid_argument("sample_circle: m must be positive");
  if (!(r > 0.0) || !(r + 2.0 * f.grid().h() < 0.5))
    throw std::invalid_argument("sample_circle: circle radius violates r + 2h < 1/2");
  std::vector<std::vector<T>> out;
  out.reserve(std::size_t(m));
  for (int j = 0; j < m; ++j) {
    const double t = 2.0 * M_PI * j / m;
    out.push_back(interpolate(f, {center.x + r * std::cos(t), center.y + r * std::sin(t)}));
  }
  return out;
}

template std::vector<double> interpolate(const RealField&, Point);
template std::vector<cplx> interpolate(const ComplexField&, Point);
template std::vector<std::vector<double>> sample_circle(const RealField&, Point, double, int);
template std::vector<std::vector<cplx>> sample_circle(const ComplexField&, Point, double, int);

}  // namespace sigma
