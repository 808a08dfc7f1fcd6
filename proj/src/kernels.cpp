#include "sigma/kernels.hpp"

#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sigma::kernels {

namespace {

template <class T>
void check_out(const Field<T>& f, Field<T>& out) {
  f.check_same(out);
}

}  // namespace

// ---------------------------------------------------------------------------
// serial reference

namespace serial {

template <class T>
void centered_diff(const Field<T>& f, Axis axis, Field<T>& out) {
  check_out(f, out);
  const Grid2D& g = f.grid();
  const int n = g.n();
  const double scale = 0.5 / g.h();
  const int nc = f.ncomp();
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const std::size_t p = g.index(i, j);
      const std::size_t pp = axis == Axis::x ? g.index(g.wrap(i + 1), j) : g.index(i, g.wrap(j + 1));
      const std::size_t pm = axis == Axis::x ? g.index(g.wrap(i - 1), j) : g.index(i, g.wrap(j - 1));
      for (int c = 0; c < nc; ++c) out(p, c) = (f(pp, c) - f(pm, c)) * scale;
    }
  }
}

template <class T>
void forward_diff(const Field<T>& f, Axis axis, Field<T>& out) {
  check_out(f, out);
  const Grid2D& g = f.grid();
  const int n = g.n();
  const double scale = 1.0 / g.h();
  const int nc = f.ncomp();
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const std::size_t p = g.index(i, j);
      const std::size_t pp = axis == Axis::x ? g.index(g.wrap(i + 1), j) : g.index(i, g.wrap(j + 1));
      for (int c = 0; c < nc; ++c) out(p, c) = (f(pp, c) - f(p, c)) * scale;
    }
  }
}

template <class T>
void laplacian5(const Field<T>& f, Field<T>& out) {
  check_out(f, out);
  const Grid2D& g = f.grid();
  const int n = g.n();
  const double scale = 1.0 / (g.h() * g.h());
  const int nc = f.ncomp();
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const std::size_t p = g.index(i, j);
      const std::size_t e = g.index(g.wrap(i + 1), j);
      const std::size_t w = g.index(g.wrap(i - 1), j);
      const std::size_t no = g.index(i, g.wrap(j + 1));
      const std::size_t so = g.index(i, g.wrap(j - 1));
      for (int c = 0; c < nc; ++c)
        out(p, c) = (((f(e, c) + f(w, c)) + (f(no, c) + f(so, c))) - 4.0 * f(p, c)) * scale;
    }
  }
}

void dirac(const ComplexField& psi, const Mat2& g1, const Mat2& g2, ComplexField& out) {
  check_out(psi, out);
  ComplexField dx(psi.grid(), psi.ncomp());
  ComplexField dy(psi.grid(), psi.ncomp());
  centered_diff(psi, Axis::x, dx);
  centered_diff(psi, Axis::y, dy);
  const int q = psi.ncomp() / 2;
  for (std::size_t p = 0; p < psi.points(); ++p) {
    for (int i = 0; i < q; ++i) {
      const cplx x0 = dx(p, 2 * i), x1 = dx(p, 2 * i + 1);
      const cplx y0 = dy(p, 2 * i), y1 = dy(p, 2 * i + 1);
      for (int s = 0; s < 2; ++s)
        out(p, 2 * i + s) = (g1[s][0] * x0 + g1[s][1] * x1) + (g2[s][0] * y0 + g2[s][1] * y1);
    }
  }
}

double sum(const RealField& f, int comp) {
  double s = 0.0;
  for (std::size_t p = 0; p < f.points(); ++p) s += f(p, comp);
  return s;
}

template void centered_diff<double>(const RealField&, Axis, RealField&);
template void centered_diff<cplx>(const ComplexField&, Axis, ComplexField&);
template void forward_diff<double>(const RealField&, Axis, RealField&);
template void forward_diff<cplx>(const ComplexField&, Axis, ComplexField&);
template void laplacian5<double>(const RealField&, RealField&);
template void laplacian5<cplx>(const ComplexField&, ComplexField&);

}  // namespace serial

// ---------------------------------------------------------------------------
// OpenMP

namespace omp {

template <class T>
void centered_diff(const Field<T>& f, Axis axis, Field<T>& out) {
  check_out(f, out);
  const Grid2D g = f.grid();
  const int n = g.n();
  const double scale = 0.5 / g.h();
  const int nc = f.ncomp();
  const T* src = f.data().data();
  T* dst = out.data().data();
#pragma omp parallel for schedule(static)
  for (int j = 0; j < n; ++j) {
    const std::size_t row = std::size_t(j) * n;
    if (axis == Axis::x) {
      for (int i = 0; i < n; ++i) {
        const T* a = src + (row + std::size_t(i == n - 1 ? 0 : i + 1)) * nc;
        const T* b = src + (row + std::size_t(i == 0 ? n - 1 : i - 1)) * nc;
        T* o = dst + (row + i) * nc;
        for (int c = 0; c < nc; ++c) o[c] = (a[c] - b[c]) * scale;
      }
    } else {
      const T* up = src + std::size_t(j == n - 1 ? 0 : j + 1) * n * nc;
      const T* dn = src + std::size_t(j == 0 ? n - 1 : j - 1) * n * nc;
      T* o = dst + row * nc;
      for (std::size_t k = 0; k < std::size_t(n) * nc; ++k) o[k] = (up[k] - dn[k]) * scale;
    }
  }
}

template <class T>
void forward_diff(const Field<T>& f, Axis axis, Field<T>& out) {
  check_out(f, out);
  const Grid2D g = f.grid();
  const int n = g.n();
  const double scale = 1.0 / g.h();
  const int nc = f.ncomp();
  const T* src = f.data().data();
  T* dst = out.data().data();
#pragma omp parallel for schedule(static)
  for (int j = 0; j < n; ++j) {
    const std::size_t row = std::size_t(j) * n;
    if (axis == Axis::x) {
      for (int i = 0; i < n; ++i) {
        const T* a = src + (row + std::size_t(i == n - 1 ? 0 : i + 1)) * nc;
        const T* b = src + (row + i) * nc;
        T* o = dst + (row + i) * nc;
        for (int c = 0; c < nc; ++c) o[c] = (a[c] - b[c]) * scale;
      }
    } else {
      const T* up = src + std::size_t(j == n - 1 ? 0 : j + 1) * n * nc;
      const T* here = src + row * nc;
      T* o = dst + row * nc;
      for (std::size_t k = 0; k < std::size_t(n) * nc; ++k) o[k] = (up[k] - here[k]) * scale;
    }
  }
}

template <class T>
void laplacian5(const Field<T>& f, Field<T>& out) {
  check_out(f, out);
  const Grid2D g = f.grid();
  const int n = g.n();
  const double scale = 1.0 / (g.h() * g.h());
  const int nc = f.ncomp();
  const T* src = f.data().data();
  T* dst = out.data().data();
#pragma omp parallel for schedule(static)
  for (int j = 0; j < n; ++j) {
    const std::size_t row = std::size_t(j) * n;
    const T* up = src + std::size_t(j == n - 1 ? 0 : j + 1) * n * nc;
    const T* dn = src + std::size_t(j == 0 ? n - 1 : j - 1) * n * nc;
    for (int i = 0; i < n; ++i) {
      const std::size_t ie = std::size_t(i == n - 1 ? 0 : i + 1);
      const std::size_t iw = std::size_t(i == 0 ? n - 1 : i - 1);
      const T* here = src + (row + i) * nc;
      const T* e = src + (row + ie) * nc;
      const T* w = src + (row + iw) * nc;
      const T* no = up + std::size_t(i) * nc;
      const T* so = dn + std::size_t(i) * nc;
      T* o = dst + (row + i) * nc;
      for (int c = 0; c < nc; ++c) o[c] = (((e[c] + w[c]) + (no[c] + so[c])) - 4.0 * here[c]) * scale;
    }
  }
}

void dirac(const ComplexField& psi, const Mat2& g1, const Mat2& g2, ComplexField& out) {
  check_out(psi, out);
  const Grid2D g = psi.grid();
  const int n = g.n();
  const double scale = 0.5 / g.h();
  const int nc = psi.ncomp();
  const int q = nc / 2;
  const cplx* src = psi.data().data();
  cplx* dst = out.data().data();
#pragma omp parallel for schedule(static)
  for (int j = 0; j < n; ++j) {
    const std::size_t row = std::size_t(j) * n;
    const cplx* up = src + std::size_t(j == n - 1 ? 0 : j + 1) * n * nc;
    const cplx* dn = src + std::size_t(j == 0 ? n - 1 : j - 1) * n * nc;
    for (int i = 0; i < n; ++i) {
      const cplx* e = src + (row + std::size_t(i == n - 1 ? 0 : i + 1)) * nc;
      const cplx* w = src + (row + std::size_t(i == 0 ? n - 1 : i - 1)) * nc;
      const cplx* no = up + std::size_t(i) * nc;
      const cplx* so = dn + std::size_t(i) * nc;
      cplx* o = dst + (row + i) * nc;
      for (int a = 0; a < q; ++a) {
        const cplx x0 = (e[2 * a] - w[2 * a]) * scale, x1 = (e[2 * a + 1] - w[2 * a + 1]) * scale;
        const cplx y0 = (no[2 * a] - so[2 * a]) * scale, y1 = (no[2 * a + 1] - so[2 * a + 1]) * scale;
        for (int s = 0; s < 2; ++s)
          o[2 * a + s] = (g1[s][0] * x0 + g1[s][1] * x1) + (g2[s][0] * y0 + g2[s][1] * y1);
      }
    }
  }
}

double sum(const RealField& f, int comp) {
  const int n = f.grid().n();
  const int nc = f.ncomp();
  const double* src = f.data().data();
  std::vector<double> rows(std::size_t(n), 0.0);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    const double* r = src + std::size_t(j) * n * nc + comp;
    for (int i = 0; i < n; ++i) s += r[std::size_t(i) * nc];
    rows[std::size_t(j)] = s;
  }
  double total = 0.0;
  for (double r : rows) total += r;
  return total;
}

template void centered_diff<double>(const RealField&, Axis, RealField&);
template void centered_diff<cplx>(const ComplexField&, Axis, ComplexField&);
template void forward_diff<double>(const RealField&, Axis, RealField&);
template void forward_diff<cplx>(const ComplexField&, Axis, ComplexField&);
template void laplacian5<double>(const RealField&, RealField&);
template void laplacian5<cplx>(const ComplexField&, ComplexField&);

}  // namespace omp

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace sigma::kernels
