#pragma once

// Uniform periodic grids on the flat torus [0,1)^2 and the fields living on them.

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sigma {

using cplx = std::complex<double>;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

enum class Axis { x = 1, y = 2 };

/// N x N periodic discretization of the unit torus. Point (i, j) sits at
/// (i h, j h); storage is row-major with y selecting the row.
class Grid2D {
 public:
  explicit Grid2D(int n) : n_(n), h_(1.0 / n) {
    if (n < 8) throw std::invalid_argument("Grid2D: n must be >= 8, got " + std::to_string(n));
    if (h_ * n != 1.0)
      throw std::invalid_argument("Grid2D: h*n != 1 in double arithmetic for n = " + std::to_string(n));
  }

  int n() const { return n_; }
  double h() const { return h_; }
  std::size_t size() const { return std::size_t(n_) * std::size_t(n_); }

  std::size_t index(int i, int j) const { return std::size_t(j) * std::size_t(n_) + std::size_t(i); }
  int wrap(int i) const {
    i %= n_;
    return i < 0 ? i + n_ : i;
  }
  int ix(std::size_t p) const { return int(p % std::size_t(n_)); }
  int iy(std::size_t p) const { return int(p / std::size_t(n_)); }
  double x(int i) const { return i * h_; }
  Point point(std::size_t p) const { return {x(ix(p)), x(iy(p))}; }

  bool operator==(const Grid2D& o) const { return n_ == o.n_; }

 private:
  int n_;
  double h_;
};

/// Field with `ncomp` values of type T per grid point, stored point-major so
/// each fiber is contiguous.
template <class T>
class Field {
 public:
  using value_type = T;

  Field(Grid2D grid, int ncomp, T init = T{})
      : grid_(grid), ncomp_(ncomp), data_(grid.size() * std::size_t(ncomp), init) {
    if (ncomp <= 0) throw std::invalid_argument("Field: ncomp must be positive");
  }

  const Grid2D& grid() const { return grid_; }
  int ncomp() const { return ncomp_; }
  std::size_t points() const { return grid_.size(); }

  T& operator()(std::size_t p, int c) { return data_[p * std::size_t(ncomp_) + std::size_t(c)]; }
  const T& operator()(std::size_t p, int c) const { return data_[p * std::size_t(ncomp_) + std::size_t(c)]; }

  std::span<T> fiber(std::size_t p) { return {data_.data() + p * std::size_t(ncomp_), std::size_t(ncomp_)}; }
  std::span<const T> fiber(std::size_t p) const {
    return {data_.data() + p * std::size_t(ncomp_), std::size_t(ncomp_)};
  }

  std::span<T> data() { return data_; }
  std::span<const T> data() const { return data_; }

  Field& operator+=(const Field& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Field& operator-=(const Field& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  template <class S>
  Field& operator*=(S s) {
    for (auto& v : data_) v *= s;
    return *this;
  }
  /// this += s * o
  template <class S>
  Field& axpy(S s, const Field& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += s * o.data_[k];
    return *this;
  }

  void check_same(const Field& o) const {
    if (!(grid_ == o.grid_) || ncomp_ != o.ncomp_)
      throw std::invalid_argument("Field: grid or fiber dimension mismatch");
  }

 private:
  Grid2D grid_;
  int ncomp_;
  std::vector<T> data_;
};

using RealField = Field<double>;
using ComplexField = Field<cplx>;

template <class T>
Field<T> operator+(Field<T> a, const Field<T>& b) {
  a += b;
  return a;
}
template <class T>
Field<T> operator-(Field<T> a, const Field<T>& b) {
  a -= b;
  return a;
}

/// Disc on the torus; radius < 1/2 keeps it inside one fundamental-domain chart.
struct DiscRegion {
  Point center;
  double radius;

  DiscRegion(Point c, double r) : center(c), radius(r) {
    if (!(r > 0.0) || !(r < 0.5)) throw std::invalid_argument("DiscRegion: radius must lie in (0, 1/2)");
  }
};

/// Signed shortest displacement b - a on the unit circle, in [-1/2, 1/2).
inline double torus_delta(double a, double b) {
  double d = b - a;
  d -= std::floor(d + 0.5);
  return d;
}

inline double torus_distance(Point a, Point b) {
  const double dx = torus_delta(a.x, b.x);
  const double dy = torus_delta(a.y, b.y);
  return std::sqrt(dx * dx + dy * dy);
}

}  // namespace sigma
