#include "sigma/solver.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace sigma {

std::string to_string(SeedKind k) {
  switch (k) {
    case SeedKind::constant: return "constant";
    case SeedKind::geodesic: return "geodesic";
    case SeedKind::random_smooth: return "random-smooth";
    case SeedKind::perturbed_geodesic: return "perturbed-geodesic";
    case SeedKind::cap_geodesic: return "cap-geodesic";
    case SeedKind::elliptic: return "elliptic";
    case SeedKind::radial_twist: return "radial-twist";
  }
  return "?";
}

SeedKind parse_seed_kind(const std::string& s) {
  for (SeedKind k : {SeedKind::constant, SeedKind::geodesic, SeedKind::random_smooth, SeedKind::perturbed_geodesic,
                     SeedKind::cap_geodesic, SeedKind::elliptic, SeedKind::radial_twist})
    if (to_string(k) == s) return k;
  throw std::invalid_argument("unknown seed kind '" + s + "'");
}

std::string to_string(FlowStatus s) {
  switch (s) {
    case FlowStatus::converged: return "converged";
    case FlowStatus::max_iters: return "max-iters";
    case FlowStatus::blow_up: return "blow-up";
  }
  return "?";
}

std::vector<double> north_pole(int q) {
  std::vector<double> y(std::size_t(q), 0.0);
  y[2] = 1.0;
  return y;
}

RealField random_smooth_field(const Grid2D& g, int ncomp, int bandwidth, std::uint64_t rng_seed) {
  if (bandwidth < 1) throw std::invalid_argument("random-smooth: bandwidth must be >= 1");
  if (bandwidth >= g.n() / 4) throw std::invalid_argument("random-smooth: bandwidth must be < n/4");
  std::mt19937_64 rng(rng_seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  RealField out(g, ncomp);
  for (int c = 0; c < ncomp; ++c) {
    std::vector<double> vals(g.size(), 0.0);
    for (int kx = -bandwidth; kx <= bandwidth; ++kx)
      for (int ky = 0; ky <= bandwidth; ++ky) {
        if (ky == 0 && kx < 0) continue;
        const double decay = 1.0 / (1.0 + kx * kx + ky * ky);
        const double a = normal(rng) * decay, b = normal(rng) * decay;
        for (std::size_t p = 0; p < g.size(); ++p) {
          const Point pt = g.point(p);
          const double arg = 2.0 * M_PI * (kx * pt.x + ky * pt.y);
          vals[p] += a * std::cos(arg) + b * std::sin(arg);
        }
      }
    double mx = 0.0;
    for (double v : vals) mx = std::max(mx, std::abs(v));
    for (std::size_t p = 0; p < g.size(); ++p) out(p, c) = mx > 0.0 ? vals[p] / mx : 0.0;
  }
  return out;
}

namespace {

// Jacobi theta_1 with nome e^{-pi} (square lattice).
cplx theta1(cplx z) {
  const double nome = std::exp(-M_PI);
  cplx s = 0.0;
  for (int k = 0; k < 14; ++k) {
    const double w = std::pow(nome, (k + 0.5) * (k + 0.5));
    s += (k % 2 == 0 ? 1.0 : -1.0) * w * std::sin(double(2 * k + 1) * z);
  }
  return 2.0 * s;
}

// Numerator and denominator of f(w) = lambda th(a) th(b) / (th(c) th(d)).
struct EllipticParts {
  cplx num, den;
};

EllipticParts elliptic_parts(cplx w) {
  const cplx a{0.25, 0.25}, b{0.75, 0.75}, c{0.75, 0.25}, d{0.25, 0.75};
  return {theta1(M_PI * (w - a)) * theta1(M_PI * (w - b)), theta1(M_PI * (w - c)) * theta1(M_PI * (w - d))};
}

}  // namespace

RealField elliptic_map_values(const Grid2D& g, int q) {
  // f(w) f(w + 1/2) is constant: zeros and poles swap under the half shift.
  // Scale so that constant is 1 and the two halves cover one hemisphere each.
  const cplx w0{0.1, 0.05};
  const EllipticParts e0 = elliptic_parts(w0), e1 = elliptic_parts(w0 + 0.5);
  const double lambda = 1.0 / std::sqrt(std::abs((e0.num / e0.den) * (e1.num / e1.den)));

  RealField out(g, q);
  for (std::size_t p = 0; p < g.size(); ++p) {
    const Point pt = g.point(p);
    const EllipticParts e = elliptic_parts({pt.x, pt.y});
    const cplx num = lambda * e.num;
    double X, Y, Z;
    if (std::abs(num) <= std::abs(e.den)) {
      const cplx f = num / e.den;
      const double r2 = std::norm(f);
      X = 2.0 * f.real() / (1.0 + r2);
      Y = 2.0 * f.imag() / (1.0 + r2);
      Z = (r2 - 1.0) / (r2 + 1.0);
    } else {
      const cplx gg = e.den / num;
      const double r2 = std::norm(gg);
      X = 2.0 * gg.real() / (1.0 + r2);
      Y = -2.0 * gg.imag() / (1.0 + r2);
      Z = (1.0 - r2) / (1.0 + r2);
    }
    out(p, 0) = X;
    out(p, 1) = Y;
    out(p, 2) = Z;
  }
  return out;
}

FieldPair seed(const SeedSpec& spec, const Grid2D& g, int q) {
  if (q < 3) throw std::invalid_argument("seed: q must be >= 3");
  RealField v(g, q);
  SpinorField psi(g, q);
  switch (spec.kind) {
    case SeedKind::constant: {
      const auto y0 = north_pole(q);
      for (std::size_t p = 0; p < g.size(); ++p)
        for (int i = 0; i < q; ++i) v(p, i) = y0[std::size_t(i)];
      break;
    }
    case SeedKind::geodesic:
    case SeedKind::perturbed_geodesic: {
      if (spec.k < 0 || spec.k >= g.n() / 4)
        throw std::invalid_argument("seed: geodesic winding k must satisfy 0 <= k < n/4");
      std::optional<RealField> u;
      if (spec.kind == SeedKind::perturbed_geodesic) u = random_smooth_field(g, 1, spec.bandwidth, spec.rng_seed);
      for (std::size_t p = 0; p < g.size(); ++p) {
        double th = 2.0 * M_PI * spec.k * g.point(p).x;
        if (u) th += spec.amplitude * (*u)(p, 0);
        v(p, 0) = std::cos(th);
        v(p, 1) = std::sin(th);
      }
      break;
    }
    case SeedKind::random_smooth: {
      const RealField u = random_smooth_field(g, q, spec.bandwidth, spec.rng_seed);
      const auto y0 = north_pole(q);
      for (std::size_t p = 0; p < g.size(); ++p)
        for (int i = 0; i < q; ++i) v(p, i) = y0[std::size_t(i)] + spec.amplitude * u(p, i);
      MapField phi = retract(v);
      if (spec.spinor_amplitude != 0.0) {
        const RealField re = random_smooth_field(g, 2 * q, spec.bandwidth, spec.rng_seed + 0x9e3779b97f4a7c15ULL);
        const RealField im = random_smooth_field(g, 2 * q, spec.bandwidth, spec.rng_seed + 0x3c6ef372fe94f82aULL);
        ComplexField raw(g, 2 * q);
        for (std::size_t p = 0; p < g.size(); ++p)
          for (int c = 0; c < 2 * q; ++c) raw(p, c) = spec.spinor_amplitude * cplx(re(p, c), im(p, c));
        psi = SpinorField(project_tangent(phi, raw));
      }
      return {std::move(phi), std::move(psi)};
    }
    case SeedKind::cap_geodesic: {
      for (std::size_t p = 0; p < g.size(); ++p) {
        const double t = 2.0 * M_PI * g.point(p).x;
        v(p, 0) = spec.cap_eps * std::cos(t);
        v(p, 1) = spec.cap_eps * std::sin(t);
        v(p, 2) = 1.0;
      }
      break;
    }
    case SeedKind::elliptic:
      v = elliptic_map_values(g, q);
      break;
    case SeedKind::radial_twist: {
      for (std::size_t p = 0; p < g.size(); ++p) {
        const Point pt = g.point(p);
        const double sx = std::sin(M_PI * (pt.x - spec.center.x)), sy = std::sin(M_PI * (pt.y - spec.center.y));
        const double rho2 = (sx * sx + sy * sy) / (M_PI * M_PI);
        v(p, 0) = std::cos(spec.twist * rho2);
        v(p, 1) = std::sin(spec.twist * rho2);
      }
      break;
    }
  }
  return {retract(v), std::move(psi)};
}

FieldPair analytic_pair(const Grid2D& g, int q) {
  RealField v(g, q);
  ComplexField w(g, 2 * q);
  for (std::size_t p = 0; p < g.size(); ++p) {
    const double x = 2.0 * M_PI * g.point(p).x, y = 2.0 * M_PI * g.point(p).y;
    v(p, 0) = 0.6 * std::cos(x);
    v(p, 1) = 0.6 * std::sin(y);
    v(p, 2) = 1.0 + 0.3 * std::sin(x + y);
    for (int i = 0; i < q; ++i) {
      w(p, 2 * i) = cplx(std::cos(x + i * y), 0.5 * std::sin(2.0 * y - i));
      w(p, 2 * i + 1) = cplx(0.3 * std::sin(x - y + i), std::cos(x) * std::cos(y + i));
    }
  }
  MapField phi = retract(v);
  ComplexField t = project_tangent(phi, w);
  return {std::move(phi), SpinorField(std::move(t))};
}

FlowConfig FlowConfig::resolved(const Grid2D& g) const {
  FlowConfig c = *this;
  const double h2 = g.h() * g.h();
  if (c.step_map <= 0.0) c.step_map = h2 / 8.0;
  if (c.step_spinor <= 0.0) c.step_spinor = h2 / 4.0;
  if (!std::isfinite(c.step_map) || c.step_map > h2 / 8.0 * (1.0 + 1e-12))
    throw std::invalid_argument("flow.step_map must satisfy 0 < step_map <= h^2/8");
  if (!std::isfinite(c.step_spinor) || c.step_spinor > h2 / 4.0 * (1.0 + 1e-12))
    throw std::invalid_argument("flow.step_spinor must satisfy 0 < step_spinor <= h^2/4");
  if (c.max_iters < 0) throw std::invalid_argument("flow.max_iters must be >= 0");
  if (!(c.residual_tol > 0.0)) throw std::invalid_argument("flow.residual_tol must be > 0");
  if (c.trace_every < 1) throw std::invalid_argument("flow.trace_every must be >= 1");
  return c;
}

double constraint_defect(const MapField& phi, const SpinorField& psi) {
  return std::max(MapField::sphere_defect(phi.values()), tangency_defect(phi, psi));
}

namespace {

void check_finite(const RealField& f, const char* what) {
  for (double x : f.data())
    if (!std::isfinite(x)) throw BlowUpError(std::string("non-finite values in ") + what);
}

void check_finite(const ComplexField& f, const char* what) {
  for (const cplx& z : f.data())
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw BlowUpError(std::string("non-finite values in ") + what);
}

}  // namespace

FieldPair flow_step(const MapField& phi, const SpinorField& psi, const ResidualPair& res, const FlowConfig& cfg) {
  RealField v = phi.values();
  v.axpy(cfg.step_map, res.map_residual);
  check_finite(v, "map update");
  MapField phi_next = [&] {
    try {
      return retract(v);
    } catch (const ConstraintError& e) {
      throw BlowUpError(e.what());
    }
  }();

  if (psi.is_zero()) return {std::move(phi_next), SpinorField(phi.grid(), phi.q())};

  ComplexField w = psi.values();
  w.axpy(-cfg.step_spinor, twisted_dirac_unchecked(phi, res.spinor_residual.values()));
  check_finite(w, "spinor update");
  ComplexField projected = project_tangent(phi_next, w);
  return {std::move(phi_next), SpinorField(std::move(projected))};
}

FieldPair flow_step(const MapField& phi, const SpinorField& psi, const FlowConfig& cfg) {
  const FlowConfig c = cfg.resolved(phi.grid());
  return flow_step(phi, psi, el_residuals(phi, psi), c);
}

FlowResult run_flow(FieldPair start, const FlowConfig& cfg_in) {
  const FlowConfig cfg = cfg_in.resolved(start.phi.grid());
  std::vector<TraceRecord> trace;
  FieldPair cur = std::move(start);
  FlowStatus status = FlowStatus::max_iters;
  std::string message;
  int it = 0;
  for (;; ++it) {
    ResidualPair res = el_residuals(cur.phi, cur.psi);
    const bool done = res.map_l2 < cfg.residual_tol && res.spinor_l2 < cfg.residual_tol;
    const bool last = done || it >= cfg.max_iters;
    if (it % cfg.trace_every == 0 || last) {
      const EnergyBreakdown e = energy(cur.phi, cur.psi);
      if (!std::isfinite(e.total)) {
        status = FlowStatus::blow_up;
        message = "non-finite energy";
        trace.push_back({it, e.total, res.map_l2, res.spinor_l2, constraint_defect(cur.phi, cur.psi)});
        return {std::move(trace), std::move(cur), status, it, std::move(res), message};
      }
      trace.push_back({it, e.total, res.map_l2, res.spinor_l2, constraint_defect(cur.phi, cur.psi)});
    }
    if (done) {
      status = FlowStatus::converged;
      return {std::move(trace), std::move(cur), status, it, std::move(res), "residuals below tolerance"};
    }
    if (it >= cfg.max_iters) {
      std::ostringstream os;
      os << "no convergence after " << it << " iterations (map " << res.map_l2 << ", spinor " << res.spinor_l2 << ")";
      return {std::move(trace), std::move(cur), FlowStatus::max_iters, it, std::move(res), os.str()};
    }
    try {
      cur = flow_step(cur.phi, cur.psi, res, cfg);
    } catch (const BlowUpError& e) {
      return {std::move(trace), std::move(cur), FlowStatus::blow_up, it, std::move(res), e.what()};
    }
  }
}

FlowResult run_flow(const FlowConfig& cfg, const Grid2D& grid, int q) {
  return run_flow(seed(cfg.seed, grid, q), cfg);
}

}  // namespace sigma
