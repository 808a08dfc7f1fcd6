#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "sigma/estimates.hpp"

namespace sigma {

namespace {

double sq(double x) { return x * x; }

// c^2 / delta with the degenerate branch c = 0 contributing nothing.
double ratio_term(double c, double delta) { return c == 0.0 ? 0.0 : c * c / delta; }

}  // namespace

void EstimateConstants::derive() {
  t = delta2 + delta4;
  p = (1.0 + t) / 2.0;
  c10 = kappa2 + c1 + ratio_term(c2, delta2) + delta3 + ratio_term(c4, delta4);
  c11 = ratio_term(c3, 4.0 * delta3) + ratio_term(c4, 4.0 * delta4) + c5 + 4.0 * ratio_term(c6, delta6) +
        m * kappa3 + m * ratio_term(c7, delta7);
  c12 = m * ratio_term(c8, delta8);
  c13 = 2.0 * c10;
  c14 = 2.0 * c11 + 2.0 * c12;
  validate();
}

void EstimateConstants::validate() const {
  auto fail = [](const std::string& s) { throw std::invalid_argument("EstimateConstants: " + s); };
  if (m != 2) fail("m must be 2 on a surface domain");
  if (kappa1 < 0.0) fail("kappa1 must be >= 0");
  for (double c : {c1, c2, c3, c4, c5, c6, c7, c8, kappa3})
    if (!(c >= 0.0)) fail("c1..c8 and kappa3 must be >= 0");
  for (double d : {delta3, delta4, delta6, delta7, delta8, delta9, delta10})
    if (!(d > 0.0)) fail("delta3..delta10 must be > 0");
  if (delta2 < 0.0 || (delta2 == 0.0 && c2 != 0.0)) fail("delta2 must be > 0 unless c2 = 0");
  if (t != delta2 + delta4) fail("t != delta2 + delta4");
  if (p != (1.0 + t) / 2.0) fail("p != (1 + t)/2");
  if (c13 != 2.0 * c10) fail("c13 != 2 c10");
  if (c14 != 2.0 * c11 + 2.0 * c12) fail("c14 != 2 c11 + 2 c12");
  if (c10 != kappa2 + c1 + ratio_term(c2, delta2) + delta3 + ratio_term(c4, delta4)) fail("c10 identity");
}

double sphere_pairing_norm(int q) {
  // Tangent plane at e_q: coordinates 0..d-1 with d = q - 1. psi has d complex
  // 2-vectors, dphi is d x 2. For fixed psi the pairing is linear in dphi, so
  // the sup over unit dphi is the top singular value of that map.
  const int d = q - 1;
  const CliffordRep& rep = default_clifford();
  auto value = [&](const std::vector<cplx>& psi) {
    // L[i][(k, a)] = Re <psi^i, g_a psi^k>
    std::vector<double> L(std::size_t(d) * 2 * d);
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k)
        for (int a = 0; a < 2; ++a) {
          const Mat2& g = rep.gamma(a + 1);
          cplx s = 0.0;
          for (int r = 0; r < 2; ++r)
            s += std::conj(psi[2 * i + r]) * (g[r][0] * psi[2 * k] + g[r][1] * psi[2 * k + 1]);
          L[std::size_t(i) * 2 * d + std::size_t(2 * k + a)] = s.real();
        }
    // power iteration on L L^T (d x d, symmetric PSD)
    std::vector<double> M(std::size_t(d * d), 0.0);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        double s = 0.0;
        for (int c = 0; c < 2 * d; ++c) s += L[std::size_t(i * 2 * d + c)] * L[std::size_t(j * 2 * d + c)];
        M[std::size_t(i * d + j)] = s;
      }
    std::vector<double> v(static_cast<std::size_t>(d), 1.0), w(static_cast<std::size_t>(d));
    double lam = 0.0;
    for (int it = 0; it < 200; ++it) {
      double nrm = 0.0;
      for (int i = 0; i < d; ++i) {
        double s = 0.0;
        for (int j = 0; j < d; ++j) s += M[std::size_t(i * d + j)] * v[std::size_t(j)];
        w[std::size_t(i)] = s;
        nrm += s * s;
      }
      nrm = std::sqrt(nrm);
      if (nrm == 0.0) return 0.0;
      lam = nrm;
      for (int i = 0; i < d; ++i) v[std::size_t(i)] = w[std::size_t(i)] / nrm;
    }
    return std::sqrt(lam);
  };
  auto normalize = [](std::vector<cplx>& psi) {
    double s = 0.0;
    for (auto& z : psi) s += std::norm(z);
    s = std::sqrt(s);
    for (auto& z : psi) z /= s;
  };

  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> normal(0.0, 1.0);
  double best = 0.0;
  for (int start = 0; start < 64; ++start) {
    std::vector<cplx> psi(std::size_t(2 * d));
    for (auto& z : psi) z = {normal(rng), normal(rng)};
    normalize(psi);
    double cur = value(psi);
    double step = 0.3;
    while (step > 1e-10) {
      bool improved = false;
      for (int trial = 0; trial < 8 * d; ++trial) {
        std::vector<cplx> cand = psi;
        for (auto& z : cand) z += step * cplx(normal(rng), normal(rng));
        normalize(cand);
        const double v = value(cand);
        if (v > cur) {
          cur = v;
          psi = std::move(cand);
          improved = true;
        }
      }
      if (!improved) step *= 0.5;
    }
    best = std::max(best, cur);
  }
  return best;
}

EstimateConstants EstimateConstants::sphere_defaults(int q) {
  EstimateConstants k;
  k.c4 = sphere_pairing_norm(q);
  k.derive();
  return k;
}

void AuditReport::finalize() {
  if (!error_code.empty()) {
    pass = false;
    return;
  }
  pass = worst_margin >= -tolerance;
}

AuditReport AuditReport::failure(const std::string& name, const EstimateError& e) {
  AuditReport r;
  r.name = name;
  r.pass = false;
  r.worst_margin = std::numeric_limits<double>::quiet_NaN();
  r.error_code = e.code();
  r.error = e.what();
  return r;
}

ScalarField energy_density(const MapField& phi, const SpinorField& psi) {
  const RealField px = derivative(phi.values(), Axis::x);
  const RealField py = derivative(phi.values(), Axis::y);
  ScalarField e = pointwise_norm2(px);
  e += pointwise_norm2(py);
  const ScalarField s = pointwise_norm2(psi.values());
  for (std::size_t p = 0; p < e.points(); ++p) e(p, 0) = 0.5 * (e(p, 0) + s(p, 0) * s(p, 0));
  return e;
}

double local_energy(const MapField& phi, const SpinorField& psi, const DiscRegion& region) {
  ScalarField e = energy_density(phi, psi);
  e *= 2.0;
  return integrate(e, region);
}

namespace {

struct Derivs {
  RealField d[2];     // d_a phi
  RealField H[2][2];  // d_b d_a phi (ambient)
  ScalarField s;      // |psi|^2
  ScalarField ds[2];  // d_b |psi|^2
};

Derivs derivs(const MapField& phi, const SpinorField& psi) {
  const RealField dx = derivative(phi.values(), Axis::x);
  const RealField dy = derivative(phi.values(), Axis::y);
  ScalarField s = pointwise_norm2(psi.values());
  ScalarField sx = derivative(s, Axis::x), sy = derivative(s, Axis::y);
  return Derivs{{dx, dy},
                {{derivative(dx, Axis::x), derivative(dx, Axis::y)}, {derivative(dy, Axis::x), derivative(dy, Axis::y)}},
                std::move(s),
                {std::move(sx), std::move(sy)}};
}

}  // namespace

AuditReport kato_audit(const MapField& phi, const SpinorField& psi, double rel_tol) {
  AuditReport rep;
  rep.name = "kato";
  rep.columns = {"x", "y", "lhs", "rhs", "margin"};
  const Derivs D = derivs(phi, psi);
  const Grid2D& g = phi.grid();
  const int q = phi.q();
  double scale = 0.0;
  double worst = std::numeric_limits<double>::infinity();
  int checked = 0;
  std::vector<double> lhs(g.size(), 0.0), rhs(g.size(), 0.0);
  std::vector<char> used(g.size(), 0);
  for (std::size_t p = 0; p < g.size(); ++p) {
    double grad2 = 0.0;
    for (int a = 0; a < 2; ++a)
      for (int i = 0; i < q; ++i) grad2 += sq(D.d[a](p, i));
    const double s = D.s(p, 0);
    const double e = 0.5 * (grad2 + s * s);
    double hess2 = 0.0, ds2 = 0.0, de2 = 0.0;
    for (int b = 0; b < 2; ++b) {
      double de = s * D.ds[b](p, 0);
      for (int a = 0; a < 2; ++a)
        for (int i = 0; i < q; ++i) {
          de += D.d[a](p, i) * D.H[a][b](p, i);
          hess2 += sq(D.H[a][b](p, i));
        }
      ds2 += sq(D.ds[b](p, 0));
      de2 += de * de;
    }
    rhs[p] = hess2 + ds2;
    scale = std::max(scale, rhs[p]);
    if (e <= 1e-10) continue;
    lhs[p] = de2 / (2.0 * e);
    used[p] = 1;
    ++checked;
  }
  for (std::size_t p = 0; p < g.size(); ++p) {
    if (!used[p]) continue;
    const double margin = rhs[p] - lhs[p];
    rep.rows.push_back({g.point(p).x, g.point(p).y, lhs[p], rhs[p], margin});
    if (margin < worst) {
      worst = margin;
      rep.location = g.point(p);
    }
  }
  rep.worst_margin = checked > 0 ? worst : 0.0;
  rep.tolerance = rel_tol * (1.0 + scale);
  rep.info["checked_points"] = checked;
  rep.finalize();
  return rep;
}

AuditReport bochner_audit(const MapField& phi, const SpinorField& psi, const EstimateConstants& k,
                          const BochnerOptions& opt) {
  k.validate();
  const ResidualPair res = el_residuals(phi, psi);
  if (res.linf > opt.eps_res) {
    std::ostringstream os;
    os << "residual L-infinity " << res.linf << " exceeds eps_res " << opt.eps_res;
    throw EstimateError("residual-too-large", os.str());
  }
  AuditReport rep;
  rep.name = "bochner";
  rep.columns = {"x", "y", "lap_e", "rhs", "margin"};
  const Grid2D& g = phi.grid();
  const int q = phi.q();
  const Derivs D = derivs(phi, psi);
  const ScalarField e = energy_density(phi, psi);
  const ScalarField lap_e = laplacian(e);
  const bool spin = !psi.is_zero();
  std::optional<ComplexField> nab[2];
  if (spin) {
    nab[0] = project_tangent(phi, derivative(psi.values(), Axis::x));
    nab[1] = project_tangent(phi, derivative(psi.values(), Axis::y));
  }
  const double coef_spin = 2.0 - k.delta4 - k.delta6 - k.delta7 - k.delta8;
  double sup_e = 0.0;
  for (std::size_t p = 0; p < g.size(); ++p) sup_e = std::max(sup_e, e(p, 0));

  double worst = std::numeric_limits<double>::infinity();
  std::vector<double> buf(static_cast<std::size_t>(q));
  for (std::size_t p = 0; p < g.size(); ++p) {
    double grad2 = 0.0;
    for (int a = 0; a < 2; ++a)
      for (int i = 0; i < q; ++i) grad2 += sq(D.d[a](p, i));
    // intrinsic Hessian: tangential part of the ambient second derivatives
    double hess2 = 0.0;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        double dot = 0.0;
        for (int i = 0; i < q; ++i) dot += D.H[a][b](p, i) * phi(p, i);
        for (int i = 0; i < q; ++i) hess2 += sq(D.H[a][b](p, i) - dot * phi(p, i));
      }
    const double s = D.s(p, 0);
    const double ds2 = sq(D.ds[0](p, 0)) + sq(D.ds[1](p, 0));
    double nab2 = 0.0;
    if (spin)
      for (int a = 0; a < 2; ++a)
        for (int c = 0; c < 2 * q; ++c) nab2 += std::norm((*nab[a])(p, c));
    const double s2 = s * s;
    const double rhs = (1.0 - k.t) * hess2 + ds2 + coef_spin * s * nab2 - k.c10 * grad2 * grad2 -
                       k.kappa1 * grad2 - k.c11 * grad2 * s2 - k.c12 * s2 * s2;
    const double margin = lap_e(p, 0) - rhs;
    rep.rows.push_back({g.point(p).x, g.point(p).y, lap_e(p, 0), rhs, margin});
    if (margin < worst) {
      worst = margin;
      rep.location = g.point(p);
    }
  }
  rep.worst_margin = worst;
  const double h = g.h();
  rep.tolerance = opt.c_slack * (res.linf + h * h) * (1.0 + sup_e);
  rep.info["residual_linf"] = res.linf;
  rep.info["sup_e"] = sup_e;
  rep.info["c_slack"] = opt.c_slack;
  rep.finalize();
  return rep;
}

double GradientEstimateConfig::dtilde(const EstimateConstants& k) const {
  return d1 - (1.0 + k.delta4) * (k.kappa2 + k.delta3 + ratio_term(k.c4, k.delta4)) - k.delta9;
}

double xi_of(double d1, double rho) { return std::sqrt(d1) * std::cos(std::sqrt(d1) * rho); }

namespace {

void validate_gradient_cfg(const MapField& phi, const GradientEstimateConfig& cfg, const EstimateConstants& k) {
  k.validate();
  if (k.c2 != 0.0 || k.c1 != 0.0)
    throw EstimateError("invalid-config", "gradient estimate requires the A = 0 branch (c1 = c2 = 0)");
  if (int(cfg.y0.size()) != phi.q()) throw EstimateError("invalid-config", "y0 has wrong dimension");
  double n2 = 0.0;
  for (double v : cfg.y0) n2 += v * v;
  if (std::abs(std::sqrt(n2) - 1.0) > 1e-12) throw EstimateError("invalid-config", "y0 must be a unit vector");
  if (!(cfg.a > 0.0) || cfg.a > 0.45) throw EstimateError("invalid-config", "domain radius a must lie in (0, 0.45]");
  if (!(cfg.d1 > 0.0)) throw EstimateError("invalid-config", "d1 must be > 0");
  if (!(cfg.R > 0.0) || !(cfg.R < M_PI / (2.0 * std::sqrt(cfg.d1))))
    throw EstimateError("invalid-config", "target radius R must satisfy 0 < R < pi/(2 sqrt d1)");
  const double dt = cfg.dtilde(k);
  if (!(dt > 0.0)) {
    std::ostringstream os;
    os << "d-tilde = " << dt << " <= 0 for d1 = " << cfg.d1;
    throw EstimateError("infeasible-dtilde", os.str());
  }
}

double rho_at(const MapField& phi, std::size_t p, const std::vector<double>& y0) {
  double c = 0.0;
  for (int i = 0; i < phi.q(); ++i) c += phi(p, i) * y0[std::size_t(i)];
  return std::acos(std::clamp(c, -1.0, 1.0));
}

void check_range(const MapField& phi, const GradientEstimateConfig& cfg) {
  const Grid2D& g = phi.grid();
  for (std::size_t p = 0; p < g.size(); ++p) {
    if (torus_distance(g.point(p), cfg.x0) >= cfg.a) continue;
    const double rho = rho_at(phi, p, cfg.y0);
    if (!(rho < cfg.R)) {
      std::ostringstream os;
      os << "image not in B_R(y0): rho = " << rho << " >= R = " << cfg.R << " at (" << g.point(p).x << ", "
         << g.point(p).y << ")";
      throw EstimateError("range-violation", os.str());
    }
  }
}

}  // namespace

AuditReport gradient_estimate_audit(const MapField& phi, const SpinorField& psi, const GradientEstimateConfig& cfg,
                                    const EstimateConstants& k) {
  validate_gradient_cfg(phi, cfg, k);
  check_range(phi, cfg);
  AuditReport rep;
  rep.name = "gradient-estimate";
  rep.columns = {"x", "y", "r", "dphi", "bound", "margin"};
  const Grid2D& g = phi.grid();
  const double dt = cfg.dtilde(k);
  const double a2 = cfg.a * cfg.a;
  const RealField px = derivative(phi.values(), Axis::x);
  const RealField py = derivative(phi.values(), Axis::y);
  const ScalarField s = pointwise_norm2(psi.values());
  double worst = std::numeric_limits<double>::infinity();
  double sup_dphi = 0.0, min_xi = std::numeric_limits<double>::infinity(), max_xi = 0.0;
  int checked = 0;
  for (std::size_t p = 0; p < g.size(); ++p) {
    const double r = torus_distance(g.point(p), cfg.x0);
    if (r > 0.9 * cfg.a) continue;
    double d2 = 0.0;
    for (int i = 0; i < phi.q(); ++i) d2 += sq(px(p, i)) + sq(py(p, i));
    const double dphi = std::sqrt(d2);
    const double xi = xi_of(cfg.d1, rho_at(phi, p, cfg.y0));
    min_xi = std::min(min_xi, xi);
    max_xi = std::max(max_xi, xi);
    const double w = a2 - r * r;
    const double L1 = cfg.c_L * (1.0 + r) / w + (1.0 + (1.0 + k.t) / (2.0 * k.p)) * 4.0 * r * r / (w * w) +
                      k.p * (k.m / 2.0) * k.kappa1;
    const double L2 = (1.0 + k.delta4) / 2.0 * k.c14 + sq(cfg.d1) * sq(k.c4) / (4.0 * xi * xi * k.delta9) +
                      cfg.d1 * k.c6 / xi;
    const double psi4 = s(p, 0) * s(p, 0);
    const double bound = 4.0 * r * cfg.d1 / (dt * w * xi) + std::sqrt((L1 + L2 * psi4) / dt);
    const double margin = bound - dphi;
    sup_dphi = std::max(sup_dphi, dphi);
    rep.rows.push_back({g.point(p).x, g.point(p).y, r, dphi, bound, margin});
    ++checked;
    if (margin < worst) {
      worst = margin;
      rep.location = g.point(p);
    }
  }
  rep.worst_margin = checked > 0 ? worst : 0.0;
  rep.tolerance = cfg.c_slack * (cfg.residual_scale + g.h()) * (1.0 + sup_dphi);
  rep.info["dtilde"] = dt;
  rep.info["d1"] = cfg.d1;
  rep.info["c_L"] = cfg.c_L;
  rep.info["c4"] = k.c4;
  rep.info["min_xi"] = min_xi;
  rep.info["max_xi"] = max_xi;
  rep.info["sqrt_d1"] = std::sqrt(cfg.d1);
  rep.info["checked_points"] = checked;
  rep.finalize();
  return rep;
}

MaximizerResult maximizer_diagnostic(const MapField& phi, const SpinorField& psi, const GradientEstimateConfig& cfg,
                                     const EstimateConstants& k) {
  validate_gradient_cfg(phi, cfg, k);
  check_range(phi, cfg);
  const Grid2D& g = phi.grid();
  const ScalarField e = energy_density(phi, psi);
  MaximizerResult best;
  best.value = -1.0;
  for (std::size_t p = 0; p < g.size(); ++p) {
    const double r = torus_distance(g.point(p), cfg.x0);
    if (r >= cfg.a) continue;
    const double xi = xi_of(cfg.d1, rho_at(phi, p, cfg.y0));
    const double F = (cfg.a * cfg.a - r * r) / xi * std::pow(e(p, 0), k.p);
    if (F > best.value) {
      best.value = F;
      best.point = g.point(p);
      best.r = r;
    }
  }
  best.degenerate = !(best.value > 0.0);
  best.interior = best.degenerate || best.r <= 0.9 * cfg.a;
  if (best.degenerate) {
    best.value = 0.0;
    best.point = cfg.x0;
    best.r = 0.0;
  }
  return best;
}

double dtilde_general(double d1, double delta2, double delta3, double delta4, double delta10, double c1, double c2,
                      double kappa2, double c4, double R) {
  if (!(d1 > 0.0) || !(R < M_PI / (2.0 * std::sqrt(d1)))) return -std::numeric_limits<double>::infinity();
  if (c2 != 0.0 && !(delta2 > 0.0)) return -std::numeric_limits<double>::infinity();
  return d1 - (1.0 + delta2 + delta4) * (kappa2 + c1 + ratio_term(c2, delta2) + delta3 + ratio_term(c4, delta4)) -
         delta10 - c2 * std::sqrt(d1) / std::cos(std::sqrt(d1) * R);
}

std::vector<FeasibilityEntry> feasibility_scan_A_nonzero(const FeasibilityRanges& rg) {
  std::vector<FeasibilityEntry> out;
  for (double c1 : rg.c1)
    for (double c2 : rg.c2)
      for (double kappa2 : rg.kappa2)
        for (double R : rg.R) {
          FeasibilityEntry e;
          e.c1 = c1;
          e.c2 = c2;
          e.kappa2 = kappa2;
          e.R = R;
          for (double d1 : rg.d1)
            for (double d2 : rg.delta2)
              for (double d3 : rg.delta3)
                for (double d4 : rg.delta4)
                  for (double d10 : rg.delta10) {
                    if (d2 == 0.0 && c2 != 0.0) continue;
                    ++e.tuples;
                    const double m = dtilde_general(d1, d2, d3, d4, d10, c1, c2, kappa2, rg.c4, R);
                    if (m > e.best_margin) {
                      e.best_margin = m;
                      e.d1 = d1;
                      e.delta2 = d2;
                      e.delta3 = d3;
                      e.delta4 = d4;
                      e.delta10 = d10;
                    }
                  }
          e.feasible = e.best_margin > 0.0;
          if (c2 == 0.0 && e.tuples > 0)
            e.d1_threshold = (1.0 + e.delta2 + e.delta4) * (kappa2 + c1 + e.delta3 + ratio_term(rg.c4, e.delta4)) +
                             e.delta10;
          out.push_back(e);
        }
  return out;
}

}  // namespace sigma
