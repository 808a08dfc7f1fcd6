#pragma once

// Pointwise audits of the energy-density inequalities, the Hopf differential,
// the polar-coordinate identity, small-energy scaling probes and the interior
// gradient estimate, together with the constant bookkeeping they need.

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sigma/functional.hpp"

namespace sigma {

/// Structured failure of an audit precondition. `code` is machine readable:
/// infeasible-dtilde, range-violation, residual-too-large, invalid-config.
class EstimateError : public std::runtime_error {
 public:
  EstimateError(std::string code, const std::string& msg) : std::runtime_error(msg), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

struct EstimateConstants {
  int m = 2;
  double kappa1 = 0.0, kappa2 = 1.0, kappa3 = 1.0;
  double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0, c5 = 0.0, c6 = 0.0, c7 = 0.0, c8 = 1.0 / 6.0;
  double delta2 = 0.0, delta3 = 0.1, delta4 = 0.5, delta6 = 0.5, delta7 = 0.5, delta8 = 0.5, delta9 = 0.1,
         delta10 = 0.1;
  // derived
  double t = 0.0, p = 0.0, c10 = 0.0, c11 = 0.0, c12 = 0.0, c13 = 0.0, c14 = 0.0;

  /// Recompute t, p, c10..c14 from the primary entries and validate. A zero
  /// delta2 is accepted only together with c2 = 0, in which case c2^2/delta2 is 0.
  void derive();
  /// Throws std::invalid_argument if any derived identity or sign condition fails.
  void validate() const;

  /// Round-sphere instance with the default delta ledger; c4 from sphere_pairing_norm.
  static EstimateConstants sphere_defaults(int q = 3);
};

/// Operator norm of the map-equation spinor pairing on the round sphere:
/// sup |B(psi, dphi)| / (|psi|^2 |dphi|), B^i = Re <psi^i, e_a . psi^k> dphi^k(e_a).
/// Deterministic multi-start ascent; the analytic bound is sqrt(2).
double sphere_pairing_norm(int q);

struct AuditReport {
  std::string name;
  bool pass = true;
  double worst_margin = 0.0;  // most negative slack; pass <=> worst_margin >= -tolerance
  std::optional<Point> location;
  std::optional<double> location_r;
  double tolerance = 0.0;
  std::string error_code;  // non-empty when a precondition failed
  std::string error;
  std::map<std::string, double> info;
  std::vector<std::string> columns;  // per-point / per-radius data for plotting
  std::vector<std::vector<double>> rows;

  void finalize();  // sets pass from worst_margin and tolerance
  static AuditReport failure(const std::string& name, const EstimateError& e);
};

/// 1/2 (|dphi|^2 + |psi|^4) with centered derivatives.
ScalarField energy_density(const MapField& phi, const SpinorField& psi);
/// integral over the disc of |dphi|^2 + |psi|^4 (no 1/2).
double local_energy(const MapField& phi, const SpinorField& psi, const DiscRegion& region);

/// |de|^2 / (2e) <= |Hess phi|^2 + |d|psi|^2|^2 with the ambient Hessian.
/// Points with e <= 1e-10 are skipped.
AuditReport kato_audit(const MapField& phi, const SpinorField& psi, double rel_tol = 1e-6);

struct BochnerOptions {
  double eps_res = 1e-3;  // admissible residual L-infinity
  double c_slack = 10.0;
};

/// Lower bound for the Laplacian of the energy density on approximate solutions.
AuditReport bochner_audit(const MapField& phi, const SpinorField& psi, const EstimateConstants& k,
                          const BochnerOptions& opt = {});

struct HopfResult {
  ComplexField T;  // one component
  ComplexField dbar_T;
  double defect_l2 = 0.0;
};

HopfResult hopf_differential(const MapField& phi, const SpinorField& psi);

struct PolarRow {
  double r = 0.0;
  int samples = 0;
  double lhs = 0.0, rhs1 = 0.0, rhs2 = 0.0;
  double mismatch1 = 0.0, mismatch2 = 0.0, mismatch12 = 0.0;
};

/// Circle integrals of both right-hand sides of the polar identity against the
/// angular energy. tolerance is the relative mismatch accepted.
AuditReport polar_identity_audit(const MapField& phi, const SpinorField& psi, Point center,
                                 const std::vector<double>& radii, double tolerance,
                                 std::vector<PolarRow>* rows_out = nullptr);

struct EpsProbeRow {
  double factor = 0.0;
  double radius = 0.0;
  double sup_dphi = 0.0;
  std::optional<double> ratio1;     // sup |dphi| over the sub-disc / (|dphi|_L2(D) + |psi|^2_L4(D))
  std::optional<double> ratio_map;  // max |dphi(x)| s / (|dphi|_L2(D_2s) + |psi|_L4(D_2s))
  std::optional<double> ratio_spin; // max (|psi|^1/2 s^1/2 + |nabla psi| s^3/2) / |psi|_L4(D_2s)
};

struct EpsProbeReport {
  double energy = 0.0;  // E(phi, psi, D)
  std::vector<EpsProbeRow> rows;
};

EpsProbeReport epsilon_regularity_probe(const MapField& phi, const SpinorField& psi, const DiscRegion& D,
                                        const std::vector<double>& nested);

struct GradientEstimateConfig {
  std::vector<double> y0;  // unit vector in R^q
  double R = 0.45;         // target ball radius, must be < pi / (2 sqrt d1)
  double d1 = 10.0;
  Point x0{0.5, 0.5};
  double a = 0.4;               // domain ball radius, <= 0.45
  double residual_scale = 0.0;  // added to h in the slack model
  double c_slack = 10.0;
  double c_L = 4.0;  // Laplacian comparison constant on the flat torus

  double dtilde(const EstimateConstants& k) const;
};

/// xi = sqrt(d1) cos(sqrt(d1) rho), rho = arccos <phi, y0>.
double xi_of(double d1, double rho);

AuditReport gradient_estimate_audit(const MapField& phi, const SpinorField& psi, const GradientEstimateConfig& cfg,
                                    const EstimateConstants& k);

struct MaximizerResult {
  Point point;
  double value = 0.0;
  double r = 0.0;
  bool degenerate = false;  // F vanishes identically
  bool interior = true;     // argmax has r <= 0.9 a
};

MaximizerResult maximizer_diagnostic(const MapField& phi, const SpinorField& psi, const GradientEstimateConfig& cfg,
                                     const EstimateConstants& k);

struct FeasibilityRanges {
  std::vector<double> c1, c2, kappa2, R;                // user supplied
  std::vector<double> d1, delta2, delta3, delta4, delta10;  // scanned
  double c4 = 0.0;
};

struct FeasibilityEntry {
  double c1 = 0.0, c2 = 0.0, kappa2 = 0.0, R = 0.0;
  bool feasible = false;
  double best_margin = -std::numeric_limits<double>::infinity();
  double d1 = 0.0, delta2 = 0.0, delta3 = 0.0, delta4 = 0.0, delta10 = 0.0;  // best tuple
  std::optional<double> d1_threshold;  // smallest feasible d1 for the best deltas (c2 = 0 only)
  int tuples = 0;
};

/// d-tilde of the general (A != 0) branch. Returns -inf when R >= pi / (2 sqrt d1).
double dtilde_general(double d1, double delta2, double delta3, double delta4, double delta10, double c1, double c2,
                      double kappa2, double c4, double R);

std::vector<FeasibilityEntry> feasibility_scan_A_nonzero(const FeasibilityRanges& ranges);

}  // namespace sigma
