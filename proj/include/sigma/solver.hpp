#pragma once

// Seeds and a constrained explicit flow toward critical points.
//
// One step from (phi, psi) with residuals (r_map, r_spin):
//   phi' = retract(phi + s_map r_map)                 (r_map is minus the gradient)
//   psi' = P_{phi'}(psi - s_spin D r_spin)            (residual-minimizing pairing J = D)
// Stability: s_map <= h^2/8, s_spin <= h^2/4 (D^2 has spectral radius <= 2/h^2).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sigma/functional.hpp"

namespace sigma {

enum class SeedKind { constant, geodesic, random_smooth, perturbed_geodesic, cap_geodesic, elliptic, radial_twist };

std::string to_string(SeedKind k);
SeedKind parse_seed_kind(const std::string& s);

struct SeedSpec {
  SeedKind kind = SeedKind::constant;
  int k = 1;                      // geodesic winding
  int bandwidth = 3;              // random modes |k_x|, |k_y| <= bandwidth
  double amplitude = 0.5;         // map perturbation size
  double spinor_amplitude = 0.0;  // random spinor size (random_smooth only)
  double cap_eps = 0.1;           // cap radius parameter of cap_geodesic
  double twist = 20.0;            // radial_twist frequency
  Point center{0.5, 0.5};         // radial_twist center
  std::uint64_t rng_seed = 1;
};

struct FieldPair {
  MapField phi;
  SpinorField psi;
};

/// Base point of constant seeds and the default cap center: e_3.
std::vector<double> north_pole(int q);

FieldPair seed(const SeedSpec& spec, const Grid2D& grid, int q);

/// Band-limited random real field with `ncomp` components, sup-normalized to 1
/// per component.
RealField random_smooth_field(const Grid2D& g, int ncomp, int bandwidth, std::uint64_t rng_seed);

/// Degree-2 holomorphic map of the square torus onto the sphere built from
/// Jacobi theta functions, sampled on the grid (first three components).
RealField elliptic_map_values(const Grid2D& g, int q);

/// Smooth (phi, psi) with psi tangent and nonzero, for refinement studies of
/// identities that hold for arbitrary fields.
FieldPair analytic_pair(const Grid2D& g, int q);

struct FlowConfig {
  double step_map = 0.0;     // <= 0 selects h^2/8
  double step_spinor = 0.0;  // <= 0 selects h^2/4
  int max_iters = 100000;
  double residual_tol = 1e-6;
  int trace_every = 1;
  SeedSpec seed;

  /// Fill default steps for `g` and validate every field. Throws std::invalid_argument.
  FlowConfig resolved(const Grid2D& g) const;
};

class BlowUpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One constrained step. Throws BlowUpError on non-finite values.
FieldPair flow_step(const MapField& phi, const SpinorField& psi, const FlowConfig& cfg);
/// Same, reusing residuals already computed at (phi, psi).
FieldPair flow_step(const MapField& phi, const SpinorField& psi, const ResidualPair& res, const FlowConfig& cfg);

struct TraceRecord {
  int iter = 0;
  double energy = 0.0;
  double res_map = 0.0;
  double res_spinor = 0.0;
  double defect = 0.0;
};

enum class FlowStatus { converged, max_iters, blow_up };
std::string to_string(FlowStatus s);

struct FlowResult {
  std::vector<TraceRecord> trace;
  FieldPair fields;
  FlowStatus status = FlowStatus::max_iters;
  int iterations = 0;
  ResidualPair final_residuals;
  std::string message;
};

/// Iterates from `start` until both residual L2 norms drop below the tolerance.
FlowResult run_flow(FieldPair start, const FlowConfig& cfg);
/// Builds the seed from cfg.seed first.
FlowResult run_flow(const FlowConfig& cfg, const Grid2D& grid, int q);

/// max(sphere defect, spinor tangency defect).
double constraint_defect(const MapField& phi, const SpinorField& psi);

}  // namespace sigma
