#pragma once

// Flat key = value run configuration with [section] prefixes, e.g.
//
//   [grid]
//   n = 64
//   [seed]
//   kind = geodesic
//   k = 1
//
// becomes {"grid.n": "64", "seed.kind": "geodesic", "seed.k": "1"}.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sigma/estimates.hpp"
#include "sigma/solver.hpp"

namespace sigma {

/// Collects every field-level problem before reporting.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> errs);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_config_text(const std::string& text);
ConfigMap load_config_file(const std::string& path);

struct RunConfig {
  int n = 64;
  int q = 3;
  std::uint64_t rng_seed = 1;
  SeedSpec seed;
  FlowConfig flow;

  std::vector<std::string> audits;
  std::string fields_dir;  // audit input; empty -> build the configured seed

  Point polar_center{0.5, 0.5};
  std::vector<double> polar_radii{0.10, 0.15, 0.20};
  std::optional<double> polar_tol;  // default 5 (h + flow.residual_tol)
  Point eps_center{0.5, 0.5};
  double eps_radius = 0.25;
  std::vector<double> eps_nested{1.0, 0.5, 0.25};
  double kato_tol = 1e-6;
  double hopf_c_slack = 10.0;
  BochnerOptions bochner;
  EstimateConstants constants;
  GradientEstimateConfig gradient;
  FeasibilityRanges feasibility;

  std::vector<int> conv_grids{32, 64, 128};
  std::vector<std::string> conv_families{"weitzenboeck", "hopf", "derivative", "laplacian"};

  std::string out_dir;
  ConfigMap echo;  // effective key/value entries, for the manifest
};

/// Validate and convert. `env_out` is the value of SIGMA_LAB_OUT if set; it
/// replaces the built-in default output directory.
RunConfig build_run_config(const ConfigMap& entries, const std::optional<std::string>& env_out = std::nullopt);

std::vector<std::string> known_config_keys();
const std::vector<std::string>& known_audits();

}  // namespace sigma
