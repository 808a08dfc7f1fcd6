#include "sigma/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace sigma {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string unquote(std::string s) {
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') || (s.front() == '\'' && s.back() == '\'')))
    return s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string> split_list(std::string s) {
  s = trim(s);
  if (s.size() >= 2 && s.front() == '[' && s.back() == ']') s = s.substr(1, s.size() - 2);
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string item;
  while (std::getline(is, item, ',')) {
    item = unquote(trim(item));
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i];
  return s;
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> errs)
    : std::runtime_error("invalid configuration: " + join(errs)), errors_(std::move(errs)) {}

ConfigMap parse_config_text(const std::string& text) {
  ConfigMap out;
  std::vector<std::string> errs;
  std::istringstream is(text);
  std::string line, section;
  int ln = 0;
  while (std::getline(is, line)) {
    ++ln;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        errs.push_back("line " + std::to_string(ln) + ": unterminated section header");
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errs.push_back("line " + std::to_string(ln) + ": expected key = value");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) {
      errs.push_back("line " + std::to_string(ln) + ": empty key");
      continue;
    }
    out[section.empty() ? key : section + "." + key] = unquote(trim(line.substr(eq + 1)));
  }
  if (!errs.empty()) throw ValidationError(errs);
  return out;
}

ConfigMap load_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ValidationError({"config: cannot read '" + path + "'"});
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config_text(ss.str());
}

const std::vector<std::string>& known_audits() {
  static const std::vector<std::string> a{"kato",           "bochner",           "hopf",      "polar",
                                          "eps-regularity", "gradient-estimate", "maximizer", "feasibility-scan"};
  return a;
}

namespace {

// Declarative binding of keys to RunConfig fields.
struct Binder {
  const ConfigMap& in;
  std::vector<std::string>& errs;
  std::vector<std::string> keys;

  const std::string* get(const std::string& key) {
    keys.push_back(key);
    auto it = in.find(key);
    return it == in.end() ? nullptr : &it->second;
  }

  void real(const std::string& key, double& dst, std::function<bool(double)> ok = {}, const char* rule = "") {
    const std::string* v = get(key);
    if (!v) return;
    char* end = nullptr;
    const double x = std::strtod(v->c_str(), &end);
    if (v->empty() || end != v->c_str() + v->size() || !std::isfinite(x)) {
      errs.push_back(key + ": expected a real number, got '" + *v + "'");
      return;
    }
    if (ok && !ok(x)) {
      errs.push_back(key + ": " + rule + ", got " + *v);
      return;
    }
    dst = x;
  }

  template <class I>
  void integer(const std::string& key, I& dst, std::function<bool(long long)> ok = {}, const char* rule = "") {
    const std::string* v = get(key);
    if (!v) return;
    char* end = nullptr;
    const long long x = std::strtoll(v->c_str(), &end, 10);
    if (v->empty() || end != v->c_str() + v->size()) {
      errs.push_back(key + ": expected an integer, got '" + *v + "'");
      return;
    }
    if (ok && !ok(x)) {
      errs.push_back(key + ": " + rule + ", got " + *v);
      return;
    }
    dst = I(x);
  }

  void u64(const std::string& key, std::uint64_t& dst) {
    const std::string* v = get(key);
    if (!v) return;
    char* end = nullptr;
    const unsigned long long x = std::strtoull(v->c_str(), &end, 10);
    if (v->empty() || v->front() == '-' || end != v->c_str() + v->size()) {
      errs.push_back(key + ": expected an unsigned 64-bit integer, got '" + *v + "'");
      return;
    }
    dst = x;
  }

  void text(const std::string& key, std::string& dst) {
    if (const std::string* v = get(key)) dst = *v;
  }

  void reals(const std::string& key, std::vector<double>& dst) {
    const std::string* v = get(key);
    if (!v) return;
    std::vector<double> out;
    for (const auto& s : split_list(*v)) {
      char* end = nullptr;
      const double x = std::strtod(s.c_str(), &end);
      if (end != s.c_str() + s.size() || !std::isfinite(x)) {
        errs.push_back(key + ": bad list entry '" + s + "'");
        return;
      }
      out.push_back(x);
    }
    dst = std::move(out);
  }

  void strings(const std::string& key, std::vector<std::string>& dst) {
    if (const std::string* v = get(key)) dst = split_list(*v);
  }
};

}  // namespace

namespace {

RunConfig bind(const ConfigMap& entries, std::vector<std::string>& errs, std::vector<std::string>* keys_out) {
  RunConfig c;
  Binder b{entries, errs, {}};
  auto positive = [](double x) { return x > 0.0; };

  b.integer("grid.n", c.n, [](long long v) { return v >= 8 && v <= 4096; }, "must satisfy 8 <= n <= 4096");
  b.integer("target.q", c.q, [](long long v) { return v >= 3 && v <= 16; }, "must satisfy 3 <= q <= 16");
  b.u64("rng.seed", c.rng_seed);

  std::string kind = to_string(c.seed.kind);
  b.text("seed.kind", kind);
  try {
    c.seed.kind = parse_seed_kind(kind);
  } catch (const std::invalid_argument& e) {
    errs.push_back(std::string("seed.kind: ") + e.what());
  }
  b.integer("seed.k", c.seed.k, [](long long v) { return v >= 0; }, "must be >= 0");
  b.integer("seed.bandwidth", c.seed.bandwidth, [](long long v) { return v >= 1; }, "must be >= 1");
  b.real("seed.amplitude", c.seed.amplitude);
  b.real("seed.spinor_amplitude", c.seed.spinor_amplitude);
  b.real("seed.cap_eps", c.seed.cap_eps, positive, "must be > 0");
  b.real("seed.twist", c.seed.twist);
  b.real("seed.center_x", c.seed.center.x);
  b.real("seed.center_y", c.seed.center.y);

  b.real("flow.step_map", c.flow.step_map);
  b.real("flow.step_spinor", c.flow.step_spinor);
  b.integer("flow.max_iters", c.flow.max_iters, [](long long v) { return v >= 0 && v <= 100000000; },
            "must satisfy 0 <= max_iters <= 1e8");
  b.real("flow.residual_tol", c.flow.residual_tol, positive, "must be > 0");
  b.integer("flow.trace_every", c.flow.trace_every, [](long long v) { return v >= 1; }, "must be >= 1");

  b.strings("audit.list", c.audits);
  b.text("audit.fields", c.fields_dir);
  b.real("audit.polar_center_x", c.polar_center.x);
  b.real("audit.polar_center_y", c.polar_center.y);
  b.reals("audit.polar_radii", c.polar_radii);
  double ptol = -1.0;
  b.real("audit.polar_tol", ptol, positive, "must be > 0");
  if (ptol > 0.0) c.polar_tol = ptol;
  b.real("audit.eps_center_x", c.eps_center.x);
  b.real("audit.eps_center_y", c.eps_center.y);
  b.real("audit.eps_radius", c.eps_radius, [](double r) { return r > 0.0 && r < 0.5; }, "must lie in (0, 1/2)");
  b.reals("audit.eps_nested", c.eps_nested);
  b.real("audit.kato_tol", c.kato_tol, positive, "must be > 0");
  b.real("audit.hopf_c_slack", c.hopf_c_slack, positive, "must be > 0");
  b.real("audit.bochner_eps_res", c.bochner.eps_res, positive, "must be > 0");
  b.real("audit.bochner_c_slack", c.bochner.c_slack, positive, "must be > 0");

  EstimateConstants& k = c.constants;
  k.c4 = std::numeric_limits<double>::quiet_NaN();  // filled from the pairing norm unless given
  for (auto [name, dst] : std::initializer_list<std::pair<const char*, double*>>{
           {"kappa1", &k.kappa1}, {"kappa2", &k.kappa2}, {"kappa3", &k.kappa3}, {"c1", &k.c1},
           {"c2", &k.c2},         {"c3", &k.c3},         {"c4", &k.c4},         {"c5", &k.c5},
           {"c6", &k.c6},         {"c7", &k.c7},         {"c8", &k.c8},         {"delta2", &k.delta2},
           {"delta3", &k.delta3}, {"delta4", &k.delta4}, {"delta6", &k.delta6}, {"delta7", &k.delta7},
           {"delta8", &k.delta8}, {"delta9", &k.delta9}, {"delta10", &k.delta10}})
    b.real(std::string("constants.") + name, *dst);

  GradientEstimateConfig& gcfg = c.gradient;
  b.reals("gradient.y0", gcfg.y0);
  b.real("gradient.R", gcfg.R);
  b.real("gradient.d1", gcfg.d1);
  b.real("gradient.x0_x", gcfg.x0.x);
  b.real("gradient.x0_y", gcfg.x0.y);
  b.real("gradient.a", gcfg.a);
  b.real("gradient.residual_scale", gcfg.residual_scale);
  b.real("gradient.c_slack", gcfg.c_slack, positive, "must be > 0");

  FeasibilityRanges& fr = c.feasibility;
  fr.c1 = {0.0};
  fr.c2 = {0.0, 100.0};
  fr.kappa2 = {1.0};
  fr.R = {0.5};
  fr.d1 = {3.0};
  fr.delta2 = {0.0};
  fr.delta3 = {0.1};
  fr.delta4 = {1.0};
  fr.delta10 = {0.1};
  b.reals("feasibility.c1", fr.c1);
  b.reals("feasibility.c2", fr.c2);
  b.reals("feasibility.kappa2", fr.kappa2);
  b.reals("feasibility.R", fr.R);
  b.reals("feasibility.d1", fr.d1);
  b.reals("feasibility.delta2", fr.delta2);
  b.reals("feasibility.delta3", fr.delta3);
  b.reals("feasibility.delta4", fr.delta4);
  b.reals("feasibility.delta10", fr.delta10);
  b.real("feasibility.c4", fr.c4, [](double x) { return x >= 0.0; }, "must be >= 0");

  std::vector<double> grids;
  b.reals("convergence.grids", grids);
  if (!grids.empty()) {
    c.conv_grids.clear();
    for (double gsz : grids) c.conv_grids.push_back(int(gsz));
  }
  b.strings("convergence.families", c.conv_families);

  b.text("output.dir", c.out_dir);
  if (keys_out) *keys_out = b.keys;
  return c;
}

}  // namespace

std::vector<std::string> known_config_keys() {
  std::vector<std::string> errs, keys;
  bind({}, errs, &keys);
  return keys;
}

RunConfig build_run_config(const ConfigMap& entries, const std::optional<std::string>& env_out) {
  std::vector<std::string> errs, keys;
  RunConfig c = bind(entries, errs, &keys);
  for (const auto& [key, value] : entries)
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) errs.push_back(key + ": unknown key");

  // cross-field checks against module preconditions
  if (c.n >= 8) {
    try {
      const Grid2D g(c.n);
      try {
        c.flow = c.flow.resolved(g);
      } catch (const std::invalid_argument& e) {
        errs.push_back(e.what());
      }
      if ((c.seed.kind == SeedKind::geodesic || c.seed.kind == SeedKind::perturbed_geodesic) && c.seed.k >= c.n / 4)
        errs.push_back("seed.k: geodesic winding must be < n/4");
      if ((c.seed.kind == SeedKind::random_smooth || c.seed.kind == SeedKind::perturbed_geodesic) &&
          c.seed.bandwidth >= c.n / 4)
        errs.push_back("seed.bandwidth: must be < n/4");
      for (double r : c.polar_radii)
        if (!(r > 0.0) || !(r + 2.0 * g.h() < 0.5)) errs.push_back("audit.polar_radii: radius violates r + 2h < 1/2");
    } catch (const std::invalid_argument& e) {
      errs.push_back(std::string("grid.n: ") + e.what());
    }
  }
  c.seed.rng_seed = c.rng_seed;
  c.flow.seed = c.seed;
  for (const auto& a : c.audits)
    if (std::find(known_audits().begin(), known_audits().end(), a) == known_audits().end())
      errs.push_back("audit.list: unknown audit '" + a + "'");
  for (double f : c.eps_nested)
    if (!(f > 0.0) || f > 1.0) errs.push_back("audit.eps_nested: factors must lie in (0, 1]");
  for (int gsz : c.conv_grids)
    if (gsz < 8) errs.push_back("convergence.grids: every n must be >= 8");
  for (const auto& f : c.conv_families)
    if (f != "weitzenboeck" && f != "hopf" && f != "derivative" && f != "laplacian")
      errs.push_back("convergence.families: unknown family '" + f + "'");

  if (c.gradient.y0.empty()) c.gradient.y0 = north_pole(c.q);
  if (int(c.gradient.y0.size()) != c.q) errs.push_back("gradient.y0: must have q entries");

  if (std::isnan(c.constants.c4)) c.constants.c4 = sphere_pairing_norm(std::max(c.q, 3));
  try {
    c.constants.derive();
  } catch (const std::invalid_argument& e) {
    errs.push_back(std::string("constants: ") + e.what());
  }

  if (c.out_dir.empty()) c.out_dir = env_out && !env_out->empty() ? *env_out : "sigma_out";
  if (!errs.empty()) throw ValidationError(errs);
  c.echo = entries;
  return c;
}

}  // namespace sigma
