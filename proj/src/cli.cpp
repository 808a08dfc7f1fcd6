#include "sigma/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sigma/calculus.hpp"
#include "sigma/clifford.hpp"
#include "sigma/io.hpp"

#ifndef SIGMA_LAB_VERSION
#define SIGMA_LAB_VERSION "0.0.0"
#endif

namespace sigma::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

class Stopwatch {
 public:
  explicit Stopwatch(RunManifest& m, std::string stage) : m_(m), stage_(std::move(stage)) {}
  ~Stopwatch() {
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    m_.timings.push_back({stage_, s});
  }

 private:
  RunManifest& m_;
  std::string stage_;
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

RunManifest start(const std::string& command, const RunConfig& cfg) {
  RunManifest m;
  m.command = command;
  m.config = cfg.echo;
  m.rng_seed = cfg.rng_seed;
  m.versions = {{"sigma_lab", SIGMA_LAB_VERSION},
                {"compiler", __VERSION__},
                {"cxx_standard", std::to_string(__cplusplus)},
                {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                      std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                      std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                {"rng", "std::mt19937_64"}};
  fs::create_directories(cfg.out_dir);
  return m;
}

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json num(const std::optional<double>& v) { return v ? num(*v) : json(nullptr); }

void write_json(const fs::path& path, const json& j) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os << j.dump(2) << "\n";
}

void finish(RunManifest& m, const RunConfig& cfg) {
  m.outputs.push_back("manifest.json");
  json j;
  j["command"] = m.command;
  j["status"] = m.status;
  j["pass"] = m.pass;
  j["exit_code"] = m.exit_code;
  j["rng_seed"] = m.rng_seed;
  j["config"] = m.config;
  j["versions"] = m.versions;
  json t = json::object();
  for (const auto& s : m.timings) t[s.stage] = s.seconds;
  j["timings_s"] = t;
  j["outputs"] = m.outputs;
  j["notes"] = m.notes;
  write_json(fs::path(cfg.out_dir) / "manifest.json", j);
}

json energy_json(const EnergyBreakdown& e) {
  return json{{"dirichlet", num(e.dirichlet)},
              {"spinor", num(e.spinor)},
              {"curvature", num(e.curvature)},
              {"total", num(e.total)}};
}

json residual_json(const ResidualPair& r) {
  return json{{"map_linf", num(r.map_linf)},
              {"map_l2", num(r.map_l2)},
              {"spinor_linf", num(r.spinor_linf)},
              {"spinor_l2", num(r.spinor_l2)}};
}

FieldPair load_fields(const fs::path& dir) {
  const RealField mv = io::read_map_values_csv(dir / "phi.csv");
  MapField phi(mv);
  ComplexField sv = io::read_spinor_values_csv(dir / "psi.csv", mv.grid());
  if (sv.ncomp() != 2 * phi.q()) throw std::runtime_error("psi.csv: spinor has a different q than phi.csv");
  SpinorField psi(std::move(sv));
  require_tangent(phi, psi);
  return {std::move(phi), std::move(psi)};
}

double sup_dphi(const MapField& phi) {
  const ScalarField a = pointwise_norm2(derivative(phi.values(), Axis::x));
  const ScalarField b = pointwise_norm2(derivative(phi.values(), Axis::y));
  double s = 0.0;
  for (std::size_t p = 0; p < a.points(); ++p) s = std::max(s, a(p, 0) + b(p, 0));
  return std::sqrt(s);
}

AuditReport hopf_report(const FieldPair& f, const ResidualPair& res, double c_slack) {
  const HopfResult hr = hopf_differential(f.phi, f.psi);
  const double h = f.phi.grid().h();
  const double s = 1.0 + sup_dphi(f.phi);
  AuditReport r;
  r.name = "hopf";
  r.worst_margin = -hr.defect_l2;
  r.tolerance = c_slack * (h * h + res.l2) * s * s * s;
  r.info["defect_l2"] = hr.defect_l2;
  r.info["sup_dphi"] = s - 1.0;
  r.finalize();
  return r;
}

AuditReport polar_report(const FieldPair& f, const ResidualPair& res, const RunConfig& cfg) {
  const double tol = cfg.polar_tol ? *cfg.polar_tol : 5.0 * (f.phi.grid().h() + res.l2);
  std::vector<PolarRow> rows;
  AuditReport r = polar_identity_audit(f.phi, f.psi, cfg.polar_center, cfg.polar_radii, tol, &rows);
  r.columns = {"r", "samples", "lhs", "rhs1", "rhs2", "mismatch1", "mismatch2", "mismatch12"};
  r.rows.clear();
  for (const auto& p : rows)
    r.rows.push_back({p.r, double(p.samples), p.lhs, p.rhs1, p.rhs2, p.mismatch1, p.mismatch2, p.mismatch12});
  return r;
}

AuditReport eps_report(const FieldPair& f, const RunConfig& cfg) {
  const EpsProbeReport pr = epsilon_regularity_probe(f.phi, f.psi, DiscRegion(cfg.eps_center, cfg.eps_radius),
                                                     cfg.eps_nested);
  AuditReport r;
  r.name = "eps-regularity";
  r.info["energy"] = pr.energy;
  r.columns = {"factor", "radius", "sup_dphi", "ratio1", "ratio_map", "ratio_spin"};
  const double nan = std::numeric_limits<double>::quiet_NaN();
  bool finite = std::isfinite(pr.energy);
  for (const auto& row : pr.rows) {
    r.rows.push_back({row.factor, row.radius, row.sup_dphi, row.ratio1.value_or(nan), row.ratio_map.value_or(nan),
                      row.ratio_spin.value_or(nan)});
    finite = finite && std::isfinite(row.sup_dphi);
  }
  // a probe, not an inequality: it fails only on non-finite output
  r.worst_margin = finite ? 0.0 : -std::numeric_limits<double>::infinity();
  r.finalize();
  return r;
}

AuditReport maximizer_report(const FieldPair& f, const RunConfig& cfg) {
  const MaximizerResult mr = maximizer_diagnostic(f.phi, f.psi, cfg.gradient, cfg.constants);
  AuditReport r;
  r.name = "maximizer";
  r.location = mr.point;
  r.location_r = mr.r;
  r.info["value"] = mr.value;
  r.info["degenerate"] = mr.degenerate ? 1.0 : 0.0;
  r.info["interior"] = mr.interior ? 1.0 : 0.0;
  r.worst_margin = (mr.interior || mr.degenerate) ? 0.0 : -1.0;
  r.finalize();
  return r;
}

std::vector<std::vector<double>> feasibility_rows(const std::vector<FeasibilityEntry>& entries) {
  std::vector<std::vector<double>> rows;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& e : entries)
    rows.push_back({e.c1, e.c2, e.kappa2, e.R, e.feasible ? 1.0 : 0.0, e.best_margin, e.d1, e.delta2, e.delta3,
                    e.delta4, e.delta10, e.d1_threshold.value_or(nan), double(e.tuples)});
  return rows;
}

const std::vector<std::string> kFeasibilityColumns{"c1",     "c2",     "kappa2", "R",       "feasible",
                                                   "best_margin", "d1", "delta2", "delta3", "delta4",
                                                   "delta10", "d1_threshold", "tuples"};

AuditReport feasibility_report(const RunConfig& cfg) {
  const auto entries = feasibility_scan_A_nonzero(cfg.feasibility);
  AuditReport r;
  r.name = "feasibility-scan";
  r.columns = kFeasibilityColumns;
  r.rows = feasibility_rows(entries);
  double feasible = 0.0;
  for (const auto& e : entries) feasible += e.feasible ? 1.0 : 0.0;
  r.info["entries"] = double(entries.size());
  r.info["feasible"] = feasible;
  r.finalize();  // a scan reports; infeasible entries are data, not failures
  return r;
}

json report_json(const AuditReport& r) {
  json j;
  j["name"] = r.name;
  j["pass"] = r.pass;
  j["worst_margin"] = num(r.worst_margin);
  j["tolerance"] = num(r.tolerance);
  j["location"] = r.location ? json{{"x", r.location->x}, {"y", r.location->y}} : json(nullptr);
  j["location_r"] = num(r.location_r);
  if (!r.error_code.empty()) j["error"] = json{{"code", r.error_code}, {"message", r.error}};
  json info = json::object();
  for (const auto& [k, v] : r.info) info[k] = num(v);
  j["info"] = info;
  return j;
}

double family_error(const std::string& family, int n, int q) {
  const Grid2D g(n);
  if (family == "weitzenboeck") {
    const FieldPair f = analytic_pair(g, q);
    return weitzenboeck_residual(f.phi, f.psi).residual_linf;
  }
  if (family == "hopf") {
    const MapField phi(elliptic_map_values(g, q), 1e-10);
    return hopf_differential(phi, SpinorField(g, q)).defect_l2;
  }
  const double tp = 2.0 * M_PI;
  const ScalarField f = tabulate(g, [&](double x, double y) { return std::sin(tp * x) * std::cos(2.0 * tp * y); });
  double err = 0.0;
  if (family == "derivative") {
    const ScalarField d = derivative(f, Axis::x);
    for (std::size_t p = 0; p < g.size(); ++p) {
      const Point pt = g.point(p);
      err = std::max(err, std::abs(d(p, 0) - tp * std::cos(tp * pt.x) * std::cos(2.0 * tp * pt.y)));
    }
  } else {
    const ScalarField l = laplacian(f);
    for (std::size_t p = 0; p < g.size(); ++p) err = std::max(err, std::abs(l(p, 0) + 5.0 * tp * tp * f(p, 0)));
  }
  return err;
}

}  // namespace

RunManifest cmd_simulate(const RunConfig& cfg) {
  RunManifest m = start("simulate", cfg);
  const Grid2D g(cfg.n);
  std::optional<Stopwatch> flow_sw(std::in_place, m, "flow");
  const FlowResult fr = run_flow(cfg.flow, g, cfg.q);
  flow_sw.reset();
  EnergyBreakdown e;
  {
    Stopwatch sw(m, "write");
    const fs::path dir(cfg.out_dir);
    io::write_trace_csv(dir / "trace.csv", fr.trace);
    io::write_map_csv(dir / "phi.csv", fr.fields.phi);
    io::write_spinor_csv(dir / "psi.csv", fr.fields.psi);
    const bool finite = fr.status != FlowStatus::blow_up;
    json ej = finite ? energy_json(e = energy(fr.fields.phi, fr.fields.psi)) : json(nullptr);
    json j{{"status", to_string(fr.status)},
           {"iterations", fr.iterations},
           {"energy", ej},
           {"residuals", finite ? residual_json(fr.final_residuals) : json(nullptr)},
           {"constraint_defect", finite ? num(constraint_defect(fr.fields.phi, fr.fields.psi)) : json(nullptr)},
           {"residual_tol", cfg.flow.residual_tol},
           {"step_map", cfg.flow.step_map},
           {"step_spinor", cfg.flow.step_spinor}};
    write_json(dir / "energy.json", j);
  }
  m.outputs = {"trace.csv", "phi.csv", "psi.csv", "energy.json"};
  m.status = to_string(fr.status);
  if (!fr.message.empty()) m.notes.push_back(fr.message);
  m.pass = fr.status == FlowStatus::converged;
  m.exit_code = m.pass ? ExitCode::ok : ExitCode::not_converged;
  finish(m, cfg);
  return m;
}

RunManifest cmd_audit(const RunConfig& cfg) {
  RunManifest m = start("audit", cfg);
  std::vector<AuditReport> reports;
  const bool needs_fields = std::any_of(cfg.audits.begin(), cfg.audits.end(),
                                        [](const std::string& a) { return a != "feasibility-scan"; });
  std::optional<FieldPair> fields;
  std::optional<ResidualPair> res;
  if (needs_fields) {
    Stopwatch sw(m, "load");
    try {
      if (cfg.fields_dir.empty()) {
        fields = seed(cfg.seed, Grid2D(cfg.n), cfg.q);
        m.notes.push_back("fields built from seed " + to_string(cfg.seed.kind));
      } else {
        fields = load_fields(cfg.fields_dir);
        m.notes.push_back("fields read from " + cfg.fields_dir);
      }
      res = el_residuals(fields->phi, fields->psi);
    } catch (const std::exception& e) {
      m.status = "invalid-fields";
      m.notes.push_back(e.what());
      m.pass = false;
      m.exit_code = ExitCode::invalid_input;
      finish(m, cfg);
      return m;
    }
  }

  for (const std::string& name : cfg.audits) {
    Stopwatch sw(m, name);
    try {
      if (name == "kato")
        reports.push_back(kato_audit(fields->phi, fields->psi, cfg.kato_tol));
      else if (name == "bochner")
        reports.push_back(bochner_audit(fields->phi, fields->psi, cfg.constants, cfg.bochner));
      else if (name == "hopf")
        reports.push_back(hopf_report(*fields, *res, cfg.hopf_c_slack));
      else if (name == "polar")
        reports.push_back(polar_report(*fields, *res, cfg));
      else if (name == "eps-regularity")
        reports.push_back(eps_report(*fields, cfg));
      else if (name == "gradient-estimate")
        reports.push_back(gradient_estimate_audit(fields->phi, fields->psi, cfg.gradient, cfg.constants));
      else if (name == "maximizer")
        reports.push_back(maximizer_report(*fields, cfg));
      else if (name == "feasibility-scan")
        reports.push_back(feasibility_report(cfg));
    } catch (const EstimateError& e) {
      reports.push_back(AuditReport::failure(name, e));
    } catch (const std::invalid_argument& e) {
      reports.push_back(AuditReport::failure(name, EstimateError("invalid-config", e.what())));
    }
    reports.back().name = name;
  }

  const fs::path dir(cfg.out_dir);
  json arr = json::array();
  bool pass = true;
  for (const auto& r : reports) {
    arr.push_back(report_json(r));
    pass = pass && r.pass;
    if (!r.rows.empty()) {
      const std::string file = "margins_" + r.name + ".csv";
      io::write_table_csv(dir / file, r.columns, r.rows);
      m.outputs.push_back(file);
    }
  }
  json j{{"pass", pass}, {"audits", arr}};
  if (res) j["residuals"] = residual_json(*res);
  write_json(dir / "audits.json", j);
  m.outputs.insert(m.outputs.begin(), "audits.json");
  m.pass = pass;
  m.status = pass ? "pass" : "fail";
  m.exit_code = pass ? ExitCode::ok : ExitCode::audit_failed;
  finish(m, cfg);
  return m;
}

RunManifest cmd_convergence(const RunConfig& cfg) {
  RunManifest m = start("convergence", cfg);
  std::vector<int> grids = cfg.conv_grids;
  if (!std::is_sorted(grids.begin(), grids.end())) {
    std::sort(grids.begin(), grids.end());
    m.notes.push_back("grid list was unsorted; sorted ascending");
  }
  grids.erase(std::unique(grids.begin(), grids.end()), grids.end());

  std::ofstream os(fs::path(cfg.out_dir) / "convergence.csv", std::ios::binary);
  if (!os) throw std::runtime_error("cannot write convergence.csv");
  os << "family,n,h,error,order\n";
  for (const std::string& family : cfg.conv_families) {
    Stopwatch sw(m, family);
    double prev_err = 0.0;
    int prev_n = 0;
    for (int n : grids) {
      const double err = family_error(family, n, cfg.q);
      os << family << "," << n << "," << io::fmt(1.0 / n) << "," << io::fmt(err) << ",";
      if (prev_n == 0)
        os << "NA";
      else
        os << io::fmt(std::log(prev_err / err) / std::log(double(n) / prev_n));
      os << "\n";
      prev_err = err;
      prev_n = n;
    }
  }
  if (grids.size() < 2) m.notes.push_back("single grid size: orders not applicable");
  m.outputs = {"convergence.csv"};
  m.status = "done";
  finish(m, cfg);
  return m;
}

RunManifest cmd_feasibility_scan(const RunConfig& cfg) {
  RunManifest m = start("feasibility-scan", cfg);
  std::vector<FeasibilityEntry> entries;
  {
    Stopwatch sw(m, "scan");
    entries = feasibility_scan_A_nonzero(cfg.feasibility);
  }
  const fs::path dir(cfg.out_dir);
  io::write_table_csv(dir / "feasibility.csv", kFeasibilityColumns, feasibility_rows(entries));
  json arr = json::array();
  for (const auto& e : entries)
    arr.push_back(json{{"c1", e.c1},
                       {"c2", e.c2},
                       {"kappa2", e.kappa2},
                       {"R", e.R},
                       {"feasible", e.feasible},
                       {"best_margin", num(e.best_margin)},
                       {"best", {{"d1", e.d1}, {"delta2", e.delta2}, {"delta3", e.delta3}, {"delta4", e.delta4},
                                 {"delta10", e.delta10}}},
                       {"d1_threshold", num(e.d1_threshold)},
                       {"tuples", e.tuples}});
  write_json(dir / "feasibility.json", json{{"c4", cfg.feasibility.c4}, {"entries", arr}});
  m.outputs = {"feasibility.csv", "feasibility.json"};
  m.status = "done";
  finish(m, cfg);
  return m;
}

int run(int argc, const char* const* argv) {
  CLI::App app{"Numerical lab for Dirac-harmonic maps with curvature term into spheres"};
  app.require_subcommand(1, 1);
  std::string config_path, out, audits, fields;
  std::optional<int> grid;
  std::optional<std::uint64_t> rng;
  std::optional<double> tol;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key = value config file")->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory");
    sub->add_option("--grid", grid, "grid points per axis");
    sub->add_option("--seed-rng", rng, "64-bit RNG seed");
    sub->add_option("--audits", audits, "comma-separated audit list");
    sub->add_option("--tol", tol, "flow residual tolerance");
  };
  CLI::App* sim = app.add_subcommand("simulate", "seed, flow, write fields and trace");
  CLI::App* aud = app.add_subcommand("audit", "run audits on fields");
  CLI::App* conv = app.add_subcommand("convergence", "grid refinement study");
  CLI::App* feas = app.add_subcommand("feasibility-scan", "scan estimate constants for feasibility");
  for (CLI::App* s : {sim, aud, conv, feas}) add_common(s);
  aud->add_option("--fields", fields, "directory holding phi.csv and psi.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? ExitCode::ok : ExitCode::invalid_input;
  }

  RunConfig cfg;
  try {
    ConfigMap entries = config_path.empty() ? ConfigMap{} : load_config_file(config_path);
    if (!out.empty()) entries["output.dir"] = out;
    if (grid) entries["grid.n"] = std::to_string(*grid);
    if (rng) entries["rng.seed"] = std::to_string(*rng);
    if (!audits.empty()) entries["audit.list"] = audits;
    if (tol) entries["flow.residual_tol"] = io::fmt(*tol);
    if (!fields.empty()) entries["audit.fields"] = fields;
    const char* env = std::getenv("SIGMA_LAB_OUT");
    cfg = build_run_config(entries, env ? std::optional<std::string>(env) : std::nullopt);
  } catch (const ValidationError& e) {
    for (const auto& msg : e.errors()) std::cerr << "error: " << msg << "\n";
    return ExitCode::invalid_input;
  }

  try {
    RunManifest m;
    if (*sim)
      m = cmd_simulate(cfg);
    else if (*aud)
      m = cmd_audit(cfg);
    else if (*conv)
      m = cmd_convergence(cfg);
    else
      m = cmd_feasibility_scan(cfg);
    std::cout << m.command << ": " << m.status << " (" << cfg.out_dir << ")\n";
    for (const auto& n : m.notes) std::cout << "  note: " << n << "\n";
    return m.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ExitCode::invalid_input;
  }
}

}  // namespace sigma::cli
