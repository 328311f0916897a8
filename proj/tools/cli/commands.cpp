#include "cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <cstdlib>
#include <functional>
#include <map>

#include <fmt/format.h>
#include <json.hpp>

#include "acyl/cross_section.hpp"
#include "acyl/diagnostics.hpp"
#include "acyl/glue_builder.hpp"
#include "acyl/indicial_weights.hpp"
#include "acyl/io.hpp"
#include "acyl/linear_drift.hpp"
#include "acyl/ma_continuity.hpp"
#include "acyl/model_geometry.hpp"
#include "acyl/weighted_norms.hpp"
#include "cli/svg.hpp"

namespace acyl::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "1.0.0";

Json num(double x) {
  if (std::isfinite(x)) return x;
  return io::format_double(x);
}

// manifest.json is written before anything else and rewritten on exit with
// the output list, exit code and wall time.
class Manifest {
 public:
  Manifest(fs::path dir, const RunConfig& cfg) : dir_(std::move(dir)) {
    start_ = std::chrono::steady_clock::now();
    doc_["tool"] = "acyl";
    doc_["version"] = kVersion;
    doc_["subcommand"] = cfg.subcommand;
    Json conf = Json::object();
    for (const auto& [k, v] : cfg.effective()) conf[k] = v;
    doc_["config"] = std::move(conf);
    doc_["config_hash"] = fnv1a64(cfg.canonical());
    Json inputs = Json::object();
    if (!cfg.rhs.empty()) {
      inputs["rhs"] = {{"path", cfg.rhs}, {"fnv1a64", fnv1a64(io::read_file(cfg.rhs))}};
    }
    doc_["inputs"] = std::move(inputs);
    doc_["outputs"] = Json::array();
    doc_["notes"] = Json::object();
    doc_["exit_code"] = nullptr;
    doc_["wall_time_seconds"] = nullptr;
    flush();
  }

  void write(const std::string& name, const std::string& text) {
    io::write_file(dir_ / name, text);
    doc_["outputs"].push_back(name);
  }
  void note(const std::string& key, Json value) { doc_["notes"][key] = std::move(value); }
  const fs::path& dir() const { return dir_; }

  int finish(int code) {
    doc_["exit_code"] = code;
    doc_["wall_time_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    flush();
    return code;
  }

 private:
  void flush() { io::write_file(dir_ / "manifest.json", doc_.dump(2) + "\n"); }

  fs::path dir_;
  Json doc_;
  std::chrono::steady_clock::time_point start_;
};

RadialKahlerModel base_model(const std::string& name, const RunConfig& cfg) {
  if (name == "cigar") return RadialKahlerModel::cigar(cfg.n);
  if (name == "cylinder") return RadialKahlerModel::cylinder(cfg.n, cfg.t_min.value_or(0.0));
  throw ConfigError("model: '" + name + "' is not a closed-form model");
}

Grid grid_for(const RadialKahlerModel& m, const RunConfig& cfg) {
  const Grid d = m.default_grid(cfg.grid_h);
  return Grid(cfg.t_min.value_or(d.t_min()), cfg.t_max.value_or(d.t_max()), cfg.grid_h);
}

struct Setup {
  RadialKahlerModel model;
  Grid grid;
};

// The model on its working grid. A right-hand side CSV fixes the grid of a
// closed-form model; a glued model is built on the grid of its inner model.
Setup setup(const RunConfig& cfg, const GridFunction* rhs) {
  if (cfg.model == "glued") {
    const RadialKahlerModel inner = base_model(cfg.inner, cfg);
    const Grid g = rhs ? rhs->grid : grid_for(inner, cfg);
    return {glued_model(inner, g, cfg.glue), g};
  }
  RadialKahlerModel m = base_model(cfg.model, cfg);
  const Grid g = rhs ? rhs->grid : grid_for(m, cfg);
  return {m, g};
}

std::optional<GridFunction> load_rhs(const RunConfig& cfg) {
  if (cfg.rhs.empty()) return std::nullopt;
  GridFunction f = io::read_grid_function_csv(cfg.rhs);
  for (auto& v : f.values) v *= cfg.rhs_scale;
  return f;
}

CrossSection cross_section(const RunConfig& cfg) {
  if (cfg.n == 1) {
    if (cfg.quotient == "z3") throw ConfigError("z3 quotient needs a torus factor (n >= 2)");
    CrossSection cs{cfg.circle_length, {}, std::nullopt};
    if (cfg.quotient == "z2") cs.quotient = CyclicQuotient{2, {}};
    return cs;
  }
  CrossSection cs = cfg.lattice == "hexagonal"
                        ? hexagonal_cross_section(cfg.circle_length, cfg.lattice_scale)
                        : square_cross_section(cfg.circle_length, cfg.lattice_scale);
  const int d = 2 * (cfg.n - 1);
  if (d != 2) {
    // Higher tori: orthogonal sum of squares of the chosen scale.
    if (cfg.lattice == "hexagonal") throw ConfigError("hexagonal lattice needs n = 2");
    cs.lattice.assign(d, std::vector<double>(d, 0.0));
    for (int i = 0; i < d; ++i) cs.lattice[i][i] = cfg.lattice_scale;
  }
  if (cfg.quotient == "z2") cs.quotient = z2_reflection(d);
  if (cfg.quotient == "z3") cs.quotient = z3_hexagonal_rotation();
  return cs;
}

void maybe_plot(Manifest& mf, const RunConfig& cfg, const std::string& name, const GridFunction& u,
                const std::string& title) {
  if (!cfg.plot) return;
  // SVGs are presentational and not listed among the byte-stable outputs.
  write_svg(mf.dir() / name, u, title, cfg.plot_log);
  mf.note("plot", name);
}

int cmd_spectrum(const RunConfig& cfg, Manifest& mf) {
  const CrossSection cs = cross_section(cfg);
  mf.write("spectrum.csv", io::spectrum_csv(spectrum(cs, cfg.mu_max)));
  mf.write("invariant_spectrum.csv", io::spectrum_csv(invariant_spectrum(cs, cfg.mu_max)));
  return kOk;
}

int cmd_weights(const RunConfig& cfg, Manifest& mf) {
  const CrossSection cs = cross_section(cfg);
  const auto levels = invariant_spectrum(cs, cfg.mu_max);
  const Interval window{cfg.window_lo, cfg.window_hi, cfg.window_open};
  const CriticalWeightSet cws = critical_weights(levels, window);
  mf.write("weights.csv", io::weights_csv(cws));
  // Margin from the closed window widened by one on each side, so weights on
  // or just beyond the boundary are seen.
  const CriticalWeightSet wide =
      critical_weights(levels, Interval{window.lo - 1.0, window.hi + 1.0, false});
  const FredholmVerdict v = fredholm_window_check(wide, window);
  Json j;
  j["window"] = {num(window.lo), num(window.hi)};
  j["open"] = window.open;
  j["mu_max"] = num(cfg.mu_max);
  j["count"] = cws.weights.size();
  j["fredholm"] = v.fredholm;
  j["margin"] = num(v.margin);
  mf.write("weights.json", j.dump(2) + "\n");
  mf.note("fredholm", v.fredholm);
  mf.note("margin", num(v.margin));
  return kOk;
}

int cmd_solve_linear(const RunConfig& cfg, Manifest& mf) {
  const auto rhs = load_rhs(cfg);
  if (!rhs) throw ConfigError("solve-linear needs --rhs");
  const Setup s = setup(cfg, &*rhs);
  const ModeProblem p = make_mode_problem(s.model, s.grid, ModeEigenvalue(cfg.mu), *rhs);
  const GridFunction u = solve_mode(p);
  mf.write("u.csv", io::grid_function_csv(u));
  Json j;
  j["model"] = to_string(s.model.kind());
  j["mu"] = num(cfg.mu);
  j["boundary_left"] = p.boundary.left == LeftBoundary::Neumann ? "neumann"
                       : p.boundary.left == LeftBoundary::Cap   ? "cap"
                                                                : "dirichlet";
  j["relative_residual"] = num(relative_residual(p, u));
  j["decay_rate_rhs"] = num(decay_rate_fit(*rhs));
  j["decay_rate_u"] = num(decay_rate_fit(u));
  mf.write("linear.json", j.dump(2) + "\n");
  maybe_plot(mf, cfg, "u.svg", u, "linear drift solution");
  return kOk;
}

struct MaRun {
  Setup setup;
  GridFunction F;
  std::optional<SolitonSolution> solution;
  int code = kOk;
};

MaRun run_ma(const RunConfig& cfg, Manifest& mf) {
  auto rhs = load_rhs(cfg);
  if (!rhs && cfg.model != "glued") throw ConfigError("solve-ma needs --rhs (or model = glued)");
  Setup s = setup(cfg, rhs ? &*rhs : nullptr);
  GridFunction F = rhs ? *rhs : glued_rhs(s.model);
  for (auto& v : F.values) v *= rhs ? 1.0 : cfg.rhs_scale;
  MaRun r{s, F, std::nullopt, kOk};
  try {
    SolitonSolution sol = continuity_solve(s.model, F, cfg.solver);
    mf.write("phi.csv", io::grid_function_csv(sol.phi));
    mf.write("path.json", io::path_json(sol.path));
    if (!sol.warnings.empty()) mf.note("warnings", sol.warnings);
    maybe_plot(mf, cfg, "phi.svg", sol.phi, "Monge-Ampere solution phi");
    r.solution = std::move(sol);
  } catch (const SolverFailure& e) {
    mf.write("path.json", io::path_json(e.partial_path()));
    mf.note("failure", e.what());
    r.code = e.kind() == FailureKind::PositivityLost ? kPositivity : kStalled;
  }
  return r;
}

int cmd_solve_ma(const RunConfig& cfg, Manifest& mf) { return run_ma(cfg, mf).code; }

int cmd_verify(const RunConfig& cfg, Manifest& mf) {
  MaRun r = run_ma(cfg, mf);
  if (!r.solution) return r.code;
  const VerificationReport rep =
      verify_solution(r.setup.model, *r.solution, r.F, {}, fnv1a64(cfg.canonical()));
  mf.write("report.json", io::report_json(rep));
  if (cfg.decay) {
    const TailWindow w;
    const std::string win = fmt::format("{}:{}", w.lo, w.hi);
    std::string csv = "quantity,epsilon_hat,window\n";
    csv += fmt::format("F,{},{}\n", io::format_double(decay_rate_fit(r.F, w)), win);
    csv += fmt::format("phi,{},{}\n", io::format_double(decay_rate_fit(r.solution->phi, w)), win);
    mf.write("decay.csv", csv);
  }
  mf.note("all_pass", rep.all_pass());
  return rep.all_pass() ? kOk : kVerificationFailed;
}

int cmd_glue(const RunConfig& cfg, Manifest& mf) {
  const RadialKahlerModel inner = base_model(cfg.inner, cfg);
  const Grid g = grid_for(inner, cfg);
  const InnerPotential pot = potential_of(inner, g);
  GlueSpec spec = cfg.glue;
  if (spec.rho0 < 0.0) spec.rho0 = auto_rho(pot, spec);
  const RadialKahlerModel glued = glued_model(inner, g, spec);
  const GridFunction c = glued.a_on(g);
  double window_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c.t(i) >= 0.5 && c.t(i) <= spec.t0 + 0.5) window_min = std::min(window_min, c[i]);
  }
  mf.write("glued_model.txt",
           io::model_text(glued) + fmt::format("glue.t0 = {}\nglue.degree = {}\nglue.rho0 = {}\n",
                                               io::format_double(spec.t0), spec.degree,
                                               io::format_double(spec.rho0)));
  mf.write("coefficient.csv", io::grid_function_csv(c));
  mf.write("F.csv", io::grid_function_csv(glued_rhs(glued)));
  Json j;
  j["inner"] = cfg.inner;
  j["t0"] = num(spec.t0);
  j["degree"] = spec.degree;
  j["margin"] = num(spec.margin);
  j["rho0"] = num(spec.rho0);
  j["min_c_on_window"] = num(window_min);
  mf.write("glue.json", j.dump(2) + "\n");
  maybe_plot(mf, cfg, "coefficient.svg", c, "glued coefficient c(t)");
  return kOk;
}

int cmd_report(const RunConfig& cfg, Manifest& mf) {
  const Setup s = setup(cfg, nullptr);
  const PoincareResult p = poincare_rayleigh(s.model, s.grid);
  Json j;
  j["model"] = to_string(s.model.kind());
  j["grid"] = describe(s.grid);
  j["poincare_lambda_min"] = num(p.lambda_min);
  j["inverse_iterations"] = p.iterations;
  j["reference_lambda0"] = num(kPoincareReference);
  j["model_block"] = io::model_text(s.model);
  mf.write("poincare.json", j.dump(2) + "\n");
  mf.write("poincare_mode.csv", io::grid_function_csv(p.eigenvector));
  maybe_plot(mf, cfg, "poincare_mode.svg", p.eigenvector, "Poincare ground state");
  return kOk;
}

}  // namespace

fs::path output_dir(const RunConfig& cfg, bool flag_given) {
  if (!flag_given) {
    if (const char* env = std::getenv("ACYL_OUTPUT_DIR"); env && *env) return env;
  }
  return cfg.output_dir;
}

int run(const RunConfig& cfg, const fs::path& out_dir) {
  static const std::map<std::string, std::function<int(const RunConfig&, Manifest&)>> table{
      {"spectrum", cmd_spectrum},   {"weights", cmd_weights}, {"solve-linear", cmd_solve_linear},
      {"solve-ma", cmd_solve_ma},   {"glue", cmd_glue},       {"verify", cmd_verify},
      {"report", cmd_report},
  };
  const auto it = table.find(cfg.subcommand);
  if (it == table.end()) throw ConfigError("unknown subcommand '" + cfg.subcommand + "'");
  validate(cfg);
  Manifest mf(out_dir, cfg);
  try {
    return mf.finish(it->second(cfg, mf));
  } catch (...) {
    mf.finish(kUsage);
    throw;
  }
}

}  // namespace acyl::cli
