#include <CLI11.hpp>
#include <fmt/format.h>

#include <iostream>
#include <vector>

#include "acyl/io.hpp"
#include "cli/commands.hpp"
#include "cli/config.hpp"

namespace {

struct Flags {
  std::string config_path;
  std::vector<std::string> assignments;
  std::string out;
  std::string model, rhs, inner;
  int n = 0;
  double h = 0, mu = -1, t0 = 0, margin = 0;
  std::string rho0;
  std::vector<double> window;
  bool closed = false, plot = false, log = false, decay = false;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config_path, "key=value config file");
  sub->add_option("--set", f.assignments, "extra key=value assignment (repeatable)");
  sub->add_option("--out", f.out, "output directory (overrides ACYL_OUTPUT_DIR)");
  sub->add_option("--model", f.model, "cigar | cylinder | glued");
  sub->add_option("--n", f.n, "complex dimension");
  sub->add_option("--grid-h", f.h, "grid spacing");
  sub->add_flag("--plot", f.plot, "also write an SVG plot");
  sub->add_flag("--log", f.log, "log scale for --plot");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace acyl::cli;
  CLI::App app{"Steady Kahler-Ricci solitons on ACyl models: solvers and checks"};
  app.require_subcommand(1);
  Flags f;
  const std::vector<std::pair<const char*, const char*>> subs{
      {"spectrum", "cross-section spectrum and its invariant part"},
      {"weights", "critical weights of the drift Laplacian in a window"},
      {"solve-linear", "solve one mode of the linear drift equation"},
      {"solve-ma", "solve the soliton Monge-Ampere equation by continuity"},
      {"glue", "glue a cap model to the cylinder"},
      {"verify", "solve-ma followed by a verification report"},
      {"report", "weighted Poincare diagnostic for a model"},
  };
  for (const auto& [name, help] : subs) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub, f);
    if (std::string(name) == "weights") {
      sub->add_option("--window", f.window, "lo hi")->expected(2);
      sub->add_flag("--closed", f.closed, "treat the window as closed");
    }
    if (std::string(name) == "solve-linear") sub->add_option("--mu", f.mu, "mode eigenvalue");
    if (std::string(name) == "solve-linear" || std::string(name) == "solve-ma" ||
        std::string(name) == "verify") {
      sub->add_option("--rhs", f.rhs, "right-hand side CSV (t,value)");
    }
    if (std::string(name) == "glue") {
      sub->add_option("--inner", f.inner, "cigar | cylinder");
      sub->add_option("--t0", f.t0, "end of the transition region");
      sub->add_option("--margin", f.margin, "required min of c on the gluing window");
      sub->add_option("--rho0", f.rho0, "bump amplitude or 'auto'");
    }
    if (std::string(name) == "verify") sub->add_flag("--decay", f.decay, "write decay.csv");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    RunConfig cfg = f.config_path.empty() ? RunConfig{}
                                          : parse_config(acyl::io::read_file(f.config_path));
    cfg.subcommand = app.get_subcommands().front()->get_name();
    auto set = [&](const std::string& k, const std::string& v) { set_key(cfg, k, v, "--" ); };
    for (const auto& a : f.assignments) {
      const auto eq = a.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + a + "'");
      set_key(cfg, a.substr(0, eq), a.substr(eq + 1), "--set ");
    }
    if (!f.model.empty()) set("model", f.model);
    if (f.n) set("n", std::to_string(f.n));
    if (f.h) set("grid.h", fmt::format("{}", f.h));
    if (!f.rhs.empty()) set("rhs", f.rhs);
    if (f.mu >= 0) set("linear.mu", fmt::format("{}", f.mu));
    if (!f.inner.empty()) set("glue.inner", f.inner);
    if (f.t0) set("glue.t0", fmt::format("{}", f.t0));
    if (f.margin) set("glue.margin", fmt::format("{}", f.margin));
    if (!f.rho0.empty()) set("glue.rho0", f.rho0);
    if (f.window.size() == 2) {
      set("weights.lo", fmt::format("{}", f.window[0]));
      set("weights.hi", fmt::format("{}", f.window[1]));
    }
    if (f.closed) set("weights.open", "false");
    if (f.plot) set("plot", "true");
    if (f.log) set("plot.log", "true");
    if (f.decay) set("verify.decay", "true");
    if (!f.out.empty()) set("output.dir", f.out);
    validate(cfg);
    return run(cfg, output_dir(cfg, !f.out.empty()));
  } catch (const std::exception& e) {
    std::cerr << "acyl: " << e.what() << "\n";
    return kUsage;
  }
}
