#include "cli/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <sstream>

#include <fmt/format.h>

namespace acyl::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void fail(const std::string& where, const std::string& key, const std::string& why) {
  throw ConfigError(fmt::format("{}{}: {}", where, key, why));
}

double to_double(const std::string& v, const std::string& key, const std::string& where) {
  double x = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(x)) {
    fail(where, key, fmt::format("'{}' is not a finite number", v));
  }
  return x;
}

long to_int(const std::string& v, const std::string& key, const std::string& where) {
  long x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size()) {
    fail(where, key, fmt::format("'{}' is not an integer", v));
  }
  return x;
}

bool to_bool(const std::string& v, const std::string& key, const std::string& where) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  fail(where, key, fmt::format("'{}' is not a boolean", v));
}

double positive(double x, const std::string& key, const std::string& where) {
  if (!(x > 0.0)) fail(where, key, "must be > 0");
  return x;
}

std::string one_of(const std::string& v, std::initializer_list<const char*> allowed,
                   const std::string& key, const std::string& where) {
  for (const char* a : allowed) {
    if (v == a) return v;
  }
  std::string list;
  for (const char* a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
  fail(where, key, fmt::format("'{}' is not one of {}", v, list));
}

std::string num(double x) { return fmt::format("{}", x); }

}  // namespace

void set_key(RunConfig& c, const std::string& key, const std::string& v, const std::string& where) {
  const auto d = [&] { return to_double(v, key, where); };
  const auto i = [&] { return to_int(v, key, where); };
  if (key == "model") {
    c.model = one_of(v, {"cigar", "cylinder", "glued"}, key, where);
  } else if (key == "n") {
    const long n = i();
    if (n < 1 || n > 8) fail(where, key, "must be between 1 and 8");
    c.n = static_cast<int>(n);
  } else if (key == "grid.h") {
    c.grid_h = positive(d(), key, where);
  } else if (key == "grid.t_min") {
    c.t_min = d();
  } else if (key == "grid.t_max") {
    c.t_max = d();
  } else if (key == "solver.steps") {
    const long s = i();
    if (s < 1) fail(where, key, "must be >= 1");
    c.solver.steps = static_cast<int>(s);
  } else if (key == "solver.min_step") {
    c.solver.min_step = positive(d(), key, where);
  } else if (key == "solver.tolerance") {
    c.solver.tolerance = positive(d(), key, where);
  } else if (key == "solver.max_newton") {
    const long s = i();
    if (s < 1) fail(where, key, "must be >= 1");
    c.solver.max_newton = static_cast<int>(s);
  } else if (key == "solver.backtrack") {
    const double x = d();
    if (!(x > 0.0 && x < 1.0)) fail(where, key, "must lie in (0, 1)");
    c.solver.backtrack = x;
  } else if (key == "solver.armijo") {
    const double x = d();
    if (!(x >= 0.0 && x < 1.0)) fail(where, key, "must lie in [0, 1)");
    c.solver.armijo = x;
  } else if (key == "solver.positivity_floor") {
    const double x = d();
    if (!(x >= 0.0 && x < 1.0)) fail(where, key, "must lie in [0, 1)");
    c.solver.positivity_floor = x;
  } else if (key == "solver.record_weight") {
    c.solver.record_weight = d();
  } else if (key == "cross_section.circle_length") {
    c.circle_length = positive(d(), key, where);
  } else if (key == "cross_section.lattice") {
    c.lattice = one_of(v, {"square", "hexagonal"}, key, where);
  } else if (key == "cross_section.lattice_scale") {
    c.lattice_scale = positive(d(), key, where);
  } else if (key == "cross_section.quotient") {
    c.quotient = one_of(v, {"none", "z2", "z3"}, key, where);
  } else if (key == "spectrum.mu_max") {
    c.mu_max = positive(d(), key, where);
  } else if (key == "weights.lo") {
    c.window_lo = d();
  } else if (key == "weights.hi") {
    c.window_hi = d();
  } else if (key == "weights.open") {
    c.window_open = to_bool(v, key, where);
  } else if (key == "linear.mu") {
    const double x = d();
    if (x < 0.0) fail(where, key, "must be >= 0");
    c.mu = x;
  } else if (key == "glue.inner") {
    c.inner = one_of(v, {"cigar", "cylinder"}, key, where);
  } else if (key == "glue.t0") {
    const double x = d();
    if (!(x > 1.0)) fail(where, key, "must exceed 1");
    c.glue.t0 = x;
  } else if (key == "glue.degree") {
    const long x = i();
    if (x < 1 || x % 2 == 0) fail(where, key, "must be an odd positive integer");
    c.glue.degree = static_cast<int>(x);
  } else if (key == "glue.margin") {
    c.glue.margin = positive(d(), key, where);
  } else if (key == "glue.rho0") {
    if (v == "auto") {
      c.glue.rho0 = -1.0;
    } else {
      const double x = d();
      if (x < 0.0) fail(where, key, "must be >= 0 or 'auto'");
      c.glue.rho0 = x;
    }
  } else if (key == "rhs") {
    c.rhs = v;
  } else if (key == "rhs.scale") {
    c.rhs_scale = d();
  } else if (key == "output.dir") {
    if (v.empty()) fail(where, key, "must not be empty");
    c.output_dir = v;
  } else if (key == "seed") {
    const long s = i();
    if (s < 0) fail(where, key, "must be >= 0");
    c.seed = static_cast<unsigned>(s);
  } else if (key == "plot") {
    c.plot = to_bool(v, key, where);
  } else if (key == "plot.log") {
    c.plot_log = to_bool(v, key, where);
  } else if (key == "verify.decay") {
    c.decay = to_bool(v, key, where);
  } else {
    fail(where, key, "unknown key");
  }
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    const std::string body = trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const std::string where = fmt::format("line {}: ", lineno);
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(fmt::format("{}expected 'key = value', got '{}'", where, body));
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw ConfigError(where + "missing key");
    set_key(cfg, key, value, where);
  }
  validate(cfg);
  return cfg;
}

void validate(const RunConfig& c) {
  if (!(c.window_lo < c.window_hi)) throw ConfigError("weights.lo must be below weights.hi");
  if (c.t_min && c.t_max && !(*c.t_min < *c.t_max)) {
    throw ConfigError("grid.t_min must be below grid.t_max");
  }
  if (c.quotient == "z3" && c.lattice != "hexagonal") {
    throw ConfigError("cross_section.quotient = z3 needs cross_section.lattice = hexagonal");
  }
}

std::map<std::string, std::string> RunConfig::effective() const {
  std::map<std::string, std::string> m;
  m["model"] = model;
  m["n"] = std::to_string(n);
  m["grid.h"] = num(grid_h);
  m["grid.t_min"] = t_min ? num(*t_min) : "default";
  m["grid.t_max"] = t_max ? num(*t_max) : "default";
  m["solver.steps"] = std::to_string(solver.steps);
  m["solver.min_step"] = num(solver.min_step);
  m["solver.tolerance"] = num(solver.tolerance);
  m["solver.max_newton"] = std::to_string(solver.max_newton);
  m["solver.backtrack"] = num(solver.backtrack);
  m["solver.armijo"] = num(solver.armijo);
  m["solver.positivity_floor"] = num(solver.positivity_floor);
  m["solver.record_weight"] = num(solver.record_weight);
  m["cross_section.circle_length"] = num(circle_length);
  m["cross_section.lattice"] = lattice;
  m["cross_section.lattice_scale"] = num(lattice_scale);
  m["cross_section.quotient"] = quotient;
  m["spectrum.mu_max"] = num(mu_max);
  m["weights.lo"] = num(window_lo);
  m["weights.hi"] = num(window_hi);
  m["weights.open"] = window_open ? "true" : "false";
  m["linear.mu"] = num(mu);
  m["glue.inner"] = inner;
  m["glue.t0"] = num(glue.t0);
  m["glue.degree"] = std::to_string(glue.degree);
  m["glue.margin"] = num(glue.margin);
  m["glue.rho0"] = glue.rho0 < 0.0 ? "auto" : num(glue.rho0);
  m["rhs"] = rhs;
  m["rhs.scale"] = num(rhs_scale);
  m["output.dir"] = output_dir;
  m["seed"] = std::to_string(seed);
  m["plot"] = plot ? "true" : "false";
  m["plot.log"] = plot_log ? "true" : "false";
  m["verify.decay"] = decay ? "true" : "false";
  return m;
}

std::string RunConfig::canonical() const {
  std::string out;
  for (const auto& [k, v] : effective()) {
    if (k == "output.dir") continue;  // where results go does not change them
    out += k + " = " + v + "\n";
  }
  return out;
}

}  // namespace acyl::cli
