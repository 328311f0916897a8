#include "acyl/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <json.hpp>

namespace acyl::io {

namespace {

using Json = nlohmann::ordered_json;

Json number(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

double parse_double(std::string_view s, std::size_t line) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument(fmt::format("CSV line {}: '{}' is not a number", line, s));
  }
  return v;
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return fmt::format("{}", x);
}

std::string grid_function_csv(const GridFunction& u) {
  std::string out = "t,value\n";
  for (std::size_t i = 0; i < u.size(); ++i) {
    out += fmt::format("{:.17g},{:.17g}\n", u.t(i), u[i]);
  }
  return out;
}

GridFunction parse_grid_function_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<double> ts, vs;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (lineno == 1 && line.rfind("t,", 0) == 0) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::invalid_argument(fmt::format("CSV line {}: expected 't,value'", lineno));
    }
    ts.push_back(parse_double(std::string_view(line).substr(0, comma), lineno));
    vs.push_back(parse_double(std::string_view(line).substr(comma + 1), lineno));
  }
  if (ts.size() < 3) throw std::invalid_argument("CSV: need at least 3 rows");
  const double h = (ts.back() - ts.front()) / static_cast<double>(ts.size() - 1);
  Grid g(ts.front(), ts.back(), h);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (std::abs(ts[i] - g.t(i)) > 1e-9 * h) {
      throw std::invalid_argument(fmt::format("CSV row {}: t is not on a uniform grid", i + 1));
    }
  }
  return GridFunction(g, std::move(vs));
}

GridFunction read_grid_function_csv(const std::filesystem::path& path) {
  return parse_grid_function_csv(read_file(path));
}

std::string spectrum_csv(const std::vector<SpectralLevel>& levels) {
  std::string out = "mu,multiplicity\n";
  for (const auto& l : levels) out += fmt::format("{:.15g},{}\n", l.mu, l.multiplicity);
  return out;
}

std::string weights_csv(const CriticalWeightSet& cws) {
  std::string out = "epsilon,mu,branch\n";
  for (const auto& w : cws.weights) {
    out += fmt::format("{:.15g},{:.15g},{}\n", w.epsilon, w.mu,
                       w.branch == Branch::Plus ? "+" : "-");
  }
  return out;
}

std::string path_csv(const std::vector<PathRecord>& path) {
  std::string out =
      "s,newton_iterations,sup_residual,min_ratio,max_ratio,weighted_sup,inf_f_plus_dphi,"
      "sup_abs_dphi\n";
  for (const auto& r : path) {
    out += fmt::format("{:.17g},{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", r.s,
                       r.newton_iterations, r.sup_residual, r.min_ratio, r.max_ratio,
                       r.weighted_sup, r.inf_soliton_potential, r.sup_abs_dphi);
  }
  return out;
}

std::string model_text(const RadialKahlerModel& model) {
  std::string out;
  out += fmt::format("kind = {}\n", to_string(model.kind()));
  out += fmt::format("n = {}\n", model.n());
  out += fmt::format("c0 = {:.17g}\n", model.c0());
  out += fmt::format("cap = {}\n", model.has_cap() ? "true" : "false");
  if (model.torus()) {
    const auto& rows = model.torus()->basis;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      std::string row;
      for (std::size_t c = 0; c < rows[r].size(); ++c) {
        row += fmt::format("{}{:.17g}", c ? " " : "", rows[r][c]);
      }
      out += fmt::format("lattice.row{} = {}\n", r, row);
    }
  }
  return out;
}

std::string path_json(const std::vector<PathRecord>& path) {
  Json arr = Json::array();
  for (const auto& r : path) {
    Json o;
    o["s"] = number(r.s);
    o["newton_iterations"] = r.newton_iterations;
    o["sup_residual"] = number(r.sup_residual);
    o["min_ratio"] = number(r.min_ratio);
    o["max_ratio"] = number(r.max_ratio);
    o["weighted_sup"] = number(r.weighted_sup);
    o["inf_f_plus_dphi"] = number(r.inf_soliton_potential);
    o["sup_abs_dphi"] = number(r.sup_abs_dphi);
    arr.push_back(std::move(o));
  }
  Json root;
  root["path"] = std::move(arr);
  return root.dump(2) + "\n";
}

std::string report_json(const VerificationReport& report) {
  Json root;
  root["model"] = report.meta.model;
  root["grid"] = report.meta.grid;
  root["config_hash"] = report.meta.config_hash;
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    Json o;
    o["name"] = c.name;
    o["value"] = number(c.value);
    o["relation"] = c.relation;
    o["threshold"] = number(c.threshold);
    o["pass"] = c.pass;
    checks.push_back(std::move(o));
  }
  root["checks"] = std::move(checks);
  Json ref = Json::object();
  for (const auto& [k, v] : report.reference) ref[k] = number(v);
  root["reference"] = std::move(ref);
  root["all_pass"] = report.all_pass();
  return root.dump(2) + "\n";
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace acyl::io
