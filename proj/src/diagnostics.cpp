#include "acyl/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "acyl/tridiagonal.hpp"
#include "acyl/weighted_norms.hpp"

namespace acyl {

namespace {

struct Pencil {
  std::vector<double> w;     // scaled weights at nodes
  std::vector<double> mass;  // w a h at nodes
  double h;
};

Pencil build_pencil(const RadialKahlerModel& model, const Grid& grid) {
  const std::size_t n = grid.size();
  std::vector<double> f(n);
  double f_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    f[i] = model.f(grid.t(i));
    if (!(f[i] > 0.0)) {
      throw std::domain_error(fmt::format("poincare: f = {} <= 0 at t = {}", f[i], grid.t(i)));
    }
    f_max = std::max(f_max, f[i]);
  }
  Pencil p{std::vector<double>(n), std::vector<double>(n), grid.h()};
  // The common factor e^{-f_max} leaves the quotient unchanged.
  for (std::size_t i = 0; i < n; ++i) {
    p.w[i] = std::exp(f[i] - f_max) / (f[i] * f[i]);
    p.mass[i] = p.w[i] * model.a(grid.t(i)) * p.h;
  }
  return p;
}

}  // namespace

double rayleigh_quotient(const RadialKahlerModel& model, const GridFunction& u,
                         double weight_scale) {
  const Pencil p = build_pencil(model, u.grid);
  double num = 0, den = 0;
  for (std::size_t i = 0; i + 1 < u.size(); ++i) {
    const double du = u[i + 1] - u[i];
    num += weight_scale * 0.5 * (p.w[i] + p.w[i + 1]) * du * du / p.h;
  }
  for (std::size_t i = 0; i < u.size(); ++i) den += weight_scale * p.mass[i] * u[i] * u[i];
  if (!(den > 0.0)) throw std::invalid_argument("rayleigh_quotient: zero test vector");
  return num / den;
}

PoincareResult poincare_rayleigh(const RadialKahlerModel& model, const Grid& grid) {
  const Pencil p = build_pencil(model, grid);
  const std::size_t n = grid.size();
  if (n < 4) throw std::invalid_argument("poincare: grid too small");
  const std::size_t m = n - 2;  // interior unknowns

  // Symmetric scaling S = M^{-1/2} K M^{-1/2} turns the pencil into a standard
  // problem with O(1/(a h^2)) entries.
  std::vector<double> diag(m), off(m > 0 ? m - 1 : 0), ones(m, 1.0), sq(m);
  for (std::size_t k = 0; k < m; ++k) sq[k] = std::sqrt(p.mass[k + 1]);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t i = k + 1;
    const double wl = 0.5 * (p.w[i - 1] + p.w[i]);
    const double wr = 0.5 * (p.w[i] + p.w[i + 1]);
    diag[k] = (wl + wr) / p.h / (sq[k] * sq[k]);
    if (k + 1 < m) off[k] = -wr / p.h / (sq[k] * sq[k + 1]);
  }

  double lo = 0.0;
  double hi = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    hi = std::max(hi, diag[k] + (k > 0 ? std::abs(off[k - 1]) : 0.0) +
                          (k + 1 < m ? std::abs(off[k]) : 0.0));
  }
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (sturm_count(diag, off, ones, mid) >= 1 ? hi : lo) = mid;
  }
  const double lambda_bisect = 0.5 * (lo + hi);

  // Inverse iteration slightly below the bracket for the eigenvector.
  const double shift = lambda_bisect * (1.0 - 1e-6);
  Tridiagonal a(m);
  for (std::size_t k = 0; k < m; ++k) {
    a.diag[k] = diag[k] - shift;
    if (k > 0) a.lower[k] = off[k - 1];
    if (k + 1 < m) a.upper[k] = off[k];
  }
  std::vector<double> v(m, 1.0);
  double lambda = lambda_bisect;
  int iterations = 0;
  bool converged = false;
  for (; iterations < 500; ++iterations) {
    std::vector<double> x = a.solve(v);
    double norm = 0;
    for (double e : x) norm += e * e;
    norm = std::sqrt(norm);
    for (auto& e : x) e /= norm;
    // Rayleigh quotient of the scaled operator.
    double num = 0;
    for (std::size_t k = 0; k < m; ++k) {
      double sx = diag[k] * x[k];
      if (k > 0) sx += off[k - 1] * x[k - 1];
      if (k + 1 < m) sx += off[k] * x[k + 1];
      num += x[k] * sx;
    }
    double change = 0;
    for (std::size_t k = 0; k < m; ++k) change = std::max(change, std::abs(x[k] - v[k]));
    v = std::move(x);
    const double previous = lambda;
    lambda = num;
    if (iterations > 0 && change < 1e-10 && std::abs(lambda - previous) <= 1e-13 * lambda) {
      converged = true;
      ++iterations;
      break;
    }
  }
  if (!converged) throw std::runtime_error("poincare: inverse iteration did not converge in 500 steps");

  std::vector<double> u(n, 0.0);
  double sup = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    u[k + 1] = v[k] / sq[k];
    if (std::abs(u[k + 1]) > std::abs(sup)) sup = u[k + 1];
  }
  for (auto& e : u) e /= sup;
  return {lambda, GridFunction(grid, std::move(u)), iterations};
}

bool VerificationReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

void VerificationReport::add(std::string name, double value, std::string relation,
                             double threshold) {
  const bool pass = relation == "<=" ? value <= threshold : value >= threshold;
  checks.push_back({std::move(name), value, std::move(relation), threshold, pass});
}

VerificationReport verify_solution(const RadialKahlerModel& model, const SolitonSolution& sol,
                                   const GridFunction& F, const VerificationThresholds& th,
                                   const std::string& config_hash) {
  VerificationReport rep;
  rep.meta = {to_string(model.kind()), describe(F.grid), config_hash};

  const auto range = imposed_range(model, F.grid);
  double residual = std::numeric_limits<double>::infinity();
  double min_ratio = 0.0, max_ratio = 0.0, inf_pot = -std::numeric_limits<double>::infinity();
  try {
    const GridFunction r = ma_residual_radial(model, sol.slopes, F, 1.0);
    residual = 0.0;
    for (std::size_t i = range.first; i <= range.second; ++i) {
      residual = std::max(residual, std::abs(r[i]));
    }
    const PathRecord last = path_record(model, sol.slopes, 1.0, 0, residual, 1.4);
    min_ratio = last.min_ratio;
    max_ratio = last.max_ratio;
    inf_pot = last.inf_soliton_potential;
  } catch (const std::domain_error&) {
    // Positivity failure: the residual stays infinite and the checks fail.
  }
  rep.add("ma_residual_sup", residual, "<=", th.residual);
  const double rate_phi = decay_rate_fit(sol.phi);
  const double rate_F = decay_rate_fit(F);
  rep.add("decay_rate_phi", rate_phi, ">=", rate_F - th.decay_slack);
  rep.add("min_metric_ratio", min_ratio, ">=", th.min_ratio);
  rep.add("max_metric_ratio", max_ratio, "<=", th.max_ratio);
  rep.add("inf_f_plus_dphi", inf_pot, ">=", th.soliton_potential);

  double max_weighted = 0.0, max_dphi = 0.0, end_weighted = 0.0, end_dphi = 0.0;
  for (const auto& r : sol.path) {
    max_weighted = std::max(max_weighted, r.weighted_sup);
    max_dphi = std::max(max_dphi, r.sup_abs_dphi);
  }
  if (!sol.path.empty()) {
    end_weighted = sol.path.back().weighted_sup;
    end_dphi = sol.path.back().sup_abs_dphi;
  }
  rep.add("path_max_weighted_sup", max_weighted, "<=", th.path_growth * end_weighted);
  rep.add("path_max_sup_dphi", max_dphi, "<=", th.path_growth * end_dphi);
  rep.reference.emplace_back("poincare_lambda0", kPoincareReference);
  return rep;
}

std::string fnv1a64(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return fmt::format("{:016x}", h);
}

std::string describe(const Grid& g) {
  return fmt::format("[{}, {}] h={}", g.t_min(), g.t_max(), g.h());
}

}  // namespace acyl
