#include "acyl/ma_continuity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <fmt/format.h>

#include "acyl/errors.hpp"
#include "acyl/weighted_norms.hpp"

namespace acyl {

namespace {

struct Evaluation {
  std::vector<double> r;
  double min_ratio = std::numeric_limits<double>::infinity();
  std::size_t worst = 0;
  bool finite = true;
};

// Residual at every node without throwing; positivity is reported via
// min_ratio and the first node where it is smallest.
Evaluation evaluate(const RadialKahlerModel& model, const std::vector<double>& a,
                    const SlopeField& phi, const GridFunction& F, double s) {
  const auto d = derivatives(phi, left_closure(model));
  Evaluation e;
  e.r.resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = d.d2[i] / (2.0 * a[i]);
    const double ratio = 1.0 + x;
    if (ratio < e.min_ratio) {
      e.min_ratio = ratio;
      e.worst = i;
    }
    e.r[i] = ratio > 0.0 ? std::log1p(x) + d.d1[i] - s * F[i]
                         : std::numeric_limits<double>::quiet_NaN();
    if (!std::isfinite(d.d1[i]) || !std::isfinite(d.d2[i])) e.finite = false;
  }
  return e;
}

double sup_on(const std::vector<double>& r, std::pair<std::size_t, std::size_t> range) {
  double m = 0.0;
  for (std::size_t i = range.first; i <= range.second; ++i) {
    if (std::isnan(r[i])) return std::numeric_limits<double>::infinity();
    m = std::max(m, std::abs(r[i]));
  }
  return m;
}

std::vector<double> sample_a(const RadialKahlerModel& model, const Grid& g) {
  std::vector<double> a(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) a[i] = model.a(g.t(i));
  return a;
}

void check_inputs(const RadialKahlerModel& model, const GridFunction& F, const Grid& g) {
  if (!(F.grid == g)) throw std::invalid_argument("MA solver: F and phi live on different grids");
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!(model.a(g.t(i)) > 0.0)) throw std::domain_error("MA solver: model coefficient a <= 0");
  }
}

// Callers check all_finite first; SlopeField rejects non-finite slopes.
SlopeField axpy(const SlopeField& y, double lambda, const SlopeField& d) {
  std::vector<double> out(y.slopes.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = y.slopes[i] + lambda * d.slopes[i];
  return SlopeField(y.grid, std::move(out));
}

bool all_finite(const SlopeField& y, double lambda, const SlopeField& d) {
  for (std::size_t i = 0; i < y.slopes.size(); ++i) {
    if (!std::isfinite(y.slopes[i] + lambda * d.slopes[i])) return false;
  }
  return true;
}

}  // namespace

GridFunction ma_residual_radial(const RadialKahlerModel& model, const SlopeField& phi,
                                const GridFunction& F, double s) {
  check_inputs(model, F, phi.grid);
  const auto e = evaluate(model, sample_a(model, phi.grid), phi, F, s);
  if (!(e.min_ratio > 0.0)) {
    const double t = phi.grid.t(e.worst);
    throw PositivityError(fmt::format("a + phi''/2 <= 0 at node {} (t = {})", e.worst, t),
                          e.worst, t);
  }
  return GridFunction(phi.grid, e.r);
}

GridFunction ma_residual_radial(const RadialKahlerModel& model, const GridFunction& phi,
                                const GridFunction& F, double s) {
  return ma_residual_radial(model, SlopeField::of(phi), F, s);
}

LinearizedOperator::LinearizedOperator(const RadialKahlerModel& model, const SlopeField& phi)
    : a_phi_(GridFunction::zeros(phi.grid)), cap_(model.has_cap()) {
  const auto d = derivatives(phi, left_closure(model));
  for (std::size_t i = 0; i < phi.grid.size(); ++i) {
    const double t = phi.grid.t(i);
    const double a = model.a(t);
    const double ratio = 1.0 + d.d2[i] / (2.0 * a);
    if (!(ratio > 0.0)) {
      throw PositivityError(fmt::format("linearization: a + phi''/2 <= 0 at t = {}", t), i, t);
    }
    a_phi_[i] = a * ratio;
  }
}

std::vector<double> LinearizedOperator::apply(const SlopeField& psi) const {
  const auto d = derivatives(psi, cap_ ? LeftClosure::Cap : LeftClosure::OneSided);
  std::vector<double> out(d.d1.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = 0.5 * d.d2[i] / a_phi_[i] + d.d1[i];
  return out;
}

SlopeField LinearizedOperator::solve(std::span<const double> rhs) const {
  const Grid& g = a_phi_.grid;
  if (rhs.size() != g.size()) throw std::invalid_argument("linearized solve: size mismatch");
  std::vector<double> twice(rhs.begin(), rhs.end());
  for (auto& v : twice) v *= 2.0;
  if (cap_) return solve_radial_slopes(a_phi_, twice);
  ModeProblem p{a_phi_, ModeEigenvalue{}, GridFunction(g, std::move(twice)), BoundaryPolicy{}};
  return SlopeField::of(solve_mode(p));
}

ModeProblem LinearizedOperator::mode_problem(const GridFunction& rhs) const {
  std::vector<double> twice = rhs.values;
  for (auto& v : twice) v *= 2.0;
  BoundaryPolicy b;
  b.left = cap_ ? LeftBoundary::Cap : LeftBoundary::Dirichlet;
  return ModeProblem{a_phi_, ModeEigenvalue{}, GridFunction(rhs.grid, std::move(twice)), b};
}

std::pair<std::size_t, std::size_t> imposed_range(const RadialKahlerModel& model, const Grid& g) {
  return {model.has_cap() ? 0 : 1, g.size() - 2};
}

PathRecord path_record(const RadialKahlerModel& model, const SlopeField& phi, double s,
                       int iterations, double sup_residual, double record_weight) {
  const Grid& g = phi.grid;
  const auto d = derivatives(phi, left_closure(model));
  const GridFunction nodal = phi.integrate(0.0);
  PathRecord rec;
  rec.s = s;
  rec.newton_iterations = iterations;
  rec.sup_residual = sup_residual;
  rec.min_ratio = std::numeric_limits<double>::infinity();
  rec.max_ratio = -std::numeric_limits<double>::infinity();
  rec.inf_soliton_potential = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double t = g.t(i);
    const double ratio = 1.0 + d.d2[i] / (2.0 * model.a(t));
    rec.min_ratio = std::min(rec.min_ratio, ratio);
    rec.max_ratio = std::max(rec.max_ratio, ratio);
    rec.weighted_sup = std::max(rec.weighted_sup, std::exp(record_weight * t) * std::abs(nodal[i]));
    rec.inf_soliton_potential = std::min(rec.inf_soliton_potential, model.f(t) + d.d1[i]);
    rec.sup_abs_dphi = std::max(rec.sup_abs_dphi, std::abs(d.d1[i]));
  }
  return rec;
}

NewtonOutcome newton_solve(const RadialKahlerModel& model, const GridFunction& F, double s,
                           SlopeField start, const ContinuityConfig& cfg) {
  const Grid g = start.grid;
  check_inputs(model, F, g);
  const auto a = sample_a(model, g);
  const auto range = imposed_range(model, g);

  NewtonOutcome out{false, 0, 0.0, false, false, std::move(start)};
  Evaluation e = evaluate(model, a, out.phi, F, s);
  if (!(e.min_ratio > 0.0)) {
    out.positivity_blocked = true;
    out.sup_residual = std::numeric_limits<double>::infinity();
    return out;
  }
  double sup = sup_on(e.r, range);
  while (true) {
    out.sup_residual = sup;
    if (sup <= cfg.tolerance) {
      out.converged = true;
      return out;
    }
    if (out.iterations == cfg.max_newton) return out;

    const LinearizedOperator lin(model, out.phi);
    std::vector<double> rhs(e.r.size());
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = -e.r[i];
    SlopeField step = SlopeField::zeros(g);
    try {
      step = lin.solve(rhs);
    } catch (const std::exception&) {
      out.non_finite = true;
      return out;
    }
    ++out.iterations;

    double lambda = 1.0;
    bool accepted = false;
    bool any_admissible = false;
    for (int b = 0; b <= cfg.max_backtracks; ++b, lambda *= cfg.backtrack) {
      if (!all_finite(out.phi, lambda, step)) continue;
      SlopeField trial = axpy(out.phi, lambda, step);
      Evaluation et = evaluate(model, a, trial, F, s);
      if (!et.finite) continue;
      if (!(et.min_ratio > cfg.positivity_floor)) continue;
      any_admissible = true;
      const double sup_trial = sup_on(et.r, range);
      if (sup_trial <= (1.0 - cfg.armijo * lambda) * sup) {
        out.phi = std::move(trial);
        e = std::move(et);
        sup = sup_trial;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      out.positivity_blocked = !any_admissible;
      return out;
    }
  }
}

SolitonSolution continuity_solve(const RadialKahlerModel& model, const GridFunction& F,
                                 const ContinuityConfig& cfg) {
  if (cfg.steps < 1 || !(cfg.min_step > 0.0) || !(cfg.tolerance > 0.0) || cfg.max_newton < 1 ||
      !(cfg.backtrack > 0.0 && cfg.backtrack < 1.0) || !(cfg.positivity_floor >= 0.0)) {
    throw std::invalid_argument("continuity_solve: invalid configuration");
  }
  const Grid& g = F.grid;
  check_inputs(model, F, g);

  std::vector<std::string> warnings;
  const double rate = decay_rate_fit(F);
  if (!(rate > 1.0 && rate < 2.0)) {
    warnings.push_back(fmt::format("decay rate of F is {:.6g}, outside (1, 2)", rate));
  }

  SlopeField phi = SlopeField::zeros(g);
  std::vector<PathRecord> path;
  {
    const auto e0 = evaluate(model, sample_a(model, g), phi, F, 0.0);
    path.push_back(path_record(model, phi, 0.0, 0, sup_on(e0.r, imposed_range(model, g)),
                               cfg.record_weight));
  }
  const double initial_step = 1.0 / cfg.steps;
  double step = initial_step;
  double s = 0.0;
  int quick = 0;
  int total = 0;
  int halvings = 0;
  while (s < 1.0) {
    // Snap to 1 so ten steps of 0.1 end exactly at s = 1.
    const double s_try = s + step >= 1.0 - 1e-12 ? 1.0 : s + step;
    NewtonOutcome out = newton_solve(model, F, s_try, phi, cfg);
    total += out.iterations;
    if (out.non_finite) {
      throw NewtonDiverged(fmt::format("Newton produced non-finite values at s = {}", s_try), path);
    }
    if (out.converged) {
      s = s_try;
      phi = std::move(out.phi);
      path.push_back(path_record(model, phi, s, out.iterations, out.sup_residual,
                                 cfg.record_weight));
      quick = out.iterations <= 1 ? quick + 1 : 0;
      if (quick >= 2) {
        step = std::min(2.0 * step, initial_step);
        quick = 0;
      }
      continue;
    }
    quick = 0;
    ++halvings;
    step *= 0.5;
    if (step < cfg.min_step * (1.0 - 1e-12)) {
      const std::string why =
          fmt::format("continuity path stalled at s = {} (step below {})", s, cfg.min_step);
      if (out.positivity_blocked) throw PositivityLost(why + ": positivity lost", path);
      throw ContinuityStalled(why, path);
    }
  }

  GridFunction nodal = phi.integrate(0.0);
  SolitonSolution sol{nodal, phi, std::move(path), total, halvings, decay_rate_fit(nodal),
                      std::move(warnings)};
  return sol;
}

double uniqueness_check(const RadialKahlerModel& model, const GridFunction& F,
                        const ContinuityConfig& cfg, const std::vector<GridFunction>& starts) {
  if (starts.size() < 2) throw std::invalid_argument("uniqueness_check: need >= 2 starts");
  std::vector<GridFunction> solutions;
  for (std::size_t k = 0; k < starts.size(); ++k) {
    NewtonOutcome out = newton_solve(model, F, 1.0, SlopeField::of(starts[k]), cfg);
    if (!out.converged) {
      const std::string why = fmt::format("start {} did not converge (sup residual {:.3g})", k,
                                          out.sup_residual);
      if (out.positivity_blocked) throw PositivityLost(why, {});
      throw NewtonDiverged(why, {});
    }
    solutions.push_back(out.phi.integrate(0.0));
  }
  double dist = 0.0;
  for (std::size_t x = 0; x < solutions.size(); ++x) {
    for (std::size_t y = x + 1; y < solutions.size(); ++y) {
      for (std::size_t i = 0; i < solutions[x].size(); ++i) {
        dist = std::max(dist, std::abs(solutions[x][i] - solutions[y][i]));
      }
    }
  }
  return dist;
}

}  // namespace acyl
