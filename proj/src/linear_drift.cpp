#include "acyl/linear_drift.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "acyl/errors.hpp"

namespace acyl {

ModeEigenvalue mode_eigenvalue(const CrossSection& cs, const Mode& mode) {
  const double two_pi = 2.0 * std::numbers::pi;
  const double w = two_pi * mode.j / cs.circle_length;
  const auto d = static_cast<Eigen::Index>(cs.lattice.size());
  if (static_cast<Eigen::Index>(mode.k.size()) != d) {
    throw std::invalid_argument("mode_eigenvalue: lattice index has wrong length");
  }
  double torus = 0.0;
  if (d > 0) {
    Eigen::MatrixXd b(d, d);
    Eigen::VectorXd k(d);
    for (Eigen::Index r = 0; r < d; ++r) {
      k(r) = mode.k[r];
      for (Eigen::Index c = 0; c < d; ++c) b(r, c) = cs.lattice[r][c];
    }
    const Eigen::MatrixXd g = b * b.transpose();
    torus = two_pi * two_pi * k.dot(g.ldlt().solve(k));
  }
  return {w * w, torus};
}

BoundaryPolicy default_boundary(const RadialKahlerModel& model, ModeEigenvalue mu) {
  BoundaryPolicy p;
  p.left = model.has_cap() && mu.total() == 0.0 ? LeftBoundary::Neumann : LeftBoundary::Dirichlet;
  return p;
}

ModeProblem make_mode_problem(const RadialKahlerModel& model, const Grid& grid, ModeEigenvalue mu,
                              GridFunction rhs) {
  if (!(rhs.grid == grid)) throw std::invalid_argument("mode problem: rhs on a different grid");
  return ModeProblem{model.a_on(grid), mu, std::move(rhs), default_boundary(model, mu)};
}

Tridiagonal assemble_mode_operator(const ModeProblem& p) {
  if (p.mu.circle < 0.0 || p.mu.torus < 0.0) {
    throw std::invalid_argument("mode problem: eigenvalue must be >= 0");
  }
  const Grid& g = p.coefficient.grid;
  if (!(p.rhs.grid == g)) throw std::invalid_argument("mode problem: grids differ");
  const std::size_t n = g.size();
  const double h = g.h();
  Tridiagonal m(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = p.coefficient[i];
    if (!(a > 0.0)) {
      throw std::domain_error("mode operator: coefficient a <= 0 at t = " + std::to_string(g.t(i)));
    }
    const double inv_ah2 = 1.0 / (a * h * h);
    m.lower[i] = inv_ah2 - 1.0 / h;
    m.diag[i] = -2.0 * inv_ah2 - p.mu.circle / a - p.mu.torus;
    m.upper[i] = inv_ah2 + 1.0 / h;
  }
  if (p.boundary.left == LeftBoundary::Neumann) {
    m.upper[0] = m.upper[0] + m.lower[0];
  } else if (p.boundary.left == LeftBoundary::Cap) {
    const double a = p.coefficient[0];
    const double w = (2.0 / a + 2.0) * cap_factor(h) / h;
    m.upper[0] = w;
    m.diag[0] = -w - p.mu.circle / a - p.mu.torus;
  } else {
    m.diag[0] = 1.0;
    m.upper[0] = 0.0;
  }
  m.lower[0] = 0.0;
  m.diag[n - 1] = 1.0;
  m.lower[n - 1] = 0.0;
  m.upper[n - 1] = 0.0;
  return m;
}

std::vector<double> assemble_rhs(const ModeProblem& p) {
  std::vector<double> b = p.rhs.values;
  if (p.boundary.left == LeftBoundary::Dirichlet) b.front() = p.boundary.left_value;
  b.back() = p.boundary.right_value;
  return b;
}

GridFunction solve_mode(const ModeProblem& p) {
  const Tridiagonal m = assemble_mode_operator(p);
  return GridFunction(p.coefficient.grid, m.solve(assemble_rhs(p)));
}

double relative_residual(const ModeProblem& p, const GridFunction& u) {
  const Tridiagonal m = assemble_mode_operator(p);
  const auto b = assemble_rhs(p);
  const auto au = m.apply(u.values);
  double res = 0, norm_a = 0, norm_u = 0, norm_b = 0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    res = std::max(res, std::abs(au[i] - b[i]));
    norm_a = std::max(norm_a, std::abs(m.lower[i]) + std::abs(m.diag[i]) + std::abs(m.upper[i]));
    norm_u = std::max(norm_u, std::abs(u[i]));
    norm_b = std::max(norm_b, std::abs(b[i]));
  }
  const double denom = norm_a * norm_u + norm_b;
  return denom > 0.0 ? res / denom : 0.0;
}

SlopeField solve_radial_slopes(const GridFunction& coefficient, std::span<const double> rhs,
                               LeftBoundary left) {
  if (left == LeftBoundary::Dirichlet) {
    throw std::invalid_argument("solve_radial_slopes: needs a Neumann or Cap closure");
  }
  const Grid& g = coefficient.grid;
  const std::size_t n = g.size();
  if (rhs.size() != n) throw std::invalid_argument("solve_radial_slopes: size mismatch");
  const double h = g.h();
  std::vector<double> y(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double a = coefficient[i];
    if (!(a > 0.0)) {
      throw std::domain_error("solve_radial_slopes: coefficient a <= 0 at t = " +
                              std::to_string(g.t(i)));
    }
    const double inv_ah = 1.0 / (a * h);
    if (i == 0) {
      // Mirror: u'' = 2 y_0/h, u' = 0.  Cap: u' = k y_0, u'' = 2 k y_0.
      y[0] = left == LeftBoundary::Neumann ? rhs[0] / (2.0 * inv_ah)
                                           : rhs[0] / (2.0 * cap_factor(h) * (1.0 / a + 1.0));
    } else {
      y[i] = (rhs[i] - (1.0 - inv_ah) * y[i - 1]) / (inv_ah + 1.0);
    }
  }
  return SlopeField(g, std::move(y));
}

std::vector<GridFunction> solve_field(const RadialKahlerModel& model, const CrossSection& cs,
                                      const Grid& grid, const std::vector<FieldMode>& modes) {
  double mu_top = 0.0;
  std::vector<ModeEigenvalue> mus;
  for (const auto& fm : modes) {
    mus.push_back(mode_eigenvalue(cs, Mode{fm.j, fm.k, 0.0}));
    mu_top = std::max(mu_top, mus.back().total());
  }
  const auto allowed = invariant_spectrum(cs, mu_top + 1.0);
  std::vector<GridFunction> out;
  out.reserve(modes.size());
  for (std::size_t m = 0; m < modes.size(); ++m) {
    const double mu = mus[m].total();
    const bool ok = std::any_of(allowed.begin(), allowed.end(), [&](const SpectralLevel& l) {
      return std::abs(l.mu - mu) <= kSpectrumMergeTol;
    });
    if (!ok) {
      throw std::invalid_argument("solve_field: mode with mu = " + std::to_string(mu) +
                                  " is not in the invariant spectrum");
    }
    out.push_back(solve_mode(make_mode_problem(model, grid, mus[m], modes[m].rhs)));
  }
  return out;
}

}  // namespace acyl
