#pragma once

#include <vector>

#include "acyl/cross_section.hpp"
#include "acyl/grid.hpp"
#include "acyl/model_geometry.hpp"
#include "acyl/tridiagonal.hpp"

namespace acyl {

/// Cross-section eigenvalue split into its circle part (scaled by 1/a in the
/// metric a(dt^2 + dtheta^2)) and its flat-torus part. A bare number is read
/// as a circle eigenvalue, which is also what a = 1 makes irrelevant.
struct ModeEigenvalue {
  double circle = 0.0;
  double torus = 0.0;

  ModeEigenvalue() = default;
  ModeEigenvalue(double mu) : circle(mu) {}  // NOLINT(google-explicit-constructor)
  ModeEigenvalue(double c, double t) : circle(c), torus(t) {}
  double total() const { return circle + torus; }
};

ModeEigenvalue mode_eigenvalue(const CrossSection& cs, const Mode& mode);

enum class LeftBoundary {
  Dirichlet,
  Neumann,  // u'(t_min) = 0 via the mirror u_{-1} = u_1
  Cap,      // u = c + b e^{2t} through the first cell (LeftClosure::Cap)
};

struct BoundaryPolicy {
  LeftBoundary left = LeftBoundary::Dirichlet;
  double left_value = 0.0;  // used by Dirichlet only
  double right_value = 0.0;
};

/// Neumann at a cap for the radial mode, Dirichlet otherwise; homogeneous.
BoundaryPolicy default_boundary(const RadialKahlerModel& model, ModeEigenvalue mu);

/// L u = a^{-1}(u'' - mu_circle u) + 2u' - mu_torus u = rhs.
struct ModeProblem {
  GridFunction coefficient;
  ModeEigenvalue mu;
  GridFunction rhs;
  BoundaryPolicy boundary;
};

ModeProblem make_mode_problem(const RadialKahlerModel& model, const Grid& grid, ModeEigenvalue mu,
                              GridFunction rhs);

/// Second-order central rows; boundary rows impose the policy (the Neumann
/// row is the interior equation with the mirror u_{-1} = u_1).
Tridiagonal assemble_mode_operator(const ModeProblem& p);
/// Right-hand side matching assemble_mode_operator's boundary rows.
std::vector<double> assemble_rhs(const ModeProblem& p);

GridFunction solve_mode(const ModeProblem& p);

/// ||A u - b||_inf / (||A||_inf ||u||_inf + ||b||_inf).
double relative_residual(const ModeProblem& p, const GridFunction& u);

/// Solves a^{-1} u'' + 2u' = rhs with a Neumann or Cap closure at t_min and
/// u(t_max) = 0, in slope unknowns y = (u_{i+1} - u_i)/h. The system is lower
/// bidiagonal with contracting multipliers, so forward substitution is stable
/// even where a is ~1e-11. The equation at the last node is not imposed
/// (u(t_max) fixes it).
SlopeField solve_radial_slopes(const GridFunction& coefficient, std::span<const double> rhs,
                               LeftBoundary left = LeftBoundary::Cap);

struct FieldMode {
  int j = 0;
  std::vector<int> k;
  GridFunction rhs;
};

/// Independent mode solves in input order. Every mode's eigenvalue must occur
/// in the invariant spectrum of cs.
std::vector<GridFunction> solve_field(const RadialKahlerModel& model, const CrossSection& cs,
                                      const Grid& grid, const std::vector<FieldMode>& modes);

}  // namespace acyl
