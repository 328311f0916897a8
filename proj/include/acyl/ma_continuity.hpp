#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "acyl/grid.hpp"
#include "acyl/linear_drift.hpp"
#include "acyl/model_geometry.hpp"

namespace acyl {

struct ContinuityConfig {
  int steps = 10;                  // initial uniform s-step = 1/steps
  double min_step = 1.0 / 160.0;   // halving below this stalls the path
  double tolerance = 1e-10;        // Newton stop on the sup-residual
  int max_newton = 30;
  double backtrack = 0.5;
  double armijo = 1e-4;
  int max_backtracks = 40;
  /// Trial steps must keep (a + phi''/2)/a above this.
  double positivity_floor = 1e-6;
  /// Weight eps in the recorded sup e^{eps t}|phi_s|.
  double record_weight = 1.4;
};

/// One accepted point of the continuity path.
struct PathRecord {
  double s = 0.0;
  int newton_iterations = 0;
  double sup_residual = 0.0;
  double min_ratio = 1.0;  // min (a + phi''/2)/a
  double max_ratio = 1.0;
  double weighted_sup = 0.0;           // sup e^{eps t}|phi|
  double inf_soliton_potential = 0.0;  // inf (f + phi')
  double sup_abs_dphi = 0.0;           // sup |phi'|
};

struct SolitonSolution {
  GridFunction phi;  // phi(t_max) = 0
  SlopeField slopes;
  std::vector<PathRecord> path;
  int total_newton = 0;
  int halvings = 0;
  double decay_estimate = 0.0;
  std::vector<std::string> warnings;
};

enum class FailureKind { Stalled, PositivityLost, Diverged };

/// A failed solve; carries the accepted part of the path.
class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(FailureKind kind, const std::string& what, std::vector<PathRecord> partial)
      : std::runtime_error(what), kind_(kind), partial_(std::move(partial)) {}
  FailureKind kind() const { return kind_; }
  const std::vector<PathRecord>& partial_path() const { return partial_; }

 private:
  FailureKind kind_;
  std::vector<PathRecord> partial_;
};

class ContinuityStalled : public SolverFailure {
 public:
  ContinuityStalled(const std::string& w, std::vector<PathRecord> p)
      : SolverFailure(FailureKind::Stalled, w, std::move(p)) {}
};
class PositivityLost : public SolverFailure {
 public:
  PositivityLost(const std::string& w, std::vector<PathRecord> p)
      : SolverFailure(FailureKind::PositivityLost, w, std::move(p)) {}
};
class NewtonDiverged : public SolverFailure {
 public:
  NewtonDiverged(const std::string& w, std::vector<PathRecord> p)
      : SolverFailure(FailureKind::Diverged, w, std::move(p)) {}
};

/// r = log((a + phi''/2)/a) + phi' - sF at every node (X(phi)/2 = phi').
/// Throws PositivityError at the first node with a + phi''/2 <= 0.
GridFunction ma_residual_radial(const RadialKahlerModel& model, const SlopeField& phi,
                                const GridFunction& F, double s);
GridFunction ma_residual_radial(const RadialKahlerModel& model, const GridFunction& phi,
                                const GridFunction& F, double s);

/// u -> 1/2 a_phi^{-1} u'' + u' with a_phi = a + phi''/2: the derivative of the
/// radial residual at phi, built from the same stencils.
class LinearizedOperator {
 public:
  LinearizedOperator(const RadialKahlerModel& model, const SlopeField& phi);

  const GridFunction& coefficient() const { return a_phi_; }
  std::vector<double> apply(const SlopeField& psi) const;
  /// Solves apply(u) = rhs at the nodes where the boundary policy imposes the
  /// equation: every node but t_max on capped models (Cap closure at t_min),
  /// the interior otherwise (u(t_min) = 0). Always u(t_max) = 0.
  SlopeField solve(std::span<const double> rhs) const;
  /// The same equation as a linear drift mode problem (right-hand side 2 rhs).
  ModeProblem mode_problem(const GridFunction& rhs) const;

 private:
  GridFunction a_phi_;
  bool cap_;
};

/// Nodes whose equations the solver imposes.
std::pair<std::size_t, std::size_t> imposed_range(const RadialKahlerModel& model, const Grid& g);

struct NewtonOutcome {
  bool converged = false;
  int iterations = 0;
  double sup_residual = 0.0;
  bool positivity_blocked = false;
  bool non_finite = false;
  SlopeField phi;
};

/// Damped Newton at fixed s from `start`, Armijo backtracking on the sup
/// residual with the positivity guard.
NewtonOutcome newton_solve(const RadialKahlerModel& model, const GridFunction& F, double s,
                           SlopeField start, const ContinuityConfig& cfg);

SolitonSolution continuity_solve(const RadialKahlerModel& model, const GridFunction& F,
                                 const ContinuityConfig& cfg = {});

/// Newton at s = 1 from each start; max pairwise sup distance of the results.
/// Throws NewtonDiverged or PositivityLost if any start fails.
double uniqueness_check(const RadialKahlerModel& model, const GridFunction& F,
                        const ContinuityConfig& cfg, const std::vector<GridFunction>& starts);

PathRecord path_record(const RadialKahlerModel& model, const SlopeField& phi, double s,
                       int iterations, double sup_residual, double record_weight);

}  // namespace acyl
