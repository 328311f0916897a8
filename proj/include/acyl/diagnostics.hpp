#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "acyl/grid.hpp"
#include "acyl/ma_continuity.hpp"
#include "acyl/model_geometry.hpp"

namespace acyl {

/// Reference value from the paper's barrier argument; reported, never tested.
inline constexpr double kPoincareReference = 0.125;

struct PoincareResult {
  double lambda_min;
  GridFunction eigenvector;  // sup-normalized, positive, zero at both ends
  int iterations;
};

/// Smallest eigenvalue of the pencil (K, M) with
///   u^T K u = sum over cells w_{i+1/2} (u_{i+1} - u_i)^2 / h,
///   u^T M u = sum_i w_i a_i u_i^2 h,     w = e^f / f^2,
/// with u = 0 at both ends. The eigenvalue is bracketed by Sturm counts and
/// polished by shifted inverse iteration (at most 500 steps).
PoincareResult poincare_rayleigh(const RadialKahlerModel& model, const Grid& grid);

/// u^T K u / u^T M u for the same pencil; u must vanish at both ends.
double rayleigh_quotient(const RadialKahlerModel& model, const GridFunction& u,
                         double weight_scale = 1.0);

struct Check {
  std::string name;
  double value;
  std::string relation;  // "<=" or ">="
  double threshold;
  bool pass;
};

struct ReportMeta {
  std::string model;
  std::string grid;
  std::string config_hash;
};

struct VerificationReport {
  ReportMeta meta;
  std::vector<Check> checks;
  std::vector<std::pair<std::string, double>> reference;

  bool all_pass() const;
  void add(std::string name, double value, std::string relation, double threshold);
};

struct VerificationThresholds {
  double residual = 1e-8;
  double min_ratio = 0.5;
  double max_ratio = 2.0;
  double soliton_potential = 1.0 - 1e-8;
  double decay_slack = 0.1;
  double path_growth = 10.0;
};

VerificationReport verify_solution(const RadialKahlerModel& model, const SolitonSolution& sol,
                                   const GridFunction& F, const VerificationThresholds& th = {},
                                   const std::string& config_hash = "");

/// 64-bit FNV-1a, hex encoded.
std::string fnv1a64(const std::string& text);

std::string describe(const Grid& g);

}  // namespace acyl
