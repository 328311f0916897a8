#pragma once

#include <span>
#include <vector>

#include "acyl/cross_section.hpp"

namespace acyl {

/// Interval of weights; open ends exclude the endpoint.
struct Interval {
  double lo;
  double hi;
  bool open = true;

  bool contains(double x) const { return open ? (lo < x && x < hi) : (lo <= x && x <= hi); }
};

enum class Branch { Minus, Plus };

struct CriticalWeight {
  double epsilon;
  double mu;
  Branch branch;
};

struct CriticalWeightSet {
  std::vector<CriticalWeight> weights;  // sorted by epsilon
  Interval window;
  /// Largest mu the set was computed from; weights in [1 - sqrt(1+mu_max),
  /// 1 + sqrt(1+mu_max)] are complete.
  double mu_max;
};

/// Roots of eps^2 - 2 eps = mu: 1 -+ sqrt(1 + mu).
double epsilon_minus(double mu);
double epsilon_plus(double mu);
/// eps^2 - 2 eps - mu. Zero iff e^{-eps t} solves u'' + 2u' - mu u = 0.
double characteristic(double epsilon, double mu);

/// Every root lying in the window, sorted and deduplicated at 1e-12.
/// mu_max defaults to the largest input mu.
CriticalWeightSet critical_weights(std::span<const double> mus, Interval window);
CriticalWeightSet critical_weights(std::span<const SpectralLevel> levels, Interval window);

struct FredholmVerdict {
  bool fredholm;
  /// Signed distance from the interval to the nearest weight: positive when
  /// every weight lies outside, 0 when one sits on the boundary, negative
  /// (minus the depth) when one lies inside.
  double margin;
};

/// Throws std::invalid_argument if cws was built from a spectrum too short to
/// see every weight in the interval (needs mu_max >= max((lo-1)^2,(hi-1)^2) - 1).
FredholmVerdict fredholm_window_check(const CriticalWeightSet& cws, Interval interval);

inline constexpr double kDefaultWeightMuMax = 10.0;

}  // namespace acyl
