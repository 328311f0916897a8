#pragma once

#include "acyl/grid.hpp"

namespace acyl {

/// Tail window as fractions of [t_min, t_max].
struct TailWindow {
  double lo = 0.6;
  double hi = 0.9;
};

struct WeightedNormSpec {
  int k = 0;
  double epsilon = 0.0;
  TailWindow tail;
};

/// max_{j <= k} sup_i e^{eps t_i} |D^j u|_i over the nodes where the central
/// stencil of D^j fits. D^{2m} = (D^2)^m and D^{2m+1} = D^1 (D^2)^m.
double weighted_sup_norm(const GridFunction& u, const WeightedNormSpec& spec);

/// Least-squares slope of -log|u| against t on the tail window; +infinity if u
/// vanishes there. 2D fields are reduced to per-t maxima over the circle.
double decay_rate_fit(const GridFunction& u, TailWindow window = {});
double decay_rate_fit(const GridFunction2D& u, TailWindow window = {});

}  // namespace acyl
