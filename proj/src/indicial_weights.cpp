#include "acyl/indicial_weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace acyl {

namespace {

void check_mu(double mu) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) {
    throw std::invalid_argument("critical_weights: eigenvalue must be >= 0, got " +
                                std::to_string(mu));
  }
}

double required_mu(const Interval& iv) {
  const double r = std::max(std::abs(iv.lo - 1.0), std::abs(iv.hi - 1.0));
  return std::max(0.0, r * r - 1.0);
}

}  // namespace

double epsilon_minus(double mu) {
  check_mu(mu);
  return 1.0 - std::sqrt(1.0 + mu);
}

double epsilon_plus(double mu) {
  check_mu(mu);
  return 1.0 + std::sqrt(1.0 + mu);
}

double characteristic(double epsilon, double mu) { return epsilon * epsilon - 2.0 * epsilon - mu; }

CriticalWeightSet critical_weights(std::span<const double> mus, Interval window) {
  if (!(window.lo < window.hi)) throw std::invalid_argument("critical_weights: need lo < hi");
  CriticalWeightSet out{{}, window, 0.0};
  for (double mu : mus) {
    check_mu(mu);
    out.mu_max = std::max(out.mu_max, mu);
    for (auto [eps, br] : {std::pair{epsilon_minus(mu), Branch::Minus},
                           std::pair{epsilon_plus(mu), Branch::Plus}}) {
      if (window.contains(eps)) out.weights.push_back({eps, mu, br});
    }
  }
  std::sort(out.weights.begin(), out.weights.end(), [](const auto& x, const auto& y) {
    if (x.epsilon != y.epsilon) return x.epsilon < y.epsilon;
    return x.mu < y.mu;
  });
  std::vector<CriticalWeight> dedup;
  for (const auto& w : out.weights) {
    if (dedup.empty() || w.epsilon - dedup.back().epsilon > 1e-12) dedup.push_back(w);
  }
  out.weights = std::move(dedup);
  return out;
}

CriticalWeightSet critical_weights(std::span<const SpectralLevel> levels, Interval window) {
  std::vector<double> mus;
  mus.reserve(levels.size());
  for (const auto& l : levels) mus.push_back(l.mu);
  return critical_weights(mus, window);
}

FredholmVerdict fredholm_window_check(const CriticalWeightSet& cws, Interval interval) {
  if (!(interval.lo < interval.hi)) {
    throw std::invalid_argument("fredholm_window_check: need lo < hi");
  }
  const double need = required_mu(interval);
  if (cws.mu_max + 1e-12 < need) {
    throw std::invalid_argument("fredholm_window_check: spectrum computed up to mu = " +
                                std::to_string(cws.mu_max) + " but the interval needs mu >= " +
                                std::to_string(need));
  }
  // Weights outside the window the set was built for are unknown, so the
  // interval has to sit inside it.
  if (interval.lo < cws.window.lo || interval.hi > cws.window.hi) {
    throw std::invalid_argument("fredholm_window_check: interval exceeds the computed window");
  }
  bool fredholm = true;
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& w : cws.weights) {
    const double e = w.epsilon;
    double dist;
    if (e < interval.lo) {
      dist = interval.lo - e;
    } else if (e > interval.hi) {
      dist = e - interval.hi;
    } else {
      dist = -std::min(e - interval.lo, interval.hi - e);
    }
    if (interval.contains(e)) fredholm = false;
    margin = std::min(margin, dist);
  }
  if (cws.weights.empty()) {
    // Nothing in the window: the margin is at least the distance to its edges.
    margin = std::min(interval.lo - cws.window.lo, cws.window.hi - interval.hi);
  }
  return {fredholm, margin == 0.0 ? 0.0 : margin};  // no -0 for a weight on the boundary
}

}  // namespace acyl
