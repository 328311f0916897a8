#include "acyl/weighted_norms.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace acyl {

namespace {

void check_window(const TailWindow& w) {
  if (!(0.0 <= w.lo && w.lo < w.hi && w.hi <= 1.0)) {
    throw std::invalid_argument("tail window must satisfy 0 <= lo < hi <= 1");
  }
}

// Central difference of order 1 or 2 applied to v on [first, last]; entries
// outside stay untouched and the valid range shrinks by one on each side.
void central(std::vector<double>& v, int order, double h, std::size_t& first, std::size_t& last) {
  std::vector<double> out(v.size(), 0.0);
  for (std::size_t i = first + 1; i < last; ++i) {
    out[i] = order == 1 ? 0.5 * (v[i + 1] - v[i - 1]) / h
                        : (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (h * h);
  }
  ++first;
  --last;
  v = std::move(out);
}

}  // namespace

double weighted_sup_norm(const GridFunction& u, const WeightedNormSpec& spec) {
  if (spec.k < 0) throw std::invalid_argument("weighted_sup_norm: k must be >= 0");
  const std::size_t n = u.size();
  if (n == 0) throw std::invalid_argument("weighted_sup_norm: empty grid");
  const std::size_t radius = static_cast<std::size_t>((spec.k + 1) / 2);
  if (n < 2 * radius + 1) throw std::invalid_argument("weighted_sup_norm: grid too short for k");

  const double h = u.grid.h();
  double best = 0.0;
  auto take = [&](const std::vector<double>& v, std::size_t first, std::size_t last) {
    for (std::size_t i = first; i <= last; ++i) {
      best = std::max(best, std::exp(spec.epsilon * u.t(i)) * std::abs(v[i]));
    }
  };
  // Even and odd orders are built from separate chains so D^1 is never
  // iterated.
  std::vector<double> even = u.values;
  std::size_t ef = 0, el = n - 1;
  take(even, ef, el);
  for (int j = 1; j <= spec.k; ++j) {
    if (j % 2 == 1) {
      std::vector<double> odd = even;
      std::size_t of = ef, ol = el;
      central(odd, 1, h, of, ol);
      take(odd, of, ol);
    } else {
      central(even, 2, h, ef, el);
      take(even, ef, el);
    }
  }
  return best;
}

double decay_rate_fit(const GridFunction& u, TailWindow window) {
  check_window(window);
  const double span = u.grid.t_max() - u.grid.t_min();
  const double lo = u.grid.t_min() + window.lo * span;
  const double hi = u.grid.t_min() + window.hi * span;
  std::vector<double> ts, ys;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double t = u.t(i);
    if (t < lo || t > hi || u[i] == 0.0) continue;
    ts.push_back(t);
    ys.push_back(-std::log(std::abs(u[i])));
  }
  if (ts.size() < 2) return std::numeric_limits<double>::infinity();
  const double c = static_cast<double>(ts.size());
  double mt = 0, my = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    mt += ts[i];
    my += ys[i];
  }
  mt /= c;
  my /= c;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    sxy += (ts[i] - mt) * (ys[i] - my);
    sxx += (ts[i] - mt) * (ts[i] - mt);
  }
  return sxy / sxx;
}

double decay_rate_fit(const GridFunction2D& u, TailWindow window) {
  return decay_rate_fit(u.slice_max_abs(), window);
}

}  // namespace acyl
