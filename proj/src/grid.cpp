#include "acyl/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace acyl {

namespace {

void require_finite(std::span<const double> v, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      throw std::invalid_argument(std::string(what) + ": non-finite value at index " +
                                  std::to_string(i));
    }
  }
}

}  // namespace

Grid::Grid(double t_min, double t_max, double h) : t_min_(t_min), t_max_(t_max) {
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("Grid: h must be > 0");
  if (!(t_max > t_min)) throw std::invalid_argument("Grid: t_max must exceed t_min");
  const double cells = (t_max - t_min) / h;
  const double rounded = std::round(cells);
  if (rounded < 2.0 || std::abs(cells - rounded) > 1e-8 * rounded) {
    throw std::invalid_argument("Grid: (t_max - t_min)/h must be an integer >= 2");
  }
  size_ = static_cast<std::size_t>(rounded) + 1;
  h_ = (t_max - t_min) / rounded;
}

std::vector<double> Grid::nodes() const {
  std::vector<double> out(size_);
  for (std::size_t i = 0; i < size_; ++i) out[i] = t(i);
  return out;
}

std::size_t Grid::nearest_index(double t) const {
  const double x = std::round((t - t_min_) / h_);
  if (x <= 0.0) return 0;
  if (x >= static_cast<double>(size_ - 1)) return size_ - 1;
  return static_cast<std::size_t>(x);
}

std::size_t Grid::index_of(double t) const {
  const std::size_t i = nearest_index(t);
  if (std::abs(this->t(i) - t) > 1e-9 * h_) {
    throw std::out_of_range("Grid: t = " + std::to_string(t) + " is not a grid node");
  }
  return i;
}

GridFunction::GridFunction(Grid g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.size()) {
    throw std::invalid_argument("GridFunction: " + std::to_string(values.size()) +
                                " values for a grid of " + std::to_string(grid.size()) +
                                " nodes");
  }
  require_finite(values, "GridFunction");
}

GridFunction GridFunction::zeros(const Grid& g) {
  return GridFunction(g, std::vector<double>(g.size(), 0.0));
}

GridFunction GridFunction::sample(const Grid& g, const std::function<double(double)>& fn) {
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(g.t(i));
  return GridFunction(g, std::move(v));
}

GridFunction2D::GridFunction2D(Grid g, std::size_t nu, double period, std::vector<double> v)
    : t_grid(g), u_size(nu), u_period(period), values(std::move(v)) {
  if (nu < 3) throw std::invalid_argument("GridFunction2D: need at least 3 u-nodes");
  if (!(period > 0.0)) throw std::invalid_argument("GridFunction2D: period must be > 0");
  if (values.size() != g.size() * nu) {
    throw std::invalid_argument("GridFunction2D: value count does not match grid");
  }
  require_finite(values, "GridFunction2D");
}

GridFunction2D GridFunction2D::sample(const Grid& g, std::size_t nu, double period,
                                      const std::function<double(double, double)>& fn) {
  std::vector<double> v(g.size() * nu);
  const double du = period / static_cast<double>(nu);
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = 0; j < nu; ++j) v[i * nu + j] = fn(g.t(i), static_cast<double>(j) * du);
  }
  return GridFunction2D(g, nu, period, std::move(v));
}

GridFunction GridFunction2D::slice_max_abs() const {
  std::vector<double> out(t_grid.size(), 0.0);
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    for (std::size_t j = 0; j < u_size; ++j) out[i] = std::max(out[i], std::abs(at(i, j)));
  }
  return GridFunction(t_grid, std::move(out));
}

SlopeField::SlopeField(Grid g, std::vector<double> s) : grid(g), slopes(std::move(s)) {
  if (slopes.size() + 1 != grid.size()) {
    throw std::invalid_argument("SlopeField: need one slope per cell");
  }
  require_finite(slopes, "SlopeField");
}

SlopeField SlopeField::of(const GridFunction& phi) {
  std::vector<double> s(phi.size() - 1);
  const double h = phi.grid.h();
  for (std::size_t i = 0; i + 1 < phi.size(); ++i) s[i] = (phi[i + 1] - phi[i]) / h;
  return SlopeField(phi.grid, std::move(s));
}

SlopeField SlopeField::zeros(const Grid& g) {
  return SlopeField(g, std::vector<double>(g.size() - 1, 0.0));
}

GridFunction SlopeField::integrate(double right_value) const {
  const std::size_t n = grid.size();
  std::vector<double> v(n);
  v[n - 1] = right_value;
  const double h = grid.h();
  for (std::size_t i = n - 1; i-- > 0;) v[i] = v[i + 1] - h * slopes[i];
  return GridFunction(grid, std::move(v));
}

double cap_factor(double h) { return 2.0 * h / std::expm1(2.0 * h); }

NodalDerivatives derivatives(const SlopeField& phi, LeftClosure left) {
  const auto& y = phi.slopes;
  const std::size_t n = phi.grid.size();
  if (n < 5) throw std::invalid_argument("derivatives: need at least 5 nodes");
  const double h = phi.grid.h();
  NodalDerivatives out{std::vector<double>(n), std::vector<double>(n)};

  // Node i sees slopes y[i-1] (left cell) and y[i] (right cell).
  for (std::size_t i = 1; i + 1 < n; ++i) {
    out.d1[i] = 0.5 * (y[i - 1] + y[i]);
    out.d2[i] = (y[i] - y[i - 1]) / h;
  }
  if (left == LeftClosure::Mirror) {
    out.d1[0] = 0.0;
    out.d2[0] = 2.0 * y[0] / h;
  } else if (left == LeftClosure::Cap) {
    out.d1[0] = cap_factor(h) * y[0];
    out.d2[0] = 2.0 * out.d1[0];
  } else {
    out.d1[0] = 0.5 * (3.0 * y[0] - y[1]);
    out.d2[0] = (-2.0 * y[0] + 3.0 * y[1] - y[2]) / h;
  }
  const std::size_t a = n - 2, b = n - 3, c = n - 4;
  out.d1[n - 1] = 0.5 * (3.0 * y[a] - y[b]);
  out.d2[n - 1] = (2.0 * y[a] - 3.0 * y[b] + y[c]) / h;
  return out;
}

NodalDerivatives derivatives(std::span<const double> values, double h, LeftClosure left) {
  const std::size_t n = values.size();
  if (n < 5) throw std::invalid_argument("derivatives: need at least 5 nodes");
  NodalDerivatives out{std::vector<double>(n), std::vector<double>(n)};
  const double inv_h = 1.0 / h, inv_h2 = 1.0 / (h * h);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    out.d1[i] = 0.5 * (values[i + 1] - values[i - 1]) * inv_h;
    out.d2[i] = (values[i + 1] - 2.0 * values[i] + values[i - 1]) * inv_h2;
  }
  if (left == LeftClosure::Mirror) {
    out.d1[0] = 0.0;
    out.d2[0] = 2.0 * (values[1] - values[0]) * inv_h2;
  } else if (left == LeftClosure::Cap) {
    out.d1[0] = cap_factor(h) * (values[1] - values[0]) * inv_h;
    out.d2[0] = 2.0 * out.d1[0];
  } else {
    out.d1[0] = 0.5 * (-3.0 * values[0] + 4.0 * values[1] - values[2]) * inv_h;
    out.d2[0] = (2.0 * values[0] - 5.0 * values[1] + 4.0 * values[2] - values[3]) * inv_h2;
  }
  const auto v = [&](std::size_t k) { return values[n - 1 - k]; };
  out.d1[n - 1] = 0.5 * (3.0 * v(0) - 4.0 * v(1) + v(2)) * inv_h;
  out.d2[n - 1] = (2.0 * v(0) - 5.0 * v(1) + 4.0 * v(2) - v(3)) * inv_h2;
  return out;
}

}  // namespace acyl
