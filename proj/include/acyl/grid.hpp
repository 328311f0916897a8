#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace acyl {

/// Uniform grid on [t_min, t_max]. Node i sits at t_min + i*h with the last
/// node landing exactly on t_max.
class Grid {
 public:
  Grid(double t_min, double t_max, double h);

  double t_min() const { return t_min_; }
  double t_max() const { return t_max_; }
  double h() const { return h_; }
  std::size_t size() const { return size_; }

  double t(std::size_t i) const {
    return i + 1 == size_ ? t_max_ : t_min_ + static_cast<double>(i) * h_;
  }
  std::vector<double> nodes() const;

  /// Index of the node closest to t, clamped to the grid.
  std::size_t nearest_index(double t) const;

  /// Index of the node at t, or throws std::out_of_range if t is not a node
  /// (within 1e-9 h).
  std::size_t index_of(double t) const;

  bool operator==(const Grid& other) const = default;

 private:
  double t_min_;
  double t_max_;
  double h_;
  std::size_t size_;
};

/// Sampled scalar field on a Grid. All values are finite.
struct GridFunction {
  Grid grid;
  std::vector<double> values;

  GridFunction(Grid g, std::vector<double> v);

  static GridFunction zeros(const Grid& g);
  static GridFunction sample(const Grid& g, const std::function<double(double)>& fn);

  std::size_t size() const { return values.size(); }
  double t(std::size_t i) const { return grid.t(i); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
};

/// Field on a (t, u) grid, periodic in u with the given period. Row-major in t:
/// value(i, j) = values[i * u_size + j].
struct GridFunction2D {
  Grid t_grid;
  std::size_t u_size;
  double u_period;
  std::vector<double> values;

  GridFunction2D(Grid g, std::size_t nu, double period, std::vector<double> v);

  static GridFunction2D sample(const Grid& g, std::size_t nu, double period,
                               const std::function<double(double, double)>& fn);

  double du() const { return u_period / static_cast<double>(u_size); }
  double u(std::size_t j) const { return static_cast<double>(j) * du(); }
  double at(std::size_t i, std::size_t j) const { return values[i * u_size + j]; }
  double& at(std::size_t i, std::size_t j) { return values[i * u_size + j]; }

  /// Per-t maxima of |value| over the u-circle.
  GridFunction slice_max_abs() const;
};

/// First differences (phi[i+1] - phi[i]) / h of a potential, one per cell.
///
/// On models with a cap (cigar and anything glued to it) the coefficient a(t)
/// is ~e^{2t} near t_min, so phi''/a cannot be formed from nodal values that
/// carry an O(1) offset: the rounding of the offset swamps phi''. Slopes carry
/// the same discrete information without the offset, and every central
/// difference of phi is an exact function of them.
struct SlopeField {
  Grid grid;
  std::vector<double> slopes;  // size grid.size() - 1

  SlopeField(Grid g, std::vector<double> s);

  static SlopeField of(const GridFunction& phi);
  static SlopeField zeros(const Grid& g);

  /// Nodal potential with phi(t_max) = right_value.
  GridFunction integrate(double right_value = 0.0) const;
};

/// How the first node is differenced.
enum class LeftClosure {
  OneSided,  // second-order one-sided stencils
  Mirror,    // even reflection u[-1] = u[1], i.e. u'(t_min) = 0
  // Smooth function of |z|^2 = e^{2t} at the origin of C: u = c + b e^{2t}
  // near t_min, fitted through the first cell. Then u' = k y_0 and u'' = 2u'
  // with k = 2h/expm1(2h).
  Cap,
};

/// 2h / (e^{2h} - 1), the Cap closure factor.
double cap_factor(double h);

struct NodalDerivatives {
  std::vector<double> d1;
  std::vector<double> d2;
};

/// Second-order first and second derivatives at every node. Interior nodes use
/// central differences; the last node is one-sided.
NodalDerivatives derivatives(const SlopeField& phi, LeftClosure left);
NodalDerivatives derivatives(std::span<const double> values, double h, LeftClosure left);

}  // namespace acyl
