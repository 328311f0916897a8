#include "acyl/tridiagonal.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "acyl/errors.hpp"

namespace acyl {

std::vector<double> Tridiagonal::apply(std::span<const double> x) const {
  const std::size_t n = size();
  if (x.size() != n) throw std::invalid_argument("Tridiagonal::apply: size mismatch");
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = diag[i] * x[i];
    if (i > 0) s += lower[i] * x[i - 1];
    if (i + 1 < n) s += upper[i] * x[i + 1];
    y[i] = s;
  }
  return y;
}

std::vector<double> Tridiagonal::solve(std::span<const double> rhs) const {
  const std::size_t n = size();
  if (rhs.size() != n) throw std::invalid_argument("Tridiagonal::solve: size mismatch");
  std::vector<double> c(n), x(n);
  // Rows may differ in scale by many orders (a ~ 1e-11 near a cap), so the
  // pivot test is relative to its own row.
  auto row_scale = [&](std::size_t i) {
    return std::abs(diag[i]) + std::abs(lower[i]) + std::abs(upper[i]);
  };
  constexpr double kRel = 64.0 * std::numeric_limits<double>::epsilon();

  double pivot = diag[0];
  for (std::size_t i = 0;; ++i) {
    if (!std::isfinite(pivot) || std::abs(pivot) <= kRel * row_scale(i)) {
      throw SingularSystem("tridiagonal system is singular at row " + std::to_string(i));
    }
    c[i] = i + 1 < n ? upper[i] / pivot : 0.0;
    x[i] = (rhs[i] - (i > 0 ? lower[i] * x[i - 1] : 0.0)) / pivot;
    if (i + 1 == n) break;
    pivot = diag[i + 1] - lower[i + 1] * c[i];
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
  return x;
}

std::size_t sturm_count(std::span<const double> k_diag, std::span<const double> k_off,
                        std::span<const double> m_diag, double sigma) {
  const std::size_t n = k_diag.size();
  std::size_t count = 0;
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double b = i > 0 ? k_off[i - 1] : 0.0;
    d = k_diag[i] - sigma * m_diag[i] - (i > 0 ? b * b / d : 0.0);
    // A zero pivot is nudged; it only shifts sigma by a rounding amount.
    if (d == 0.0) d = -std::numeric_limits<double>::min();
    if (d < 0.0) ++count;
  }
  return count;
}

}  // namespace acyl
