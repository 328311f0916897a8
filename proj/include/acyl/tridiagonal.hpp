#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace acyl {

/// Row i reads lower[i]*x[i-1] + diag[i]*x[i] + upper[i]*x[i+1].
/// lower[0] and upper[n-1] are ignored.
struct Tridiagonal {
  std::vector<double> lower;
  std::vector<double> diag;
  std::vector<double> upper;

  explicit Tridiagonal(std::size_t n) : lower(n, 0.0), diag(n, 0.0), upper(n, 0.0) {}
  std::size_t size() const { return diag.size(); }

  std::vector<double> apply(std::span<const double> x) const;

  /// Thomas elimination without pivoting (the systems assembled here are
  /// diagonally dominant or M-matrices). Throws SingularSystem on a vanishing
  /// or non-finite pivot.
  std::vector<double> solve(std::span<const double> rhs) const;
};

/// Symmetric tridiagonal pencil helpers for K - sigma*M with diagonal M.
/// Returns the number of eigenvalues of (K, M) strictly below sigma
/// (Sturm count via the LDL^T pivots).
std::size_t sturm_count(std::span<const double> k_diag, std::span<const double> k_off,
                        std::span<const double> m_diag, double sigma);

}  // namespace acyl
