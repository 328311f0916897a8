#pragma once

#include <optional>
#include <vector>

namespace acyl {

/// Generator (theta, x) -> (theta + circle_length/order, R x), with R an integer
/// matrix acting on lattice coordinates.
struct CyclicQuotient {
  int order = 2;
  std::vector<std::vector<int>> lattice_map;
};

/// L = S^1 x R^d / Lambda, optionally divided by a cyclic group. Lattice basis
/// vectors are the rows of `lattice` (empty for n = 1).
struct CrossSection {
  double circle_length = 6.283185307179586;
  std::vector<std::vector<double>> lattice;
  std::optional<CyclicQuotient> quotient;

  /// Throws std::invalid_argument for a degenerate lattice or a quotient map
  /// that is not a lattice isometry of the stated order.
  void validate() const;
};

/// Eigenfunction exp(2 pi i (j theta/l + k*.x)) with k* the dual vector whose
/// pairings with the basis rows are the integers `k`.
struct Mode {
  int j = 0;
  std::vector<int> k;
  double mu = 0.0;
};

struct SpectralLevel {
  double mu;
  int multiplicity;
};

inline constexpr double kSpectrumMergeTol = 1e-10;

/// All modes with mu <= mu_max, ordered by mu, then (j, k) lexicographically.
std::vector<Mode> enumerate_modes(const CrossSection& cs, double mu_max);

std::vector<SpectralLevel> spectrum(const CrossSection& cs, double mu_max);

/// Spectrum of the functions invariant under the quotient. Without a quotient
/// (or order 1) this equals spectrum().
std::vector<SpectralLevel> invariant_spectrum(const CrossSection& cs, double mu_max);

/// Square and hexagonal example cross-sections S^1 x T^2 used throughout.
CrossSection square_cross_section(double circle_length, double lattice_scale = 6.283185307179586);
CrossSection hexagonal_cross_section(double circle_length,
                                     double lattice_scale = 6.283185307179586);
/// theta -> theta + l/2, x -> -x.
CyclicQuotient z2_reflection(int real_dim);
/// theta -> theta + l/3, rotation by 2 pi/3 of the hexagonal lattice.
CyclicQuotient z3_hexagonal_rotation();

}  // namespace acyl
