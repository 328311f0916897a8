#include "acyl/cross_section.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <stdexcept>

namespace acyl {

namespace {

using Eigen::MatrixXd;
using Eigen::MatrixXi;

MatrixXd basis_matrix(const CrossSection& cs) {
  const auto d = static_cast<Eigen::Index>(cs.lattice.size());
  MatrixXd b(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    if (static_cast<Eigen::Index>(cs.lattice[r].size()) != d) {
      throw std::invalid_argument("cross section: lattice basis must be square");
    }
    for (Eigen::Index c = 0; c < d; ++c) b(r, c) = cs.lattice[r][c];
  }
  return b;
}

MatrixXi map_matrix(const CyclicQuotient& q, Eigen::Index d) {
  if (static_cast<Eigen::Index>(q.lattice_map.size()) != d) {
    throw std::invalid_argument("quotient: lattice map has wrong size");
  }
  MatrixXi r(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    if (static_cast<Eigen::Index>(q.lattice_map[i].size()) != d) {
      throw std::invalid_argument("quotient: lattice map must be square");
    }
    for (Eigen::Index c = 0; c < d; ++c) r(i, c) = q.lattice_map[i][c];
  }
  return r;
}

bool has_quotient(const CrossSection& cs) { return cs.quotient && cs.quotient->order > 1; }

void enumerate_box(const std::vector<int>& bound, std::vector<int>& k, std::size_t pos,
                   const std::function<void(const std::vector<int>&)>& visit) {
  if (pos == bound.size()) {
    visit(k);
    return;
  }
  for (int v = -bound[pos]; v <= bound[pos]; ++v) {
    k[pos] = v;
    enumerate_box(bound, k, pos + 1, visit);
  }
}

std::vector<SpectralLevel> merge(const std::vector<std::pair<double, int>>& weighted) {
  std::vector<SpectralLevel> out;
  for (const auto& [mu, w] : weighted) {
    if (!out.empty() && mu - out.back().mu <= kSpectrumMergeTol) {
      out.back().multiplicity += w;
    } else {
      out.push_back({mu, w});
    }
  }
  std::erase_if(out, [](const SpectralLevel& l) { return l.multiplicity == 0; });
  return out;
}

}  // namespace

void CrossSection::validate() const {
  if (!(circle_length > 0.0) || !std::isfinite(circle_length)) {
    throw std::invalid_argument("cross section: circle length must be > 0");
  }
  const MatrixXd b = basis_matrix(*this);
  const auto d = b.rows();
  if (d > 0) {
    const double scale = b.rowwise().norm().prod();
    if (!(std::abs(b.determinant()) > 1e-12 * scale)) {
      throw std::invalid_argument("cross section: degenerate lattice basis");
    }
  }
  if (!quotient) return;
  const CyclicQuotient& q = *quotient;
  if (q.order < 1) throw std::invalid_argument("quotient: order must be >= 1");
  const MatrixXi r = map_matrix(q, d);
  if (d == 0) return;
  const auto det = std::lround(r.cast<double>().determinant());
  if (det != 1 && det != -1) {
    throw std::invalid_argument("quotient: lattice map is not invertible over the integers");
  }
  MatrixXi power = MatrixXi::Identity(d, d);
  for (int i = 0; i < q.order; ++i) power = power * r;
  if (power != MatrixXi::Identity(d, d)) {
    throw std::invalid_argument("quotient: lattice map R does not satisfy R^m = I");
  }
  const MatrixXd g = b * b.transpose();
  const MatrixXd rd = r.cast<double>();
  if (!(rd.transpose() * g * rd).isApprox(g, 1e-12)) {
    throw std::invalid_argument("quotient: lattice map is not an isometry");
  }
}

std::vector<Mode> enumerate_modes(const CrossSection& cs, double mu_max) {
  if (!(mu_max > 0.0) || !std::isfinite(mu_max)) {
    throw std::invalid_argument("spectrum: mu_max must be > 0");
  }
  cs.validate();
  const MatrixXd b = basis_matrix(cs);
  const auto d = b.rows();
  const MatrixXd g = b * b.transpose();
  const MatrixXd g_inv = d > 0 ? MatrixXd(g.inverse()) : MatrixXd(0, 0);
  const double two_pi = 2.0 * std::numbers::pi;

  // |k_i| = |b_i . k*| <= |b_i| |k*| and |2 pi k*|^2 <= mu_max.
  std::vector<int> bound(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    bound[i] = static_cast<int>(std::floor(std::sqrt(mu_max * g(i, i)) / two_pi + 1e-9));
  }
  const int j_bound = static_cast<int>(std::floor(cs.circle_length * std::sqrt(mu_max) / two_pi + 1e-9));

  std::vector<Mode> modes;
  std::vector<int> k(d, 0);
  Eigen::VectorXd kv(d);
  enumerate_box(bound, k, 0, [&](const std::vector<int>& kk) {
    for (Eigen::Index i = 0; i < d; ++i) kv(i) = kk[i];
    const double torus_mu = d > 0 ? two_pi * two_pi * kv.dot(g_inv * kv) : 0.0;
    for (int j = -j_bound; j <= j_bound; ++j) {
      const double w = two_pi * j / cs.circle_length;
      const double mu = w * w + torus_mu;
      if (mu <= mu_max + kSpectrumMergeTol) modes.push_back({j, kk, mu});
    }
  });
  std::sort(modes.begin(), modes.end(), [](const Mode& x, const Mode& y) {
    if (x.mu != y.mu) return x.mu < y.mu;
    if (x.j != y.j) return x.j < y.j;
    return x.k < y.k;
  });
  return modes;
}

std::vector<SpectralLevel> spectrum(const CrossSection& cs, double mu_max) {
  std::vector<std::pair<double, int>> weighted;
  for (const auto& m : enumerate_modes(cs, mu_max)) weighted.emplace_back(m.mu, 1);
  return merge(weighted);
}

std::vector<SpectralLevel> invariant_spectrum(const CrossSection& cs, double mu_max) {
  if (!has_quotient(cs)) return spectrum(cs, mu_max);
  const auto modes = enumerate_modes(cs, mu_max);
  const int m = cs.quotient->order;
  const auto d = static_cast<Eigen::Index>(cs.lattice.size());
  const MatrixXi rt = map_matrix(*cs.quotient, d).transpose();

  std::map<std::pair<int, std::vector<int>>, std::size_t> index;
  for (std::size_t i = 0; i < modes.size(); ++i) index[{modes[i].j, modes[i].k}] = i;

  // The generator pulls (j, k) back to e^{2 pi i j/m} (j, R^T k). On an orbit
  // of p modes it acts as a p-cycle scaled by that character, so an invariant
  // combination exists iff the character to the p-th power is trivial.
  std::vector<bool> seen(modes.size(), false);
  std::vector<std::pair<double, int>> weighted;
  Eigen::VectorXi kv(d);
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (seen[i]) continue;
    std::size_t p = 0;
    std::vector<int> k = modes[i].k;
    while (true) {
      const auto it = index.find({modes[i].j, k});
      if (it == index.end()) throw std::logic_error("invariant_spectrum: orbit left the box");
      if (seen[it->second]) break;
      seen[it->second] = true;
      ++p;
      for (Eigen::Index c = 0; c < d; ++c) kv(c) = k[c];
      const Eigen::VectorXi next = rt * kv;
      for (Eigen::Index c = 0; c < d; ++c) k[c] = next(c);
    }
    const long jp = static_cast<long>(modes[i].j) * static_cast<long>(p);
    weighted.emplace_back(modes[i].mu, ((jp % m) + m) % m == 0 ? 1 : 0);
  }
  std::stable_sort(weighted.begin(), weighted.end(),
                   [](const auto& x, const auto& y) { return x.first < y.first; });
  return merge(weighted);
}

CrossSection square_cross_section(double circle_length, double lattice_scale) {
  return CrossSection{circle_length, {{lattice_scale, 0.0}, {0.0, lattice_scale}}, std::nullopt};
}

CrossSection hexagonal_cross_section(double circle_length, double lattice_scale) {
  return CrossSection{circle_length,
                      {{lattice_scale, 0.0}, {0.5 * lattice_scale, 0.5 * std::sqrt(3.0) * lattice_scale}},
                      std::nullopt};
}

CyclicQuotient z2_reflection(int real_dim) {
  CyclicQuotient q;
  q.order = 2;
  q.lattice_map.assign(real_dim, std::vector<int>(real_dim, 0));
  for (int i = 0; i < real_dim; ++i) q.lattice_map[i][i] = -1;
  return q;
}

CyclicQuotient z3_hexagonal_rotation() { return CyclicQuotient{3, {{-1, -1}, {1, 0}}}; }

}  // namespace acyl
