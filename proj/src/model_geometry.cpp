#include "acyl/model_geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "acyl/errors.hpp"

namespace acyl {

namespace {

void check_n(int n) {
  if (n < 1) throw std::invalid_argument("model: complex dimension n must be >= 1, got " +
                                         std::to_string(n));
}

std::optional<TorusFactor> torus_for(int n, std::optional<TorusFactor> torus) {
  if (n == 1) {
    if (torus && torus->real_dim() != 0) {
      throw std::invalid_argument("model: n = 1 has no torus factor");
    }
    return std::nullopt;
  }
  if (!torus) return TorusFactor::unit_square(2 * (n - 1));
  if (torus->real_dim() != 2 * (n - 1)) {
    throw std::invalid_argument("model: torus lattice must have rank 2(n-1)");
  }
  for (const auto& row : torus->basis) {
    if (static_cast<int>(row.size()) != torus->real_dim()) {
      throw std::invalid_argument("model: torus basis must be square");
    }
  }
  return torus;
}

// log(1 + e^{2t}) without overflow.
double softplus2(double t) { return t > 0.0 ? 2.0 * t + std::log1p(std::exp(-2.0 * t))
                                            : std::log1p(std::exp(2.0 * t)); }

}  // namespace

const char* to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Cylinder: return "cylinder";
    case ModelKind::Cigar: return "cigar";
    case ModelKind::Glued: return "glued";
  }
  return "?";
}

TorusFactor TorusFactor::unit_square(int real_dim) {
  TorusFactor t;
  t.basis.assign(real_dim, std::vector<double>(real_dim, 0.0));
  for (int i = 0; i < real_dim; ++i) t.basis[i][i] = 1.0;
  return t;
}

RadialKahlerModel RadialKahlerModel::cigar(int n, std::optional<TorusFactor> torus) {
  check_n(n);
  // min f = f(-inf) = c0, so c0 = 1.
  return RadialKahlerModel(ModelKind::Cigar, n, 1.0, true, torus_for(n, std::move(torus)));
}

RadialKahlerModel RadialKahlerModel::cylinder(int n, double t_floor,
                                              std::optional<TorusFactor> torus) {
  check_n(n);
  if (!std::isfinite(t_floor)) throw std::invalid_argument("cylinder: t_floor must be finite");
  RadialKahlerModel m(ModelKind::Cylinder, n, 1.0 - 2.0 * t_floor, false,
                      torus_for(n, std::move(torus)));
  m.t_floor_ = t_floor;
  return m;
}

RadialKahlerModel RadialKahlerModel::glued(int n, Grid grid, std::vector<double> a,
                                           std::vector<double> g, bool has_cap,
                                           std::optional<TorusFactor> torus) {
  check_n(n);
  if (a.size() != grid.size() || g.size() != grid.size()) {
    throw std::invalid_argument("glued model: tables do not match grid");
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i] > 0.0) || !std::isfinite(a[i])) {
      throw PositivityError("glued model: coefficient not positive at t = " +
                                std::to_string(grid.t(i)),
                            i, grid.t(i));
    }
  }
  const double c0 = g.back();
  RadialKahlerModel m(ModelKind::Glued, n, c0, has_cap, torus_for(n, std::move(torus)));
  m.table_ = std::make_shared<Table>(Table{grid, std::move(a), std::move(g)});
  m.t_floor_ = grid.t_min();
  return m;
}

std::size_t RadialKahlerModel::node(double t) const { return table_->grid.index_of(t); }

double RadialKahlerModel::a(double t) const {
  switch (kind_) {
    case ModelKind::Cylinder: return 1.0;
    case ModelKind::Cigar: return 1.0 / (1.0 + std::exp(-2.0 * t));
    case ModelKind::Glued: return table_->a[node(t)];
  }
  return 0.0;
}

double RadialKahlerModel::log_a(double t) const {
  switch (kind_) {
    case ModelKind::Cylinder: return 0.0;
    case ModelKind::Cigar: return -softplus2(-t);
    case ModelKind::Glued: return std::log(table_->a[node(t)]);
  }
  return 0.0;
}

double RadialKahlerModel::f(double t) const {
  switch (kind_) {
    case ModelKind::Cylinder: return 2.0 * t + c0_;
    case ModelKind::Cigar: return softplus2(t) + c0_;
    case ModelKind::Glued: return 2.0 * t + table_->g[node(t)];
  }
  return 0.0;
}

double RadialKahlerModel::log_volume_density(double t) const {
  switch (kind_) {
    case ModelKind::Cylinder:
    case ModelKind::Cigar: return c0_;
    case ModelKind::Glued: {
      const std::size_t i = node(t);
      return std::log(table_->a[i]) + table_->g[i];
    }
  }
  return 0.0;
}

GridFunction RadialKahlerModel::a_on(const Grid& grid) const {
  return GridFunction::sample(grid, [this](double t) { return a(t); });
}

GridFunction RadialKahlerModel::f_on(const Grid& grid) const {
  return GridFunction::sample(grid, [this](double t) { return f(t); });
}

Grid RadialKahlerModel::default_grid(double h) const {
  switch (kind_) {
    case ModelKind::Cylinder: return Grid(t_floor_, 20.0, h);
    case ModelKind::Cigar: return Grid(-12.0, 20.0, h);
    case ModelKind::Glued: return table_->grid;
  }
  throw std::logic_error("unreachable");
}

GridFunction ricci_coefficient(const RadialKahlerModel& model, const Grid& grid) {
  std::vector<double> log_a(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid.t(i);
    const double a = model.a(t);
    if (!(a > 0.0)) {
      throw std::domain_error("ricci_coefficient: a <= 0 at t = " + std::to_string(t));
    }
    log_a[i] = model.log_a(t);
  }
  auto d = derivatives(log_a, grid.h(), LeftClosure::OneSided);
  for (auto& v : d.d2) v *= -0.5;
  return GridFunction(grid, std::move(d.d2));
}

GridFunction soliton_residual(const RadialKahlerModel& model, const SlopeField& phi) {
  const Grid& grid = phi.grid;
  const auto d = derivatives(phi, left_closure(model));
  std::vector<double> r(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid.t(i);
    const double ratio_minus_one = d.d2[i] / (2.0 * model.a(t));
    if (!(ratio_minus_one > -1.0)) {
      throw PositivityError("soliton_residual: a + phi''/2 <= 0 at t = " + std::to_string(t), i,
                            t);
    }
    r[i] = model.log_volume_density(t) + std::log1p(ratio_minus_one) + d.d1[i];
  }
  const double c = r.back();
  for (auto& v : r) v -= c;
  return GridFunction(grid, std::move(r));
}

GridFunction soliton_residual(const RadialKahlerModel& model, const GridFunction& phi) {
  return soliton_residual(model, SlopeField::of(phi));
}

}  // namespace acyl
