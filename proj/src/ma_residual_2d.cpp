#include "acyl/ma_residual_2d.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "acyl/errors.hpp"

namespace acyl {

GridFunction2D ma_residual_2d(const RadialKahlerModel& model, const GridFunction2D& phi,
                              const GridFunction2D& F, double s) {
  if (model.n() != 2) throw std::invalid_argument("ma_residual_2d: needs an n = 2 model");
  if (!(F.t_grid == phi.t_grid) || F.u_size != phi.u_size || F.u_period != phi.u_period) {
    throw std::invalid_argument("ma_residual_2d: F and phi live on different grids");
  }
  const Grid& g = phi.t_grid;
  const std::size_t nt = g.size(), nu = phi.u_size;
  const double du = phi.du();
  const LeftClosure left = left_closure(model);

  // t-derivatives of every u-column, then of the u-derivative columns.
  std::vector<double> col(nt), dcol(nt);
  std::vector<double> phi_t(nt * nu), phi_tt(nt * nu), phi_tu(nt * nu);
  for (std::size_t j = 0; j < nu; ++j) {
    const std::size_t jp = (j + 1) % nu, jm = (j + nu - 1) % nu;
    for (std::size_t i = 0; i < nt; ++i) {
      col[i] = phi.at(i, j);
      dcol[i] = 0.5 * (phi.at(i, jp) - phi.at(i, jm)) / du;
    }
    const auto d = derivatives(col, g.h(), left);
    const auto dd = derivatives(dcol, g.h(), left);
    for (std::size_t i = 0; i < nt; ++i) {
      phi_t[i * nu + j] = d.d1[i];
      phi_tt[i * nu + j] = d.d2[i];
      phi_tu[i * nu + j] = dd.d1[i];
    }
  }

  std::vector<double> r(nt * nu);
  for (std::size_t i = 0; i < nt; ++i) {
    const double t = g.t(i);
    const double a = model.a(t);
    for (std::size_t j = 0; j < nu; ++j) {
      const std::size_t jp = (j + 1) % nu, jm = (j + nu - 1) % nu;
      const std::size_t k = i * nu + j;
      const double phi_uu = (phi.at(i, jp) - 2.0 * phi.at(i, j) + phi.at(i, jm)) / (du * du);
      // Both diagonal entries and the determinant, relative to the background.
      const double tt = 1.0 + phi_tt[k] / (2.0 * a);
      const double uu = 1.0 + 0.5 * phi_uu;
      const double det = tt * uu - phi_tu[k] * phi_tu[k] / (4.0 * a);
      if (!(tt > 0.0) || !(det > 0.0)) {
        throw PositivityError(
            fmt::format("ma_residual_2d: Hermitian form not positive at t = {}, u = {}", t, phi.u(j)),
            i, t);
      }
      r[k] = std::log(det) + phi_t[k] - s * F.at(i, j);
    }
  }
  return GridFunction2D(g, nu, phi.u_period, std::move(r));
}

}  // namespace acyl
