#include "acyl/glue_builder.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "acyl/errors.hpp"

namespace acyl {

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void check_spec(const GlueSpec& spec) {
  if (!(spec.t0 > 1.0)) throw std::invalid_argument("glue: t0 must exceed 1");
  if (spec.degree < 1 || spec.degree % 2 == 0) {
    throw std::invalid_argument("glue: smoothstep degree must be odd and positive");
  }
}

// Two-sided window where chi or rho can be active.
bool in_window(double t, const GlueSpec& spec) { return t >= 0.5 && t <= spec.t0 + 0.5; }

}  // namespace

Jet smoothstep(double x, int degree) {
  if (degree < 1 || degree % 2 == 0) throw std::invalid_argument("smoothstep: odd degree only");
  if (x <= 0.0) return {0.0, 0.0, 0.0};
  if (x >= 1.0) return {1.0, 0.0, 0.0};
  const int m = (degree - 1) / 2;
  double sum = 0.0;
  for (int k = 0; k <= m; ++k) sum += binomial(m + k, k) * std::pow(1.0 - x, k);
  // S' = c x^m (1-x)^m with c = (2m+1)!/(m!)^2.
  const double c = (2 * m + 1) * binomial(2 * m, m);
  const double xm = std::pow(x * (1.0 - x), m);
  const double d2 = m == 0 ? 0.0 : c * m * std::pow(x * (1.0 - x), m - 1) * (1.0 - 2.0 * x);
  return {std::pow(x, m + 1) * sum, c * xm, d2};
}

Jet cutoff(double t, const GlueSpec& spec) {
  const double w = spec.t0 - 1.0;
  const Jet s = smoothstep((t - 1.0) / w, spec.degree);
  return {s.value, s.d1 / w, s.d2 / (w * w)};
}

Jet bump(double t, const GlueSpec& spec) {
  const double half = 0.5 * spec.t0;
  const double s = (t - 0.5 * (spec.t0 + 1.0)) / half;
  if (std::abs(s) >= 1.0 || spec.rho0 == 0.0) return {0.0, 0.0, 0.0};
  const double q = 1.0 - s * s;
  const double ds = 1.0 / half;
  return {spec.rho0 * q * q * q * q, spec.rho0 * 4.0 * q * q * q * (-2.0 * s) * ds,
          spec.rho0 * (48.0 * q * q * s * s - 8.0 * q * q * q) * ds * ds};
}

InnerPotential potential_of(const RadialKahlerModel& model, const Grid& grid) {
  const std::size_t n = grid.size();
  const double h = grid.h();
  GridFunction a = model.a_on(grid);
  const auto da = derivatives(a.values, h, LeftClosure::OneSided).d1;

  // Integrand g = 2a, g' = 2a'.
  std::vector<double> dP(n), P(n);
  // Below a cap a ~ C e^{2t}, so the missing integral of 2a is ~a(t_min); the
  // cigar has it in closed form.
  dP[0] = 0.0;
  if (model.kind() == ModelKind::Cigar) {
    dP[0] = std::log1p(std::exp(2.0 * grid.t_min()));
  } else if (model.has_cap()) {
    dP[0] = a[0];
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    dP[i + 1] = dP[i] + h * (a[i] + a[i + 1]) - h * h / 6.0 * (da[i + 1] - da[i]);
  }
  const std::size_t k = grid.nearest_index(0.0);
  const double tk = grid.t(k);
  if (!model.has_cap()) {
    const double shift = dP[k] - 2.0 * a[k] * tk;  // P'(0) by Taylor from the nearest node
    for (auto& v : dP) v -= shift;
  }
  // P' integrates with P'' = 2a known exactly.
  P[0] = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    P[i + 1] = P[i] + 0.5 * h * (dP[i] + dP[i + 1]) - h * h / 6.0 * (a[i + 1] - a[i]);
  }
  const double p0 = P[k] - tk * dP[k] + tk * tk * a[k];
  for (auto& v : P) v -= p0;
  return {GridFunction(grid, std::move(P)), GridFunction(grid, std::move(dP)), std::move(a)};
}

GridFunction glue_coefficient(const InnerPotential& inner, const GlueSpec& spec) {
  check_spec(spec);
  const Grid& g = inner.P.grid;
  std::vector<double> c(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double t = g.t(i);
    const double a = inner.a[i];
    if (!in_window(t, spec)) {
      c[i] = t < 0.5 ? a : 1.0;
      continue;
    }
    const Jet chi = cutoff(t, spec);
    const double cross =
        chi.d1 * (2.0 * t - inner.dP[i]) + 0.5 * chi.d2 * (t * t - inner.P[i]) + bump(t, spec).value;
    // Written so that chi = 0 gives a and chi = 1 gives 1 without rounding.
    c[i] = (chi.value < 0.5 ? a + chi.value * (1.0 - a) : 1.0 - (1.0 - chi.value) * (1.0 - a)) +
           cross;
  }
  return GridFunction(g, std::move(c));
}

namespace {

double window_min(const InnerPotential& inner, const GlueSpec& spec) {
  const GridFunction c = glue_coefficient(inner, spec);
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (in_window(c.t(i), spec)) m = std::min(m, c[i]);
  }
  if (!std::isfinite(m)) throw std::invalid_argument("auto_rho: gluing window has no grid nodes");
  return m;
}

}  // namespace

double auto_rho(const InnerPotential& inner, GlueSpec spec) {
  check_spec(spec);
  auto feasible = [&](double rho) {
    spec.rho0 = rho;
    return window_min(inner, spec) >= spec.margin;
  };
  if (feasible(0.0)) return 0.0;
  double lo = 0.0, hi = 1e-3;
  while (!feasible(hi)) {
    lo = hi;
    hi *= 1.2;
    if (hi > 1e6) {
      throw std::domain_error("auto_rho: no bump amplitude up to 1e6 reaches margin " +
                              std::to_string(spec.margin));
    }
  }
  while (hi - lo > 1e-3 * hi) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? hi : lo) = mid;
  }
  return hi;
}

RadialKahlerModel glued_model(const RadialKahlerModel& inner, const Grid& grid, GlueSpec spec) {
  check_spec(spec);
  const InnerPotential pot = potential_of(inner, grid);
  if (spec.rho0 < 0.0) spec.rho0 = auto_rho(pot, spec);
  GridFunction c = glue_coefficient(pot, spec);
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!(c[i] > 0.0)) {
      throw PositivityError("glued_model: coefficient c <= 0 at t = " + std::to_string(c.t(i)), i,
                            c.t(i));
    }
  }
  const double h = grid.h();
  std::vector<double> gfun(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid.t(i);
    if (t <= 0.5 || i == 0) {
      gfun[i] = inner.f(t) - 2.0 * t;
    } else {
      gfun[i] = gfun[i - 1] + h * ((c[i - 1] - 1.0) + (c[i] - 1.0));
    }
  }
  return RadialKahlerModel::glued(inner.n(), grid, std::move(c.values), std::move(gfun),
                                  inner.has_cap(), inner.torus());
}

GridFunction glued_rhs(const RadialKahlerModel& glued) {
  GridFunction r = soliton_residual(glued, SlopeField::zeros(glued.default_grid()));
  for (auto& v : r.values) v = -v;
  return r;
}

}  // namespace acyl
