#pragma once

#include "acyl/grid.hpp"
#include "acyl/model_geometry.hpp"

namespace acyl {

struct GlueSpec {
  double t0 = 3.0;      // chi = 1 from here on
  int degree = 7;       // odd smoothstep degree
  double rho0 = 0.0;    // bump amplitude
  double margin = 1e-2; // auto_rho target for min c on the gluing window
};

struct Jet {
  double value;
  double d1;
  double d2;
};

/// S(x) = x^{m+1} sum_k C(m+k, k)(1-x)^k, degree 2m+1, clamped to [0, 1].
Jet smoothstep(double x, int degree);
/// chi(t) = S((t - 1)/(t0 - 1)).
Jet cutoff(double t, const GlueSpec& spec);
/// rho0 (1 - s^2)^4 with s = (t - (t0+1)/2)/(t0/2): support [1/2, t0 + 1/2].
Jet bump(double t, const GlueSpec& spec);

/// Radial Kahler potential of the inner model, P'' = 2a, with P' and a kept
/// alongside so the glued coefficient can be formed by the product rule.
struct InnerPotential {
  GridFunction P;
  GridFunction dP;
  GridFunction a;
};

/// P' by trapezoid sums with the Euler-Maclaurin end correction. On capped
/// models P'(t_min) carries the integral of 2a over (-inf, t_min] (~a(t_min)),
/// otherwise P'(0) = 0; then P(0) = 0.
InnerPotential potential_of(const RadialKahlerModel& model, const Grid& grid);

/// c = 1/2 (chi t^2 + (1 - chi) P)'' + rho, expanded as
///   chi + (1 - chi) a + chi' (2t - P') + 1/2 chi'' (t^2 - P) + rho,
/// which makes c = a for t <= 1/2 and c = 1 for t >= t0 + 1/2 hold exactly.
GridFunction glue_coefficient(const InnerPotential& inner, const GlueSpec& spec);

/// Smallest bump amplitude with min c >= spec.margin over [1/2, t0 + 1/2]:
/// 0 if that already holds, else geometric search (x1.2) then bisection to
/// 1e-3 relative. Throws std::domain_error past 1e6.
double auto_rho(const InnerPotential& inner, GlueSpec spec);

/// Glued model with a = c and f = 2t + g, g' = 2(c - 1), g equal to the inner
/// model's f - 2t on t <= 1/2. A negative spec.rho0 requests auto_rho.
RadialKahlerModel glued_model(const RadialKahlerModel& inner, const Grid& grid, GlueSpec spec);

/// F = -soliton_residual(glued, 0): vanishes for t >= t0 + 1/2.
GridFunction glued_rhs(const RadialKahlerModel& glued);

}  // namespace acyl
