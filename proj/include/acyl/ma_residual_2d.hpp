#pragma once

#include "acyl/grid.hpp"
#include "acyl/model_geometry.hpp"

namespace acyl {

/// Monge-Ampere residual for potentials phi(t, u) on an n = 2 model, u being a
/// periodic coordinate on the torus factor:
///
///   r = log[((a/2 + phi_tt/4)(1/2 + phi_uu/4) - (phi_tu/4)^2) / (a/4)] + phi_t - sF.
///
/// With z = e^{t + i theta} and w = u + iv one has phi_{z zbar} = phi_tt/(4|z|^2),
/// phi_{w wbar} = phi_uu/4, phi_{z wbar} = phi_tu/(4z), and the background
/// g_{z zbar} = a/(2|z|^2), g_{w wbar} = 1/2. The |z|^2 factors cancel between
/// the determinant and its background value, leaving the bracket above. For
/// phi independent of u this is the radial residual.
///
/// t-derivatives are central (one-sided at the ends, or the e^{2t} cap fit at
/// t_min on capped models); u-derivatives are central and periodic. Throws PositivityError where
/// the Hermitian form is not positive definite.
GridFunction2D ma_residual_2d(const RadialKahlerModel& model, const GridFunction2D& phi,
                              const GridFunction2D& F, double s);

}  // namespace acyl
