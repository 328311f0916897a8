#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "acyl/grid.hpp"

namespace acyl {

enum class ModelKind { Cylinder, Cigar, Glued };

const char* to_string(ModelKind kind);

/// Flat torus T^{2(n-1)} = R^{2(n-1)} / Lambda, lattice given by basis rows.
struct TorusFactor {
  std::vector<std::vector<double>> basis;

  static TorusFactor unit_square(int real_dim);
  int real_dim() const { return static_cast<int>(basis.size()); }
};

/// omega = a(t) dt^dtheta + omega_T on C x T^{2(n-1)} with soliton potential f,
/// f' = 2a. Closed-form kinds evaluate anywhere; a Glued model is tabulated on
/// the grid it was built on and evaluates only at its nodes.
class RadialKahlerModel {
 public:
  static RadialKahlerModel cigar(int n, std::optional<TorusFactor> torus = std::nullopt);
  static RadialKahlerModel cylinder(int n, double t_floor = 0.0,
                                    std::optional<TorusFactor> torus = std::nullopt);
  /// a and g = f - 2t tabulated on grid. has_cap marks a smooth origin at t_min.
  static RadialKahlerModel glued(int n, Grid grid, std::vector<double> a, std::vector<double> g,
                                 bool has_cap, std::optional<TorusFactor> torus);

  ModelKind kind() const { return kind_; }
  int n() const { return n_; }
  double c0() const { return c0_; }
  /// Whether t_min stands for the origin of C, where smooth potentials are
  /// functions of e^{2t}.
  bool has_cap() const { return has_cap_; }
  const std::optional<TorusFactor>& torus() const { return torus_; }

  double a(double t) const;
  double log_a(double t) const;
  double f(double t) const;
  double df(double t) const { return 2.0 * a(t); }
  /// log a - 2t + f, the log of the volume form against the holomorphic one.
  /// Constant (= c0) for the closed-form solitons.
  double log_volume_density(double t) const;

  GridFunction a_on(const Grid& grid) const;
  GridFunction f_on(const Grid& grid) const;

  /// The working domain: [-12, 20] for the cigar, [t_floor, 20] for the
  /// cylinder, the construction grid for glued models. h is ignored for glued.
  Grid default_grid(double h = 0.01) const;

 private:
  struct Table {
    Grid grid;
    std::vector<double> a;
    std::vector<double> g;
  };

  RadialKahlerModel(ModelKind kind, int n, double c0, bool cap, std::optional<TorusFactor> torus)
      : kind_(kind), n_(n), c0_(c0), has_cap_(cap), torus_(std::move(torus)) {}
  std::size_t node(double t) const;

  ModelKind kind_;
  int n_;
  double c0_;
  bool has_cap_;
  std::optional<TorusFactor> torus_;
  std::shared_ptr<const Table> table_;
  double t_floor_ = 0.0;
};

inline RadialKahlerModel cigar_model(int n) { return RadialKahlerModel::cigar(n); }
inline RadialKahlerModel cylinder_model(int n, double t_floor = 0.0) {
  return RadialKahlerModel::cylinder(n, t_floor);
}

/// Coefficient of Ric(omega) against dt^dtheta: -1/2 (log a)'' by second-order
/// differences (one-sided at the ends).
GridFunction ricci_coefficient(const RadialKahlerModel& model, const Grid& grid);

/// r = log(a + phi''/2) - 2t + f + phi' - c, with c the value of the same
/// expression at t_max. Vanishes iff omega + i ddbar phi is a gradient soliton
/// with potential f + phi'.
GridFunction soliton_residual(const RadialKahlerModel& model, const SlopeField& phi);
GridFunction soliton_residual(const RadialKahlerModel& model, const GridFunction& phi);

/// Left closure used by all radial stencils on this model.
inline LeftClosure left_closure(const RadialKahlerModel& model) {
  return model.has_cap() ? LeftClosure::Cap : LeftClosure::OneSided;
}

}  // namespace acyl
