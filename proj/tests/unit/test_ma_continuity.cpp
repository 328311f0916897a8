#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

#include "acyl/errors.hpp"
#include "acyl/linear_drift.hpp"
#include "acyl/ma_continuity.hpp"
#include "acyl/model_geometry.hpp"
#include "oracles.hpp"

using namespace acyl;

namespace {

double sup_diff(const GridFunction& u, const GridFunction& v) {
  double m = 0;
  for (std::size_t i = 0; i < u.size(); ++i) m = std::max(m, std::abs(u[i] - v[i]));
  return m;
}

double sup_abs(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

GridFunction scaled(const GridFunction& u, double c) {
  auto out = u;
  for (auto& v : out.values) v *= c;
  return out;
}

// Smooth random potential, a function of E = e^{2t} as it must be at the cap.
SlopeField random_potential(const Grid& g, std::mt19937_64& rng, double size) {
  std::uniform_real_distribution<double> c(-size, size), p(0.3, 1.5), k(-1.0, 1.0);
  const double c1 = c(rng), c2 = c(rng), p1 = p(rng), p2 = p(rng), k1 = k(rng);
  const auto u = GridFunction::sample(g, [&](double t) {
    const double E = std::exp(2 * t);
    return c1 * std::pow(1 + E, -p1) + c2 * std::pow(1 + E, -p2) * std::cos(k1 * std::log1p(E));
  });
  return SlopeField::of(u);
}

}  // namespace

TEST_SUITE("ma_continuity") {
  TEST_CASE("residual of zero") {
    const auto m = cigar_model(1);
    const Grid g = m.default_grid();
    const auto F = GridFunction::sample(g, [](double t) { return std::exp(-1.5 * std::abs(t)); });
    const auto r0 = ma_residual_radial(m, GridFunction::zeros(g), F, 0.0);
    CHECK(sup_abs(r0.values) == 0.0);
    const auto r1 = ma_residual_radial(m, GridFunction::zeros(g), F, 0.7);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(r1[i] == -0.7 * F[i]);
  }

  TEST_CASE("manufactured potential solves the discrete equation") {
    const auto m = cigar_model(1);
    const Grid g = m.default_grid();
    const auto F = oracle::manufactured_F_discrete(g, 0.3L);
    const auto r = ma_residual_radial(m, oracle::manufactured_slopes(g, 0.3L), F, 1.0);
    CHECK(sup_abs(r.values) <= 1e-12);
  }

  TEST_CASE("full-size manufactured potential is not admissible near the cap") {
    // kappa = 1: phi*''/(2a) -> -3/2 as t -> -inf, so a + phi*''/2 < 0 there.
    const Grid g = cigar_model(1).default_grid();
    const auto adm = oracle::manufactured_admissibility(g, 1.0L);
    CHECK_FALSE(adm.ok);
    CHECK(static_cast<double>(adm.min_ratio) == doctest::Approx(-0.5).epsilon(1e-6));
    CHECK_THROWS_AS(oracle::manufactured_F_discrete(g, 1.0L), std::domain_error);
    CHECK_THROWS_AS(ma_residual_radial(cigar_model(1), oracle::manufactured_slopes(g, 1.0L),
                                       GridFunction::zeros(g), 1.0),
                    PositivityError);
    CHECK(oracle::manufactured_admissibility(g, 0.3L).ok);
  }

  TEST_CASE("linearization at zero is half the drift Laplacian") {
    const auto m = cigar_model(1);
    const Grid g(-6.0, 6.0, 0.05);
    const LinearizedOperator lin(m, SlopeField::zeros(g));
    const auto psi = GridFunction::sample(g, [](double t) { return std::sin(t) / (1 + t * t); });
    const auto Lpsi = lin.apply(SlopeField::of(psi));
    const auto op = assemble_mode_operator(make_mode_problem(m, g, 0.0, GridFunction::zeros(g)));
    const auto full = op.apply(psi.values);
    for (std::size_t i = 1; i + 1 < g.size(); ++i) {
      CHECK(Lpsi[i] == doctest::Approx(0.5 * full[i]).epsilon(1e-9));
    }
  }

  TEST_CASE("a_phi on the cylinder with phi'' = 2(e - 1)") {
    const auto m = cylinder_model(1);
    const Grid g(0.0, 2.0, 0.01);
    const double c = std::exp(1.0) - 1;
    const auto phi = GridFunction::sample(g, [&](double t) { return c * t * t; });
    const LinearizedOperator lin(m, SlopeField::of(phi));
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(lin.coefficient()[i] == doctest::Approx(std::exp(1.0)).epsilon(1e-9));
    }
  }

  TEST_CASE("linearization matches finite differences of the residual") {
    std::mt19937_64 rng(99);
    for (const auto& m : {cigar_model(1), cylinder_model(1)}) {
      const Grid g = m.kind() == ModelKind::Cigar ? Grid(-12.0, 20.0, 0.02) : Grid(0.0, 20.0, 0.02);
      const auto F = GridFunction::zeros(g);
      for (int trial = 0; trial < 10; ++trial) {
        const auto phi = random_potential(g, rng, 0.1);
        const auto psi = random_potential(g, rng, 1.0);
        const LinearizedOperator lin(m, phi);
        const auto J = lin.apply(psi);
        const double d = 1e-6;
        auto shifted = [&](double e) {
          std::vector<double> y = phi.slopes;
          for (std::size_t i = 0; i < y.size(); ++i) y[i] += e * psi.slopes[i];
          return ma_residual_radial(m, SlopeField(g, y), F, 0.0);
        };
        const auto rp = shifted(d), rm = shifted(-d);
        double err = 0, scale = 0;
        for (std::size_t i = 0; i < g.size(); ++i) {
          err = std::max(err, std::abs((rp[i] - rm[i]) / (2 * d) - J[i]));
          scale = std::max(scale, std::abs(J[i]));
        }
        CHECK(err <= 1e-4 * scale);
      }
    }
  }

  TEST_CASE("F = 0 returns the background") {
    for (const auto& m : {cigar_model(1), cylinder_model(1)}) {
      const Grid g = m.default_grid();
      const auto sol = continuity_solve(m, GridFunction::zeros(g));
      CHECK(sup_abs(sol.phi.values) == 0.0);
      CHECK(sol.total_newton == 0);
      CHECK(sol.path.size() == 11);
    }
  }

  TEST_CASE("manufactured solution is recovered") {
    const auto m = cigar_model(1);
    const Grid g = m.default_grid();
    const auto F = oracle::manufactured_F_discrete(g, 0.3L);
    const auto sol = continuity_solve(m, F);
    CHECK(sup_diff(sol.phi, oracle::manufactured_phi(g, 0.3L)) <= 1e-6);
    CHECK(sol.halvings == 0);
    CHECK(sol.path.size() == 11);
    CHECK(sol.path.back().s == 1.0);
    for (const auto& rec : sol.path) CHECK(rec.newton_iterations <= 10);
    CHECK(sol.decay_estimate >= 1.4);
    CHECK(sol.decay_estimate <= 1.6);
    CHECK(sol.warnings.empty());
    const auto r = ma_residual_radial(m, sol.slopes, F, 1.0);
    CHECK(sup_abs(r.values) <= 1e-10);
  }

  TEST_CASE("path keeps the form positive and the soliton potential >= 1") {
    const auto m = cigar_model(1);
    const Grid g = m.default_grid();
    const auto sol = continuity_solve(m, oracle::manufactured_F_discrete(g, 0.3L));
    double final_dphi = sol.path.back().sup_abs_dphi;
    for (const auto& rec : sol.path) {
      CHECK(rec.min_ratio > 0.0);
      CHECK(rec.min_ratio >= 0.5);
      CHECK(rec.max_ratio <= 2.0);
      CHECK(rec.inf_soliton_potential >= 1.0 - 1e-8);
      CHECK(rec.sup_abs_dphi <= 10 * final_dphi + 1e-300);
      CHECK(rec.weighted_sup <= 10 * sol.path.back().weighted_sup + 1e-300);
    }
  }

  TEST_CASE("symbolic data converges at second order") {
    const auto m = cigar_model(1);
    double prev = 0;
    for (double h : {0.02, 0.01, 0.005}) {
      const Grid g(-12.0, 20.0, h);
      const auto sol = continuity_solve(m, oracle::manufactured_F_exact(g, 0.3L));
      const double err = sup_diff(sol.phi, oracle::manufactured_phi(g, 0.3L));
      if (prev > 0) CHECK(std::log2(prev / err) >= 1.9);
      prev = err;
    }
  }

  TEST_CASE("small data: the solve is the linear drift solve") {
    const auto m = cigar_model(1);
    const Grid g = m.default_grid();
    const auto G = oracle::manufactured_F_discrete(g, 0.3L);
    const double delta = 1e-6;
    const auto sol = continuity_solve(m, scaled(G, delta));
    std::vector<double> twice(G.values);
    for (auto& v : twice) v *= 2;
    const auto lin = solve_radial_slopes(m.a_on(g), twice, LeftBoundary::Cap).integrate(0.0);
    double err = 0, scale = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      err = std::max(err, std::abs(sol.phi[i] / delta - lin[i]));
      scale = std::max(scale, std::abs(lin[i]));
    }
    CHECK(err <= 1e-4 * scale);
  }

  TEST_CASE("uniqueness from several starts") {
    const auto m = cigar_model(1);
    const Grid g = m.default_grid();
    const auto F = oracle::manufactured_F_discrete(g, 0.3L);
    const auto star = oracle::manufactured_phi(g, 0.3L);
    ContinuityConfig cfg;
    CHECK(uniqueness_check(m, F, cfg, {GridFunction::zeros(g), scaled(star, 0.5)}) <= 1e-8);

    const auto zero = GridFunction::zeros(g);
    const auto bump = GridFunction::sample(g, [](double t) {
      return 0.05 * std::exp(-t * t) - 0.05 * std::exp(-400.0);
    });
    CHECK(uniqueness_check(m, zero, cfg, {zero, bump}) <= 1e-8);

    std::mt19937_64 rng(5);
    std::vector<GridFunction> starts;
    for (int k = 0; k < 3; ++k) starts.push_back(random_potential(g, rng, 0.05).integrate(0.0));
    CHECK(uniqueness_check(m, F, cfg, starts) <= 1e-8);
  }

  TEST_CASE("cylinder: interior equation with phi fixed at both ends") {
    const auto m = cylinder_model(1);
    const Grid g = m.default_grid();
    const auto F = GridFunction::sample(g, [](double t) {
      return 0.1 * std::exp(-1.5 * t) * (1 - std::exp(-2 * t));
    });
    const auto sol = continuity_solve(m, F);
    const auto r = ma_residual_radial(m, sol.slopes, F, 1.0);
    for (std::size_t i = 1; i + 1 < g.size(); ++i) CHECK(std::abs(r[i]) <= 1e-10);
    CHECK(std::abs(sol.phi[0]) <= 1e-12);
    CHECK(sol.phi[g.size() - 1] == 0.0);
  }

  TEST_CASE("slow decay of F is reported") {
    const auto m = cigar_model(1);
    const Grid g = m.default_grid();
    const auto F = GridFunction::sample(g, [](double t) {
      return 0.01 * std::pow(1 + std::exp(2 * t), -0.25);
    });
    const auto sol = continuity_solve(m, F);
    CHECK_FALSE(sol.warnings.empty());
  }

  TEST_CASE("large data fails with the partial path attached") {
    const auto m = cigar_model(1);
    const Grid g = m.default_grid();
    const auto F = GridFunction::sample(g, [](double t) { return -1e3 * std::exp(-t * t); });
    try {
      continuity_solve(m, F);
      FAIL("expected a solver failure");
    } catch (const SolverFailure& e) {
      CHECK((e.kind() == FailureKind::Stalled || e.kind() == FailureKind::PositivityLost));
      REQUIRE_FALSE(e.partial_path().empty());
      CHECK(e.partial_path().front().s == 0.0);
      CHECK(e.partial_path().back().s < 1.0);
    }
  }

  TEST_CASE("invalid configurations") {
    const auto m = cigar_model(1);
    const auto F = GridFunction::zeros(m.default_grid());
    ContinuityConfig bad;
    bad.steps = 0;
    CHECK_THROWS_AS(continuity_solve(m, F, bad), std::invalid_argument);
  }
}
