#include "cmspectra/limit_law.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

namespace cmspectra {
namespace {

constexpr double kPi = std::numbers::pi;

// Semicircle Stieltjes transform on the upper half plane.
Complex semicircle_g(Complex z) {
  Complex r = std::sqrt(z * z - 4.0);
  if ((r / z).real() < 0.0) r = -r;  // branch with g ~ -1/z
  return (-z + r) / 2.0;
}

double semicircle_density(double x) { return std::abs(x) < 2.0 ? std::sqrt(4.0 - x * x) / (2.0 * kPi) : 0.0; }

std::vector<DiscreteMeasure> test_measures() {
  return {
      DiscreteMeasure::point_mass(1.0),
      DiscreteMeasure({{0.5, 12.0 / 13.0}, {7.0, 1.0 / 13.0}}),  // two atoms with a hole
      DiscreteMeasure({{0.5, 0.8}, {3.0, 0.2}}),                 // two atoms without one
      DiscreteMeasure({{1.0 / 2.12, 0.5}, {3.0 / 2.12, 0.49}, {15.0 / 2.12, 0.01}}),
      quantize_measure(ContinuousLaw::one_plus_exponential(1.0).dilated(0.5), 2048),
  };
}

// Independent solver for h(w) from w h = -E[D/(1 + h D)] by Newton steps
// along a path from w + 10i down to w.
Complex solve_h_directly(Complex w, const DiscreteMeasure& nu) {
  Complex h = -1.0 / (w + Complex(0.0, 10.0));
  for (int level = 10; level >= 0; --level) {
    const Complex target = w + Complex(0.0, level);
    for (int it = 0; it < 200; ++it) {
      Complex f = target * h;
      Complex df = target;
      for (const Atom& a : nu.atoms()) {
        const Complex den = 1.0 + h * a.location;
        f += a.weight * a.location / den;
        df -= a.weight * a.location * a.location / (den * den);
      }
      const Complex step = f / df;
      h -= step;
      if (std::abs(step) < 1e-15) break;
    }
  }
  return h;
}

TEST(SolveG, SemicircleClosedForm) {
  const auto nu = DiscreteMeasure::point_mass(1.0);
  const auto at_i = solve_g(Complex(0.0, 1.0), nu);
  EXPECT_NEAR(at_i.g.real(), 0.0, 1e-12);
  EXPECT_NEAR(at_i.g.imag(), (std::sqrt(5.0) - 1.0) / 2.0, 1e-11);
  EXPECT_LE(at_i.residual, 1e-12);
  const auto outside = solve_g(Complex(3.0, 1e-3), nu);
  EXPECT_NEAR(outside.g.real(), (-3.0 + std::sqrt(5.0)) / 2.0, 1e-3);
  EXPECT_LT(std::abs(outside.g.imag()), 2e-3);
  for (double re : {-2.5, -1.0, 0.0, 0.3, 1.9, 4.0}) {
    for (double im : {1e-3, 0.1, 1.0, 10.0}) {
      const Complex z(re, im);
      const auto s = solve_g(z, nu);
      EXPECT_LT(std::abs(s.g - semicircle_g(z)), 1e-9) << z;
      EXPECT_GT(s.g.imag(), 0.0);
    }
  }
}

TEST(SolveG, LargeImaginaryAsymptotics) {
  for (const auto& nu : test_measures()) {
    const Complex z(0.7, 1e6);
    const auto s = solve_g(z, nu);
    EXPECT_LE(std::abs(s.g + 1.0 / z), 10.0 / std::norm(z));
  }
}

TEST(SolveG, RejectsBadInput) {
  const auto nu = DiscreteMeasure::point_mass(1.0);
  EXPECT_THROW(solve_g(Complex(1.0, 0.0), nu), std::invalid_argument);
  EXPECT_THROW(solve_g(Complex(1.0, 1.0), DiscreteMeasure::point_mass(2.0)), std::invalid_argument);
  EXPECT_THROW(solve_g(Complex(1.0, 1.0), DiscreteMeasure({{-1.0, 0.5}, {3.0, 0.5}})), std::invalid_argument);
}

TEST(SolveG, ReportsNonConvergence) {
  SolverOptions options;
  options.max_iterations = 2;
  options.newton = false;
  const auto nu = DiscreteMeasure({{0.5, 12.0 / 13.0}, {7.0, 1.0 / 13.0}});
  try {
    solve_g(Complex(1.0, 1e-6), nu, options);
    FAIL() << "expected a solver failure";
  } catch (const SolverFailure& e) {
    EXPECT_GT(e.best_residual(), options.tol);
    EXPECT_EQ(e.z(), Complex(1.0, 1e-6));
  }
}

TEST(SolveG, WarmStartGivesSameRoot) {
  const auto nu = test_measures()[3];
  const StieltjesSolver solver(nu);
  const auto cold = solver.solve(Complex(1.2, 0.05));
  const auto warm = solver.solve(Complex(1.2, 0.05), solver.solve(Complex(1.25, 0.05)).g);
  EXPECT_LT(std::abs(cold.g - warm.g), 1e-10);
}

TEST(SolveG, AgreesWithIndependentHSolver) {
  for (const auto& nu : test_measures()) {
    for (Complex w : {Complex(0.5, 0.1), Complex(2.0, 0.3), Complex(5.0, 0.2), Complex(-1.0, 0.5), Complex(12.0, 1.0)}) {
      const Complex z = std::sqrt(w);
      const auto s = solve_g(z, nu);
      const Complex h = solve_h_directly(w, nu);
      EXPECT_LT(std::abs(s.g / z - h), 1e-9) << w;
      EXPECT_LT(std::abs(s.h - h), 1e-9) << w;
    }
  }
}

TEST(StieltjesMu, SemicircleAndSymmetry) {
  const auto nu = DiscreteMeasure::point_mass(1.0);
  for (int k = 0; k < 20; ++k) {
    const Complex z(-3.0 + 0.3 * k, 0.05 + 0.1 * k);
    EXPECT_LT(std::abs(stieltjes_mu(z, nu) - solve_g(z, nu).g), 1e-10);
  }
  for (const auto& m : test_measures()) {
    for (Complex z : {Complex(0.4, 0.2), Complex(1.7, 0.5), Complex(3.0, 0.05)}) {
      const Complex f = stieltjes_mu(z, m);
      const Complex mirrored = stieltjes_mu(-std::conj(z), m);
      EXPECT_LT(std::abs(mirrored + std::conj(f)), 1e-10);
    }
    const Complex far(0.3, 1e6);
    EXPECT_LE(std::abs(stieltjes_mu(far, m) + 1.0 / far), 10.0 / std::pow(std::abs(far), 3));
  }
}

TEST(DensityMp, SemicircleSquared) {
  const auto nu = DiscreteMeasure::point_mass(1.0);
  EXPECT_NEAR(density_mp(2.0, nu, 1e-6), 1.0 / (2.0 * kPi), 1e-5);
  EXPECT_NEAR(density_mp(1.0, nu, 1e-6), std::sqrt(3.0) / (2.0 * kPi), 1e-5);
  EXPECT_NEAR(density_mp(5.0, nu, 1e-6), 0.0, 1e-4);
  for (const auto& m : test_measures()) EXPECT_NEAR(density_mp(-0.5, m, 1e-6), 0.0, 1e-4);
  EXPECT_THROW(density_mp(0.0, nu, 1e-6), std::invalid_argument);
  EXPECT_THROW(density_mp(1.0, nu, 0.0), std::invalid_argument);
}

TEST(DensityMu, SemicircleValues) {
  const auto nu = DiscreteMeasure::point_mass(1.0);
  EXPECT_NEAR(density_mu(0.0, nu, 1e-6), 1.0 / kPi, 1e-5);
  EXPECT_NEAR(density_mu(1.0, nu, 1e-6), std::sqrt(3.0) / (2.0 * kPi), 1e-6);
  EXPECT_EQ(density_mu(1.0, nu, 1e-6), density_mu(-1.0, nu, 1e-6));
  EXPECT_NEAR(density_mu(2.5, nu, 1e-6), 0.0, 1e-4);
}

TEST(DensityCurve, SemicircleOracle) {
  const auto nu = DiscreteMeasure::point_mass(1.0);
  const auto c = density_curve(nu, 3.0, 601, 1e-6);
  ASSERT_EQ(c.grid.size(), 601u);
  EXPECT_TRUE(c.failed.empty());
  double worst = 0.0;
  for (std::size_t k = 0; k < c.grid.size(); ++k) {
    const double x = c.grid[k];
    EXPECT_EQ(c.rho[k], c.rho[c.grid.size() - 1 - k]);
    EXPECT_EQ(x, -c.grid[c.grid.size() - 1 - k]);
    if (k) {
      EXPECT_LT(c.grid[k - 1], x);
    }
    if (std::abs(std::abs(x) - 2.0) <= 0.05) continue;
    worst = std::max(worst, std::abs(c.rho[k] - semicircle_density(x)));
  }
  EXPECT_LE(worst, 1e-4);
  EXPECT_NEAR(c.mass, 1.0, 5e-3);
  EXPECT_NEAR(c.second_moment, 1.0, 5e-3);
  EXPECT_EQ(c.measure_hash, nu.fingerprint());
}

TEST(DensityCurve, EvenGridHasNoZero) {
  const auto c = density_curve(DiscreteMeasure::point_mass(1.0), 3.0, 10, 1e-6);
  for (double x : c.grid) EXPECT_NE(x, 0.0);
}

TEST(DensityCurve, BoundSuite) {
  for (const auto& nu : test_measures()) {
    const StieltjesSolver solver(nu);
    const double inv_sq = std::sqrt(nu.moment(-2));
    const double x_max = 1.2 * std::sqrt(4.0 * nu.max_location() * (nu.moment(2) + 1.0));
    int violations = 0;
    for (int k = 0; k < 400; ++k) {
      const double x = -x_max + 2.0 * x_max * (k + 0.5) / 400.0;
      const auto p = evaluate_density_point(x, solver, 1e-6);
      const double ax = std::abs(x);
      violations += std::abs(p.g) > std::min(1.0, 2.0 / ax) + 1e-9;
      violations += kPi * p.rho_tilde > std::min(1.0, 2.0 / ax) + 1e-9;
      violations += kPi * p.rho > 4.0 / (ax * ax * ax) + 1e-9;
      violations += kPi * p.rho > inv_sq + 1e-9;
      violations += !(p.h.real() < 0.0);
    }
    EXPECT_EQ(violations, 0) << nu.to_string().substr(0, 40);
  }
}

TEST(DensityCurve, MassAndSecondMoment) {
  for (const auto& nu : test_measures()) {
    const double x_max = 1.05 * std::sqrt(4.0 * nu.max_location() * (nu.moment(2) + 1.0));
    const auto c = density_curve(nu, x_max, 4001, 1e-6);
    EXPECT_TRUE(c.failed.empty());
    EXPECT_NEAR(c.mass, 1.0, 5e-3);
    EXPECT_NEAR(c.second_moment, 1.0, 5e-3);
  }
}

TEST(DensityCurve, StieltjesInversion) {
  const auto nu = test_measures()[3];
  const double x_max = 1.05 * std::sqrt(4.0 * nu.max_location() * (nu.moment(2) + 1.0));
  const auto c = density_curve(nu, x_max, 4001, 1e-6);
  for (int k = 0; k < 10; ++k) {
    const Complex z(-2.5 + 0.55 * k, 0.5);
    Complex q = 0.0;
    for (std::size_t j = 1; j < c.grid.size(); ++j) {
      const double dx = c.grid[j] - c.grid[j - 1];
      q += 0.5 * dx * (c.rho[j - 1] / (c.grid[j - 1] - z) + c.rho[j] / (c.grid[j] - z));
    }
    EXPECT_LT(std::abs(q - stieltjes_mu(z, nu)), 5e-3) << z;
  }
}

TEST(QuantizeMeasure, Examples) {
  const auto p = quantize_measure(ContinuousLaw::point(1.0), 16);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_DOUBLE_EQ(p.atoms()[0].location, 1.0);
  const auto u = quantize_measure(ContinuousLaw::uniform(0.0, 2.0), 2);
  ASSERT_EQ(u.size(), 2u);
  EXPECT_NEAR(u.atoms()[0].location, 0.5, 1e-15);
  EXPECT_NEAR(u.atoms()[1].location, 1.5, 1e-15);
  EXPECT_DOUBLE_EQ(u.atoms()[0].weight, 0.5);
  const auto e = quantize_measure(ContinuousLaw::one_plus_exponential(1.0).dilated(0.5), 2048);
  EXPECT_EQ(e.size(), 2048u);
  EXPECT_NEAR(e.mean(), 1.0, 1e-9);
  EXPECT_THROW(quantize_measure(ContinuousLaw::point(1.0), 1), std::invalid_argument);
}

TEST(AtomAtZero, MatchesZeroDegreeMass) {
  EXPECT_LT(atom_at_zero(DiscreteMeasure::point_mass(1.0)), 1e-3);
  EXPECT_NEAR(atom_at_zero(DiscreteMeasure({{0.0, 0.5}, {2.0, 0.5}})), 0.5, 1e-2);
}

TEST(EtaSchedule, HalvesDownToTarget) {
  const auto s = StieltjesSolver::eta_schedule(1e-6);
  EXPECT_EQ(s.front(), 1.0);
  EXPECT_EQ(s.back(), 1e-6);
  for (std::size_t k = 1; k + 1 < s.size(); ++k) EXPECT_EQ(s[k], 0.5 * s[k - 1]);
  EXPECT_THROW(StieltjesSolver::eta_schedule(0.0), std::invalid_argument);
}

TEST(DensityCsv, HeaderRecordsSolverMetadata) {
  const auto nu = DiscreteMeasure::point_mass(1.0);
  const auto c = density_curve(nu, 3.0, 5, 1e-6);
  std::ostringstream os;
  write_density_csv(os, c, nu);
  const std::string s = os.str();
  EXPECT_NE(s.find("# nu_atoms=1:1\n"), std::string::npos);
  EXPECT_NE(s.find("# eta_final=9.9999999999999995e-07\n"), std::string::npos);
  EXPECT_NE(s.find("x,rho\n"), std::string::npos);
}

}  // namespace
}  // namespace cmspectra
