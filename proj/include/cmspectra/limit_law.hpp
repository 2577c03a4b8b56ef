#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cmspectra/degree_model.hpp"
#include "cmspectra/measure.hpp"

namespace cmspectra {

using Complex = std::complex<double>;

struct SolverOptions {
  double tol = 1e-12;
  double damping = 0.5;
  std::size_t max_iterations = 100000;
  /// Try a Newton step before each damped step; it is accepted only when it
  /// stays in the upper half plane and lowers the residual.
  bool newton = true;
};

/// Solution of g = -E[D/(z + g D)] for D ~ nu at a point z of the upper half plane.
struct StieltjesSolution {
  Complex z;
  Complex g;
  Complex h;  // h(z^2) = g(z) / z
  double residual = 0.0;
  std::size_t iterations = 0;
};

class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& what, Complex z, double best_residual)
      : std::runtime_error(what), z_(z), best_residual_(best_residual) {}
  Complex z() const { return z_; }
  double best_residual() const { return best_residual_; }

 private:
  Complex z_;
  double best_residual_;
};

/// Fixed-point solver for the Stieltjes transform g of the symmetric law whose
/// square is the Marchenko-Pastur companion of nu. nu is the law of the
/// normalized degree: nonnegative atoms, mean one within 1e-9.
class StieltjesSolver {
 public:
  explicit StieltjesSolver(const DiscreteMeasure& nu, SolverOptions options = {});

  const SolverOptions& options() const { return options_; }
  const DiscreteMeasure& measure() const { return nu_; }

  /// Damped iteration g <- (1-t) g + t T(g) from i min(1, 1/Im z) or warm_start.
  StieltjesSolution solve(Complex z, std::optional<Complex> warm_start = std::nullopt) const;

  /// Solves along z_k = path(eta_k) for eta_k = 1, 1/2, 1/4, ... down to eta,
  /// warm-starting each level from the previous one.
  template <class Path>
  StieltjesSolution continued(Path path, double eta, std::optional<Complex> warm_start = std::nullopt) const {
    std::optional<Complex> guess = warm_start;
    StieltjesSolution sol;
    for (double level : eta_schedule(eta)) {
      sol = solve(path(level), guess);
      guess = sol.g;
    }
    return sol;
  }

  /// Fixed-point residual |g + E[D/(z + g D)]|.
  double residual(Complex z, Complex g) const;

  static std::vector<double> eta_schedule(double eta);

 private:
  struct Eval {
    Complex map;    // T(g) = -E[D/(z + g D)]
    Complex slope;  // T'(g) = E[D^2/(z + g D)^2]
  };
  Eval evaluate(Complex z, Complex g) const;

  DiscreteMeasure nu_;
  std::vector<double> d_;
  std::vector<double> w_;
  SolverOptions options_;
};

StieltjesSolution solve_g(Complex z, const DiscreteMeasure& nu, const SolverOptions& options = {},
                          std::optional<Complex> warm_start = std::nullopt);

/// Cauchy-Stieltjes transform of mu = nu [x] semicircle: f = -(1 + g^2) / z.
Complex stieltjes_mu(Complex z, const DiscreteMeasure& nu, const SolverOptions& options = {});

/// Density of the Marchenko-Pastur companion, Im h(x + i eta) / pi.
double density_mp(double x, const DiscreteMeasure& nu, double eta, const SolverOptions& options = {});

/// Everything computed at one point x != 0 of the density of mu.
struct DensityPoint {
  double x = 0.0;
  Complex g;            // g(|x| + i eta)
  Complex h;            // h(x^2)
  double rho_tilde = 0.0;
  double rho = 0.0;
  std::size_t iterations = 0;
};

DensityPoint evaluate_density_point(double x, const StieltjesSolver& solver, double eta,
                                    std::optional<Complex> warm_start = std::nullopt);

/// rho(x) = -2 Re h(x^2) |x| rho_mp(x^2); at x = 0 an even quadratic fit
/// through x = 0.01, 0.02.
double density_mu(double x, const DiscreteMeasure& nu, double eta, const SolverOptions& options = {});

struct DensityCurve {
  std::vector<double> grid;
  std::vector<double> rho;
  double eta_final = 0.0;
  double tolerance = 0.0;
  std::string measure_hash;
  double mass = 0.0;            // trapezoid of rho
  double second_moment = 0.0;   // trapezoid of x^2 rho
  std::vector<std::size_t> failed;  // grid indices where the solver failed (rho = 0 there)
};

/// rho on a grid symmetric about zero over [-x_max, x_max]; each |x| is
/// evaluated once and mirrored.
DensityCurve density_curve(const DiscreteMeasure& nu, double x_max, std::size_t points, double eta,
                           const SolverOptions& options = {});

/// m atoms at the conditional means of equal-probability quantile slabs,
/// rescaled so that the mean matches the law's mean.
DiscreteMeasure quantize_measure(const ContinuousLaw& law, std::size_t m = 2048);

/// mu({0}) estimated as -Re(i eta f(i eta)).
double atom_at_zero(const DiscreteMeasure& nu, double eta = 1e-4, const SolverOptions& options = {});

void write_density_csv(std::ostream& os, const DensityCurve& curve, const DiscreteMeasure& nu);

}  // namespace cmspectra
