#include "cmspectra/limit_law.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>

namespace cmspectra {

namespace {

constexpr double kNegativeDensityTolerance = 1e-10;
constexpr double kMeanTolerance = 1e-9;

}  // namespace

StieltjesSolver::StieltjesSolver(const DiscreteMeasure& nu, SolverOptions options)
    : nu_(nu), options_(options) {
  if (!nu_.nonnegative()) throw std::invalid_argument("StieltjesSolver: nu must live on [0, inf)");
  if (std::abs(nu_.mean() - 1.0) > kMeanTolerance) {
    throw std::invalid_argument("StieltjesSolver: nu must have mean one");
  }
  if (!(options_.tol > 0.0) || !(options_.damping > 0.0 && options_.damping <= 1.0)) {
    throw std::invalid_argument("StieltjesSolver: bad options");
  }
  for (const Atom& a : nu_.atoms()) {
    if (a.location == 0.0) continue;  // contributes nothing to any expectation
    d_.push_back(a.location);
    w_.push_back(a.weight);
  }
}

StieltjesSolver::Eval StieltjesSolver::evaluate(Complex z, Complex g) const {
  Complex map = 0.0;
  Complex slope = 0.0;
  for (std::size_t a = 0; a < d_.size(); ++a) {
    const Complex inv = 1.0 / (z + g * d_[a]);
    const Complex t = d_[a] * inv;
    map -= w_[a] * t;
    slope += w_[a] * t * t;
  }
  return {map, slope};
}

double StieltjesSolver::residual(Complex z, Complex g) const { return std::abs(g - evaluate(z, g).map); }

std::vector<double> StieltjesSolver::eta_schedule(double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("eta_schedule: eta must be positive");
  std::vector<double> levels;
  for (double level = 1.0; level > eta; level *= 0.5) levels.push_back(level);
  levels.push_back(eta);
  return levels;
}

StieltjesSolution StieltjesSolver::solve(Complex z, std::optional<Complex> warm_start) const {
  if (!(z.imag() > 0.0)) throw std::invalid_argument("solve_g: Im z must be positive");
  Complex g = warm_start.value_or(Complex(0.0, std::min(1.0, 1.0 / z.imag())));
  if (!(g.imag() > 0.0)) g = Complex(g.real(), std::min(1.0, 1.0 / z.imag()));
  Eval e = evaluate(z, g);
  double res = std::abs(g - e.map);
  double best = res;
  const double theta = options_.damping;
  for (std::size_t it = 0; it <= options_.max_iterations; ++it) {
    if (res <= options_.tol) return {z, g, g / z, res, it};
    if (it == options_.max_iterations) break;
    if (options_.newton) {
      const Complex step = (g - e.map) / (1.0 - e.slope);
      const Complex candidate = g - step;
      if (candidate.imag() > 0.0 && std::isfinite(candidate.real()) && std::isfinite(candidate.imag())) {
        const Eval ce = evaluate(z, candidate);
        const double cres = std::abs(candidate - ce.map);
        if (cres < res) {
          g = candidate;
          e = ce;
          res = cres;
          best = std::min(best, res);
          continue;
        }
      }
    }
    g = (1.0 - theta) * g + theta * e.map;
    e = evaluate(z, g);
    res = std::abs(g - e.map);
    best = std::min(best, res);
  }
  throw SolverFailure("solve_g: no convergence", z, best);
}

StieltjesSolution solve_g(Complex z, const DiscreteMeasure& nu, const SolverOptions& options,
                          std::optional<Complex> warm_start) {
  return StieltjesSolver(nu, options).solve(z, warm_start);
}

Complex stieltjes_mu(Complex z, const DiscreteMeasure& nu, const SolverOptions& options) {
  const auto sol = solve_g(z, nu, options);
  return -(1.0 + sol.g * sol.g) / z;
}

double density_mp(double x, const DiscreteMeasure& nu, double eta, const SolverOptions& options) {
  if (x == 0.0) throw std::invalid_argument("density_mp: x must be nonzero");
  if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("density_mp: eta must lie in (0, 1]");
  const StieltjesSolver solver(nu, options);
  const auto sol = solver.continued([x](double level) { return std::sqrt(Complex(x, level)); }, eta);
  const Complex h = sol.g / sol.z;
  return std::max(0.0, h.imag()) / std::numbers::pi;
}

DensityPoint evaluate_density_point(double x, const StieltjesSolver& solver, double eta,
                                    std::optional<Complex> warm_start) {
  if (x == 0.0) throw std::invalid_argument("evaluate_density_point: x must be nonzero");
  if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("evaluate_density_point: eta must lie in (0, 1]");
  const double ax = std::abs(x);
  std::size_t iterations = 0;
  std::optional<Complex> guess = warm_start;
  StieltjesSolution sol;
  for (double level : StieltjesSolver::eta_schedule(eta)) {
    sol = solver.solve(Complex(ax, level), guess);
    guess = sol.g;
    iterations += sol.iterations;
  }
  DensityPoint p;
  p.x = x;
  p.g = sol.g;
  p.h = sol.g / ax;  // h(x^2) = g(x)/x on the real axis
  p.rho_tilde = ax * p.h.imag() / std::numbers::pi;
  p.rho = -2.0 * p.h.real() * p.rho_tilde;
  p.iterations = iterations;
  if (p.rho < -kNegativeDensityTolerance) {
    throw SolverFailure("density: negative value, solver left the analytic branch", sol.z, sol.residual);
  }
  p.rho = std::max(0.0, p.rho);
  return p;
}

namespace {

double density_at_zero(const StieltjesSolver& solver, double eta) {
  const double r1 = evaluate_density_point(0.01, solver, eta).rho;
  const double r2 = evaluate_density_point(0.02, solver, eta).rho;
  // rho(x) ~ a + b x^2 through (0.01, r1), (0.02, r2).
  return std::max(0.0, (4.0 * r1 - r2) / 3.0);
}

}  // namespace

double density_mu(double x, const DiscreteMeasure& nu, double eta, const SolverOptions& options) {
  const StieltjesSolver solver(nu, options);
  if (x == 0.0) return density_at_zero(solver, eta);
  return evaluate_density_point(x, solver, eta).rho;
}

DensityCurve density_curve(const DiscreteMeasure& nu, double x_max, std::size_t points, double eta,
                           const SolverOptions& options) {
  if (points < 2) throw std::invalid_argument("density_curve: need at least two points");
  if (!(x_max > 0.0)) throw std::invalid_argument("density_curve: x_max must be positive");
  const StieltjesSolver solver(nu, options);
  DensityCurve curve;
  curve.eta_final = eta;
  curve.tolerance = options.tol;
  curve.measure_hash = nu.fingerprint();
  curve.grid.resize(points);
  curve.rho.assign(points, 0.0);

  const double step = 2.0 * x_max / static_cast<double>(points - 1);
  const std::size_t half = (points + 1) / 2;  // indices [0, half) cover x <= 0
  for (std::size_t k = 0; k < half; ++k) {
    const double x = -x_max + step * static_cast<double>(k);
    curve.grid[k] = x;
    curve.grid[points - 1 - k] = -x;
  }
  if (points % 2 == 1) curve.grid[points / 2] = 0.0;

  // Sweep |x| from large to small, seeding each point with its neighbour's
  // solution at the coarsest continuation level.
  std::optional<Complex> seed;
  for (std::size_t k = 0; k < half; ++k) {
    const double ax = -curve.grid[k];
    double value = 0.0;
    try {
      if (ax == 0.0) {
        value = density_at_zero(solver, eta);
      } else {
        seed = solver.solve(Complex(ax, 1.0), seed).g;
        value = evaluate_density_point(ax, solver, eta, seed).rho;
      }
    } catch (const SolverFailure&) {
      curve.failed.push_back(k);
      if (points - 1 - k != k) curve.failed.push_back(points - 1 - k);
      value = 0.0;
    }
    curve.rho[k] = value;
    curve.rho[points - 1 - k] = value;
  }
  std::sort(curve.failed.begin(), curve.failed.end());

  for (std::size_t k = 1; k < points; ++k) {
    const double dx = curve.grid[k] - curve.grid[k - 1];
    const double x0 = curve.grid[k - 1];
    const double x1 = curve.grid[k];
    curve.mass += 0.5 * dx * (curve.rho[k - 1] + curve.rho[k]);
    curve.second_moment += 0.5 * dx * (x0 * x0 * curve.rho[k - 1] + x1 * x1 * curve.rho[k]);
  }
  return curve;
}

DiscreteMeasure quantize_measure(const ContinuousLaw& law, std::size_t m) {
  if (m < 2) throw std::invalid_argument("quantize_measure: need m >= 2");
  const double mm = static_cast<double>(m);
  std::vector<Atom> atoms(m);
  double mean = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double lo = static_cast<double>(k) / mm;
    const double hi = k + 1 == m ? 1.0 : static_cast<double>(k + 1) / mm;
    atoms[k] = {law.slab_integral(lo, hi) / (hi - lo), 1.0 / mm};
    mean += atoms[k].location / mm;
  }
  if (!(mean > 0.0)) throw std::invalid_argument("quantize_measure: law has zero mean");
  const double factor = law.mean() / mean;
  for (Atom& a : atoms) a.location *= factor;
  return DiscreteMeasure::from_unnormalized(std::move(atoms));
}

double atom_at_zero(const DiscreteMeasure& nu, double eta, const SolverOptions& options) {
  const StieltjesSolver solver(nu, options);
  const auto sol = solver.continued([](double level) { return Complex(0.0, level); }, eta);
  const Complex z(0.0, eta);
  const Complex f = -(1.0 + sol.g * sol.g) / z;
  return -(Complex(0.0, eta) * f).real();
}

void write_density_csv(std::ostream& os, const DensityCurve& curve, const DiscreteMeasure& nu) {
  os << std::setprecision(17);
  os << "# nu_atoms=" << nu.to_string() << '\n';
  os << "# measure_hash=" << curve.measure_hash << '\n';
  os << "# eta_final=" << curve.eta_final << '\n';
  os << "# tolerance=" << curve.tolerance << '\n';
  os << "# mass=" << curve.mass << '\n';
  os << "# second_moment=" << curve.second_moment << '\n';
  os << "# failed_points=" << curve.failed.size() << '\n';
  os << "x,rho\n";
  for (std::size_t k = 0; k < curve.grid.size(); ++k) os << curve.grid[k] << ',' << curve.rho[k] << '\n';
}

}  // namespace cmspectra
