// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "cmspectra/cli/commands.hpp"

using namespace cmspectra;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct NamedMeasure {
  std::string name;
  DiscreteMeasure nu;
};

std::vector<NamedMeasure> test_measures() {
  return {
      {"delta1", DiscreteMeasure::point_mass(1.0)},
      {"two-atom(7,0.5)", TwoAtomLaw::with_unit_mean(7.0, 0.5).measure()},
      {"two-atom(3,0.5)", TwoAtomLaw::with_unit_mean(3.0, 0.5).measure()},
      {"three-atom", DiscreteMeasure::from_unnormalized({{1.0, 0.5}, {3.0, 0.49}, {15.0, 0.01}}).normalized_to_unit_mean()},
      {"quantized (1+Exp(1))/2", quantize_measure(ContinuousLaw::one_plus_exponential(1.0).dilated(0.5), 2048)},
  };
}

double window_for(const DiscreteMeasure& nu) { return 1.05 * std::sqrt(default_support_window(nu)); }

Outcome semicircle_oracle() {
  const auto start = Clock::now();
  const auto c = density_curve(DiscreteMeasure::point_mass(1.0), 3.0, 601, 1e-6);
  const double elapsed = seconds_since(start);
  double worst = 0.0;
  for (std::size_t k = 0; k < c.grid.size(); ++k) {
    const double x = c.grid[k];
    if (std::abs(x - 2.0) <= 0.05 || std::abs(x + 2.0) <= 0.05) continue;
    const double exact = std::abs(x) < 2.0 ? std::sqrt(4.0 - x * x) / (2.0 * std::numbers::pi) : 0.0;
    worst = std::max(worst, std::abs(c.rho[k] - exact));
  }
  return {worst <= 1e-4 && elapsed < 10.0 && c.failed.empty(),
          fmt("max_abs_error=%.3e (<=1e-4) runtime=%.2fs (<10s)", worst, elapsed)};
}

Outcome support_oracle() {
  const auto nu = DiscreteMeasure::point_mass(1.0);
  const auto roots = xi_prime_roots(nu);
  const auto s = support_mu(nu);
  const bool ok = roots.size() == 1 && std::abs(roots[0] + 0.5) <= 1e-12 && std::abs(xi(-0.5, nu) - 4.0) <= 1e-12 &&
                  s.components() == 1 && std::abs(s.intervals[0].left + 2.0) <= 1e-8 &&
                  std::abs(s.intervals[0].right - 2.0) <= 1e-8;
  return {ok, fmt("root=%.15f xi=%.15f support=[%.12f, %.12f]", roots.empty() ? NAN : roots[0], xi(-0.5, nu),
                  s.intervals[0].left, s.intervals[0].right)};
}

Outcome two_atom_equivalence() {
  int agree = 0;
  int total = 0;
  int support_agree = 0;
  SupportOptions exact;
  exact.min_gap = 0.0;
  for (int i = 0; i < 50; ++i) {
    for (int j = 0; j < 50; ++j) {
      const double beta = 0.05 + 0.9 * (i + 1) / 51.0;
      const double alpha = 1.0 + 19.0 * (j + 1) / 51.0;
      const auto law = TwoAtomLaw::with_unit_mean(alpha, beta);
      const bool hole = two_atom_has_hole(law);
      agree += hole == (two_atom_discriminant(law) > 0.0);
      support_agree += hole == (support_mp(law.measure(), exact).components() == 2);
      ++total;
    }
  }
  // Bisection in alpha on the sign of the closed-form discriminant at beta = 0.5.
  double lo = 1.5;
  double hi = 20.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (two_atom_discriminant(TwoAtomLaw::with_unit_mean(mid, 0.5)) > 0.0 ? hi : lo) = mid;
  }
  const double threshold = 0.5 * (lo + hi);
  // Phase boundary shape: decreasing in beta, holes above it only.
  bool decreasing = true;
  double prev = two_atom_threshold(0.05);
  for (int k = 1; k < 100; ++k) {
    const double t = two_atom_threshold(0.05 + 0.9 * k / 99.0);
    decreasing &= t < prev;
    prev = t;
  }
  const bool ok = agree == total && support_agree == total && std::abs(threshold - 6.771) <= 1e-3 && decreasing;
  return {ok, fmt("discriminant_agreement=%d/%d support_agreement=%d/%d threshold(beta=0.5)=%.6f boundary_decreasing=%s",
                  agree, total, support_agree, total, threshold, decreasing ? "yes" : "no")};
}

Outcome bound_suite() {
  long violations = 0;
  long points = 0;
  for (const auto& [name, nu] : test_measures()) {
    const StieltjesSolver solver(nu);
    const double inv_sq = std::sqrt(nu.moment(-2));
    const double x_max = 1.2 * std::sqrt(default_support_window(nu));
    for (int k = 0; k < 400; ++k) {
      const double x = -x_max + 2.0 * x_max * (k + 0.5) / 400.0;
      const double ax = std::abs(x);
      const auto p = evaluate_density_point(x, solver, 1e-6);
      constexpr double kPi = std::numbers::pi;
      violations += std::abs(p.g) > std::min(1.0, 2.0 / ax) + 1e-9;
      violations += kPi * p.rho_tilde > std::min(1.0, 2.0 / ax) + 1e-9;
      violations += kPi * p.rho > 4.0 / (ax * ax * ax) + 1e-9;
      violations += std::isfinite(inv_sq) && kPi * p.rho > inv_sq + 1e-9;
      violations += !(p.h.real() < 0.0);
      ++points;
    }
  }
  return {violations == 0, fmt("violations=%ld over %ld solved points, 5 measures", violations, points)};
}

Outcome normalization() {
  double worst_mass = 0.0;
  double worst_m2 = 0.0;
  for (const auto& [name, nu] : test_measures()) {
    const auto c = density_curve(nu, window_for(nu), 4001, 1e-6);
    worst_mass = std::max(worst_mass, std::abs(c.mass - 1.0));
    worst_m2 = std::max(worst_m2, std::abs(c.second_moment - 1.0));
  }
  return {worst_mass < 5e-3 && worst_m2 < 5e-3,
          fmt("max|mass-1|=%.2e max|m2-1|=%.2e (<5e-3)", worst_mass, worst_m2)};
}

// Kolmogorov distance between the sampled ESD and the limit CDF.
struct LimitCdf {
  std::string measure;
  PiecewiseLinearCdf cdf;
};

LimitCdf limit_cdf(const std::string& measure) {
  const auto nu = cli::limit_measure(parse_degree_spec(measure), 2048);
  const auto c = density_curve(nu, window_for(nu), 4001, 1e-6);
  return {measure, PiecewiseLinearCdf::from_density(c.grid, c.rho)};
}

double sampled_distance(const LimitCdf& limit, std::size_t n, std::uint64_t seed) {
  cli::RunConfig config;
  config.n = n;
  config.omega = std::to_string(std::ceil(std::sqrt(static_cast<double>(n))));
  config.measure = limit.measure;
  config.seed = seed;
  return kolmogorov_distance(esd(cli::run_esd(config).spectrum), limit.cdf);
}

Outcome weak_convergence() {
  bool ok = true;
  std::string detail;
  double slowest = 0.0;
  for (const std::string measure : {"point(1)", "two-atom(3,0.5)"}) {
    const auto limit = limit_cdf(measure);
    int below = 0;
    int improved = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto start = Clock::now();
      const double d2000 = sampled_distance(limit, 2000, seed);
      slowest = std::max(slowest, seconds_since(start));
      const double d500 = sampled_distance(limit, 500, seed);
      const double d4000 = sampled_distance(limit, 4000, seed);
      below += d2000 < 0.05;
      improved += d4000 < d500;
      worst = std::max(worst, d2000);
    }
    ok &= below >= 8 && improved >= 8;
    detail += fmt("%s: ks(n=2000)<0.05 in %d/10 (max %.4f), ks(4000)<ks(500) in %d/10; ", measure.c_str(), below,
                  worst, improved);
  }
  ok &= slowest < 300.0;
  return {ok, detail + fmt("slowest n=2000 seed %.1fs (<300s)", slowest)};
}

Outcome three_atom_support() {
  const std::string measure = "atoms(1:0.5,3:0.49,15:0.01)";
  const auto nu = cli::limit_measure(parse_degree_spec(measure), 2048);
  const auto mp = support_mp(nu);
  const auto mu = support_mu(nu);
  cli::RunConfig config;
  config.n = 1000;
  config.omega = "2.12*sqrt";  // degrees sqrt(n), 3 sqrt(n), 15 sqrt(n)
  config.measure = measure;
  config.seed = 1;
  const auto eig = cli::run_esd(config).spectrum.eigenvalues;
  std::size_t in_gaps = 0;
  for (double x : eig) {
    for (std::size_t k = 0; k + 1 < mu.components(); ++k) {
      if (x > mu.intervals[k].right && x < mu.intervals[k + 1].left) ++in_gaps;
    }
  }
  const double fraction = static_cast<double>(in_gaps) / static_cast<double>(eig.size());
  return {mp.components() >= 2 && fraction < 0.02,
          fmt("mp_components=%zu gap_fraction=%.4f (<0.02)", mp.components(), fraction)};
}

Outcome coupling() {
  int below = 0;
  int shrank = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    cli::RunConfig config;
    config.measure = "two-atom(3,0.5)";
    config.seed = seed;
    config.n = 2000;
    config.omega = "sqrt";
    const auto large = cli::run_couple(config);
    config.n = 500;
    const auto small = cli::run_couple(config);
    below += large.kolmogorov < 0.08;
    shrank += large.kolmogorov < small.kolmogorov;
    worst = std::max(worst, large.kolmogorov);
  }
  return {below == 10 && shrank >= 8,
          fmt("ks(n=2000)<0.08 in %d/10 (max %.4f), ks(2000)<ks(500) in %d/10", below, worst, shrank)};
}

Outcome sampler_exactness() {
  int mismatches = 0;
  int samples = 0;
  for (const std::string measure :
       {"point(1)", "two-atom(3,0.5)", "atoms(1:0.5,3:0.49,15:0.01)", "one-plus-exponential(1)"}) {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
      const auto seq = build_degree_sequence(parse_degree_spec(measure), 300 + 17 * seed, 3.0 + seed, seed);
      mismatches += sample_configuration(seq, seed).degrees() != seq.degrees;
      ++samples;
    }
  }
  const auto two_two = make_degree_sequence({2, 2});
  const int draws = 100000;
  int parallel = 0;
  for (int s = 0; s < draws; ++s) parallel += sample_configuration(two_two, 7'000'000 + s).multiplicity(0, 1) == 2;
  const double p = static_cast<double>(parallel) / draws;
  const double sigma = std::sqrt((2.0 / 9.0) / draws);
  const double z = (p - 2.0 / 3.0) / sigma;
  return {mismatches == 0 && std::abs(z) <= 3.0,
          fmt("degree_mismatches=%d/%d P(parallel)=%.5f (z=%.2f, |z|<=3)", mismatches, samples, p, z)};
}

Outcome stieltjes_inversion() {
  double worst = 0.0;
  for (const auto& [name, nu] : test_measures()) {
    const auto c = density_curve(nu, window_for(nu), 4001, 1e-6);
    for (int k = 0; k < 10; ++k) {
      const Complex z(-2.7 + 0.6 * k, 0.5);
      Complex q = 0.0;
      for (std::size_t j = 1; j < c.grid.size(); ++j) {
        q += 0.5 * (c.grid[j] - c.grid[j - 1]) * (c.rho[j - 1] / (c.grid[j - 1] - z) + c.rho[j] / (c.grid[j] - z));
      }
      worst = std::max(worst, std::abs(q - stieltjes_mu(z, nu)));
    }
  }
  return {worst < 5e-3, fmt("max_error=%.2e over 10 points x 5 measures (<5e-3)", worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"semicircle oracle", semicircle_oracle},
      {"support oracle", support_oracle},
      {"two-atom equivalence", two_atom_equivalence},
      {"bound suite", bound_suite},
      {"normalization and moments", normalization},
      {"weak convergence at desk scale", weak_convergence},
      {"three-atom support reproduction", three_atom_support},
      {"coupling diagnostic", coupling},
      {"sampler exactness", sampler_exactness},
      {"Stieltjes inversion cross-check", stieltjes_inversion},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = Clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %2zu %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                o.detail.c_str(), seconds_since(start));
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
