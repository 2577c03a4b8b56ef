#include "cmspectra/cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace cmspectra::cli {

namespace {

std::ofstream open_output(const RunConfig& config, const std::string& name) {
  std::filesystem::create_directories(config.out);
  std::ofstream os(config.out / name, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + (config.out / name).string());
  os << std::setprecision(17);
  return os;
}

SolverOptions solver_options(const RunConfig& config) {
  SolverOptions options;
  options.tol = config.tol;
  return options;
}

DegreeSequence degrees_for(const RunConfig& config) {
  const DegreeSpec spec = load_degree_spec(config.measure);
  return build_degree_sequence(spec, config.n, resolve_omega(config.omega, config.n),
                               derive_seed(*config.seed, 0));
}

}  // namespace

void validate(const RunConfig& config, bool needs_seed) {
  auto fail = [](const std::string& what) { throw std::invalid_argument(what); };
  if (needs_seed && !config.seed) fail("--seed is required for sampling commands");
  if (config.n < 2 || config.n > 20000) fail("--n must lie in [2, 20000]");
  if (config.grid < 2 || config.grid > 1000000) fail("--grid must lie in [2, 1000000]");
  if (!(config.eta > 0.0 && config.eta <= 1.0)) fail("--eta must lie in (0, 1]");
  if (!(config.tol > 0.0 && config.tol < 1e-2)) fail("--tol must lie in (0, 1e-2)");
  if (config.x_max < 0.0 || !std::isfinite(config.x_max)) fail("--x-max must be nonnegative");
  if (config.quantize_atoms < 2) fail("--quantize-atoms must be at least 2");
  if (config.min_gap < 0.0) fail("--min-gap must be nonnegative");
}

double resolve_omega(const std::string& rule, std::size_t n) {
  const double nn = static_cast<double>(n);
  double factor = 1.0;
  std::string base = rule;
  if (const auto star = rule.find('*'); star != std::string::npos) {
    factor = std::stod(rule.substr(0, star));
    base = rule.substr(star + 1);
  }
  double omega;
  if (base == "sqrt") {
    omega = factor * std::sqrt(nn);
  } else if (base == "log") {
    omega = factor * std::log(nn);
  } else {
    std::size_t used = 0;
    omega = std::stod(rule, &used);
    if (used != rule.size()) throw std::invalid_argument("--omega: cannot parse '" + rule + "'");
  }
  if (!(omega >= 1.0) || !std::isfinite(omega)) throw std::invalid_argument("--omega must resolve to >= 1");
  return omega;
}

DiscreteMeasure limit_measure(const DegreeSpec& spec, std::size_t quantize_atoms) {
  return std::visit(
      [&](const auto& k) -> DiscreteMeasure {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, AtomicDegrees>) {
          return k.law;
        } else {
          return quantize_measure(k.law, quantize_atoms);
        }
      },
      spec.kind());
}

double density_window(const DiscreteMeasure& nu, double min_gap) {
  SupportOptions options;
  options.min_gap = min_gap;
  const auto s = support_mu(nu, options);
  return 1.1 * s.intervals.back().right + 0.1;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 of (seed, stream)
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::string metadata_header(const RunConfig& config) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "# command=" << config.command << '\n'
     << "# n=" << config.n << '\n'
     << "# omega=" << config.omega << '\n'
     << "# measure=" << config.measure << '\n'
     << "# seed=" << (config.seed ? std::to_string(*config.seed) : std::string("none")) << '\n'
     << "# poissonized=" << (config.poissonized ? "true" : "false") << '\n'
     << "# single_adjacency=" << (config.single_adjacency ? "true" : "false") << '\n'
     << "# grid=" << config.grid << '\n'
     << "# eta=" << config.eta << '\n'
     << "# tol=" << config.tol << '\n'
     << "# x_max=" << config.x_max << '\n'
     << "# quantize_atoms=" << config.quantize_atoms << '\n'
     << "# min_gap=" << config.min_gap << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------

SampleResult run_sample(const RunConfig& config) {
  validate(config, true);
  SampleResult r;
  r.degrees = degrees_for(config);
  const auto graph_seed = derive_seed(*config.seed, 1);
  r.graph = config.poissonized ? sample_poissonized(r.degrees, graph_seed)
                               : sample_configuration(r.degrees, graph_seed);
  return r;
}

EsdResult run_esd(const RunConfig& config) {
  SampleResult s = run_sample(config);
  EsdResult r;
  r.spectrum = eigenvalues_symmetric(scaled_adjacency(s.graph, s.degrees.omega, config.single_adjacency));
  r.degrees = std::move(s.degrees);
  return r;
}

DensityCurve run_density(const RunConfig& config) {
  validate(config, false);
  const DiscreteMeasure nu = limit_measure(load_degree_spec(config.measure), config.quantize_atoms);
  const double x_max = config.x_max > 0.0 ? config.x_max : density_window(nu, config.min_gap);
  return density_curve(nu, x_max, config.grid, config.eta, solver_options(config));
}

CompareSummary run_compare(const RunConfig& config) {
  const EsdResult sampled = run_esd(config);
  const DensityCurve curve = run_density(config);
  const auto cdf = PiecewiseLinearCdf::from_density(curve.grid, curve.rho);
  CompareSummary s;
  s.n = config.n;
  s.omega = sampled.degrees.omega;
  s.kolmogorov = kolmogorov_distance(esd(sampled.spectrum), cdf);
  s.mass = curve.mass;
  s.failed_points = curve.failed.size();
  return s;
}

CoupleSummary run_couple(const RunConfig& config) {
  validate(config, true);
  const DegreeSequence seq = degrees_for(config);
  const Multigraph configuration = sample_configuration(seq, derive_seed(*config.seed, 1));
  const Multigraph poisson = sample_poissonized(seq, derive_seed(*config.seed, 2));
  const auto a = scaled_adjacency(configuration, seq.omega, config.single_adjacency);
  const auto b = scaled_adjacency(poisson, seq.omega, config.single_adjacency);
  const auto ea = esd(eigenvalues_symmetric(a));
  const auto eb = esd(eigenvalues_symmetric(b));
  CoupleSummary s;
  s.n = config.n;
  s.omega = seq.omega;
  s.kolmogorov = kolmogorov_distance(ea, eb);
  s.wasserstein = wasserstein1(ea, eb);
  s.hoffman_wielandt = hoffman_wielandt_bl_bound(a, b);
  return s;
}

// ---------------------------------------------------------------------------

int cmd_sample(const RunConfig& config) {
  const SampleResult r = run_sample(config);
  {
    auto os = open_output(config, "edges.txt");
    os << metadata_header(config);
    os << "# realized_omega=" << r.degrees.omega << '\n';
    os << "# edges=" << r.graph.edge_count() << '\n';
    write_edge_list(os, r.graph);
  }
  {
    auto os = open_output(config, "degrees.txt");
    write_degree_sequence(os, r.degrees);
  }
  if (config.write_matrix) {
    auto os = open_output(config, "adjacency.bin");
    write_matrix_binary(os, scaled_adjacency(r.graph, r.degrees.omega, config.single_adjacency));
  }
  std::cout << "vertices=" << config.n << " edges=" << r.graph.edge_count()
            << " realized_omega=" << std::setprecision(10) << r.degrees.omega << '\n';
  return 0;
}

int cmd_esd(const RunConfig& config) {
  const EsdResult r = run_esd(config);
  {
    auto os = open_output(config, "spectrum.csv");
    os << metadata_header(config) << "# realized_omega=" << r.degrees.omega << '\n' << "eigenvalue\n";
    write_spectrum_csv(os, r.spectrum);
  }
  {
    auto os = open_output(config, "histogram.csv");
    os << metadata_header(config) << "# realized_omega=" << r.degrees.omega << '\n';
    write_histogram_csv(os, freedman_diaconis_histogram(r.spectrum.eigenvalues));
  }
  std::cout << "eigenvalues=" << r.spectrum.eigenvalues.size() << " largest=" << r.spectrum.eigenvalues.front()
            << " smallest=" << r.spectrum.eigenvalues.back() << '\n';
  return 0;
}

int cmd_density(const RunConfig& config) {
  const DiscreteMeasure nu = limit_measure(load_degree_spec(config.measure), config.quantize_atoms);
  const DensityCurve curve = run_density(config);
  {
    auto os = open_output(config, "density.csv");
    os << metadata_header(config);
    if (!curve.failed.empty()) os << "# partial=true\n";
    write_density_csv(os, curve, nu);
  }
  std::cout << "points=" << curve.grid.size() << " mass=" << std::setprecision(10) << curve.mass
            << " second_moment=" << curve.second_moment << " failed=" << curve.failed.size() << '\n';
  return curve.failed.empty() ? 0 : 2;
}

int cmd_support(const RunConfig& config) {
  validate(config, false);
  const DiscreteMeasure nu = limit_measure(load_degree_spec(config.measure), config.quantize_atoms);
  SupportOptions options;
  options.min_gap = config.min_gap;
  options.x_max = config.x_max;
  const SupportIntervals mp = support_mp(nu, options);
  const SupportIntervals mu = support_mu(nu, options);
  {
    auto os = open_output(config, "support_mp.csv");
    os << metadata_header(config);
    write_intervals_csv(os, mp);
  }
  {
    auto os = open_output(config, "support_mu.csv");
    os << metadata_header(config);
    write_intervals_csv(os, mu);
  }
  {
    // Trace of xi on the negative axis, the branch that maps onto x > 0.
    auto os = open_output(config, "xi_trace.csv");
    os << metadata_header(config) << "v,xi,xi_prime,sqrt_xi\n";
    const double left = -2.0 / nu.min_location();
    const double right = -1e-3;
    for (std::size_t k = 0; k < config.grid; ++k) {
      const double v = left + (right - left) * static_cast<double>(k) / static_cast<double>(config.grid - 1);
      double x;
      double dx;
      try {
        x = xi(v, nu);
        dx = xi_prime(v, nu);
      } catch (const std::invalid_argument&) {
        continue;  // landed on a pole
      }
      os << v << ',' << x << ',' << dx << ',';
      if (x >= 0.0) os << std::sqrt(x);
      os << '\n';
    }
  }
  std::cout << "mp_components=" << mp.components() << " mu_components=" << mu.components() << '\n';
  for (const Interval& i : mu.intervals) std::cout << "  [" << i.left << ", " << i.right << "]\n";
  return 0;
}

int cmd_phase_diagram(const RunConfig& config) {
  validate(config, false);
  const std::size_t g = config.grid;
  auto os = open_output(config, "phase_diagram.csv");
  os << metadata_header(config) << "alpha,beta,has_hole,discriminant\n";
  std::size_t holes = 0;
  for (std::size_t i = 0; i < g; ++i) {
    const double beta = 0.05 + 0.9 * static_cast<double>(i) / static_cast<double>(g - 1);
    for (std::size_t j = 0; j < g; ++j) {
      const double alpha = 1.0 + 19.0 * static_cast<double>(j + 1) / static_cast<double>(g);
      const auto law = TwoAtomLaw::with_unit_mean(alpha, beta);
      const bool hole = two_atom_has_hole(law);
      holes += hole;
      os << alpha << ',' << beta << ',' << (hole ? 1 : 0) << ',' << two_atom_discriminant(law) << '\n';
    }
  }
  auto boundary = open_output(config, "phase_boundary.csv");
  boundary << metadata_header(config) << "beta,alpha_threshold\n";
  for (std::size_t i = 0; i < g; ++i) {
    const double beta = 0.05 + 0.9 * static_cast<double>(i) / static_cast<double>(g - 1);
    boundary << beta << ',' << two_atom_threshold(beta) << '\n';
  }
  std::cout << "grid=" << g << "x" << g << " with_hole=" << holes << '\n';
  return 0;
}

int cmd_compare(const RunConfig& config) {
  const CompareSummary s = run_compare(config);
  auto os = open_output(config, "compare.csv");
  os << metadata_header(config);
  if (s.failed_points) os << "# partial=true\n";
  os << "n,omega,kolmogorov,limit_mass\n" << s.n << ',' << s.omega << ',' << s.kolmogorov << ',' << s.mass << '\n';
  std::cout << "n=" << s.n << " omega=" << std::setprecision(10) << s.omega << " kolmogorov=" << s.kolmogorov
            << " limit_mass=" << s.mass << '\n';
  return s.failed_points ? 2 : 0;
}

int cmd_couple(const RunConfig& config) {
  const CoupleSummary s = run_couple(config);
  auto os = open_output(config, "couple.csv");
  os << metadata_header(config);
  os << "n,omega,kolmogorov,wasserstein1,hoffman_wielandt\n"
     << s.n << ',' << s.omega << ',' << s.kolmogorov << ',' << s.wasserstein << ',' << s.hoffman_wielandt << '\n';
  std::cout << "n=" << s.n << " kolmogorov=" << std::setprecision(10) << s.kolmogorov
            << " wasserstein1=" << s.wasserstein << " hoffman_wielandt=" << s.hoffman_wielandt << '\n';
  return 0;
}

}  // namespace cmspectra::cli
