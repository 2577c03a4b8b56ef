// Command-line front end: sampling, spectra, limit law and support analysis.

#include <exception>
#include <functional>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "cmspectra/cli/commands.hpp"
#include "cmspectra/limit_law.hpp"

namespace {

using cmspectra::cli::RunConfig;

void add_common(CLI::App* sub, RunConfig& c, std::uint64_t& seed) {
  sub->add_option("--n", c.n, "number of vertices")->capture_default_str();
  sub->add_option("--omega", c.omega, "target mean degree: a number, sqrt, log, c*sqrt or c*log")
      ->capture_default_str();
  sub->add_option("--measure", c.measure, "degree law, inline spec or path to a spec file")
      ->capture_default_str();
  sub->add_option("--seed", seed, "random seed (required for sampling commands)");
  sub->add_option("--grid", c.grid, "grid points (density, xi trace) or grid side (phase-diagram)")
      ->capture_default_str();
  sub->add_option("--eta", c.eta, "final imaginary part of the continuation path")->capture_default_str();
  sub->add_option("--tol", c.tol, "fixed-point residual tolerance")->capture_default_str();
  sub->add_option("--out", c.out, "output directory")->capture_default_str();
  sub->add_flag("--poissonized", c.poissonized, "sample the Poissonized multigraph instead");
  sub->add_flag("--single-adjacency,!--multigraph", c.single_adjacency,
                "clamp multiplicities to one (default) or keep the multigraph adjacency");
  sub->add_option("--x-max", c.x_max, "half width of the analysis window (0 = automatic)")
      ->capture_default_str();
  sub->add_option("--quantize-atoms", c.quantize_atoms, "atoms used to quantize continuous laws")
      ->capture_default_str();
  sub->add_option("--min-gap", c.min_gap, "support gaps narrower than this are closed")->capture_default_str();
  sub->add_flag("--write-matrix", c.write_matrix, "sample: also write the scaled adjacency matrix");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectra of configuration-model random multigraphs"};
  app.set_config("--config", "", "TOML/INI file with the same keys as the flags");
  app.require_subcommand(1);

  const std::map<std::string, std::pair<std::string, std::function<int(const RunConfig&)>>> commands = {
      {"sample", {"sample a degree sequence and multigraph", cmspectra::cli::cmd_sample}},
      {"esd", {"eigenvalues of the scaled adjacency of a sample", cmspectra::cli::cmd_esd}},
      {"density", {"density of the limiting spectral law", cmspectra::cli::cmd_density}},
      {"support", {"support intervals and xi trace", cmspectra::cli::cmd_support}},
      {"phase-diagram", {"two-atom hole phase diagram", cmspectra::cli::cmd_phase_diagram}},
      {"compare", {"Kolmogorov distance of a sampled ESD to the limit", cmspectra::cli::cmd_compare}},
      {"couple", {"configuration versus Poissonized ESD distances", cmspectra::cli::cmd_couple}},
  };

  // Options live on the top-level app so that a config file can use the flag
  // names as flat keys; subcommands pass their options through to it.
  RunConfig config;
  std::uint64_t seed = 0;
  add_common(&app, config, seed);
  std::map<CLI::App*, std::string> names;
  for (const auto& [name, entry] : commands) {
    CLI::App* sub = app.add_subcommand(name, entry.first);
    sub->fallthrough();
    names[sub] = name;
  }

  CLI11_PARSE(app, argc, argv);

  config.command = names.at(app.get_subcommands().front());
  if (app.count("--seed") > 0) config.seed = seed;

  try {
    return commands.at(config.command).second(config);
  } catch (const cmspectra::SolverFailure& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
