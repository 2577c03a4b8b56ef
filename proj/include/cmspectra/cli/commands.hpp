#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cmspectra/config_sampler.hpp"
#include "cmspectra/degree_model.hpp"
#include "cmspectra/limit_law.hpp"
#include "cmspectra/spectrum.hpp"
#include "cmspectra/support.hpp"

namespace cmspectra::cli {

/// Parameters shared by all subcommands; each command reads the subset it needs.
struct RunConfig {
  std::string command;
  std::size_t n = 1000;
  std::string omega = "sqrt";       // number, sqrt, log, c*sqrt or c*log
  std::string measure = "point(1)"; // inline spec or path to a spec file
  std::optional<std::uint64_t> seed;
  std::filesystem::path out = ".";
  bool poissonized = false;
  bool single_adjacency = true;
  bool write_matrix = false;
  std::size_t grid = 601;
  double eta = 1e-6;
  double tol = 1e-12;
  double x_max = 0.0;               // <= 0: chosen from the support
  std::size_t quantize_atoms = 2048;
  double min_gap = 1e-3;
};

/// Validates ranges; throws std::invalid_argument with a message naming the key.
void validate(const RunConfig& config, bool needs_seed);

double resolve_omega(const std::string& rule, std::size_t n);

/// The law of the normalized degree as an atomic measure (continuous laws
/// are quantized with the given number of atoms).
DiscreteMeasure limit_measure(const DegreeSpec& spec, std::size_t quantize_atoms);

/// Window [-x, x] that covers the support of mu with a margin.
double density_window(const DiscreteMeasure& nu, double min_gap);

/// Deterministic child seed for stage `stream` of a run.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// '#'-prefixed lines echoing every configuration key.
std::string metadata_header(const RunConfig& config);

struct SampleResult {
  DegreeSequence degrees;
  Multigraph graph;
};

struct EsdResult {
  DegreeSequence degrees;
  SpectralSample spectrum;
};

struct CompareSummary {
  std::size_t n = 0;
  double omega = 0.0;
  double kolmogorov = 0.0;
  double mass = 0.0;
  std::size_t failed_points = 0;
};

struct CoupleSummary {
  std::size_t n = 0;
  double omega = 0.0;
  double kolmogorov = 0.0;
  double wasserstein = 0.0;
  double hoffman_wielandt = 0.0;
};

/// Degree sequence plus configuration (or Poissonized) sample.
SampleResult run_sample(const RunConfig& config);
/// Spectrum of the scaled (single-)adjacency of run_sample's graph.
EsdResult run_esd(const RunConfig& config);
DensityCurve run_density(const RunConfig& config);
CompareSummary run_compare(const RunConfig& config);
CoupleSummary run_couple(const RunConfig& config);

/// Subcommand entry points: write their files under config.out and return
/// the process exit status (nonzero on solver failure).
int cmd_sample(const RunConfig& config);
int cmd_esd(const RunConfig& config);
int cmd_density(const RunConfig& config);
int cmd_support(const RunConfig& config);
int cmd_phase_diagram(const RunConfig& config);
int cmd_compare(const RunConfig& config);
int cmd_couple(const RunConfig& config);

}  // namespace cmspectra::cli
