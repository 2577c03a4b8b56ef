#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cmspectra/measure.hpp"

namespace cmspectra {

using Rng = std::mt19937_64;

/// Named continuous law of a nonnegative random variable, optionally dilated.
///
/// Supplies sampling, quantiles and slab (partial) means in closed form so
/// that the same law drives i.i.d. degree draws and the quantization used by
/// the limit-law solver.
class ContinuousLaw {
 public:
  enum class Family { kPoint, kUniform, kExponential, kOnePlusExponential };

  static ContinuousLaw point(double location);
  static ContinuousLaw uniform(double lo, double hi);
  static ContinuousLaw exponential(double rate);
  static ContinuousLaw one_plus_exponential(double rate);

  Family family() const { return family_; }
  double scale() const { return scale_; }

  /// Copy with all values multiplied by factor > 0.
  ContinuousLaw dilated(double factor) const;
  ContinuousLaw normalized_to_unit_mean() const { return dilated(1.0 / mean()); }

  double mean() const;
  double second_moment() const;
  double quantile(double p) const;
  /// E[X; F(X) in (p_lo, p_hi]], i.e. the integral of x dF over the slab.
  double slab_integral(double p_lo, double p_hi) const;
  double sample(Rng& rng) const;

  std::string describe() const;

 private:
  ContinuousLaw(Family family, double p1, double p2) : family_(family), p1_(p1), p2_(p2) {}
  double raw_quantile(double p) const;
  double raw_slab_integral(double p_lo, double p_hi) const;

  Family family_;
  double p1_;
  double p2_;
  double scale_ = 1.0;
};

/// Degree law specification. Every variant holds a law already normalized
/// to mean one (the law of the normalized degree).
struct AtomicDegrees {
  DiscreteMeasure law;
};

struct IidDegrees {
  ContinuousLaw law;
};

/// Mixed regime: the last ceil(sqrt(n)) vertices get their normalized degree
/// multiplied by sqrt(n)/log(n). With omega_target = E[tau] log n this yields
/// D_i = [tau_i log n] for light vertices and D_i = [tau_i sqrt n] for heavy ones.
struct TwoScaleDegrees {
  ContinuousLaw law;
};

class DegreeSpec {
 public:
  using Kind = std::variant<AtomicDegrees, IidDegrees, TwoScaleDegrees>;

  static DegreeSpec atoms(const DiscreteMeasure& m);
  /// Two-atom law with weights fixed by the unit-mean constraint.
  static DegreeSpec two_atom(double alpha, double beta);
  static DegreeSpec iid(const ContinuousLaw& law);
  static DegreeSpec two_scale(const ContinuousLaw& law);

  const Kind& kind() const { return kind_; }
  bool is_atomic() const { return std::holds_alternative<AtomicDegrees>(kind_); }

  /// Mean of the normalized-degree law (one up to rounding).
  double normalized_mean() const;
  std::string describe() const;

 private:
  explicit DegreeSpec(Kind k) : kind_(std::move(k)) {}
  Kind kind_;
};

/// Parses "atoms(1:0.5,3:0.5)", "point(1)", "two-atom(3,0.5)", "uniform(0,2)",
/// "exponential(1)", "one-plus-exponential(1)" or "two-scale(<inner>)".
DegreeSpec parse_degree_spec(std::string_view text);

/// Reads a key=value spec file; see README for the schema.
DegreeSpec read_degree_spec_file(const std::filesystem::path& path);

/// Treats the argument as a file when one exists at that path.
DegreeSpec load_degree_spec(const std::string& file_or_inline);

struct DegreeSequence {
  std::vector<std::int64_t> degrees;
  double omega = 0.0;

  std::size_t size() const { return degrees.size(); }
  std::int64_t total() const;
  std::int64_t edge_count() const { return total() / 2; }
};

/// Validates the parity and omega invariants; throws std::invalid_argument.
void validate(const DegreeSequence& seq);

/// Builds D_i = floor(omega_target * Dhat_i); odd totals bump the last vertex.
DegreeSequence build_degree_sequence(const DegreeSpec& spec, std::size_t n,
                                     double omega_target, std::uint64_t seed);

/// Wraps explicit degrees, setting omega = (sum of degrees) / n.
DegreeSequence make_degree_sequence(std::vector<std::int64_t> degrees);

DiscreteMeasure degree_esd(const DegreeSequence& seq);

DiscreteMeasure size_bias(const DiscreteMeasure& m);

void write_degree_sequence(std::ostream& os, const DegreeSequence& seq);

}  // namespace cmspectra
