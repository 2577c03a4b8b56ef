#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace cmspectra {

struct Atom {
  double location;
  double weight;
};

/// Finite atomic probability measure on the real line.
///
/// Atoms are kept strictly increasing in location with strictly positive
/// weights summing to one (within 1e-12). All degree laws, size-biased laws
/// and empirical spectral measures in this library are held in this type.
class DiscreteMeasure {
 public:
  static constexpr double kWeightTolerance = 1e-12;

  DiscreteMeasure() = default;

  /// Validating constructor; throws std::invalid_argument unless the atoms
  /// already satisfy the ordering and normalization invariants.
  explicit DiscreteMeasure(std::vector<Atom> atoms);

  /// Sorts, merges equal locations, drops zero weights and renormalizes.
  static DiscreteMeasure from_unnormalized(std::vector<Atom> atoms);

  /// Uniform weight 1/n on each value; equal values are merged.
  static DiscreteMeasure uniform_on(std::span<const double> values);

  static DiscreteMeasure point_mass(double location);

  std::span<const Atom> atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }

  double min_location() const;
  double max_location() const;
  double mean() const { return moment(1); }
  double moment(int k) const;
  double weight_at(double location) const;

  /// P(X <= x).
  double cdf(double x) const;

  /// Pushes every atom through x -> factor * x.
  DiscreteMeasure dilated(double factor) const;

  /// Dilation making the mean exactly one; throws if the mean is not positive.
  DiscreteMeasure normalized_to_unit_mean() const;

  bool nonnegative() const;

  /// Stable 64-bit FNV-1a digest of the atom bytes, as 16 hex digits.
  std::string fingerprint() const;

  /// "x1:w1,x2:w2,..." with 17 significant digits.
  std::string to_string() const;

 private:
  std::vector<Atom> atoms_;
};

}  // namespace cmspectra
