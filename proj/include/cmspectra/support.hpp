#pragma once

#include <iosfwd>
#include <vector>

#include "cmspectra/measure.hpp"

namespace cmspectra {

struct Interval {
  double left;
  double right;
};

/// Sorted, pairwise disjoint closed intervals.
struct SupportIntervals {
  std::vector<Interval> intervals;

  std::size_t components() const { return intervals.size(); }
  bool contains(double x) const;
  /// Midpoints of the open gaps between consecutive intervals.
  std::vector<double> gap_midpoints() const;
};

/// xi(v) = -E[D]/v + E[D^2 / (1 + v D)], the functional inverse of the
/// Marchenko-Pastur Stieltjes transform. Throws at v = 0 or v = -1/d.
double xi(double v, const DiscreteMeasure& nu);

/// xi'(v) = E[D]/v^2 - E[D^3 / (1 + v D)^2].
double xi_prime(double v, const DiscreteMeasure& nu);

struct SupportOptions {
  /// Gaps narrower than this are treated as quantization artifacts and closed.
  double min_gap = 1e-3;
  /// Right end of the analysis window; <= 0 selects 4 max(D) (E D^2 + 1).
  double x_max = 0.0;
  /// Atom count above which roots of xi' are found by sign scanning instead
  /// of through the numerator polynomial.
  std::size_t polynomial_atom_limit = 8;
};

/// Real roots of xi' on R \ ({0} U {-1/d}), sorted.
std::vector<double> xi_prime_roots(const DiscreteMeasure& nu, const SupportOptions& options = {});

/// Support of the Marchenko-Pastur companion on [0, x_max]: the complement of
/// the images under xi of the open regions where xi' > 0.
SupportIntervals support_mp(const DiscreteMeasure& nu, const SupportOptions& options = {});

/// Support of mu on the line: the symmetrized square root of support_mp.
SupportIntervals support_mu(const DiscreteMeasure& nu, const SupportOptions& options = {});

double default_support_window(const DiscreteMeasure& nu);

/// Mean-one law on two atoms alpha > 1 > beta > 0 with mass q_o at alpha.
struct TwoAtomLaw {
  double alpha;
  double beta;
  double q_o;

  /// Weight at alpha fixed by the unit mean.
  static TwoAtomLaw with_unit_mean(double alpha, double beta);
  void validate() const;
  DiscreteMeasure measure() const;
};

/// 4 q (1-q) (alpha-beta)^2 (alpha B - q A) with q = alpha q_o,
/// A = (alpha-beta)(alpha+beta)^3 and B = (alpha-2 beta)^3.
double two_atom_discriminant(const TwoAtomLaw& law);

/// alpha > beta [3 / (1 - (1-beta)^{1/3}) - 1].
bool two_atom_has_hole(const TwoAtomLaw& law);

/// The right-hand side above: the smallest alpha with a hole at this beta.
double two_atom_threshold(double beta);

void write_intervals_csv(std::ostream& os, const SupportIntervals& s);

}  // namespace cmspectra
