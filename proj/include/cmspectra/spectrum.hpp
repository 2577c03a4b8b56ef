#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "cmspectra/config_sampler.hpp"
#include "cmspectra/measure.hpp"

namespace cmspectra {

/// All eigenvalues of a symmetric matrix, sorted in descending order.
struct SpectralSample {
  std::vector<double> eigenvalues;
};

using EmpiricalMeasure = DiscreteMeasure;

SpectralSample eigenvalues_symmetric(const SymmetricMatrix& m);

/// Uniform weight 1/n on each eigenvalue.
EmpiricalMeasure esd(const SpectralSample& s);

/// Continuous, piecewise-linear CDF through (grid[k], values[k]); zero to the
/// left of the grid and one to the right.
class PiecewiseLinearCdf {
 public:
  PiecewiseLinearCdf(std::vector<double> grid, std::vector<double> values);

  /// Cumulative trapezoid of a density sampled on a grid, rescaled so that the
  /// last value is one.
  static PiecewiseLinearCdf from_density(std::span<const double> grid, std::span<const double> density);

  double operator()(double x) const;
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> grid_;
  std::vector<double> values_;
};

/// sup_x |F_a(x) - F_b(x)|, exact over the merged atom grid.
double kolmogorov_distance(const DiscreteMeasure& a, const DiscreteMeasure& b);
double kolmogorov_distance(const DiscreteMeasure& a, const PiecewiseLinearCdf& b);

/// Integral of |F_a - F_b| over the line, exact for atomic measures.
double wasserstein1(const DiscreteMeasure& a, const DiscreteMeasure& b);

/// sqrt(trace((A - B)^2) / n). By Hoffman-Wielandt this bounds the
/// Wasserstein-1 distance between the two ESDs, hence also their
/// bounded-Lipschitz distance.
double hoffman_wielandt_bl_bound(const SymmetricMatrix& a, const SymmetricMatrix& b);

struct Histogram {
  std::vector<double> edges;    // size bins + 1
  std::vector<double> density;  // size bins, integrates to one
};

/// Freedman-Diaconis bin width 2 IQR n^{-1/3}; falls back to sqrt(n) bins
/// when the IQR vanishes.
Histogram freedman_diaconis_histogram(std::span<const double> values);

void write_spectrum_csv(std::ostream& os, const SpectralSample& s);
void write_histogram_csv(std::ostream& os, const Histogram& h);

}  // namespace cmspectra
