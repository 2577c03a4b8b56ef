#include "cmspectra/spectrum.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace cmspectra {

SpectralSample eigenvalues_symmetric(const SymmetricMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.order());
  if (n < 1) throw std::invalid_argument("eigenvalues_symmetric: empty matrix");
  Eigen::MatrixXd dense(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      dense(i, j) = m(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    }
  }
  // Only the lower triangle is referenced.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigenvalues_symmetric: eigensolver did not converge");
  }
  SpectralSample s;
  s.eigenvalues.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  std::sort(s.eigenvalues.begin(), s.eigenvalues.end(), std::greater<>());
  return s;
}

EmpiricalMeasure esd(const SpectralSample& s) { return DiscreteMeasure::uniform_on(s.eigenvalues); }

// ---------------------------------------------------------------------------

PiecewiseLinearCdf::PiecewiseLinearCdf(std::vector<double> grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (grid_.size() < 2 || grid_.size() != values_.size()) {
    throw std::invalid_argument("PiecewiseLinearCdf: need matching grids of size >= 2");
  }
  for (std::size_t k = 1; k < grid_.size(); ++k) {
    if (!(grid_[k] > grid_[k - 1])) throw std::invalid_argument("PiecewiseLinearCdf: grid not increasing");
    if (values_[k] < values_[k - 1]) throw std::invalid_argument("PiecewiseLinearCdf: values decrease");
  }
}

PiecewiseLinearCdf PiecewiseLinearCdf::from_density(std::span<const double> grid,
                                                    std::span<const double> density) {
  if (grid.size() != density.size() || grid.size() < 2) {
    throw std::invalid_argument("PiecewiseLinearCdf::from_density: bad grid");
  }
  std::vector<double> cum(grid.size(), 0.0);
  for (std::size_t k = 1; k < grid.size(); ++k) {
    cum[k] = cum[k - 1] + 0.5 * (density[k] + density[k - 1]) * (grid[k] - grid[k - 1]);
  }
  const double total = cum.back();
  if (!(total > 0.0)) throw std::invalid_argument("PiecewiseLinearCdf::from_density: zero mass");
  for (double& c : cum) c /= total;
  return PiecewiseLinearCdf(std::vector<double>(grid.begin(), grid.end()), std::move(cum));
}

double PiecewiseLinearCdf::operator()(double x) const {
  if (x <= grid_.front()) return 0.0;
  if (x >= grid_.back()) return 1.0;
  const auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
  const auto k = static_cast<std::size_t>(it - grid_.begin());
  const double t = (x - grid_[k - 1]) / (grid_[k] - grid_[k - 1]);
  return values_[k - 1] + t * (values_[k] - values_[k - 1]);
}

// ---------------------------------------------------------------------------

namespace {

// Walks the merged atom grid, calling visit(x, F_a(x), F_b(x)) at every
// location where either CDF jumps.
template <class Visit>
void merged_walk(const DiscreteMeasure& a, const DiscreteMeasure& b, Visit visit) {
  const auto aa = a.atoms();
  const auto bb = b.atoms();
  std::size_t i = 0;
  std::size_t j = 0;
  double fa = 0.0;
  double fb = 0.0;
  while (i < aa.size() || j < bb.size()) {
    double x;
    if (j >= bb.size() || (i < aa.size() && aa[i].location <= bb[j].location)) {
      x = aa[i].location;
    } else {
      x = bb[j].location;
    }
    while (i < aa.size() && aa[i].location == x) fa += aa[i++].weight;
    while (j < bb.size() && bb[j].location == x) fb += bb[j++].weight;
    visit(x, std::min(fa, 1.0), std::min(fb, 1.0));
  }
}

}  // namespace

double kolmogorov_distance(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  double sup = 0.0;
  merged_walk(a, b, [&](double, double fa, double fb) { sup = std::max(sup, std::abs(fa - fb)); });
  return sup;
}

double kolmogorov_distance(const DiscreteMeasure& a, const PiecewiseLinearCdf& b) {
  double sup = 0.0;
  double before = 0.0;
  for (const Atom& atom : a.atoms()) {
    const double f = b(atom.location);
    const double after = std::min(before + atom.weight, 1.0);
    sup = std::max({sup, std::abs(before - f), std::abs(after - f)});
    before = after;
  }
  return sup;
}

double wasserstein1(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  double total = 0.0;
  bool started = false;
  double prev_x = 0.0;
  double prev_gap = 0.0;
  merged_walk(a, b, [&](double x, double fa, double fb) {
    if (started) total += prev_gap * (x - prev_x);
    started = true;
    prev_x = x;
    prev_gap = std::abs(fa - fb);
  });
  return total;
}

double hoffman_wielandt_bl_bound(const SymmetricMatrix& a, const SymmetricMatrix& b) {
  if (a.order() != b.order()) throw std::invalid_argument("hoffman_wielandt_bl_bound: order mismatch");
  if (a.order() == 0) throw std::invalid_argument("hoffman_wielandt_bl_bound: empty matrices");
  const auto& pa = a.packed_lower();
  const auto& pb = b.packed_lower();
  double s = 0.0;
  for (std::size_t i = 0; i < a.order(); ++i) {
    const std::size_t row = i * (i + 1) / 2;
    for (std::size_t j = 0; j < i; ++j) {
      const double d = pa[row + j] - pb[row + j];
      s += 2.0 * d * d;
    }
    const double d = pa[row + i] - pb[row + i];
    s += d * d;
  }
  return std::sqrt(s / static_cast<double>(a.order()));
}

// ---------------------------------------------------------------------------

namespace {

double sorted_quantile(const std::vector<double>& sorted, double p) {
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

Histogram freedman_diaconis_histogram(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("freedman_diaconis_histogram: no values");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  const double lo = sorted.front();
  const double hi = sorted.back();
  const double iqr = sorted_quantile(sorted, 0.75) - sorted_quantile(sorted, 0.25);
  std::size_t bins = 1;
  if (hi > lo) {
    if (iqr > 0.0) {
      const double width = 2.0 * iqr / std::cbrt(n);
      bins = static_cast<std::size_t>(std::ceil((hi - lo) / width));
    } else {
      bins = static_cast<std::size_t>(std::ceil(std::sqrt(n)));
    }
    bins = std::clamp<std::size_t>(bins, 1, 100000);
  }
  Histogram h;
  const double left = lo;
  const double right = hi > lo ? hi : lo + 1.0;
  const double width = (right - left) / static_cast<double>(bins);
  h.edges.resize(bins + 1);
  for (std::size_t k = 0; k <= bins; ++k) h.edges[k] = left + width * static_cast<double>(k);
  h.edges.back() = right;
  std::vector<double> counts(bins, 0.0);
  for (double v : sorted) {
    auto k = static_cast<std::size_t>(std::floor((v - left) / width));
    counts[std::min(k, bins - 1)] += 1.0;
  }
  h.density.resize(bins);
  for (std::size_t k = 0; k < bins; ++k) h.density[k] = counts[k] / (n * width);
  return h;
}

void write_spectrum_csv(std::ostream& os, const SpectralSample& s) {
  os << std::setprecision(17);
  for (double v : s.eigenvalues) os << v << '\n';
}

void write_histogram_csv(std::ostream& os, const Histogram& h) {
  os << std::setprecision(17) << "bin_left,bin_right,density\n";
  for (std::size_t k = 0; k < h.density.size(); ++k) {
    os << h.edges[k] << ',' << h.edges[k + 1] << ',' << h.density[k] << '\n';
  }
}

}  // namespace cmspectra
