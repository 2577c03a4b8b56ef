#include "cmspectra/support.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>

namespace cmspectra {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRootTolerance = 1e-12;

std::vector<double> poles_of(const DiscreteMeasure& nu) {
  std::vector<double> poles;
  for (const Atom& a : nu.atoms()) {
    if (a.location > 0.0) poles.push_back(-1.0 / a.location);
  }
  poles.push_back(0.0);
  std::sort(poles.begin(), poles.end());
  poles.erase(std::unique(poles.begin(), poles.end()), poles.end());
  return poles;
}

void require_regular(double v, const DiscreteMeasure& nu) {
  if (v == 0.0) throw std::invalid_argument("xi: v = 0 is a pole");
  for (const Atom& a : nu.atoms()) {
    if (a.location > 0.0 && 1.0 + v * a.location == 0.0) {
      throw std::invalid_argument("xi: v = -1/d is a pole");
    }
  }
}

double xi_prime_unchecked(double v, const DiscreteMeasure& nu) {
  double s = nu.mean() / (v * v);
  for (const Atom& a : nu.atoms()) {
    const double d = a.location;
    const double den = 1.0 + v * d;
    s -= a.weight * d * d * d / (den * den);
  }
  return s;
}

double xi_unchecked(double v, const DiscreteMeasure& nu) {
  double s = -nu.mean() / v;
  for (const Atom& a : nu.atoms()) {
    const double d = a.location;
    s += a.weight * d * d / (1.0 + v * d);
  }
  return s;
}

// --- Polynomial numerator of xi' -------------------------------------------

using Poly = std::vector<long double>;  // coefficients, lowest degree first

Poly multiply(const Poly& p, const Poly& q) {
  Poly r(p.size() + q.size() - 1, 0.0L);
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
  }
  return r;
}

long double evaluate(const Poly& p, long double v) {
  long double s = 0.0L;
  for (std::size_t k = p.size(); k-- > 0;) s = s * v + p[k];
  return s;
}

Poly derivative(const Poly& p) {
  if (p.size() <= 1) return {0.0L};
  Poly r(p.size() - 1);
  for (std::size_t k = 1; k < p.size(); ++k) r[k - 1] = static_cast<long double>(k) * p[k];
  return r;
}

// v^2 prod (1 + v d_b)^2 xi'(v) = prod (1 + v d_b)^2 - v^2 sum_a w_a d_a^3 prod_{b != a} (1 + v d_b)^2.
Poly xi_prime_numerator(const DiscreteMeasure& nu) {
  std::vector<long double> d;
  std::vector<long double> w;
  for (const Atom& a : nu.atoms()) {
    if (a.location > 0.0) {
      d.push_back(a.location);
      w.push_back(a.weight);
    }
  }
  auto squared_factor = [&](std::size_t b) {
    return Poly{1.0L, 2.0L * d[b], d[b] * d[b]};
  };
  Poly all{1.0L};
  for (std::size_t b = 0; b < d.size(); ++b) all = multiply(all, squared_factor(b));
  Poly result = all;
  for (long double& c : result) c *= static_cast<long double>(nu.mean());
  result.resize(all.size() + 2, 0.0L);
  for (std::size_t a = 0; a < d.size(); ++a) {
    Poly others{1.0L};
    for (std::size_t b = 0; b < d.size(); ++b) {
      if (b != a) others = multiply(others, squared_factor(b));
    }
    const long double c = w[a] * d[a] * d[a] * d[a];
    for (std::size_t k = 0; k < others.size(); ++k) result[k + 2] -= c * others[k];
  }
  // The leading coefficients cancel exactly; drop the
  // rounding residue so the degree is right.
  long double scale = 0.0L;
  for (long double c : result) scale = std::max(scale, std::fabs(c));
  while (result.size() > 1 && std::fabs(result.back()) <= 1e-14L * scale) result.pop_back();
  return result;
}

template <class F>
double bisect(F f, double lo, double hi) {
  double flo = f(lo);
  for (int it = 0; it < 200 && hi - lo > kRootTolerance * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// All roots of p in [lo, hi] where p changes sign, via the critical points of p.
std::vector<double> sign_change_roots(const Poly& p, double lo, double hi) {
  if (p.size() <= 1) return {};
  std::vector<double> cuts{lo};
  if (p.size() > 2) {
    for (double c : sign_change_roots(derivative(p), lo, hi)) cuts.push_back(c);
  }
  cuts.push_back(hi);
  auto f = [&](double v) { return static_cast<double>(evaluate(p, v)); };
  std::vector<double> roots;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k];
    const double b = cuts[k + 1];
    const double fa = f(a);
    const double fb = f(b);
    if (fa == 0.0) {
      roots.push_back(a);
    } else if ((fa < 0.0) != (fb < 0.0) && fb != 0.0) {
      roots.push_back(bisect(f, a, b));
    }
  }
  if (f(hi) == 0.0) roots.push_back(hi);
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

double cauchy_bound(const Poly& p) {
  const long double lead = std::fabs(p.back());
  long double m = 0.0L;
  for (std::size_t k = 0; k + 1 < p.size(); ++k) m = std::max(m, std::fabs(p[k]) / lead);
  return static_cast<double>(std::min(1.0L + m, 1e12L));
}

std::vector<double> roots_by_polynomial(const DiscreteMeasure& nu) {
  const Poly p = xi_prime_numerator(nu);
  if (p.size() <= 1) return {};
  const double r = cauchy_bound(p);
  std::vector<double> roots = sign_change_roots(p, -r, r);
  // Numerator roots at poles are impossible; guard against rounding anyway.
  const auto poles = poles_of(nu);
  std::erase_if(roots, [&](double v) {
    return std::any_of(poles.begin(), poles.end(), [v](double q) { return v == q; });
  });
  return roots;
}

std::vector<double> roots_by_scan(const DiscreteMeasure& nu) {
  const auto poles = poles_of(nu);
  const double atoms = static_cast<double>(nu.size());
  const auto samples =
      static_cast<std::size_t>(std::clamp(2e7 / (atoms * atoms), 64.0, 1e4));
  auto f = [&](double v) { return xi_prime_unchecked(v, nu); };
  std::vector<double> roots;
  auto scan = [&](auto point_at) {
    double prev_v = point_at(0);
    double prev_f = f(prev_v);
    for (std::size_t k = 1; k < samples; ++k) {
      const double v = point_at(k);
      const double fv = f(v);
      if ((fv < 0.0) != (prev_f < 0.0)) roots.push_back(bisect(f, prev_v, v));
      prev_v = v;
      prev_f = fv;
    }
  };
  const double n = static_cast<double>(samples);
  const double spread = 1.0 / nu.max_location();
  // (-inf, first pole): v = first - spread * s / (1 - s).
  scan([&](std::size_t k) {
    const double s = (static_cast<double>(samples - 1 - k) + 0.5) / n;
    return poles.front() - spread * s / (1.0 - s);
  });
  for (std::size_t g = 0; g + 1 < poles.size(); ++g) {
    const double lo = poles[g];
    const double hi = poles[g + 1];
    scan([&](std::size_t k) { return lo + (hi - lo) * (static_cast<double>(k) + 0.5) / n; });
  }
  scan([&](std::size_t k) {
    const double s = (static_cast<double>(k) + 0.5) / n;
    return poles.back() + spread * s / (1.0 - s);
  });
  std::sort(roots.begin(), roots.end());
  return roots;
}

// Limit of xi at an endpoint of an open region, approached from inside.
double xi_limit(double v, bool from_right, const DiscreteMeasure& nu, const std::vector<double>& poles) {
  if (std::isinf(v)) return 0.0;
  if (v == 0.0) return from_right ? -kInf : kInf;
  if (std::binary_search(poles.begin(), poles.end(), v)) return from_right ? kInf : -kInf;
  return xi_unchecked(v, nu);
}

}  // namespace

// ---------------------------------------------------------------------------

bool SupportIntervals::contains(double x) const {
  return std::any_of(intervals.begin(), intervals.end(),
                     [x](const Interval& i) { return i.left <= x && x <= i.right; });
}

std::vector<double> SupportIntervals::gap_midpoints() const {
  std::vector<double> mids;
  for (std::size_t k = 0; k + 1 < intervals.size(); ++k) {
    mids.push_back(0.5 * (intervals[k].right + intervals[k + 1].left));
  }
  return mids;
}

double xi(double v, const DiscreteMeasure& nu) {
  require_regular(v, nu);
  return xi_unchecked(v, nu);
}

double xi_prime(double v, const DiscreteMeasure& nu) {
  require_regular(v, nu);
  return xi_prime_unchecked(v, nu);
}

double default_support_window(const DiscreteMeasure& nu) {
  return 4.0 * nu.max_location() * (nu.moment(2) + 1.0);
}

std::vector<double> xi_prime_roots(const DiscreteMeasure& nu, const SupportOptions& options) {
  if (!nu.nonnegative() || !(nu.max_location() > 0.0)) {
    throw std::invalid_argument("xi_prime_roots: nu must be nonnegative and nonzero");
  }
  return nu.size() <= options.polynomial_atom_limit ? roots_by_polynomial(nu) : roots_by_scan(nu);
}

SupportIntervals support_mp(const DiscreteMeasure& nu, const SupportOptions& options) {
  const double x_max = options.x_max > 0.0 ? options.x_max : default_support_window(nu);
  const auto poles = poles_of(nu);
  const auto roots = xi_prime_roots(nu, options);

  std::vector<double> cuts{-kInf};
  cuts.insert(cuts.end(), poles.begin(), poles.end());
  cuts.insert(cuts.end(), roots.begin(), roots.end());
  cuts.push_back(kInf);
  std::sort(cuts.begin(), cuts.end());

  std::vector<Interval> gaps;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k];
    const double b = cuts[k + 1];
    if (!(a < b)) continue;
    double probe;
    if (std::isinf(a)) {
      probe = b - 1.0 - std::abs(b);
    } else if (std::isinf(b)) {
      probe = a + 1.0 + std::abs(a);
    } else {
      probe = 0.5 * (a + b);
    }
    if (!(xi_prime_unchecked(probe, nu) > 0.0)) continue;
    const double lo = std::max(xi_limit(a, true, nu, poles), 0.0);
    const double hi = std::min(xi_limit(b, false, nu, poles), x_max);
    if (lo < hi) gaps.push_back({lo, hi});
  }
  std::sort(gaps.begin(), gaps.end(), [](const Interval& p, const Interval& q) { return p.left < q.left; });
  std::vector<Interval> merged;
  for (const Interval& g : gaps) {
    if (!merged.empty() && g.left <= merged.back().right) {
      merged.back().right = std::max(merged.back().right, g.right);
    } else {
      merged.push_back(g);
    }
  }
  // Close interior gaps narrower than the threshold.
  std::erase_if(merged, [&](const Interval& g) {
    return g.left > 0.0 && g.right < x_max && g.right - g.left < options.min_gap;
  });

  SupportIntervals out;
  double cursor = 0.0;
  for (const Interval& g : merged) {
    if (g.left > cursor) out.intervals.push_back({cursor, g.left});
    cursor = std::max(cursor, g.right);
  }
  if (cursor < x_max) out.intervals.push_back({cursor, x_max});
  return out;
}

SupportIntervals support_mu(const DiscreteMeasure& nu, const SupportOptions& options) {
  const SupportIntervals mp = support_mp(nu, options);
  std::vector<Interval> all;
  for (const Interval& i : mp.intervals) {
    const double a = std::sqrt(i.left);
    const double b = std::sqrt(i.right);
    all.push_back({a, b});
    all.push_back({-b, -a});
  }
  std::sort(all.begin(), all.end(), [](const Interval& p, const Interval& q) { return p.left < q.left; });
  SupportIntervals out;
  for (const Interval& i : all) {
    if (!out.intervals.empty() && i.left <= out.intervals.back().right) {
      out.intervals.back().right = std::max(out.intervals.back().right, i.right);
    } else {
      out.intervals.push_back(i);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

TwoAtomLaw TwoAtomLaw::with_unit_mean(double alpha, double beta) {
  TwoAtomLaw law{alpha, beta, (1.0 - beta) / (alpha - beta)};
  law.validate();
  return law;
}

void TwoAtomLaw::validate() const {
  if (!(alpha > 1.0 && 1.0 > beta && beta > 0.0)) {
    throw std::invalid_argument("TwoAtomLaw: need alpha > 1 > beta > 0");
  }
  if (!(q_o > 0.0 && q_o < 1.0) || std::abs(alpha * q_o + beta * (1.0 - q_o) - 1.0) > 1e-12) {
    throw std::invalid_argument("TwoAtomLaw: weights must give mean one");
  }
}

DiscreteMeasure TwoAtomLaw::measure() const {
  validate();
  return DiscreteMeasure({{beta, 1.0 - q_o}, {alpha, q_o}});
}

double two_atom_discriminant(const TwoAtomLaw& law) {
  law.validate();
  const double a = law.alpha;
  const double b = law.beta;
  const double q = a * law.q_o;
  const double big_a = (a - b) * std::pow(a + b, 3);
  const double big_b = std::pow(a - 2.0 * b, 3);
  return 4.0 * q * (1.0 - q) * (a - b) * (a - b) * (a * big_b - q * big_a);
}

double two_atom_threshold(double beta) {
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("two_atom_threshold: need 0 < beta < 1");
  return beta * (3.0 / (1.0 - std::cbrt(1.0 - beta)) - 1.0);
}

bool two_atom_has_hole(const TwoAtomLaw& law) {
  law.validate();
  return law.alpha > two_atom_threshold(law.beta);
}

void write_intervals_csv(std::ostream& os, const SupportIntervals& s) {
  os << std::setprecision(17) << "left,right\n";
  for (const Interval& i : s.intervals) os << i.left << ',' << i.right << '\n';
}

}  // namespace cmspectra
