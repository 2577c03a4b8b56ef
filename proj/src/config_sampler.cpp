#include "cmspectra/config_sampler.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace cmspectra {

// ---------------------------------------------------------------------------
// Multigraph

void Multigraph::add_edge(std::uint32_t i, std::uint32_t j, std::uint64_t count) {
  if (i >= order() || j >= order()) throw std::out_of_range("Multigraph::add_edge: vertex out of range");
  if (count == 0) return;
  if (i == j) {
    loops_[i] += count;
    return;
  }
  if (i > j) std::swap(i, j);
  edges_[{i, j}] += count;
}

std::uint64_t Multigraph::multiplicity(std::uint32_t i, std::uint32_t j) const {
  if (i == j) return loops_.at(i);
  if (i > j) std::swap(i, j);
  auto it = edges_.find({i, j});
  return it == edges_.end() ? 0 : it->second;
}

std::vector<std::int64_t> Multigraph::degrees() const {
  std::vector<std::int64_t> deg(order(), 0);
  for (const auto& [e, m] : edges_) {
    deg[e.first] += static_cast<std::int64_t>(m);
    deg[e.second] += static_cast<std::int64_t>(m);
  }
  for (std::size_t i = 0; i < order(); ++i) deg[i] += 2 * static_cast<std::int64_t>(loops_[i]);
  return deg;
}

std::uint64_t Multigraph::edge_count() const {
  std::uint64_t total = 0;
  for (const auto& [e, m] : edges_) total += m;
  for (auto l : loops_) total += l;
  return total;
}

// ---------------------------------------------------------------------------
// SymmetricMatrix

double SymmetricMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

double SymmetricMatrix::frobenius_squared() const {
  double s = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    const double* row = packed_.data() + i * (i + 1) / 2;
    for (std::size_t j = 0; j < i; ++j) s += 2.0 * row[j] * row[j];
    s += row[i] * row[i];
  }
  return s;
}

SymmetricMatrix SymmetricMatrix::permuted(const std::vector<std::size_t>& perm) const {
  if (perm.size() != n_) throw std::invalid_argument("SymmetricMatrix::permuted: size mismatch");
  SymmetricMatrix out(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j <= i; ++j) out.set(perm[i], perm[j], (*this)(i, j));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Samplers

namespace {

std::vector<std::uint32_t> half_edges(const std::vector<std::int64_t>& degrees) {
  std::vector<std::uint32_t> stubs;
  std::int64_t total = 0;
  for (auto d : degrees) total += d;
  stubs.reserve(static_cast<std::size_t>(total));
  for (std::size_t v = 0; v < degrees.size(); ++v) {
    for (std::int64_t k = 0; k < degrees[v]; ++k) stubs.push_back(static_cast<std::uint32_t>(v));
  }
  return stubs;
}

template <class T>
void fisher_yates(std::vector<T>& items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(items[i - 1], items[pick(rng)]);
  }
}

std::uint64_t poisson(double lambda, Rng& rng) {
  if (lambda <= 0.0) return 0;
  if (lambda > 30.0) {
    std::poisson_distribution<std::uint64_t> dist(lambda);
    return dist(rng);
  }
  // Sequential-search inversion.
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u = unif(rng);
  double p = std::exp(-lambda);
  double cdf = p;
  std::uint64_t k = 0;
  while (u > cdf && p > 0.0) {
    ++k;
    p *= lambda / static_cast<double>(k);
    cdf += p;
  }
  return k;
}

// log((m)!!) for odd m >= -1, i.e. the number of perfect matchings of m+1 points.
double log_odd_double_factorial(std::int64_t m) {
  if (m <= 0) return 0.0;
  const double j = static_cast<double>((m + 1) / 2);
  return std::lgamma(2.0 * j + 1.0) - j * std::log(2.0) - std::lgamma(j + 1.0);
}

double log_binomial(std::int64_t n, std::int64_t k) {
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

}  // namespace

Multigraph sample_configuration(const DegreeSequence& seq, std::uint64_t seed) {
  if (seq.total() % 2 != 0) throw std::invalid_argument("sample_configuration: odd degree sum");
  for (auto d : seq.degrees) {
    if (d < 0) throw std::invalid_argument("sample_configuration: negative degree");
  }
  Rng rng(seed);
  auto stubs = half_edges(seq.degrees);
  fisher_yates(stubs, rng);
  Multigraph g(seq.size());
  for (std::size_t k = 0; k + 1 < stubs.size(); k += 2) g.add_edge(stubs[k], stubs[k + 1]);
  return g;
}

Multigraph sample_poissonized(const DegreeSequence& seq, std::uint64_t seed) {
  const std::size_t n = seq.size();
  Multigraph g(n);
  if (seq.total() == 0) return g;
  if (!(seq.omega > 0.0)) throw std::invalid_argument("sample_poissonized: omega must be positive");
  Rng rng(seed);
  const double nn = static_cast<double>(n);
  // lambda_{a,b} = omega d_a d_b / n with d = D / omega.
  std::vector<double> normalized(n);
  for (std::size_t i = 0; i < n; ++i) normalized[i] = static_cast<double>(seq.degrees[i]) / seq.omega;
  for (std::size_t i = 0; i < n; ++i) {
    const double di = normalized[i];
    if (di == 0.0) continue;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double lambda = seq.omega * di * normalized[j] / nn;
      const auto m = poisson(lambda, rng);
      if (m) g.add_edge(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), m);
    }
    const auto loops = poisson(0.5 * seq.omega * di * di / nn, rng);
    if (loops) g.add_edge(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i), loops);
  }
  return g;
}

Multigraph blue_marking_extend(const Multigraph& g, const DegreeSequence& new_degrees,
                               std::uint64_t seed) {
  const std::size_t n = g.order();
  if (new_degrees.size() != n) throw std::invalid_argument("blue_marking_extend: order mismatch");
  if (new_degrees.total() % 2 != 0) throw std::invalid_argument("blue_marking_extend: odd degree sum");
  const auto old_degrees = g.degrees();
  for (std::size_t i = 0; i < n; ++i) {
    if (new_degrees.degrees[i] < old_degrees[i]) {
      throw std::invalid_argument("blue_marking_extend: new degrees must dominate the old ones");
    }
  }
  Rng rng(seed);

  // Blue half-edges are the M old ones, the N added ones are not blue. In a
  // uniform matching of all M + N half-edges, the number K of blue-blue pairs
  // has the law below, and given K those pairs form a uniform K-subset of the
  // edges of the reduced graph g.
  std::int64_t blue = 0;
  for (auto d : old_degrees) blue += d;
  const std::int64_t other = new_degrees.total() - blue;
  const std::int64_t k_min = std::max<std::int64_t>(0, (blue - other + 1) / 2);
  const std::int64_t k_max = blue / 2;
  std::vector<double> log_w;
  for (std::int64_t k = k_min; k <= k_max; ++k) {
    const std::int64_t widowed = blue - 2 * k;
    log_w.push_back(log_binomial(blue, 2 * k) + log_odd_double_factorial(2 * k - 1) +
                    log_binomial(other, widowed) + std::lgamma(static_cast<double>(widowed) + 1.0) +
                    log_odd_double_factorial(other - widowed - 1));
  }
  const double top = *std::max_element(log_w.begin(), log_w.end());
  std::vector<double> w(log_w.size());
  for (std::size_t t = 0; t < w.size(); ++t) w[t] = std::exp(log_w[t] - top);
  std::discrete_distribution<std::size_t> pick_k(w.begin(), w.end());
  const std::int64_t kept = k_min + static_cast<std::int64_t>(pick_k(rng));

  std::vector<std::pair<std::uint32_t, std::uint32_t>> instances;
  instances.reserve(static_cast<std::size_t>(blue / 2));
  for (const auto& [e, m] : g.edges()) {
    for (std::uint64_t c = 0; c < m; ++c) instances.push_back(e);
  }
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint64_t c = 0; c < g.loops(i); ++c) instances.push_back({i, i});
  }
  // Partial Fisher-Yates: the first `kept` entries are a uniform subset.
  for (std::size_t t = 0; t < static_cast<std::size_t>(kept); ++t) {
    std::uniform_int_distribution<std::size_t> pick(t, instances.size() - 1);
    std::swap(instances[t], instances[pick(rng)]);
  }

  Multigraph out(n);
  std::vector<std::int64_t> blue_left = old_degrees;
  for (std::size_t t = 0; t < static_cast<std::size_t>(kept); ++t) {
    const auto [i, j] = instances[t];
    out.add_edge(i, j);
    --blue_left[i];
    --blue_left[j];
  }
  std::vector<std::int64_t> extra(n);
  for (std::size_t i = 0; i < n; ++i) extra[i] = new_degrees.degrees[i] - old_degrees[i];
  const auto widowed = half_edges(blue_left);
  auto fresh = half_edges(extra);
  fisher_yates(fresh, rng);
  // Widowed blue half-edges take distinct uniformly chosen fresh partners; the
  // rest of the fresh half-edges are matched uniformly among themselves.
  for (std::size_t t = 0; t < widowed.size(); ++t) out.add_edge(widowed[t], fresh[t]);
  for (std::size_t t = widowed.size(); t + 1 < fresh.size(); t += 2) out.add_edge(fresh[t], fresh[t + 1]);
  return out;
}

// ---------------------------------------------------------------------------
// Matrices

SymmetricMatrix single_adjacency(const Multigraph& g) {
  SymmetricMatrix m(g.order());
  for (const auto& [e, mult] : g.edges()) {
    if (mult) m.set(e.second, e.first, 1.0);
  }
  for (std::size_t i = 0; i < g.order(); ++i) {
    if (g.loops(static_cast<std::uint32_t>(i))) m.set(i, i, 1.0);
  }
  return m;
}

SymmetricMatrix scaled_adjacency(const Multigraph& g, double omega, bool single) {
  if (!(omega > 0.0)) throw std::invalid_argument("scaled_adjacency: omega must be positive");
  const double s = 1.0 / std::sqrt(omega);
  SymmetricMatrix m(g.order());
  for (const auto& [e, mult] : g.edges()) {
    const double v = single ? 1.0 : static_cast<double>(mult);
    m.set(e.second, e.first, v * s);
  }
  for (std::size_t i = 0; i < g.order(); ++i) {
    const auto l = g.loops(static_cast<std::uint32_t>(i));
    if (l == 0) continue;
    m.set(i, i, (single ? 1.0 : 2.0 * static_cast<double>(l)) * s);
  }
  return m;
}

void write_edge_list(std::ostream& os, const Multigraph& g) {
  for (const auto& [e, m] : g.edges()) os << e.first << ' ' << e.second << ' ' << m << '\n';
  for (std::size_t i = 0; i < g.order(); ++i) {
    const auto l = g.loops(static_cast<std::uint32_t>(i));
    if (l) os << i << ' ' << i << ' ' << l << '\n';
  }
}

namespace {

template <class T>
T to_little_endian(T v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    std::reverse(b, b + sizeof(T));
    std::memcpy(&v, b, sizeof(T));
    return v;
  }
}

template <class T>
void put(std::ostream& os, T v) {
  v = to_little_endian(v);
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("read_matrix_binary: truncated input");
  return to_little_endian(v);
}

}  // namespace

void write_matrix_binary(std::ostream& os, const SymmetricMatrix& m) {
  put<std::uint64_t>(os, m.order());
  for (double v : m.packed_lower()) put<double>(os, v);
}

SymmetricMatrix read_matrix_binary(std::istream& is) {
  const auto n = get<std::uint64_t>(is);
  if (n > (std::uint64_t{1} << 20)) throw std::runtime_error("read_matrix_binary: implausible order");
  SymmetricMatrix m(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) m.set(i, j, get<double>(is));
  }
  return m;
}

}  // namespace cmspectra
