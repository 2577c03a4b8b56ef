#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <utility>
#include <vector>

#include "cmspectra/degree_model.hpp"

namespace cmspectra {

/// Undirected multigraph on vertices 0..n-1: edge multiplicities for i < j and
/// a loop count per vertex. A loop contributes 2 to its vertex degree.
class Multigraph {
 public:
  using EdgeMap = std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t>;

  Multigraph() = default;
  explicit Multigraph(std::size_t n) : loops_(n, 0) {}

  std::size_t order() const { return loops_.size(); }

  /// Adds count copies of {i, j}; i == j adds loops.
  void add_edge(std::uint32_t i, std::uint32_t j, std::uint64_t count = 1);

  std::uint64_t multiplicity(std::uint32_t i, std::uint32_t j) const;
  std::uint64_t loops(std::uint32_t i) const { return loops_.at(i); }

  const EdgeMap& edges() const { return edges_; }
  const std::vector<std::uint64_t>& loop_counts() const { return loops_; }

  std::vector<std::int64_t> degrees() const;
  /// Number of edges counted with multiplicity, loops included.
  std::uint64_t edge_count() const;

  friend bool operator==(const Multigraph&, const Multigraph&) = default;

 private:
  EdgeMap edges_;
  std::vector<std::uint64_t> loops_;
};

/// Dense real symmetric matrix; only the lower triangle is stored, row-major.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(std::size_t n) : n_(n), packed_(n * (n + 1) / 2, 0.0) {}

  std::size_t order() const { return n_; }

  double operator()(std::size_t i, std::size_t j) const { return packed_[index(i, j)]; }
  void set(std::size_t i, std::size_t j, double v) { packed_[index(i, j)] = v; }

  double trace() const;
  /// Sum of squared entries over the full matrix, i.e. trace(M^2).
  double frobenius_squared() const;

  const std::vector<double>& packed_lower() const { return packed_; }

  /// Applies the same relabeling to rows and columns: out(p[i], p[j]) = in(i, j).
  SymmetricMatrix permuted(const std::vector<std::size_t>& perm) const;

 private:
  static std::size_t index(std::size_t i, std::size_t j) {
    if (i < j) std::swap(i, j);
    return i * (i + 1) / 2 + j;
  }

  std::size_t n_ = 0;
  std::vector<double> packed_;
};

/// Uniform perfect matching of all half-edges (Fisher-Yates shuffle, then
/// consecutive pairing).
Multigraph sample_configuration(const DegreeSequence& seq, std::uint64_t seed);

/// Independent Poisson(omega d_a d_b / n) multiplicities between distinct
/// vertices of degree classes a, b and Poisson(omega d_a^2 / (2n)) loops,
/// where d = degree / omega and classes are the distinct degree values.
Multigraph sample_poissonized(const DegreeSequence& seq, std::uint64_t seed);

/// Couples g (a configuration sample with degrees deg(g)) to a configuration
/// sample with degrees new_degrees >= deg(g) such that g is recovered from the
/// output by blue-marking deg_i(g) of the new half-edges at each vertex.
Multigraph blue_marking_extend(const Multigraph& g, const DegreeSequence& new_degrees,
                               std::uint64_t seed);

/// Multiplicities and loop counts clamped to one.
SymmetricMatrix single_adjacency(const Multigraph& g);

/// omega^{-1/2} times the adjacency; the multigraph diagonal carries 2*loops.
SymmetricMatrix scaled_adjacency(const Multigraph& g, double omega, bool single);

/// "i j mult" for each edge, then "i i loops" for each looped vertex.
void write_edge_list(std::ostream& os, const Multigraph& g);

/// Binary: order as uint64 little-endian, then the row-major lower triangle
/// as little-endian float64.
void write_matrix_binary(std::ostream& os, const SymmetricMatrix& m);
SymmetricMatrix read_matrix_binary(std::istream& is);

}  // namespace cmspectra
