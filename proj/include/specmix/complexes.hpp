#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "specmix/combinatorics.hpp"
#include "specmix/rng.hpp"

namespace specmix {

/// d-dimensional simplicial complex with a complete skeleton: all cells of
/// dimension < d are implicitly present, only the top cells are stored.
/// Vertices are 0-based integers; facets are ascending and the facet list is
/// lexicographically sorted with no duplicates.
struct SimplicialComplex {
  int n = 0;
  int d = 1;
  std::vector<std::vector<int>> facets;

  bool has_facet(const std::vector<int>& f) const {
    return std::binary_search(facets.begin(), facets.end(), f);
  }
  std::int64_t num_lower_cells() const { return binomial(n, d); }  // (d-1)-cells
};

/// k-uniform hypergraph: edge set over 0..n-1, no loops or multi-edges.
/// Edges ascending, list lexicographically sorted, duplicate-free.
struct Hypergraph {
  int n = 0;
  int k = 2;
  std::vector<std::vector<int>> edges;

  bool has_edge(const std::vector<int>& e) const {
    return std::binary_search(edges.begin(), edges.end(), e);
  }
};

namespace detail {

inline void check_cell_list(const std::vector<std::vector<int>>& cells, int n,
                            int size, const char* what) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& c = cells[i];
    const std::string at = std::string(what) + "[" + std::to_string(i) + "]";
    if (static_cast<int>(c.size()) != size)
      throw std::invalid_argument(at + ": expected " + std::to_string(size) +
                                  " vertices, got " + std::to_string(c.size()));
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (c[j] < 0 || c[j] >= n)
        throw std::invalid_argument(at + ": vertex " + std::to_string(c[j]) +
                                    " out of range 0.." + std::to_string(n - 1));
      if (j > 0 && c[j] <= c[j - 1])
        throw std::invalid_argument(at + ": vertices not strictly ascending");
    }
    if (i > 0) {
      if (cells[i] == cells[i - 1]) {
        std::string e;
        for (int v : c) e += (e.empty() ? "" : "-") + std::to_string(v);
        throw std::invalid_argument(at + ": duplicate entry " + e);
      }
      if (cells[i] < cells[i - 1])
        throw std::invalid_argument(at + ": list not lexicographically sorted");
    }
  }
}

}  // namespace detail

inline void validate(const SimplicialComplex& x) {
  if (x.d < 1) throw std::invalid_argument("complex: d must be >= 1");
  if (x.n <= x.d) throw std::invalid_argument("complex: need n > d");
  detail::check_cell_list(x.facets, x.n, x.d + 1, "facets");
}

inline void validate(const Hypergraph& h) {
  if (h.k < 2) throw std::invalid_argument("hypergraph: k must be >= 2");
  if (h.n < h.k) throw std::invalid_argument("hypergraph: need n >= k");
  detail::check_cell_list(h.edges, h.n, h.k, "edges");
}

enum class ComplexKind { complete, empty, linial_meshulam };
enum class HypergraphKind { complete, gnp };

/// Generators are pure functions of (kind, params, seed): the random models
/// key each per-cell decision by (seed, lexicographic cell rank).
inline SimplicialComplex gen_complex(ComplexKind kind, int n, int d,
                                     double p = 0.0, std::uint64_t seed = 0) {
  if (n <= d || d < 1)
    throw std::invalid_argument("gen_complex: need n > d >= 1");
  if (kind == ComplexKind::linial_meshulam && !(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("gen_complex: p must lie in [0, 1]");
  SimplicialComplex x;
  x.n = n;
  x.d = d;
  if (kind == ComplexKind::empty) return x;
  auto candidates = all_subsets(n, d + 1);
  if (kind == ComplexKind::complete) {
    x.facets = std::move(candidates);
    return x;
  }
  for (std::size_t rank = 0; rank < candidates.size(); ++rank)
    if (seeded_bernoulli(seed, rank, p)) x.facets.push_back(candidates[rank]);
  return x;
}

inline Hypergraph gen_hypergraph(HypergraphKind kind, int n, int k,
                                 double alpha = 0.0, std::uint64_t seed = 0) {
  if (n < k || k < 2)
    throw std::invalid_argument("gen_hypergraph: need n >= k >= 2");
  if (kind == HypergraphKind::gnp && !(alpha >= 0.0 && alpha <= 1.0))
    throw std::invalid_argument("gen_hypergraph: alpha must lie in [0, 1]");
  Hypergraph h;
  h.n = n;
  h.k = k;
  auto candidates = all_subsets(n, k);
  if (kind == HypergraphKind::complete) {
    h.edges = std::move(candidates);
    return h;
  }
  for (std::size_t rank = 0; rank < candidates.size(); ++rank)
    if (seeded_bernoulli(seed, rank, alpha)) h.edges.push_back(candidates[rank]);
  return h;
}

/// A cell with an ordering of its vertices. parity is +1 iff the presented
/// order is an even permutation of the ascending order.
struct OrientedCell {
  std::vector<int> vertices;   // presented order
  std::vector<int> canonical;  // ascending
  int parity = 1;
};

inline OrientedCell make_oriented_cell(std::vector<int> vertices) {
  OrientedCell c;
  c.canonical = vertices;
  c.parity = sort_with_parity(c.canonical);
  c.vertices = std::move(vertices);
  return c;
}

inline OrientedCell reversed_orientation(const OrientedCell& c) {
  OrientedCell r = c;
  if (r.vertices.size() >= 2) {
    std::swap(r.vertices[0], r.vertices[1]);
    r.parity = -r.parity;
  }
  return r;
}

/// Sign of the permutation pi aligning two ascending cells that share all but
/// at most one vertex: pi maps position i to the position in `a` of b[i]
/// whenever b[i] lies in a, and sends the leftover position to the leftover
/// slot. Symmetric in its arguments (pi swaps to its inverse).
inline int orientation_sign(const std::vector<int>& a,
                            const std::vector<int>& b) {
  const int m = static_cast<int>(a.size());
  if (static_cast<int>(b.size()) != m)
    throw std::invalid_argument("orientation_sign: size mismatch");
  std::vector<int> pi(m, -1);
  std::vector<char> used(m, 0);
  int missing = -1;
  for (int i = 0; i < m; ++i) {
    auto it = std::lower_bound(a.begin(), a.end(), b[i]);
    if (it != a.end() && *it == b[i]) {
      pi[i] = static_cast<int>(it - a.begin());
      used[pi[i]] = 1;
    } else {
      if (missing >= 0)
        throw std::invalid_argument(
            "orientation_sign: cells share fewer than size-1 vertices");
      missing = i;
    }
  }
  if (missing >= 0)
    for (int j = 0; j < m; ++j)
      if (!used[j]) pi[missing] = j;
  return permutation_parity(pi);
}

inline int orientation_sign(const OrientedCell& a, const OrientedCell& b) {
  if (a.vertices != a.canonical || b.vertices != b.canonical)
    throw std::invalid_argument(
        "orientation_sign: cells must be presented canonically");
  return orientation_sign(a.canonical, b.canonical);
}

/// Exact degree of every (d-1)-cell of a complex, or every (k-1)-set of a
/// hypergraph, indexed by lexicographic cell rank.
struct DegreeProfile {
  int n = 0;
  int cell_size = 0;  // d for complexes, k-1 for hypergraphs
  std::vector<std::int64_t> degrees;
  std::int64_t min_degree = 0;
  std::int64_t max_degree = 0;
  double mean_degree = 0.0;
  bool regular = true;

  std::int64_t degree_of(const std::vector<int>& cell) const {
    return degrees.at(static_cast<std::size_t>(subset_rank(cell, n)));
  }
};

namespace detail {

inline DegreeProfile profile_from_tops(int n, int cell_size,
                                       const std::vector<std::vector<int>>& tops) {
  DegreeProfile p;
  p.n = n;
  p.cell_size = cell_size;
  p.degrees.assign(static_cast<std::size_t>(binomial(n, cell_size)), 0);
  std::vector<int> sub(cell_size);
  for (const auto& t : tops) {
    // each top cell covers the subsets obtained by dropping one vertex
    for (std::size_t drop = 0; drop < t.size(); ++drop) {
      int w = 0;
      for (std::size_t j = 0; j < t.size(); ++j)
        if (j != drop) sub[w++] = t[j];
      ++p.degrees[static_cast<std::size_t>(subset_rank(sub, n))];
    }
  }
  p.min_degree = p.degrees.empty() ? 0 : *std::min_element(p.degrees.begin(), p.degrees.end());
  p.max_degree = p.degrees.empty() ? 0 : *std::max_element(p.degrees.begin(), p.degrees.end());
  const std::int64_t total = std::accumulate(p.degrees.begin(), p.degrees.end(), std::int64_t{0});
  p.mean_degree = p.degrees.empty() ? 0.0 : static_cast<double>(total) / static_cast<double>(p.degrees.size());
  p.regular = (p.min_degree == p.max_degree);
  return p;
}

}  // namespace detail

inline DegreeProfile degree_profile(const SimplicialComplex& x) {
  return detail::profile_from_tops(x.n, x.d, x.facets);
}

inline DegreeProfile degree_profile(const Hypergraph& h) {
  return detail::profile_from_tops(h.n, h.k - 1, h.edges);
}

}  // namespace specmix
