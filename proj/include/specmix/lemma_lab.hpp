#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "specmix/enumeration.hpp"
#include "specmix/hypergraph_mixing.hpp"
#include "specmix/report.hpp"
#include "specmix/simplicial_ops.hpp"
#include "specmix/tensor_forms.hpp"

namespace specmix {

/// Splits a {0,+-1} vector into its positive and negative indicator parts:
/// x = plus - minus with disjoint supports.
inline std::pair<Vector, Vector> sign_split(const Vector& x) {
  Vector plus = Vector::Zero(x.size());
  Vector minus = Vector::Zero(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x(i) == 1.0)
      plus(i) = 1.0;
    else if (x(i) == -1.0)
      minus(i) = 1.0;
    else if (x(i) != 0.0)
      throw std::invalid_argument("sign_split: entry " + std::to_string(i) +
                                  " not in {0,+-1}");
  }
  return {plus, minus};
}

namespace detail {

inline bool dyadic_level(double v, int* level) {
  if (v == 0.0) return true;
  const double a = std::abs(v);
  if (a > 1.0) return false;
  int e = 0;
  if (std::frexp(a, &e) != 0.5) return false;  // not a power of two
  if (level) *level = 1 - e;                   // a = 2^{e-1} = 2^{-level}
  return true;
}

}  // namespace detail

/// Layers x = sum_i 2^{-i} x^i with x^i in {0,+-1}^n and pairwise disjoint
/// supports. Entries must be 0 or +-2^{-l} with l >= 0; the layer list stops
/// at the deepest level present.
inline std::vector<Vector> dyadic_decompose(const Vector& x) {
  int max_level = -1;
  std::vector<int> level(static_cast<std::size_t>(x.size()), -1);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    int l = -1;
    if (!detail::dyadic_level(x(i), &l))
      throw std::invalid_argument("dyadic_decompose: entry " + std::to_string(i) +
                                  " is not 0 or +-2^-l");
    if (x(i) != 0.0) {
      level[static_cast<std::size_t>(i)] = l;
      max_level = std::max(max_level, l);
    }
  }
  std::vector<Vector> layers(static_cast<std::size_t>(max_level + 1),
                             Vector::Zero(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (level[static_cast<std::size_t>(i)] >= 0)
      layers[static_cast<std::size_t>(level[static_cast<std::size_t>(i)])](i) =
          x(i) > 0.0 ? 1.0 : -1.0;
  return layers;
}

struct DyadicIndexSplit {
  std::vector<std::vector<int>> near;  // max_j i_j - min_j i_j < gamma
  std::vector<std::vector<int>> far;
};

/// Partitions index vectors by the spread of their entries against gamma
/// (strict inequality, gamma need not be an integer).
inline DyadicIndexSplit dyadic_index_split(
    const std::vector<std::vector<int>>& indices, double gamma) {
  if (gamma < 0.0) throw std::invalid_argument("dyadic_index_split: gamma >= 0");
  DyadicIndexSplit split;
  for (const auto& idx : indices) {
    if (idx.empty()) throw std::invalid_argument("dyadic_index_split: empty index");
    const auto [lo, hi] = std::minmax_element(idx.begin(), idx.end());
    (static_cast<double>(*hi - *lo) < gamma ? split.near : split.far).push_back(idx);
  }
  return split;
}

/// The spread threshold lg(a m n^{(k-2)/2} / b) used when the dyadic split
/// feeds the inverse-mixing envelope.
inline double dyadic_split_gamma(double a, double m, int n, int k, double b) {
  return std::log2(a * m * detail::half_power(n, k - 2) / b);
}

/// Rounds each coordinate independently to a signed power of two with the
/// exact coordinate value as its mean: |x_i| = 2^{l}(1+eps) becomes 2^l with
/// probability 1-eps and 2^{l+1} with probability eps. Requires
/// ||x||_inf <= 1/2, which also forces ||z|| <= 2||x|| pointwise.
inline Vector randomized_round(const Vector& x, std::uint64_t seed) {
  Vector z = Vector::Zero(x.size());
  CounterRng rng(seed);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x(i) == 0.0) continue;
    const double a = std::abs(x(i));
    if (a > 0.5)
      throw std::invalid_argument("randomized_round: |x_" + std::to_string(i) +
                                  "| exceeds 1/2");
    const int l = std::ilogb(a);
    const double eps = std::ldexp(a, -l) - 1.0;  // exact in binary arithmetic
    const int up = rng.unit_at(static_cast<std::uint64_t>(i)) < eps ? 1 : 0;
    z(i) = std::copysign(std::ldexp(1.0, l + up), x(i));
  }
  return z;
}

/// Exact check of the partition-averaging identity: k^{n-k} e(V_1..V_k)
/// equals the sum of e(P_1 cap V_1,..,P_k cap V_k) over all ordered
/// partitions of the vertex set into k nonempty parts, and likewise for the
/// complete hypergraph with the product of intersection sizes. All integer
/// arithmetic.
inline VerificationReport partition_identity_check(
    const Hypergraph& h, const std::vector<std::vector<int>>& sets,
    const SweepBudget& budget = {}) {
  if (static_cast<int>(sets.size()) != h.k)
    throw std::invalid_argument("partition_identity_check: expected k subsets");
  check_budget(pow_states(h.k, h.n), budget, "partition_identity_check");

  std::vector<unsigned> member(static_cast<std::size_t>(h.n), 0);
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (int v : sets[i]) member[static_cast<std::size_t>(v)] |= 1u << i;

  std::int64_t sum_e = 0;
  std::int64_t sum_prod = 0;
  std::vector<int> part(static_cast<std::size_t>(h.n), 0);
  std::vector<int> labels(static_cast<std::size_t>(h.n), 0);
  std::vector<std::int64_t> cut(static_cast<std::size_t>(h.k), 0);
  const std::int64_t total = pow_states(h.k, h.n);
  for (std::int64_t code = 0; code < total; ++code) {
    std::int64_t c = code;
    unsigned seen = 0;
    for (int v = 0; v < h.n; ++v) {
      part[static_cast<std::size_t>(v)] = static_cast<int>(c % h.k);
      seen |= 1u << part[static_cast<std::size_t>(v)];
      c /= h.k;
    }
    if (seen != (1u << h.k) - 1u) continue;  // parts must be nonempty
    std::fill(cut.begin(), cut.end(), 0);
    for (int v = 0; v < h.n; ++v) {
      const int p = part[static_cast<std::size_t>(v)];
      const bool in = (member[static_cast<std::size_t>(v)] >> p) & 1u;
      labels[static_cast<std::size_t>(v)] = in ? p + 1 : 0;
      cut[static_cast<std::size_t>(p)] += in;
    }
    sum_e += count_partite_distinct(h.edges, labels, h.k);
    std::int64_t prod = 1;
    for (auto s : cut) prod *= s;
    sum_prod += prod;
  }

  const std::int64_t scale = pow_states(h.k, h.n - h.k);
  const std::int64_t lhs_e = count_e(h, sets) * scale;
  Hypergraph complete = gen_hypergraph(HypergraphKind::complete, h.n, h.k);
  const std::int64_t lhs_ek = count_e(complete, sets) * scale;

  VerificationReport rep;
  rep.statement = "partition-averaging-identity";
  rep.params = {{"n", h.n}, {"k", h.k}};
  rep.details = {{"lhs_e_scaled", lhs_e},
                 {"partition_sum_e", sum_e},
                 {"lhs_ek_scaled", lhs_ek},
                 {"partition_sum_prod", sum_prod}};
  rep.pass = (lhs_e == sum_e) && (lhs_ek == sum_prod);
  rep.min_margin = rep.pass ? 0.0 : -1.0;
  if (!rep.pass) rep.flags.push_back("identity-violated");
  return rep;
}

namespace detail {

/// 3^n sweep over disjoint-support 0/1 pairs (x, y), tracking the bilinear
/// ratio |<x, M y>| / (||x|| ||y||) incrementally: a vertex joining one side
/// adds its pairings against the other side's current members.
class BilinearPairVisitor {
 public:
  explicit BilinearPairVisitor(const Matrix* m) : m_(m) {}

  void assign(int v, int lab) {
    double delta = 0.0;
    if (lab == 1) {
      for (int j : ys_) delta += (*m_)(v, j);
      xs_.push_back(v);
    } else if (lab == 2) {
      for (int i : xs_) delta += (*m_)(i, v);
      ys_.push_back(v);
    }
    cur_ += delta;
    stack_.push_back(delta);
  }
  void unassign(int v, int lab) {
    cur_ -= stack_.back();
    stack_.pop_back();
    if (lab == 1)
      xs_.pop_back();
    else if (lab == 2)
      ys_.pop_back();
  }
  void leaf() {
    if (xs_.empty() || ys_.empty()) return;
    const double ratio =
        std::abs(cur_) / std::sqrt(static_cast<double>(xs_.size()) *
                                   static_cast<double>(ys_.size()));
    best_ = std::max(best_, ratio);
    ++pairs_;
  }
  void join(const BilinearPairVisitor& o) {
    best_ = std::max(best_, o.best_);
    pairs_ += o.pairs_;
  }

  double best() const { return best_; }
  std::int64_t pairs() const { return pairs_; }

 private:
  const Matrix* m_;
  std::vector<int> xs_, ys_;
  std::vector<double> stack_;
  double cur_ = 0.0;
  double best_ = 0.0;
  std::int64_t pairs_ = 0;
};

}  // namespace detail

/// Hypotheses checker for the centered-matrix norm bound: requires exact
/// symmetry and a zero diagonal, sweeps all disjoint-support 0/1 pairs for
/// beta, computes the exact dense norm, and reports the fitted ratio
/// ||M|| / (beta (lg(m/beta) + 1)).
inline VerificationReport bilu_linial_check(const Matrix& m, double m_bound,
                                            const SweepBudget& budget = {},
                                            int workers = 1) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("bilu_linial_check: matrix must be square");
  const int n = static_cast<int>(m.rows());
  for (int i = 0; i < n; ++i) {
    if (m(i, i) != 0.0)
      throw std::invalid_argument("bilu_linial_check: diagonal entry (" +
                                  std::to_string(i) + "," + std::to_string(i) +
                                  ") = " + std::to_string(m(i, i)) +
                                  " is nonzero");
    for (int j = i + 1; j < n; ++j)
      if (m(i, j) != m(j, i))
        throw std::invalid_argument("bilu_linial_check: asymmetric at (" +
                                    std::to_string(i) + "," + std::to_string(j) +
                                    ")");
  }
  check_budget(pow_states(3, n), budget, "bilu_linial_check");

  const double max_row_l1 = m.cwiseAbs().rowwise().sum().maxCoeff();
  detail::BilinearPairVisitor sweep(&m);
  sweep = sweep_labelings(detail::uniform_candidates(n, 3), sweep, workers);
  const double beta = sweep.best();
  const double norm = dense_norm(m);

  VerificationReport rep;
  rep.statement = "bilu-linial-hypotheses";
  rep.params = {{"dim", n}, {"m", m_bound}};
  rep.details = {{"max_row_l1", max_row_l1},
                 {"beta", beta},
                 {"norm", norm},
                 {"pairs", sweep.pairs()}};
  const bool row_ok = max_row_l1 <= m_bound + 1e-12;
  rep.details["row_bound_holds"] = row_ok;
  if (beta < 1e-12) {
    rep.degenerate = true;
    rep.flags.push_back("beta-degenerate");
    rep.pass = norm <= 1e-8 && row_ok;
    rep.min_margin = -norm;
    return rep;
  }
  rep.fitted_constant = norm / (beta * (std::log2(m_bound / beta) + 1.0));
  rep.pass = row_ok && std::isfinite(rep.fitted_constant);
  rep.min_margin = row_ok ? 0.0 : max_row_l1 - m_bound;
  if (!row_ok) rep.flags.push_back("row-l1-exceeds-m");
  return rep;
}

}  // namespace specmix
