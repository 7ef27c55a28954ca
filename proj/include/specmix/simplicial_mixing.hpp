#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "specmix/complexes.hpp"
#include "specmix/enumeration.hpp"
#include "specmix/report.hpp"
#include "specmix/simplicial_ops.hpp"

namespace specmix {

namespace detail {

/// |count - coef*prod(sizes)| / (sqrt(s0*s1)*s2*...*s_last). Both the sweeps
/// and witness re-evaluation go through here, so a reported witness reproduces
/// its rho bit-for-bit.
inline double partite_ratio_simplicial(std::int64_t count,
                                       const std::vector<std::int64_t>& sizes,
                                       double coef) {
  double prod = 1.0;
  for (auto s : sizes) prod *= static_cast<double>(s);
  const double num = std::abs(static_cast<double>(count) - coef * prod);
  double denom = std::sqrt(static_cast<double>(sizes[0]) * static_cast<double>(sizes[1]));
  for (std::size_t i = 2; i < sizes.size(); ++i) denom *= static_cast<double>(sizes[i]);
  return num / denom;
}

inline double partite_rhs_simplicial(const std::vector<std::int64_t>& sizes,
                                     double rho) {
  double denom = std::sqrt(static_cast<double>(sizes[0]) * static_cast<double>(sizes[1]));
  for (std::size_t i = 2; i < sizes.size(); ++i) denom *= static_cast<double>(sizes[i]);
  return rho * denom;
}

inline double partite_lhs(std::int64_t count, const std::vector<std::int64_t>& sizes,
                          double coef) {
  double prod = 1.0;
  for (auto s : sizes) prod *= static_cast<double>(s);
  return std::abs(static_cast<double>(count) - coef * prod);
}

/// Maximizes a partite ratio over admitted (all parts nonempty) assignments;
/// ties go to the lexicographically least label string.
class RhoVisitor {
 public:
  RhoVisitor(int n, int parts, const std::vector<std::vector<int>>& tops,
             double coef, bool simplicial)
      : counter_(n, parts, tops), parts_(parts), coef_(coef),
        simplicial_(simplicial), part_sizes_(static_cast<std::size_t>(parts) + 1, 0) {}

  void assign(int v, int lab) {
    counter_.assign(v, lab);
    if (lab > 0) ++part_sizes_[static_cast<std::size_t>(lab)];
  }
  void unassign(int v, int lab) {
    counter_.unassign(v);
    if (lab > 0) --part_sizes_[static_cast<std::size_t>(lab)];
  }
  void leaf() {
    for (int i = 1; i <= parts_; ++i)
      if (part_sizes_[static_cast<std::size_t>(i)] == 0) return;
    ++examined_;
    std::vector<std::int64_t> sizes(part_sizes_.begin() + 1, part_sizes_.end());
    const double val =
        simplicial_ ? partite_ratio_simplicial(counter_.count(), sizes, coef_)
                    : partite_ratio_hypergraph(counter_.count(), sizes, coef_);
    if (val > best_ || (val == best_ && counter_.labels() < best_labels_)) {
      best_ = val;
      best_labels_ = counter_.labels();
    }
  }
  void join(const RhoVisitor& o) {
    examined_ += o.examined_;
    if (o.best_ > best_ ||
        (o.best_ == best_ && !o.best_labels_.empty() &&
         (best_labels_.empty() || o.best_labels_ < best_labels_)))
      {
        best_ = o.best_;
        best_labels_ = o.best_labels_;
      }
  }

  static double partite_ratio_hypergraph(std::int64_t count,
                                         const std::vector<std::int64_t>& sizes,
                                         double alpha) {
    double prod = 1.0;
    for (auto s : sizes) prod *= static_cast<double>(s);
    return std::abs(static_cast<double>(count) - alpha * prod) / std::sqrt(prod);
  }

  double best() const { return best_; }
  const std::vector<int>& best_labels() const { return best_labels_; }
  std::int64_t examined() const { return examined_; }

 private:
  DistinctLabelCounter counter_;
  int parts_;
  double coef_;
  bool simplicial_;
  std::vector<std::int64_t> part_sizes_;
  std::int64_t examined_ = 0;
  double best_ = -std::numeric_limits<double>::infinity();
  std::vector<int> best_labels_;
};

/// Margin sweep for the mixing inequalities: rhs - lhs per assignment, with
/// empty parts admitted (both sides vanish). Histogram bins are filled only
/// when a range is supplied (the callers run two passes).
class MarginVisitor {
 public:
  MarginVisitor(int n, int parts, const std::vector<std::vector<int>>& tops,
                double coef, double rho, bool simplicial)
      : counter_(n, parts, tops), parts_(parts), coef_(coef), rho_(rho),
        simplicial_(simplicial), part_sizes_(static_cast<std::size_t>(parts) + 1, 0) {}

  void set_histogram_range(double lo, double hi) {
    hist_.lo = lo;
    hist_.hi = hi;
    use_hist_ = true;
  }

  void assign(int v, int lab) {
    counter_.assign(v, lab);
    if (lab > 0) ++part_sizes_[static_cast<std::size_t>(lab)];
  }
  void unassign(int v, int lab) {
    counter_.unassign(v);
    if (lab > 0) --part_sizes_[static_cast<std::size_t>(lab)];
  }
  void leaf() {
    std::vector<std::int64_t> sizes(part_sizes_.begin() + 1, part_sizes_.end());
    double lhs, rhs;
    if (simplicial_) {
      lhs = partite_lhs(counter_.count(), sizes, coef_);
      rhs = partite_rhs_simplicial(sizes, rho_);
    } else {
      double prod = 1.0;
      for (auto s : sizes) prod *= static_cast<double>(s);
      lhs = std::abs(static_cast<double>(counter_.count()) - coef_ * prod);
      rhs = rho_ * std::sqrt(prod);
    }
    const double margin = rhs - lhs;
    min_ = std::min(min_, margin);
    max_ = std::max(max_, margin);
    ++total_;
    if (use_hist_) {
      const double span = hist_.hi - hist_.lo;
      int bin = span > 0.0
                    ? static_cast<int>((margin - hist_.lo) / span * 20.0)
                    : 0;
      bin = std::clamp(bin, 0, 19);
      ++hist_.bins[static_cast<std::size_t>(bin)];
      ++hist_.total;
    }
  }
  void join(const MarginVisitor& o) {
    min_ = std::min(min_, o.min_);
    max_ = std::max(max_, o.max_);
    total_ += o.total_;
    if (use_hist_) {
      for (std::size_t i = 0; i < hist_.bins.size(); ++i) hist_.bins[i] += o.hist_.bins[i];
      hist_.total += o.hist_.total;
    }
  }

  double min_margin() const { return min_; }
  double max_margin() const { return max_; }
  std::int64_t total() const { return total_; }
  const MarginHistogram& histogram() const { return hist_; }

 private:
  DistinctLabelCounter counter_;
  int parts_;
  double coef_;
  double rho_;
  bool simplicial_;
  std::vector<std::int64_t> part_sizes_;
  double min_ = std::numeric_limits<double>::infinity();
  double max_ = -std::numeric_limits<double>::infinity();
  std::int64_t total_ = 0;
  bool use_hist_ = false;
  MarginHistogram hist_;
};

inline std::vector<std::vector<int>> uniform_candidates(int n, int labels) {
  std::vector<int> all(static_cast<std::size_t>(labels));
  for (int i = 0; i < labels; ++i) all[static_cast<std::size_t>(i)] = i;
  return std::vector<std::vector<int>>(static_cast<std::size_t>(n), all);
}

}  // namespace detail

/// Number of ordered tuples (s_0,..,s_d) across the parts spanning a top
/// cell. Parts must be pairwise disjoint.
inline std::int64_t count_F(const SimplicialComplex& x, const DisjointTuple& t) {
  if (static_cast<int>(t.parts.size()) != x.d + 1)
    throw std::invalid_argument("count_F: need d+1 parts");
  std::vector<int> label(static_cast<std::size_t>(x.n), 0);
  for (std::size_t i = 0; i < t.parts.size(); ++i)
    for (int v : t.parts[i]) {
      if (v < 0 || v >= x.n)
        throw std::invalid_argument("count_F: vertex out of range");
      if (label[static_cast<std::size_t>(v)] != 0)
        throw std::invalid_argument("count_F: parts overlap at vertex " +
                                    std::to_string(v));
      label[static_cast<std::size_t>(v)] = static_cast<int>(i) + 1;
    }
  const unsigned full = (1u << (x.d + 2)) - 2u;
  std::int64_t count = 0;
  for (const auto& f : x.facets) {
    unsigned mask = 0;
    for (int v : f) {
      const int l = label[static_cast<std::size_t>(v)];
      if (l == 0) {
        mask = 0;
        break;
      }
      mask |= 1u << l;
    }
    if (mask == full) ++count;
  }
  return count;
}

enum class RhoMode { exhaustive, singleton_tail, sample };

/// Combinatorial discrepancy rho of a complex: the maximum over disjoint
/// nonempty tuples S_0..S_d of |F - (alpha/n) prod|S_i|| normalized by
/// sqrt(|S_0||S_1|) |S_2|..|S_d|. singleton_tail restricts S_2..S_d to
/// singletons; sample draws random assignments.
inline DiscrepancyReport rho_simplicial(const SimplicialComplex& x, double alpha,
                                        RhoMode mode = RhoMode::exhaustive,
                                        const SweepBudget& budget = {},
                                        int workers = 1,
                                        std::int64_t sample_count = 0,
                                        std::uint64_t seed = 0) {
  const int parts = x.d + 1;
  const double coef = alpha / static_cast<double>(x.n);
  DiscrepancyReport rep;
  rep.alpha = alpha;

  detail::RhoVisitor best(x.n, parts, x.facets, coef, true);
  if (mode == RhoMode::exhaustive) {
    rep.mode = "exhaustive";
    check_budget(pow_states(parts + 1, x.n), budget, "rho_simplicial");
    best = sweep_labelings(detail::uniform_candidates(x.n, parts + 1), best, workers);
  } else if (mode == RhoMode::singleton_tail) {
    rep.mode = "singleton-tail";
    check_budget(static_cast<std::int64_t>(binomial(x.n, x.d - 1)) *
                     pow_states(3, x.n - (x.d - 1)),
                 budget, "rho_simplicial(singleton-tail)");
    for (const auto& tail : all_subsets(x.n, x.d - 1)) {
      auto cand = detail::uniform_candidates(x.n, 3);  // 0, S_0, S_1
      for (std::size_t i = 0; i < tail.size(); ++i)
        cand[static_cast<std::size_t>(tail[i])] = {static_cast<int>(i) + 3};
      detail::RhoVisitor local(x.n, parts, x.facets, coef, true);
      local = sweep_labelings(cand, local, workers);
      best.join(local);
    }
  } else {
    rep.mode = "sample(count=" + std::to_string(sample_count) +
               ",seed=" + std::to_string(seed) + ")";
    for (std::int64_t s = 0; s < sample_count; ++s) {
      CounterRng rng(seed, static_cast<std::uint64_t>(s));
      std::vector<int> labels(static_cast<std::size_t>(x.n));
      detail::RhoVisitor one(x.n, parts, x.facets, coef, true);
      for (int v = 0; v < x.n; ++v) {
        int lab = static_cast<int>(rng.unit_at(static_cast<std::uint64_t>(v)) *
                                   (parts + 1));
        lab = std::min(lab, parts);
        one.assign(v, lab);
      }
      one.leaf();
      best.join(one);
    }
  }

  rep.tuples_examined = best.examined();
  if (best.examined() > 0) {
    rep.rho = best.best();
    rep.witness_labels = best.best_labels();
    rep.witness = tuple_from_labels(rep.witness_labels, parts);
  }
  return rep;
}

/// Spectral discrepancy bound rho_alpha = ||(alpha I - up_laplacian)
/// restricted to the boundary kernel||.
inline double rho_alpha_spectral(const SimplicialComplex& x, double alpha) {
  return restricted_norm(operator_matrix(x, OperatorKind::alpha_shift, alpha),
                         kernel_basis(x));
}

/// Checks |F(S_0..S_d) - (alpha/n) prod |S_i|| <= rho_alpha *
/// sqrt(|S_0||S_1|) |S_2|..|S_d| over every disjoint tuple (empty parts
/// included; both sides vanish). The inequality is unconditional, so a
/// negative margin beyond tolerance is an artifact bug.
inline VerificationReport verify_mixing_simplicial(const SimplicialComplex& x,
                                                   double alpha,
                                                   const SweepBudget& budget = {},
                                                   int workers = 1) {
  const int parts = x.d + 1;
  check_budget(pow_states(parts + 1, x.n), budget, "verify_mixing_simplicial");
  const double rho = rho_alpha_spectral(x, alpha);
  const double coef = alpha / static_cast<double>(x.n);
  const auto cand = detail::uniform_candidates(x.n, parts + 1);

  detail::MarginVisitor scan(x.n, parts, x.facets, coef, rho, true);
  scan = sweep_labelings(cand, scan, workers);
  detail::MarginVisitor hist(x.n, parts, x.facets, coef, rho, true);
  hist.set_histogram_range(scan.min_margin(), scan.max_margin());
  hist = sweep_labelings(cand, hist, workers);

  VerificationReport rep;
  rep.statement = "simplicial-mixing";
  rep.params = {{"n", x.n}, {"d", x.d}, {"alpha", alpha}, {"rho_alpha", rho}};
  rep.min_margin = scan.min_margin();
  rep.margins = hist.histogram();
  rep.pass = scan.min_margin() >= -1e-8;
  rep.details = {{"tuples", scan.total()}, {"max_margin", scan.max_margin()}};
  return rep;
}

/// Reports the per-instance ratio ||A|_Z|| / (rho d (lg(r/rho)+1)) for a
/// regular complex, with rho from the exhaustive sweep at alpha = r. The
/// bound statement leaves its constant unspecified; family-level tests assert
/// the ratio stays under a fixed budget.
inline VerificationReport verify_inverse_simplicial(const SimplicialComplex& x,
                                                    const SweepBudget& budget = {},
                                                    int workers = 1) {
  const auto prof = degree_profile(x);
  if (!prof.regular)
    throw std::invalid_argument(
        "verify_inverse_simplicial: complex is irregular (degrees " +
        std::to_string(prof.min_degree) + ".." + std::to_string(prof.max_degree) + ")");
  const double r = static_cast<double>(prof.min_degree);
  const auto rho_rep = rho_simplicial(x, r, RhoMode::exhaustive, budget, workers);
  const double norm_a_z =
      restricted_norm(operator_matrix(x, OperatorKind::adjacency), kernel_basis(x));

  VerificationReport rep;
  rep.statement = "simplicial-inverse-mixing";
  rep.params = {{"n", x.n}, {"d", x.d}, {"r", r}, {"rho", rho_rep.rho}};
  rep.details = {{"norm_a_restricted", norm_a_z},
                 {"witness", to_json(rho_rep.witness)}};
  if (rho_rep.rho < 1e-12) {
    rep.degenerate = true;
    rep.flags.push_back("rho-degenerate");
    rep.pass = norm_a_z <= 1e-8;
    rep.min_margin = -norm_a_z;
    return rep;
  }
  const double denom =
      rho_rep.rho * x.d * (std::log2(r / rho_rep.rho) + 1.0);
  rep.fitted_constant = norm_a_z / denom;
  if (denom <= 0.0) rep.flags.push_back("nonpositive-bound-denominator");
  rep.min_margin = 0.0;
  rep.pass = std::isfinite(rep.fitted_constant);
  return rep;
}

}  // namespace specmix
