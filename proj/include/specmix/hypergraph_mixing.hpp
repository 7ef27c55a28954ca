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
#include "specmix/simplicial_mixing.hpp"
#include "specmix/tensor_forms.hpp"

namespace specmix {

/// Closed-form envelopes for rho_alpha: the unconditional upper bound
/// (r + alpha n) n^{(k-2)/2}, the deterministic singleton-construction lower
/// bound, and the tail-bound threshold exceeded with probability at most
/// delta by a random hypergraph. witness_lower uses the denominator
/// sqrt((1-alpha)^2 + alpha^2); the looser variant with denominator 1 is kept
/// alongside for reporting.
struct RhoEnvelope {
  double sanity_upper = 0.0;
  double witness_lower = 0.0;
  double witness_lower_printed = 0.0;
  double hoeffding_threshold = 0.0;
  int n = 0;
  int k = 2;
  double r = 0.0;
  double alpha = 0.0;
  double delta = 0.0;
};

inline RhoEnvelope rho_envelope(int n, int k, double r, double alpha,
                                double delta) {
  if (n < k || k < 2) throw std::invalid_argument("rho_envelope: need n >= k >= 2");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("rho_envelope: delta must lie in (0, 1)");
  RhoEnvelope env;
  env.n = n;
  env.k = k;
  env.r = r;
  env.alpha = alpha;
  env.delta = delta;
  env.sanity_upper = (r + alpha * n) * detail::half_power(n, k - 2);
  const double tail = std::sqrt(static_cast<double>(n - k + 1));
  env.witness_lower = alpha * (1.0 - alpha) /
                      std::sqrt((1.0 - alpha) * (1.0 - alpha) + alpha * alpha) *
                      tail;
  env.witness_lower_printed = alpha * (1.0 - alpha) * tail;
  env.hoeffding_threshold = std::sqrt(
      (n * std::log(static_cast<double>(k) + 1.0) + std::log(2.0 / delta)) / 2.0);
  return env;
}

/// Ordered partite edge count for pairwise-disjoint parts given as a labels
/// array (0 = unused, 1..k = part); shares its counting rule with the sweeps.
inline std::int64_t count_partite_distinct(const std::vector<std::vector<int>>& tops,
                                           const std::vector<int>& labels,
                                           int parts) {
  const unsigned full = (1u << (parts + 1)) - 2u;
  std::int64_t count = 0;
  for (const auto& t : tops) {
    unsigned mask = 0;
    for (int v : t) {
      const int l = labels[static_cast<std::size_t>(v)];
      if (l <= 0) {
        mask = 0;
        break;
      }
      mask |= 1u << l;
    }
    if (mask == full) ++count;
  }
  return count;
}

inline std::int64_t count_e_disjoint(const Hypergraph& h, const DisjointTuple& t) {
  std::vector<int> labels(static_cast<std::size_t>(h.n), 0);
  for (std::size_t i = 0; i < t.parts.size(); ++i)
    for (int v : t.parts[i]) {
      if (labels[static_cast<std::size_t>(v)] != 0)
        throw std::invalid_argument("count_e_disjoint: parts overlap");
      labels[static_cast<std::size_t>(v)] = static_cast<int>(i) + 1;
    }
  return count_partite_distinct(h.edges, labels, static_cast<int>(t.parts.size()));
}

/// Re-evaluates a discrepancy witness through the same arithmetic the sweep
/// used, so the reported rho is reproduced bit-for-bit.
inline double reeval_rho_hypergraph(const Hypergraph& h, const DisjointTuple& t,
                                    double alpha) {
  return detail::RhoVisitor::partite_ratio_hypergraph(count_e_disjoint(h, t),
                                                      t.sizes(), alpha);
}

inline double reeval_rho_simplicial(const SimplicialComplex& x,
                                    const DisjointTuple& t, double alpha) {
  return detail::partite_ratio_simplicial(count_F(x, t), t.sizes(),
                                          alpha / static_cast<double>(x.n));
}

enum class HyperRhoMode { exhaustive, singleton_witness, sample };

/// Combinatorial expansion rho_alpha(H): max over pairwise disjoint nonempty
/// V_1..V_k of |e(V_1..V_k) - alpha prod|V_i|| / sqrt(prod|V_i|).
/// singleton_witness implements the deterministic lower-bound construction:
/// V_1..V_{k-1} a fixed (k-1)-set, V_k its link or co-link.
inline DiscrepancyReport rho_alpha(const Hypergraph& h, double alpha,
                                   HyperRhoMode mode = HyperRhoMode::exhaustive,
                                   const SweepBudget& budget = {},
                                   int workers = 1,
                                   std::int64_t sample_count = 0,
                                   std::uint64_t seed = 0) {
  DiscrepancyReport rep;
  rep.alpha = alpha;
  detail::RhoVisitor best(h.n, h.k, h.edges, alpha, false);

  if (mode == HyperRhoMode::exhaustive) {
    rep.mode = "exhaustive";
    check_budget(pow_states(h.k + 1, h.n), budget, "rho_alpha");
    best = sweep_labelings(detail::uniform_candidates(h.n, h.k + 1), best, workers);
  } else if (mode == HyperRhoMode::singleton_witness) {
    rep.mode = "singleton-witness";
    for (const auto& w : all_subsets(h.n, h.k - 1)) {
      std::vector<int> base(static_cast<std::size_t>(h.n), 0);
      for (std::size_t i = 0; i < w.size(); ++i)
        base[static_cast<std::size_t>(w[i])] = static_cast<int>(i) + 1;
      std::vector<int> link = w;
      link.push_back(0);
      std::vector<int> in_link(static_cast<std::size_t>(h.n), 0);
      for (int v = 0; v < h.n; ++v) {
        if (base[static_cast<std::size_t>(v)] != 0) continue;
        link.back() = v;
        std::sort(link.begin(), link.end());
        in_link[static_cast<std::size_t>(v)] = h.has_edge(link) ? 1 : 0;
        link = w;
        link.push_back(0);
      }
      for (int pick_link : {1, 0}) {
        detail::RhoVisitor one(h.n, h.k, h.edges, alpha, false);
        for (int v = 0; v < h.n; ++v) {
          int lab = base[static_cast<std::size_t>(v)];
          if (lab == 0 && in_link[static_cast<std::size_t>(v)] == pick_link)
            lab = h.k;
          one.assign(v, lab);
        }
        one.leaf();
        best.join(one);
      }
    }
  } else {
    rep.mode = "sample(count=" + std::to_string(sample_count) +
               ",seed=" + std::to_string(seed) + ")";
    for (std::int64_t s = 0; s < sample_count; ++s) {
      CounterRng rng(seed, static_cast<std::uint64_t>(s));
      detail::RhoVisitor one(h.n, h.k, h.edges, alpha, false);
      for (int v = 0; v < h.n; ++v) {
        int lab = static_cast<int>(rng.unit_at(static_cast<std::uint64_t>(v)) *
                                   (h.k + 1));
        lab = std::min(lab, h.k);
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
    rep.witness = tuple_from_labels(rep.witness_labels, h.k);
  }
  return rep;
}

namespace detail {

inline const std::vector<std::vector<int>>& slot_permutations(int k) {
  static thread_local std::vector<std::vector<std::vector<int>>> cache;
  if (static_cast<int>(cache.size()) <= k) cache.resize(static_cast<std::size_t>(k) + 1);
  auto& perms = cache[static_cast<std::size_t>(k)];
  if (perms.empty()) {
    std::vector<int> p(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) p[static_cast<std::size_t>(i)] = i;
    do {
      perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
  }
  return perms;
}

/// Margin sweep over arbitrary (not necessarily disjoint) subset tuples:
/// every vertex carries a membership mask over the k parts. e is counted per
/// edge as the number of slot bijections consistent with the masks (via a
/// lookup keyed by the packed masks of the edge's vertices); e_K comes from
/// the Moebius expansion over joint membership counts.
class MembershipMarginVisitor {
 public:
  MembershipMarginVisitor(const Hypergraph& h, double alpha, double lambda)
      : n_(h.n), k_(h.k), alpha_(alpha), lambda_(lambda),
        member_(static_cast<std::size_t>(h.n), 0),
        joint_(std::size_t{1} << h.k, 0),
        contrib_(static_cast<std::size_t>(h.n), 0) {
    for (const auto& p : set_partitions(h.k)) {
      part_mu_.push_back(p.mu);
      part_off_.push_back(static_cast<int>(part_blocks_.size()));
      for (unsigned b : p.blocks) part_blocks_.push_back(b);
    }
    part_off_.push_back(static_cast<int>(part_blocks_.size()));

    offsets_.assign(static_cast<std::size_t>(n_) + 1, 0);
    for (const auto& e : h.edges) ++offsets_[static_cast<std::size_t>(e.back()) + 1];
    for (std::size_t i = 1; i < offsets_.size(); ++i) offsets_[i] += offsets_[i - 1];
    flat_.resize(h.edges.size() * static_cast<std::size_t>(k_));
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (const auto& e : h.edges) {
      const std::size_t slot = cursor[static_cast<std::size_t>(e.back())]++;
      for (int j = 0; j < k_; ++j)
        flat_[slot * static_cast<std::size_t>(k_) + static_cast<std::size_t>(j)] = e[static_cast<std::size_t>(j)];
    }

    // bijection counts for every packed tuple of vertex masks
    perm_table_.assign(std::size_t{1} << (k_ * k_), 0);
    const auto& perms = slot_permutations(k_);
    for (std::size_t key = 0; key < perm_table_.size(); ++key) {
      int count = 0;
      for (const auto& p : perms) {
        bool ok = true;
        for (int i = 0; i < k_; ++i) {
          const unsigned mask = (key >> (k_ * i)) & ((1u << k_) - 1u);
          if (!(mask & (1u << p[static_cast<std::size_t>(i)]))) {
            ok = false;
            break;
          }
        }
        count += ok;
      }
      perm_table_[key] = static_cast<std::int8_t>(count);
    }
  }

  void set_histogram_range(double lo, double hi) {
    hist_.lo = lo;
    hist_.hi = hi;
    use_hist_ = true;
  }

  void assign(int v, int mask) {
    member_[static_cast<std::size_t>(v)] = static_cast<unsigned>(mask);
    for (unsigned sub = static_cast<unsigned>(mask); sub;
         sub = (sub - 1) & static_cast<unsigned>(mask))
      ++joint_[sub];
    std::int64_t add = 0;
    const std::size_t lo = offsets_[static_cast<std::size_t>(v)];
    const std::size_t hi = offsets_[static_cast<std::size_t>(v) + 1];
    for (std::size_t e = lo; e < hi; ++e) {
      const int* verts = &flat_[e * static_cast<std::size_t>(k_)];
      std::size_t key = 0;
      for (int i = 0; i < k_; ++i)
        key |= static_cast<std::size_t>(member_[static_cast<std::size_t>(verts[i])])
               << (k_ * i);
      add += perm_table_[key];
    }
    contrib_[static_cast<std::size_t>(v)] = add;
    ecount_ += add;
  }

  void unassign(int v, int mask) {
    ecount_ -= contrib_[static_cast<std::size_t>(v)];
    contrib_[static_cast<std::size_t>(v)] = 0;
    for (unsigned sub = static_cast<unsigned>(mask); sub;
         sub = (sub - 1) & static_cast<unsigned>(mask))
      --joint_[sub];
    member_[static_cast<std::size_t>(v)] = 0;
  }

  void leaf() {
    double ek = 0.0;
    for (std::size_t p = 0; p < part_mu_.size(); ++p) {
      double term = part_mu_[p];
      for (int b = part_off_[p]; b < part_off_[p + 1]; ++b)
        term *= static_cast<double>(joint_[part_blocks_[static_cast<std::size_t>(b)]]);
      ek += term;
    }
    double prod = 1.0;
    for (int i = 0; i < k_; ++i)
      prod *= static_cast<double>(joint_[std::size_t{1} << i]);
    const double lhs = std::abs(static_cast<double>(ecount_) - alpha_ * ek);
    const double margin = lambda_ * std::sqrt(prod) - lhs;
    min_ = std::min(min_, margin);
    max_ = std::max(max_, margin);
    ++total_;
    if (use_hist_) {
      const double span = hist_.hi - hist_.lo;
      int bin = span > 0.0 ? static_cast<int>((margin - hist_.lo) / span * 20.0) : 0;
      bin = std::clamp(bin, 0, 19);
      ++hist_.bins[static_cast<std::size_t>(bin)];
      ++hist_.total;
    }
  }

  void join(const MembershipMarginVisitor& o) {
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
  int n_;
  int k_;
  double alpha_;
  double lambda_;
  std::vector<double> part_mu_;
  std::vector<int> part_off_;
  std::vector<unsigned> part_blocks_;
  std::vector<std::int8_t> perm_table_;
  std::vector<std::size_t> offsets_;
  std::vector<int> flat_;
  std::vector<unsigned> member_;
  std::vector<std::int64_t> joint_;
  std::vector<std::int64_t> contrib_;
  std::int64_t ecount_ = 0;
  double min_ = std::numeric_limits<double>::infinity();
  double max_ = -std::numeric_limits<double>::infinity();
  std::int64_t total_ = 0;
  bool use_hist_ = false;
  MarginHistogram hist_;
};

inline std::vector<Vector> indicator_vectors(const DisjointTuple& t, int n) {
  std::vector<Vector> xs;
  xs.reserve(t.parts.size());
  for (const auto& p : t.parts) {
    Vector x = Vector::Zero(n);
    for (int v : p) x(v) = 1.0;
    xs.push_back(std::move(x));
  }
  return xs;
}

/// Estimate of lambda_{2,alpha} seeded from the rho maximizer: the witness
/// indicator tuple, its normalized sum, and the per-part indicators all seed
/// the optimizer, and the final value is clamped to at least rho (a valid
/// lower bound, since every disjoint tuple ratio is).
inline SpectralEstimate seeded_lambda_estimate(const MultilinearForm& phi,
                                               const DiscrepancyReport& rho_rep,
                                               int n, const SpectralOptions& opt) {
  std::vector<Vector> seeds;
  std::vector<std::vector<Vector>> tuples;
  if (!rho_rep.witness.parts.empty() &&
      static_cast<int>(rho_rep.witness.parts.size()) == phi.order()) {
    auto xs = indicator_vectors(rho_rep.witness, n);
    Vector sum = Vector::Zero(n);
    for (const auto& x : xs) sum += x;
    seeds.push_back(sum);
    for (const auto& x : xs) seeds.push_back(x);
    tuples.push_back(std::move(xs));
  }
  SpectralEstimate est = spectral_norm_estimate(phi, opt, seeds, tuples);
  est.tuple_value = std::max(est.tuple_value, rho_rep.rho);
  est.value = std::max(est.value, rho_rep.rho);
  return est;
}

/// The explicit inverse-mixing envelope
/// 2^{3k/2} k^{k/2} rho (lg^{k-1}((r+alpha n)^2 n^{k-2} / rho^2) + k^2 (2k)^{-k/2});
/// 0 when rho = 0 (the bound tends to 0 with rho).
inline double inverse_mixing_envelope(int n, int k, double r, double alpha,
                                      double rho) {
  if (rho < 1e-300) return 0.0;
  const double m = r + alpha * n;
  const double arg = m * m * static_cast<double>(int_power(n, k - 2)) / (rho * rho);
  const double logpart = std::pow(std::log2(arg), k - 1);
  const double tail = static_cast<double>(k) * static_cast<double>(k) *
                      std::pow(2.0 * k, -0.5 * k);
  return std::pow(2.0, 1.5 * k) * std::pow(static_cast<double>(k), 0.5 * k) *
         rho * (logpart + tail);
}

}  // namespace detail

/// Checks |e(V_1..V_k) - alpha e_K(V_1..V_k)| <= lambda_hat sqrt(prod|V_i|)
/// over every disjoint tuple and every arbitrary subset tuple. lambda_hat is
/// a lower bound on the true norm, so a negative margin is an estimator gap,
/// not a disproof; it is flagged and the report still passes.
inline VerificationReport verify_mixing_hypergraph(const Hypergraph& h,
                                                   double alpha,
                                                   const SweepBudget& budget = {},
                                                   int workers = 1,
                                                   const SpectralOptions& opt = {}) {
  check_budget(pow_states(h.k + 1, h.n), budget, "verify_mixing_hypergraph(disjoint)");
  check_budget(pow_states(std::int64_t{1} << h.k, h.n), budget,
               "verify_mixing_hypergraph(subsets)");
  const auto rho_rep = rho_alpha(h, alpha, HyperRhoMode::exhaustive, budget, workers);
  const auto phi = MultilinearForm::density_centered(h, alpha);
  const auto est = detail::seeded_lambda_estimate(phi, rho_rep, h.n, opt);

  detail::MarginVisitor dis(h.n, h.k, h.edges, alpha, est.value, false);
  const auto cand_dis = detail::uniform_candidates(h.n, h.k + 1);
  dis = sweep_labelings(cand_dis, dis, workers);

  detail::MembershipMarginVisitor mem(h, alpha, est.value);
  const auto cand_mem = detail::uniform_candidates(h.n, 1 << h.k);
  mem = sweep_labelings(cand_mem, mem, workers);

  const double lo = std::min(dis.min_margin(), mem.min_margin());
  const double hi = std::max(dis.max_margin(), mem.max_margin());
  detail::MarginVisitor dis2(h.n, h.k, h.edges, alpha, est.value, false);
  dis2.set_histogram_range(lo, hi);
  dis2 = sweep_labelings(cand_dis, dis2, workers);
  detail::MembershipMarginVisitor mem2(h, alpha, est.value);
  mem2.set_histogram_range(lo, hi);
  mem2 = sweep_labelings(cand_mem, mem2, workers);

  VerificationReport rep;
  rep.statement = "hypergraph-mixing-density";
  rep.params = {{"n", h.n}, {"k", h.k}, {"alpha", alpha},
                {"rho_alpha", rho_rep.rho}, {"lambda_hat", est.value}};
  rep.min_margin = lo;
  rep.margins = dis2.histogram();
  for (std::size_t i = 0; i < rep.margins.bins.size(); ++i)
    rep.margins.bins[i] += mem2.histogram().bins[i];
  rep.margins.total += mem2.histogram().total;
  rep.margins.lo = lo;
  rep.margins.hi = hi;
  rep.estimator_gap = lo < -1e-8;
  if (rep.estimator_gap) rep.flags.push_back("estimator-gap");
  rep.pass = true;  // lambda_hat underestimates never disprove the statement
  rep.details = {{"disjoint_tuples", dis.total()},
                 {"subset_tuples", mem.total()},
                 {"disjoint_min_margin", dis.min_margin()},
                 {"subset_min_margin", mem.min_margin()},
                 {"witness", to_json(rho_rep.witness)},
                 {"tuple_ratio", est.tuple_value}};
  return rep;
}

/// Rigorous inverse-mixing check: lambda_hat (a certified lower bound on
/// lambda_{2,alpha}) must stay below the explicit proof envelope evaluated at
/// the exhaustive rho. A violation is theorem-backed evidence of a bug.
inline VerificationReport verify_inverse_hypergraph(const Hypergraph& h,
                                                    double alpha,
                                                    const SweepBudget& budget = {},
                                                    int workers = 1,
                                                    const SpectralOptions& opt = {}) {
  const auto prof = degree_profile(h);
  const double r = static_cast<double>(prof.max_degree);
  const auto rho_rep = rho_alpha(h, alpha, HyperRhoMode::exhaustive, budget, workers);
  const auto phi = MultilinearForm::density_centered(h, alpha);
  const auto est = detail::seeded_lambda_estimate(phi, rho_rep, h.n, opt);

  VerificationReport rep;
  rep.statement = "hypergraph-inverse-mixing";
  rep.params = {{"n", h.n}, {"k", h.k}, {"alpha", alpha}, {"r", r},
                {"rho", rho_rep.rho}, {"lambda_hat", est.value}};
  rep.details = {{"witness", to_json(rho_rep.witness)},
                 {"tuple_ratio", est.tuple_value}};

  if (rho_rep.rho < 1e-12) {
    rep.degenerate = true;
    rep.flags.push_back("rho-degenerate");
    rep.pass = est.value <= 1e-8;
    rep.min_margin = -est.value;
    return rep;
  }
  const double sanity = (r + alpha * h.n) * detail::half_power(h.n, h.k - 2);
  if (rho_rep.rho > sanity)
    throw TheoremViolation("rho exceeds the unconditional sanity bound: rho=" +
                           std::to_string(rho_rep.rho) + " > " +
                           std::to_string(sanity));
  const double envelope =
      detail::inverse_mixing_envelope(h.n, h.k, r, alpha, rho_rep.rho);
  rep.min_margin = envelope - est.value;
  rep.pass = rep.min_margin >= -1e-8;
  const double scale_free =
      rho_rep.rho *
      (std::pow(std::log2((r + alpha * h.n) *
                          static_cast<double>(detail::int_power(h.n, h.k - 2)) /
                          rho_rep.rho),
                h.k - 1) +
       1.0);
  rep.fitted_constant = est.value / scale_free;
  rep.details["envelope"] = envelope;
  rep.details["sanity_upper"] = sanity;
  return rep;
}

/// Compares the all-pairs-centered second eigenvalue against the
/// density-centered one: rigorous upper sandwich via the diagonal-gap
/// envelope plus the inverse-mixing envelope, an informational lower band,
/// and (at k = 2) the exact-norm gap bound r/(n-1).
inline VerificationReport verify_fw_comparison(const Hypergraph& h,
                                               const SweepBudget& budget = {},
                                               int workers = 1,
                                               const SpectralOptions& opt = {}) {
  const auto prof = degree_profile(h);
  const double r = static_cast<double>(prof.max_degree);
  const double alpha = r / static_cast<double>(h.n);
  const auto rho_rep = rho_alpha(h, alpha, HyperRhoMode::exhaustive, budget, workers);

  const auto phi_fw = MultilinearForm::allpairs_centered(h, alpha);
  const auto phi_density = MultilinearForm::density_centered(h, alpha);
  const auto est_fw = detail::seeded_lambda_estimate(phi_fw, rho_rep, h.n, opt);
  const auto est_density =
      detail::seeded_lambda_estimate(phi_density, rho_rep, h.n, opt);

  const auto dbounds = d_norm_bounds(h.n, h.k);
  const double envelope =
      detail::inverse_mixing_envelope(h.n, h.k, r, alpha, rho_rep.rho);
  const double sandwich_rhs = alpha * dbounds.upper + envelope;
  const double band_lower = alpha * dbounds.lower - envelope;

  VerificationReport rep;
  rep.statement = "fw-second-eigenvalue-comparison";
  rep.params = {{"n", h.n}, {"k", h.k}, {"r", r}, {"alpha", alpha},
                {"rho", rho_rep.rho}};
  rep.min_margin = sandwich_rhs - est_fw.value;
  rep.pass = rep.min_margin >= -1e-8;
  rep.degenerate = rho_rep.rho < 1e-12;
  if (rep.degenerate) rep.flags.push_back("rho-degenerate");
  rep.details = {{"lambda2_hat", est_fw.value},
                 {"lambda2_alpha_hat", est_density.value},
                 {"sandwich_rhs", sandwich_rhs},
                 {"envelope", envelope},
                 {"band_lower", band_lower},
                 {"d_lower", dbounds.lower},
                 {"d_upper", dbounds.upper}};
  if (h.k == 2) {
    const double lam_fw = dense_norm(phi_fw.dense_matrix());
    const double density = static_cast<double>(h.edges.size()) /
                           static_cast<double>(binomial(h.n, 2));
    const double lam_density =
        dense_norm(MultilinearForm::density_centered(h, density).dense_matrix());
    const double gap = std::abs(lam_fw - lam_density);
    const double gap_bound = r / static_cast<double>(h.n - 1);
    rep.details["exact_lambda2"] = lam_fw;
    rep.details["exact_lambda2_density"] = lam_density;
    rep.details["gap"] = gap;
    rep.details["gap_bound"] = gap_bound;
    if (prof.regular && gap > gap_bound + 1e-8) {
      rep.pass = false;
      rep.flags.push_back("gap-bound-violated");
    }
  }
  return rep;
}

/// Per-seed exact rho of G(n, alpha, k) against the tail-bound threshold at
/// delta = e^{-n} and the deterministic singleton lower bound. The lower
/// bound holds for every hypergraph, so a miss there is theorem-backed.
struct RandomRhoRow {
  std::uint64_t seed = 0;
  double rho = 0.0;
  double lambda2_hat = 0.0;
  double lambda2_alpha_hat = 0.0;
  bool below_threshold = false;
  bool above_lower = false;
};

struct RandomRhoResult {
  VerificationReport report;
  std::vector<RandomRhoRow> rows;
  RhoEnvelope envelope;
};

inline RandomRhoResult random_rho_experiment(int n, int k, double alpha,
                                             int seeds, double delta = 0.0,
                                             const SweepBudget& budget = {},
                                             int workers = 1,
                                             SpectralOptions opt = {}) {
  if (seeds < 1) throw std::invalid_argument("random_rho_experiment: seeds >= 1");
  if (delta <= 0.0) delta = std::exp(-static_cast<double>(n));
  check_budget(pow_states(k + 1, n), budget, "random_rho_experiment");

  RandomRhoResult result;
  std::int64_t below = 0, above = 0;
  double sum_scaled = 0.0;
  double min_scaled = std::numeric_limits<double>::infinity();
  double max_scaled = -std::numeric_limits<double>::infinity();
  double max_r = 0.0;
  for (int s = 1; s <= seeds; ++s) {
    const auto g = gen_hypergraph(HypergraphKind::gnp, n, k, alpha,
                                  static_cast<std::uint64_t>(s));
    const auto prof = degree_profile(g);
    max_r = std::max(max_r, static_cast<double>(prof.max_degree));
    const auto rho_rep = rho_alpha(g, alpha, HyperRhoMode::exhaustive, budget, workers);
    const auto env_inst = rho_envelope(n, k, static_cast<double>(prof.max_degree),
                                       alpha, delta);
    if (rho_rep.rho > env_inst.sanity_upper)
      throw TheoremViolation("rho exceeds the sanity bound on seed " +
                             std::to_string(s));
    RandomRhoRow row;
    row.seed = static_cast<std::uint64_t>(s);
    row.rho = rho_rep.rho;
    row.below_threshold = rho_rep.rho <= env_inst.hoeffding_threshold;
    row.above_lower = rho_rep.rho >= env_inst.witness_lower;
    const auto est_fw = detail::seeded_lambda_estimate(
        MultilinearForm::allpairs_centered(g, MultilinearForm::uniform_density(g)),
        rho_rep, n, opt);
    const auto est_density = detail::seeded_lambda_estimate(
        MultilinearForm::density_centered(g, alpha), rho_rep, n, opt);
    row.lambda2_hat = est_fw.value;
    row.lambda2_alpha_hat = est_density.value;
    result.rows.push_back(row);
    below += row.below_threshold;
    above += row.above_lower;
    const double scaled = rho_rep.rho / std::sqrt(static_cast<double>(n));
    sum_scaled += scaled;
    min_scaled = std::min(min_scaled, scaled);
    max_scaled = std::max(max_scaled, scaled);
  }
  result.envelope = rho_envelope(n, k, max_r, alpha, delta);

  VerificationReport& rep = result.report;
  rep.statement = "random-rho";
  rep.params = {{"n", n}, {"k", k}, {"alpha", alpha}, {"seeds", seeds},
                {"delta", delta}};
  rep.details = {{"below_threshold", below},
                 {"above_lower", above},
                 {"threshold", result.envelope.hoeffding_threshold},
                 {"witness_lower", result.envelope.witness_lower},
                 {"witness_lower_printed", result.envelope.witness_lower_printed},
                 {"rho_over_sqrt_n",
                  {{"min", min_scaled},
                   {"mean", sum_scaled / seeds},
                   {"max", max_scaled}}}};
  const bool lower_holds =
      (alpha <= 0.0 || alpha >= 1.0) || above == seeds;
  rep.pass = lower_holds;
  if (!lower_holds) rep.flags.push_back("witness-lower-violated");
  rep.min_margin = lower_holds ? 0.0 : -1.0;
  return result;
}

}  // namespace specmix
