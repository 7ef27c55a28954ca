#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "specmix/complexes.hpp"
#include "specmix/rng.hpp"
#include "specmix/simplicial_ops.hpp"

namespace specmix {

namespace detail {

inline std::vector<double> elementary_symmetric(const Vector& x, int k) {
  std::vector<double> e(static_cast<std::size_t>(k) + 1, 0.0);
  e[0] = 1.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const int top = std::min<int>(k, static_cast<int>(i) + 1);
    for (int j = top; j >= 1; --j)
      e[static_cast<std::size_t>(j)] += x(i) * e[static_cast<std::size_t>(j) - 1];
  }
  return e;
}

inline double half_power(int n, int j) {
  return std::pow(static_cast<double>(n), 0.5 * static_cast<double>(j));
}

inline std::int64_t int_power(int n, int k) {
  std::int64_t r = 1;
  for (int i = 0; i < k; ++i) r *= n;
  return r;
}

}  // namespace detail

enum class FormKind { adjacency, complete, all_ones, diagonal_gap };

struct FormTerm {
  double coeff = 1.0;
  FormKind kind = FormKind::adjacency;
};

/// Symmetric k-linear form on R^n, stored as an affine combination of the
/// base forms: the edge indicator of a hypergraph, the distinct-index
/// indicator (complete), the constant-one form, and their gap. Evaluation is
/// edge-list driven for adjacency terms and closed-form for the rest, so no
/// n^k coefficient array is ever materialized.
class MultilinearForm {
 public:
  static MultilinearForm adjacency(Hypergraph h) {
    MultilinearForm f(h.n, h.k);
    f.h_ = std::make_shared<Hypergraph>(std::move(h));
    f.terms_ = {{1.0, FormKind::adjacency}};
    return f;
  }
  static MultilinearForm complete(int n, int k) {
    MultilinearForm f(n, k);
    f.terms_ = {{1.0, FormKind::complete}};
    return f;
  }
  static MultilinearForm all_ones(int n, int k) {
    MultilinearForm f(n, k);
    f.terms_ = {{1.0, FormKind::all_ones}};
    return f;
  }
  static MultilinearForm diagonal_gap(int n, int k) {
    MultilinearForm f(n, k);
    f.terms_ = {{1.0, FormKind::diagonal_gap}};
    return f;
  }
  /// A - alpha * A_K: the density-centered second-eigenvalue form.
  static MultilinearForm density_centered(Hypergraph h, double alpha) {
    MultilinearForm f(h.n, h.k);
    f.h_ = std::make_shared<Hypergraph>(std::move(h));
    f.terms_ = {{1.0, FormKind::adjacency}, {-alpha, FormKind::complete}};
    return f;
  }
  /// A - c * J with c defaulting to k!|E|/n^k: the all-pairs-centered form.
  static MultilinearForm allpairs_centered(Hypergraph h, double c) {
    MultilinearForm f(h.n, h.k);
    f.h_ = std::make_shared<Hypergraph>(std::move(h));
    f.terms_ = {{1.0, FormKind::adjacency}, {-c, FormKind::all_ones}};
    return f;
  }
  static double uniform_density(const Hypergraph& h) {
    return static_cast<double>(factorial(h.k)) *
           static_cast<double>(h.edges.size()) /
           static_cast<double>(detail::int_power(h.n, h.k));
  }

  int dim() const { return n_; }
  int order() const { return k_; }
  bool is_symmetric() const { return true; }
  const std::vector<FormTerm>& terms() const { return terms_; }
  const Hypergraph* hypergraph() const { return h_.get(); }

  /// Exact multilinear evaluation on k vectors.
  double eval(const std::vector<Vector>& xs) const {
    if (static_cast<int>(xs.size()) != k_)
      throw std::invalid_argument("eval: expected " + std::to_string(k_) + " vectors");
    for (const auto& x : xs)
      if (x.size() != n_)
        throw std::invalid_argument("eval: vector length mismatch");
    double total = 0.0;
    for (const auto& t : terms_) total += t.coeff * eval_kind(t.kind, xs);
    return total;
  }

  /// phi(x,..,x) via the closed forms.
  double eval_sym(const Vector& x) const {
    if (x.size() != n_) throw std::invalid_argument("eval_sym: length mismatch");
    double total = 0.0;
    for (const auto& t : terms_) total += t.coeff * eval_sym_kind(t.kind, x);
    return total;
  }

  /// Vector of phi(x,..,x,e_j) over j.
  Vector grad_sym(const Vector& x) const {
    if (x.size() != n_) throw std::invalid_argument("grad_sym: length mismatch");
    Vector g = Vector::Zero(n_);
    for (const auto& t : terms_) grad_sym_kind(t.kind, x, t.coeff, g);
    return g;
  }

  /// Bound on the absolute value of any coefficient of the form.
  double entry_bound() const {
    double b = 0.0;
    for (const auto& t : terms_) b += std::abs(t.coeff);
    return b;
  }

  /// True when the form vanishes on every index tuple with a repeat.
  bool zero_on_repeated() const {
    for (const auto& t : terms_)
      if (t.kind != FormKind::adjacency && t.kind != FormKind::complete)
        return false;
    return true;
  }

  /// phi(1,..,1) / n^{k/2}, with the numerator carried in exact integer
  /// arithmetic per term.
  double exact_ones_ratio() const {
    double num = 0.0;
    for (const auto& t : terms_)
      num += t.coeff * static_cast<double>(ones_count(t.kind));
    return num / detail::half_power(n_, k_);
  }

  /// Dense coefficient matrix; only meaningful for k = 2.
  Matrix dense_matrix() const {
    if (k_ != 2) throw std::invalid_argument("dense_matrix: needs k = 2");
    Matrix m = Matrix::Zero(n_, n_);
    for (const auto& t : terms_) {
      switch (t.kind) {
        case FormKind::adjacency:
          for (const auto& e : h_->edges) {
            m(e[0], e[1]) += t.coeff;
            m(e[1], e[0]) += t.coeff;
          }
          break;
        case FormKind::complete:
          m += t.coeff * (Matrix::Ones(n_, n_) - Matrix::Identity(n_, n_));
          break;
        case FormKind::all_ones:
          m += t.coeff * Matrix::Ones(n_, n_);
          break;
        case FormKind::diagonal_gap:
          m += t.coeff * Matrix::Identity(n_, n_);
          break;
      }
    }
    return m;
  }

 private:
  MultilinearForm(int n, int k) : n_(n), k_(k) {
    if (k < 2) throw std::invalid_argument("forms need k >= 2");
  }

  std::int64_t ones_count(FormKind kind) const {
    switch (kind) {
      case FormKind::adjacency:
        return factorial(k_) * static_cast<std::int64_t>(h_->edges.size());
      case FormKind::complete:
        return falling_factorial(n_, k_);
      case FormKind::all_ones:
        return detail::int_power(n_, k_);
      case FormKind::diagonal_gap:
        return detail::int_power(n_, k_) - falling_factorial(n_, k_);
    }
    return 0;
  }

  double eval_kind(FormKind kind, const std::vector<Vector>& xs) const {
    switch (kind) {
      case FormKind::adjacency: {
        double s = 0.0;
        std::vector<int> perm(static_cast<std::size_t>(k_));
        for (const auto& e : h_->edges) {
          for (int i = 0; i < k_; ++i) perm[static_cast<std::size_t>(i)] = e[static_cast<std::size_t>(i)];
          std::sort(perm.begin(), perm.end());
          do {
            double p = 1.0;
            for (int i = 0; i < k_; ++i) p *= xs[static_cast<std::size_t>(i)](perm[static_cast<std::size_t>(i)]);
            s += p;
          } while (std::next_permutation(perm.begin(), perm.end()));
        }
        return s;
      }
      case FormKind::complete:
        return complete_mixed(xs);
      case FormKind::all_ones: {
        double p = 1.0;
        for (const auto& x : xs) p *= x.sum();
        return p;
      }
      case FormKind::diagonal_gap: {
        double p = 1.0;
        for (const auto& x : xs) p *= x.sum();
        return p - complete_mixed(xs);
      }
    }
    return 0.0;
  }

  // distinct-index sum via the Moebius expansion over set partitions of the
  // slot set
  double complete_mixed(const std::vector<Vector>& xs) const {
    static thread_local std::vector<std::vector<SetPartition>> cache;
    if (static_cast<int>(cache.size()) <= k_) cache.resize(static_cast<std::size_t>(k_) + 1);
    auto& parts = cache[static_cast<std::size_t>(k_)];
    if (parts.empty()) parts = set_partitions(k_);
    double total = 0.0;
    for (const auto& p : parts) {
      double term = p.mu;
      for (unsigned b : p.blocks) {
        double s = 0.0;
        for (Eigen::Index j = 0; j < n_; ++j) {
          double prod = 1.0;
          for (int i = 0; i < k_; ++i)
            if (b & (1u << i)) prod *= xs[static_cast<std::size_t>(i)](j);
          s += prod;
        }
        term *= s;
      }
      total += term;
    }
    return total;
  }

  double eval_sym_kind(FormKind kind, const Vector& x) const {
    switch (kind) {
      case FormKind::adjacency: {
        double s = 0.0;
        for (const auto& e : h_->edges) {
          double p = 1.0;
          for (int v : e) p *= x(v);
          s += p;
        }
        return static_cast<double>(factorial(k_)) * s;
      }
      case FormKind::complete:
        return static_cast<double>(factorial(k_)) *
               detail::elementary_symmetric(x, k_)[static_cast<std::size_t>(k_)];
      case FormKind::all_ones:
        return std::pow(x.sum(), k_);
      case FormKind::diagonal_gap:
        return std::pow(x.sum(), k_) -
               static_cast<double>(factorial(k_)) *
                   detail::elementary_symmetric(x, k_)[static_cast<std::size_t>(k_)];
    }
    return 0.0;
  }

  void grad_sym_kind(FormKind kind, const Vector& x, double coeff, Vector& g) const {
    const double fk1 = static_cast<double>(factorial(k_ - 1));
    switch (kind) {
      case FormKind::adjacency: {
        for (const auto& e : h_->edges)
          for (std::size_t i = 0; i < e.size(); ++i) {
            double p = 1.0;
            for (std::size_t j = 0; j < e.size(); ++j)
              if (j != i) p *= x(e[j]);
            g(e[i]) += coeff * fk1 * p;
          }
        return;
      }
      case FormKind::all_ones: {
        g.array() += coeff * std::pow(x.sum(), k_ - 1);
        return;
      }
      case FormKind::complete: {
        add_complete_grad(x, coeff * fk1, g);
        return;
      }
      case FormKind::diagonal_gap: {
        g.array() += coeff * std::pow(x.sum(), k_ - 1);
        add_complete_grad(x, -coeff * fk1, g);
        return;
      }
    }
  }

  // e_{k-1} of x with coordinate j removed, via e_t(x \ j) = e_t - x_j e_{t-1}(x \ j)
  void add_complete_grad(const Vector& x, double scale, Vector& g) const {
    const auto e = detail::elementary_symmetric(x, k_ - 1);
    std::vector<double> drop(static_cast<std::size_t>(k_), 0.0);
    for (Eigen::Index j = 0; j < n_; ++j) {
      drop[0] = 1.0;
      for (int t = 1; t <= k_ - 1; ++t)
        drop[static_cast<std::size_t>(t)] =
            e[static_cast<std::size_t>(t)] - x(j) * drop[static_cast<std::size_t>(t) - 1];
      g(j) += scale * drop[static_cast<std::size_t>(k_) - 1];
    }
  }

  int n_;
  int k_;
  std::vector<FormTerm> terms_;
  std::shared_ptr<const Hypergraph> h_;
};

/// Ordered partite edge count e_H(V_1,..,V_k); the V_i need not be disjoint.
inline std::int64_t count_e(const Hypergraph& h,
                            const std::vector<std::vector<int>>& sets) {
  if (static_cast<int>(sets.size()) != h.k)
    throw std::invalid_argument("count_e: expected k subsets");
  std::vector<unsigned> member(static_cast<std::size_t>(h.n), 0);
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (int v : sets[i]) {
      if (v < 0 || v >= h.n) throw std::invalid_argument("count_e: vertex out of range");
      member[static_cast<std::size_t>(v)] |= 1u << i;
    }
  std::int64_t count = 0;
  std::vector<int> perm(static_cast<std::size_t>(h.k));
  for (const auto& e : h.edges) {
    for (int i = 0; i < h.k; ++i) perm[static_cast<std::size_t>(i)] = e[static_cast<std::size_t>(i)];
    do {
      bool ok = true;
      for (int i = 0; i < h.k; ++i)
        if (!(member[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] & (1u << i))) {
          ok = false;
          break;
        }
      count += ok;
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return count;
}

struct SpectralOptions {
  int starts = 32;
  int max_iters = 5000;
  double tol = 1e-9;
  std::uint64_t seed = 0;
};

struct SpectralEstimate {
  double value = 0.0;        // certified lower bound on the norm
  Vector witness;            // best single direction found (unit)
  double witness_value = 0.0;  // |phi(w,..,w)| for the stored witness
  double tuple_value = 0.0;  // best multilinear ratio over supplied tuples
  int starts_used = 0;
  int iterations = 0;  // iterations of the winning run
  bool converged = false;
  double shift = 0.0;
};

struct DNormBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Closed-form envelope for the norm of the diagonal-gap form:
/// (n^k - n!/(n-k)!) / n^{k/2} from the all-ones direction, and
/// k^2 n^{(k-2)/2} from the row-sum argument.
inline DNormBounds d_norm_bounds(int n, int k) {
  if (n < k || k < 2) throw std::invalid_argument("d_norm_bounds: need n >= k >= 2");
  DNormBounds b;
  b.lower = static_cast<double>(detail::int_power(n, k) - falling_factorial(n, k)) /
            detail::half_power(n, k);
  b.upper = static_cast<double>(k) * static_cast<double>(k) *
            detail::half_power(n, k - 2);
  return b;
}

namespace detail {

template <class Form>
struct AscentResult {
  double best_abs = 0.0;
  Vector best_x;
  bool converged = false;
  int iters = 0;
};

/// Shifted symmetric power ascent on sign*phi. Tracks the best |phi| ratio
/// over all iterates, so the outcome is a valid lower bound even before
/// convergence.
template <class Form>
AscentResult<Form> ascend(const Form& phi, Vector x, double sign, double shift,
                          const SpectralOptions& opt) {
  AscentResult<Form> r;
  const double nx = x.norm();
  if (nx == 0.0) {
    r.best_x = Vector::Zero(phi.dim());
    return r;
  }
  x /= nx;
  double signed_val = sign * phi.eval_sym(x);
  r.best_abs = std::abs(signed_val);
  r.best_x = x;
  for (int it = 1; it <= opt.max_iters; ++it) {
    Vector y = sign * phi.grad_sym(x) + shift * x;
    const double ny = y.norm();
    if (!(ny > 1e-300)) {
      r.converged = true;
      r.iters = it;
      break;
    }
    x = y / ny;
    const double prev = signed_val;
    signed_val = sign * phi.eval_sym(x);
    const double a = std::abs(signed_val);
    if (a > r.best_abs) {
      r.best_abs = a;
      r.best_x = x;
    }
    r.iters = it;
    if (std::abs(signed_val - prev) <= opt.tol * std::max(1.0, std::abs(signed_val))) {
      r.converged = true;
      break;
    }
  }
  return r;
}

}  // namespace detail

/// Multi-start lower-bound estimate of the spectral norm of a symmetric form.
/// Starts: the all-ones direction, caller-supplied witness vectors, and
/// opt.starts random unit vectors drawn from per-start counter streams (so a
/// longer start list extends a shorter one). Each start is ascended on both
/// +phi and -phi. Witness tuples contribute their full multilinear ratio to
/// the returned value, which makes the estimate dominate any discrepancy
/// ratio whose maximizer is passed in.
template <class Form>
SpectralEstimate spectral_norm_estimate(
    const Form& phi, const SpectralOptions& opt = {},
    const std::vector<Vector>& witness_vectors = {},
    const std::vector<std::vector<Vector>>& witness_tuples = {}) {
  if (!phi.is_symmetric())
    throw std::invalid_argument("spectral_norm_estimate: form must be symmetric");
  if (opt.starts < 1)
    throw std::invalid_argument("spectral_norm_estimate: starts must be >= 1");
  const int n = phi.dim();
  SpectralEstimate est;
  est.shift = phi.order() * phi.entry_bound();

  std::vector<Vector> starts;
  starts.push_back(Vector::Ones(n));
  for (const auto& w : witness_vectors)
    if (w.size() == n && w.norm() > 0.0) starts.push_back(w);
  for (int s = 0; s < opt.starts; ++s) {
    CounterRng rng(opt.seed, static_cast<std::uint64_t>(s));
    Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = rng.next_normal();
    if (v.norm() == 0.0) v(0) = 1.0;
    starts.push_back(v);
  }
  est.starts_used = static_cast<int>(starts.size());

  for (const auto& s : starts)
    for (double sign : {1.0, -1.0}) {
      auto r = detail::ascend(phi, s, sign, est.shift, opt);
      if (r.best_abs > est.witness_value || est.witness.size() == 0) {
        est.witness_value = std::max(est.witness_value, r.best_abs);
        est.witness = r.best_x;
        est.converged = r.converged;
        est.iterations = r.iters;
      }
    }

  // exact closed-form ratio in the all-ones direction, when the form offers it
  if constexpr (requires { phi.exact_ones_ratio(); }) {
    est.value = std::max(est.witness_value, std::abs(phi.exact_ones_ratio()));
  } else {
    est.value = est.witness_value;
  }

  if constexpr (requires { phi.eval(witness_tuples.front()); }) {
    for (const auto& tuple : witness_tuples) {
      if (static_cast<int>(tuple.size()) != phi.order()) continue;
      double denom = 1.0;
      bool ok = true;
      for (const auto& x : tuple) {
        const double nv = x.norm();
        if (x.size() != n || nv == 0.0) {
          ok = false;
          break;
        }
        denom *= nv;
      }
      if (!ok) continue;
      est.tuple_value = std::max(
          est.tuple_value, std::abs(phi.eval(tuple)) / denom);
    }
  }
  est.value = std::max(est.value, est.tuple_value);
  if (est.witness.size() == 0) est.witness = Vector::Zero(n);
  return est;
}

}  // namespace specmix
