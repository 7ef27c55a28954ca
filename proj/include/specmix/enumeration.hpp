#pragma once

#include <atomic>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace specmix {

struct SweepBudget {
  std::int64_t max_states = 100'000'000;
  bool force = false;
};

struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// base^n, saturating at a large sentinel.
inline std::int64_t pow_states(std::int64_t base, int n) {
  std::int64_t r = 1;
  for (int i = 0; i < n; ++i) {
    if (r > (std::int64_t{1} << 62) / base) return std::int64_t{1} << 62;
    r *= base;
  }
  return r;
}

inline void check_budget(std::int64_t states, const SweepBudget& budget,
                         const std::string& what) {
  if (!budget.force && states > budget.max_states)
    throw BudgetError(what + ": " + std::to_string(states) +
                      " states exceed budget " +
                      std::to_string(budget.max_states) +
                      " (pass force to override)");
}

namespace detail {

template <class Visitor>
void sweep_rec(const std::vector<std::vector<int>>& candidates, int v,
               Visitor& vis) {
  if (v == static_cast<int>(candidates.size())) {
    vis.leaf();
    return;
  }
  for (int lab : candidates[v]) {
    vis.assign(v, lab);
    sweep_rec(candidates, v + 1, vis);
    vis.unassign(v, lab);
  }
}

}  // namespace detail

/// Depth-first sweep over all per-vertex label assignments, candidates[v]
/// listing the labels vertex v may take. Work is split into blocks by the
/// labels of the first two vertices; every block result is merged in block
/// order via Visitor::join, so the outcome is independent of the worker
/// count. Visitor must be copyable and support assign/unassign/leaf/join.
template <class Visitor>
Visitor sweep_labelings(const std::vector<std::vector<int>>& candidates,
                        const Visitor& root, int workers) {
  const int n = static_cast<int>(candidates.size());
  if (n == 0) {
    Visitor v = root;
    v.leaf();
    return v;
  }
  const int split = std::min(2, n);
  std::int64_t blocks = 1;
  for (int v = 0; v < split; ++v)
    blocks *= static_cast<std::int64_t>(candidates[v].size());

  auto run_block = [&](std::int64_t block, Visitor& vis) {
    std::int64_t rem = block;
    std::vector<int> prefix(split);
    for (int v = split - 1; v >= 0; --v) {
      const auto& cand = candidates[v];
      prefix[v] = cand[rem % cand.size()];
      rem /= static_cast<std::int64_t>(cand.size());
    }
    for (int v = 0; v < split; ++v) vis.assign(v, prefix[v]);
    detail::sweep_rec(candidates, split, vis);
    for (int v = split - 1; v >= 0; --v) vis.unassign(v, prefix[v]);
  };

  workers = std::max(1, workers);
  if (workers == 1 || blocks == 1) {
    Visitor vis = root;
    for (std::int64_t b = 0; b < blocks; ++b) run_block(b, vis);
    return vis;
  }

  std::vector<Visitor> results(static_cast<std::size_t>(blocks), root);
  std::atomic<std::int64_t> next{0};
  auto work = [&]() {
    while (true) {
      const std::int64_t b = next.fetch_add(1);
      if (b >= blocks) break;
      run_block(b, results[static_cast<std::size_t>(b)]);
    }
  };
  std::vector<std::thread> pool;
  const int nthreads = static_cast<int>(std::min<std::int64_t>(workers, blocks));
  pool.reserve(static_cast<std::size_t>(nthreads));
  for (int t = 0; t < nthreads; ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();

  Visitor out = root;
  for (std::int64_t b = 0; b < blocks; ++b)
    out.join(results[static_cast<std::size_t>(b)]);
  return out;
}

/// Incremental count of top cells / edges whose vertices carry exactly the
/// labels 1..parts, one each (label 0 = not in any part, -1 = unassigned).
/// An edge is tested once its highest vertex is assigned, which is valid
/// because the sweep assigns vertices in increasing order.
class DistinctLabelCounter {
 public:
  DistinctLabelCounter() = default;

  DistinctLabelCounter(int n, int parts,
                       const std::vector<std::vector<int>>& tops)
      : n_(n), parts_(parts), labels_(static_cast<std::size_t>(n), -1),
        contrib_(static_cast<std::size_t>(n), 0) {
    offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
    for (const auto& t : tops) ++offsets_[static_cast<std::size_t>(t.back()) + 1];
    for (std::size_t i = 1; i < offsets_.size(); ++i) offsets_[i] += offsets_[i - 1];
    flat_.resize(tops.size() * static_cast<std::size_t>(parts));
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (const auto& t : tops) {
      const std::size_t slot = cursor[static_cast<std::size_t>(t.back())]++;
      for (int j = 0; j < parts_; ++j)
        flat_[slot * static_cast<std::size_t>(parts_) + static_cast<std::size_t>(j)] = t[static_cast<std::size_t>(j)];
    }
  }

  void assign(int v, int label) {
    labels_[static_cast<std::size_t>(v)] = label;
    std::int64_t add = 0;
    const std::size_t lo = offsets_[static_cast<std::size_t>(v)];
    const std::size_t hi = offsets_[static_cast<std::size_t>(v) + 1];
    const unsigned full = (1u << (parts_ + 1)) - 2u;  // labels 1..parts
    for (std::size_t e = lo; e < hi; ++e) {
      unsigned mask = 0;
      const int* verts = &flat_[e * static_cast<std::size_t>(parts_)];
      for (int j = 0; j < parts_; ++j) {
        const int l = labels_[static_cast<std::size_t>(verts[j])];
        if (l <= 0) {
          mask = 0;
          break;
        }
        mask |= 1u << l;
      }
      if (mask == full) ++add;
    }
    contrib_[static_cast<std::size_t>(v)] = add;
    count_ += add;
  }

  void unassign(int v) {
    count_ -= contrib_[static_cast<std::size_t>(v)];
    contrib_[static_cast<std::size_t>(v)] = 0;
    labels_[static_cast<std::size_t>(v)] = -1;
  }

  std::int64_t count() const { return count_; }
  const std::vector<int>& labels() const { return labels_; }

 private:
  int n_ = 0;
  int parts_ = 0;
  std::vector<std::size_t> offsets_;  // tops grouped by highest vertex
  std::vector<int> flat_;
  std::vector<int> labels_;
  std::vector<std::int64_t> contrib_;
  std::int64_t count_ = 0;
};

}  // namespace specmix
