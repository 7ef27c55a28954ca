#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace specmix {

/// Exact binomial coefficient. Desk-scale arguments keep the value well
/// inside 64 bits.
inline std::int64_t binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// n! / (n-k)!
inline std::int64_t falling_factorial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::int64_t r = 1;
  for (int i = 0; i < k; ++i) r *= (n - i);
  return r;
}

inline std::int64_t factorial(int k) { return falling_factorial(k, k); }

/// All size-m subsets of {0,..,n-1}, each ascending, in lexicographic order.
inline std::vector<std::vector<int>> all_subsets(int n, int m) {
  std::vector<std::vector<int>> out;
  if (m < 0 || m > n) return out;
  if (m == 0) {
    out.emplace_back();
    return out;
  }
  std::vector<int> cur(m);
  for (int i = 0; i < m; ++i) cur[i] = i;
  while (true) {
    out.push_back(cur);
    int i = m - 1;
    while (i >= 0 && cur[i] == n - m + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < m; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

/// Lexicographic rank of an ascending size-m subset among all_subsets(n, m).
inline std::int64_t subset_rank(const std::vector<int>& s, int n) {
  const int m = static_cast<int>(s.size());
  std::int64_t rank = 0;
  int lo = 0;
  for (int i = 0; i < m; ++i) {
    for (int v = lo; v < s[i]; ++v) rank += binomial(n - 1 - v, m - 1 - i);
    lo = s[i] + 1;
  }
  return rank;
}

/// Parity (+1/-1) of a permutation of {0,..,m-1}, by cycle count.
inline int permutation_parity(const std::vector<int>& perm) {
  const int m = static_cast<int>(perm.size());
  std::vector<char> seen(m, 0);
  int sign = 1;
  for (int i = 0; i < m; ++i) {
    if (seen[i]) continue;
    int len = 0;
    for (int j = i; !seen[j]; j = perm[j]) {
      seen[j] = 1;
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

/// Sorts `values` ascending and returns the parity of the sorting permutation.
/// Values must be distinct.
inline int sort_with_parity(std::vector<int>& values) {
  const int m = static_cast<int>(values.size());
  int sign = 1;
  for (int i = 0; i < m; ++i) {
    int arg = i;
    for (int j = i + 1; j < m; ++j)
      if (values[j] < values[arg]) arg = j;
    if (arg != i) {
      std::swap(values[i], values[arg]);
      sign = -sign;
    }
    if (i > 0 && values[i] == values[i - 1])
      throw std::invalid_argument("sort_with_parity: repeated value");
  }
  return sign;
}

/// Set partitions of {0,..,k-1}. Blocks are encoded as bitmasks; `mu` is the
/// Moebius weight prod_B (-1)^{|B|-1} (|B|-1)! used to turn products of
/// block-wise sums into a distinct-index sum.
struct SetPartition {
  std::vector<unsigned> blocks;
  double mu = 1.0;
};

inline std::vector<SetPartition> set_partitions(int k) {
  std::vector<SetPartition> out;
  std::vector<unsigned> blocks;
  auto rec = [&](auto&& self, int item) -> void {
    if (item == k) {
      SetPartition p;
      p.blocks = blocks;
      p.mu = 1.0;
      for (unsigned b : p.blocks) {
        const int sz = __builtin_popcount(b);
        double w = 1.0;
        for (int i = 1; i < sz; ++i) w *= i;
        if (sz % 2 == 0) w = -w;
        p.mu *= w;
      }
      out.push_back(std::move(p));
      return;
    }
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      blocks[b] |= 1u << item;
      self(self, item + 1);
      blocks[b] &= ~(1u << item);
    }
    blocks.push_back(1u << item);
    self(self, item + 1);
    blocks.pop_back();
  };
  rec(rec, 0);
  return out;
}

}  // namespace specmix
