#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

namespace specmix {

/// Pairwise-disjoint vertex subsets S_0..S_d (or V_1..V_k), each ascending.
struct DisjointTuple {
  std::vector<std::vector<int>> parts;

  std::vector<std::int64_t> sizes() const {
    std::vector<std::int64_t> s;
    s.reserve(parts.size());
    for (const auto& p : parts) s.push_back(static_cast<std::int64_t>(p.size()));
    return s;
  }
};

/// Labels-per-vertex encoding of a DisjointTuple: 0 = unused, i = part i.
inline DisjointTuple tuple_from_labels(const std::vector<int>& labels, int parts) {
  DisjointTuple t;
  t.parts.resize(static_cast<std::size_t>(parts));
  for (std::size_t v = 0; v < labels.size(); ++v)
    if (labels[v] > 0)
      t.parts[static_cast<std::size_t>(labels[v] - 1)].push_back(static_cast<int>(v));
  return t;
}

struct DiscrepancyReport {
  double rho = 0.0;
  DisjointTuple witness;
  std::vector<int> witness_labels;  // lexicographic tie-break key
  double alpha = 0.0;
  std::string mode;  // "exhaustive" | "singleton-tail" | "singleton-witness" | "sample(...)"
  std::int64_t tuples_examined = 0;
};

struct MarginHistogram {
  double lo = 0.0;
  double hi = 0.0;
  std::array<std::int64_t, 20> bins{};
  std::int64_t total = 0;
};

struct VerificationReport {
  std::string statement;
  nlohmann::json params = nlohmann::json::object();
  double min_margin = std::numeric_limits<double>::infinity();
  MarginHistogram margins;
  bool pass = true;
  bool degenerate = false;
  bool estimator_gap = false;
  double fitted_constant = 0.0;
  std::vector<std::string> flags;
  nlohmann::json details = nlohmann::json::object();
};

inline nlohmann::json to_json(const DisjointTuple& t) {
  nlohmann::json parts = nlohmann::json::array();
  for (const auto& p : t.parts) parts.push_back(p);
  return parts;
}

inline nlohmann::json to_json(const MarginHistogram& h) {
  return nlohmann::json{{"lo", h.lo}, {"hi", h.hi}, {"bins", h.bins}, {"total", h.total}};
}

inline nlohmann::json to_json(const DiscrepancyReport& r) {
  return nlohmann::json{{"rho", r.rho},
                        {"witness", to_json(r.witness)},
                        {"witness_labels", r.witness_labels},
                        {"alpha", r.alpha},
                        {"mode", r.mode},
                        {"tuples_examined", r.tuples_examined}};
}

inline nlohmann::json to_json(const VerificationReport& r) {
  nlohmann::json j{{"statement", r.statement},
                   {"params", r.params},
                   {"min_margin", r.min_margin},
                   {"margins", to_json(r.margins)},
                   {"pass", r.pass},
                   {"degenerate", r.degenerate},
                   {"estimator_gap", r.estimator_gap},
                   {"fitted_constant", r.fitted_constant},
                   {"flags", r.flags},
                   {"details", r.details}};
  return j;
}

/// Conventions embedded in every verification report: which formula variants
/// are in force when the source statements admit more than one reading.
inline nlohmann::json report_conventions() {
  return nlohmann::json{
      {"bound_log_base", 2},
      {"tail_bound_log", "natural"},
      {"r_definition", "max degree over (k-1)-sets / (d-1)-cells"},
      {"witness_lower_denominator", "sqrt((1-alpha)^2 + alpha^2)"},
      {"partition_multiplicity", "k^(n-k)"},
      {"empty_parts", "allowed in mixing checks, excluded from rho maxima"}};
}

/// Exception for violations of statements that hold unconditionally: reaching
/// this is a bug in the artifact, not a property of the input.
struct TheoremViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace specmix
