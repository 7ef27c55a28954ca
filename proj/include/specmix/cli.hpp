#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "specmix/complexes.hpp"
#include "specmix/hypergraph_mixing.hpp"
#include "specmix/io.hpp"
#include "specmix/lemma_lab.hpp"
#include "specmix/report.hpp"
#include "specmix/simplicial_mixing.hpp"
#include "specmix/tensor_forms.hpp"

namespace specmix {

/// Everything a run depends on. Fully serialized into each report; replaying
/// a report's embedded config reproduces the payload bit-for-bit (wall time
/// aside). The worker count is deliberately not part of the config: results
/// are worker-count independent.
struct RunConfig {
  std::string command;
  std::string input;
  std::string output;
  std::string csv;
  std::string kind;
  int n = 0;
  int d = 2;
  int k = 3;
  double p = 0.5;
  double alpha = std::numeric_limits<double>::quiet_NaN();  // NaN: per-op default
  double delta = 0.0;                                       // 0: e^{-n}
  std::string mode = "exhaustive";
  std::int64_t max_states = 100'000'000;
  bool force = false;
  std::uint64_t seed = 0;
  std::int64_t samples = 0;
  int seeds = 0;
  int starts = 32;
  int max_iters = 5000;
  double tol = 1e-9;
  double m_bound = 0.0;  // bilu-linial row budget; 0: derive from the object
  std::string matrix = "auto";
};

inline nlohmann::json to_json(const RunConfig& c) {
  // an unset alpha serializes as an explicit null (NaN would break payload
  // equality comparisons)
  nlohmann::json alpha;
  if (!std::isnan(c.alpha)) alpha = c.alpha;
  return nlohmann::json{
      {"command", c.command}, {"input", c.input},     {"output", c.output},
      {"csv", c.csv},         {"kind", c.kind},       {"n", c.n},
      {"d", c.d},             {"k", c.k},             {"p", c.p},
      {"alpha", alpha},       {"delta", c.delta},     {"mode", c.mode},
      {"max_states", c.max_states},                   {"force", c.force},
      {"seed", c.seed},       {"samples", c.samples}, {"seeds", c.seeds},
      {"starts", c.starts},   {"max_iters", c.max_iters},
      {"tol", c.tol},         {"m_bound", c.m_bound}, {"matrix", c.matrix}};
}

inline RunConfig run_config_from_json(const nlohmann::json& j) {
  RunConfig c;
  c.command = j.value("command", "");
  c.input = j.value("input", "");
  c.output = j.value("output", "");
  c.csv = j.value("csv", "");
  c.kind = j.value("kind", "");
  c.n = j.value("n", 0);
  c.d = j.value("d", 2);
  c.k = j.value("k", 3);
  c.p = j.value("p", 0.5);
  c.alpha = j.contains("alpha") && j.at("alpha").is_number()
                ? j.at("alpha").get<double>()
                : std::numeric_limits<double>::quiet_NaN();
  c.delta = j.value("delta", 0.0);
  c.mode = j.value("mode", "exhaustive");
  c.max_states = j.value("max_states", std::int64_t{100'000'000});
  c.force = j.value("force", false);
  c.seed = j.value("seed", std::uint64_t{0});
  c.samples = j.value("samples", std::int64_t{0});
  c.seeds = j.value("seeds", 0);
  c.starts = j.value("starts", 32);
  c.max_iters = j.value("max_iters", 5000);
  c.tol = j.value("tol", 1e-9);
  c.m_bound = j.value("m_bound", 0.0);
  c.matrix = j.value("matrix", "auto");
  return c;
}

struct RunResult {
  int exit_code = 0;
  nlohmann::json report;
};

namespace detail {

inline double round_sig(double x, int digits) {
  if (x == 0.0 || !std::isfinite(x)) return x;
  const double mag = std::pow(10.0, digits - 1 - static_cast<int>(std::floor(
                                                     std::log10(std::abs(x)))));
  return std::round(x * mag) / mag;
}

inline nlohmann::json to_json(const SpectralEstimate& e) {
  nlohmann::json w = nlohmann::json::array();
  for (Eigen::Index i = 0; i < e.witness.size(); ++i)
    w.push_back(round_sig(e.witness(i), 6));
  return nlohmann::json{{"value", e.value},
                        {"witness", w},
                        {"witness_value", e.witness_value},
                        {"tuple_value", e.tuple_value},
                        {"starts_used", e.starts_used},
                        {"iterations", e.iterations},
                        {"converged", e.converged},
                        {"shift", e.shift}};
}

inline double default_alpha(const SimplicialComplex& x) {
  return degree_profile(x).mean_degree;
}

inline double default_alpha(const Hypergraph& h) {
  return static_cast<double>(h.edges.size()) /
         static_cast<double>(binomial(h.n, h.k));
}

}  // namespace detail

/// Removes fields that may differ between byte-identical reruns.
inline nlohmann::json strip_volatile(nlohmann::json j) {
  j.erase("wall_time_s");
  return j;
}

/// Executes a config. Exit codes: 0 = checks passed (estimator-gap
/// diagnostics included), 1 = a theorem-backed assertion failed, 2 =
/// usage/budget/schema error.
inline RunResult run_config(const RunConfig& cfg, int workers = 1) {
  const auto t0 = std::chrono::steady_clock::now();
  RunResult result;
  nlohmann::json& out = result.report;
  out["schema"] = "specmix/1";
  out["config"] = to_json(cfg);
  out["conventions"] = report_conventions();

  SweepBudget budget{cfg.max_states, cfg.force};
  SpectralOptions sopt{cfg.starts, cfg.max_iters, cfg.tol, cfg.seed};
  bool theorem_backed = false;
  bool pass = true;

  try {
    if (cfg.command == "gen-complex" || cfg.command == "gen-hypergraph") {
      Object obj;
      if (cfg.command == "gen-complex") {
        ComplexKind kind = cfg.kind == "complete" ? ComplexKind::complete
                           : cfg.kind == "empty"  ? ComplexKind::empty
                           : cfg.kind == "lm" ? ComplexKind::linial_meshulam
                                              : throw std::invalid_argument(
                                                    "gen complex: kind must be "
                                                    "complete|empty|lm");
        obj = gen_complex(kind, cfg.n, cfg.d, cfg.p, cfg.seed);
      } else {
        HypergraphKind kind =
            cfg.kind == "complete" ? HypergraphKind::complete
            : cfg.kind == "gnp"
                ? HypergraphKind::gnp
                : throw std::invalid_argument(
                      "gen hypergraph: kind must be complete|gnp");
        obj = gen_hypergraph(kind, cfg.n, cfg.k,
                             std::isnan(cfg.alpha) ? 0.0 : cfg.alpha, cfg.seed);
      }
      out["object"] = object_to_json(obj);
      if (!cfg.output.empty()) write_object(obj, cfg.output);
    } else if (cfg.command == "spectrum") {
      const Object obj = read_object(cfg.input);
      if (const auto* x = std::get_if<SimplicialComplex>(&obj)) {
        const double alpha =
            std::isnan(cfg.alpha) ? detail::default_alpha(*x) : cfg.alpha;
        const auto basis = kernel_basis(*x);
        out["report"] = {
            {"kind", "simplicial-spectrum"},
            {"n", x->n},
            {"d", x->d},
            {"alpha", alpha},
            {"kernel_dim", basis.q.cols()},
            {"norm_a_restricted",
             restricted_norm(operator_matrix(*x, OperatorKind::adjacency), basis)},
            {"rho_alpha_spectral", rho_alpha_spectral(*x, alpha)},
            {"norm_j_restricted",
             restricted_norm(operator_matrix(*x, OperatorKind::all_pairs), basis)}};
      } else {
        const auto& h = std::get<Hypergraph>(obj);
        const double alpha =
            std::isnan(cfg.alpha) ? detail::default_alpha(h) : cfg.alpha;
        const auto est_fw = spectral_norm_estimate(
            MultilinearForm::allpairs_centered(h, MultilinearForm::uniform_density(h)),
            sopt);
        const auto est_density =
            spectral_norm_estimate(MultilinearForm::density_centered(h, alpha), sopt);
        const auto db = d_norm_bounds(h.n, h.k);
        out["report"] = {{"kind", "hypergraph-spectrum"},
                         {"n", h.n},
                         {"k", h.k},
                         {"alpha", alpha},
                         {"lambda2", detail::to_json(est_fw)},
                         {"lambda2_alpha", detail::to_json(est_density)},
                         {"d_norm_lower", db.lower},
                         {"d_norm_upper", db.upper}};
      }
    } else if (cfg.command == "discrepancy") {
      const Object obj = read_object(cfg.input);
      DiscrepancyReport rep;
      if (const auto* x = std::get_if<SimplicialComplex>(&obj)) {
        const double alpha =
            std::isnan(cfg.alpha) ? detail::default_alpha(*x) : cfg.alpha;
        RhoMode mode = cfg.mode == "exhaustive" ? RhoMode::exhaustive
                       : (cfg.mode == "singleton-tail" || cfg.mode == "singleton")
                           ? RhoMode::singleton_tail
                       : cfg.mode == "sample"
                           ? RhoMode::sample
                           : throw std::invalid_argument(
                                 "discrepancy: mode must be "
                                 "exhaustive|singleton-tail|sample");
        rep = rho_simplicial(*x, alpha, mode, budget, workers, cfg.samples, cfg.seed);
      } else {
        const auto& h = std::get<Hypergraph>(obj);
        const double alpha =
            std::isnan(cfg.alpha) ? detail::default_alpha(h) : cfg.alpha;
        HyperRhoMode mode =
            cfg.mode == "exhaustive" ? HyperRhoMode::exhaustive
            : (cfg.mode == "singleton-witness" || cfg.mode == "singleton")
                ? HyperRhoMode::singleton_witness
            : cfg.mode == "sample"
                ? HyperRhoMode::sample
                : throw std::invalid_argument(
                      "discrepancy: mode must be "
                      "exhaustive|singleton-witness|sample");
        rep = rho_alpha(h, alpha, mode, budget, workers, cfg.samples, cfg.seed);
      }
      out["report"] = to_json(rep);
    } else if (cfg.command == "verify-mixing") {
      const Object obj = read_object(cfg.input);
      VerificationReport rep;
      if (const auto* x = std::get_if<SimplicialComplex>(&obj)) {
        const double alpha =
            std::isnan(cfg.alpha) ? detail::default_alpha(*x) : cfg.alpha;
        rep = verify_mixing_simplicial(*x, alpha, budget, workers);
        theorem_backed = true;
      } else {
        const auto& h = std::get<Hypergraph>(obj);
        const double alpha =
            std::isnan(cfg.alpha) ? detail::default_alpha(h) : cfg.alpha;
        rep = verify_mixing_hypergraph(h, alpha, budget, workers, sopt);
      }
      pass = rep.pass;
      out["report"] = to_json(rep);
    } else if (cfg.command == "verify-inverse") {
      const Object obj = read_object(cfg.input);
      VerificationReport rep;
      theorem_backed = true;
      if (const auto* x = std::get_if<SimplicialComplex>(&obj)) {
        rep = verify_inverse_simplicial(*x, budget, workers);
      } else {
        const auto& h = std::get<Hypergraph>(obj);
        const double alpha =
            std::isnan(cfg.alpha) ? detail::default_alpha(h) : cfg.alpha;
        rep = verify_inverse_hypergraph(h, alpha, budget, workers, sopt);
      }
      pass = rep.pass;
      out["report"] = to_json(rep);
    } else if (cfg.command == "verify-fw") {
      const Object obj = read_object(cfg.input);
      const auto& h = std::get<Hypergraph>(obj);
      const auto rep = verify_fw_comparison(h, budget, workers, sopt);
      theorem_backed = true;
      pass = rep.pass;
      out["report"] = to_json(rep);
    } else if (cfg.command == "verify-lemmas") {
      const Object obj = read_object(cfg.input);
      const auto& h = std::get<Hypergraph>(obj);
      const double alpha =
          std::isnan(cfg.alpha) ? detail::default_alpha(h) : cfg.alpha;
      theorem_backed = true;
      nlohmann::json checks = nlohmann::json::array();
      bool all = true;

      const std::int64_t tuples = cfg.samples > 0 ? cfg.samples : 5;
      for (std::int64_t t = 0; t < tuples; ++t) {
        CounterRng rng(cfg.seed, static_cast<std::uint64_t>(t));
        std::vector<std::vector<int>> sets(static_cast<std::size_t>(h.k));
        std::uint64_t ctr = 0;
        for (int i = 0; i < h.k; ++i)
          for (int v = 0; v < h.n; ++v)
            if (rng.unit_at(ctr++) < 0.5)
              sets[static_cast<std::size_t>(i)].push_back(v);
        auto rep = partition_identity_check(h, sets, budget);
        all = all && rep.pass;
        checks.push_back(to_json(rep));
      }

      bool dyadic_ok = true;
      for (int t = 0; t < 100; ++t) {
        CounterRng rng(cfg.seed ^ 0xabcdULL, static_cast<std::uint64_t>(t));
        Vector x(h.n);
        std::uint64_t ctr = 0;
        for (int i = 0; i < h.n; ++i) {
          const int level = static_cast<int>(rng.unit_at(ctr++) * 5.0);
          const double sgn = rng.unit_at(ctr++) < 0.5 ? -1.0 : 1.0;
          const bool zero = rng.unit_at(ctr++) < 0.25;
          x(i) = zero ? 0.0 : sgn * std::ldexp(1.0, -level);
        }
        const auto layers = dyadic_decompose(x);
        Vector back = Vector::Zero(h.n);
        for (std::size_t l = 0; l < layers.size(); ++l)
          back += std::ldexp(1.0, -static_cast<int>(l)) * layers[l];
        dyadic_ok = dyadic_ok && (back.array() == x.array()).all();
      }
      checks.push_back({{"statement", "dyadic-reconstruction"}, {"pass", dyadic_ok}});
      all = all && dyadic_ok;

      {
        CounterRng rng(cfg.seed ^ 0x5eedULL);
        Vector x(h.n);
        for (int i = 0; i < h.n; ++i) x(i) = (rng.next_unit() - 0.5) * 0.999;
        const auto phi = MultilinearForm::density_centered(h, alpha);
        const double fx = phi.eval_sym(x);
        const int samples = 2000;
        double sum = 0.0, sumsq = 0.0;
        bool norm_ok = true;
        for (int s = 0; s < samples; ++s) {
          const Vector z = randomized_round(x, cfg.seed + 17 + static_cast<std::uint64_t>(s));
          norm_ok = norm_ok && (z.norm() <= 2.0 * x.norm() + 1e-12);
          const double fz = phi.eval_sym(z);
          sum += fz;
          sumsq += fz * fz;
        }
        const double mean = sum / samples;
        const double var = std::max(0.0, sumsq / samples - mean * mean);
        const double stderr_mean = std::sqrt(var / samples);
        const bool mean_ok = std::abs(mean - fx) <= 5.0 * stderr_mean + 1e-9;
        checks.push_back({{"statement", "randomized-rounding"},
                          {"pass", norm_ok && mean_ok},
                          {"target", fx},
                          {"sample_mean", mean},
                          {"stderr", stderr_mean},
                          {"norm_bound_violations", !norm_ok}});
        all = all && norm_ok && mean_ok;
      }
      pass = all;
      out["report"] = {{"statement", "lemma-suite"}, {"pass", all}, {"checks", checks}};
    } else if (cfg.command == "verify-bilu-linial") {
      const Object obj = read_object(cfg.input);
      Matrix m;
      double m_bound = cfg.m_bound;
      if (const auto* x = std::get_if<SimplicialComplex>(&obj)) {
        const auto prof = degree_profile(*x);
        if (!prof.regular)
          throw std::invalid_argument(
              "verify bilu-linial: complex must be regular");
        const double r = static_cast<double>(prof.min_degree);
        m = operator_matrix(*x, OperatorKind::centered_adjacency,
                            r / static_cast<double>(x->n))
                .m;
        if (m_bound == 0.0) m_bound = 2.0 * x->d * r;
      } else {
        const auto& h = std::get<Hypergraph>(obj);
        if (h.k != 2)
          throw std::invalid_argument(
              "verify bilu-linial: hypergraph input must have k = 2");
        const auto prof = degree_profile(h);
        if (!prof.regular)
          throw std::invalid_argument("verify bilu-linial: graph must be regular");
        const double r = static_cast<double>(prof.min_degree);
        const double c = r / static_cast<double>(h.n);
        m = MultilinearForm::density_centered(h, 0.0).dense_matrix();  // adjacency
        m -= c * Matrix::Ones(h.n, h.n);
        m += c * Matrix::Identity(h.n, h.n);
        if (m_bound == 0.0) m_bound = 2.0 * r;
      }
      const auto rep = bilu_linial_check(m, m_bound, budget, workers);
      pass = rep.pass;
      out["report"] = to_json(rep);
    } else if (cfg.command == "experiment-random-rho") {
      const double alpha = std::isnan(cfg.alpha) ? 0.5 : cfg.alpha;
      const auto res = random_rho_experiment(cfg.n, cfg.k, alpha, cfg.seeds,
                                             cfg.delta, budget, workers, sopt);
      theorem_backed = true;
      pass = res.report.pass;
      out["report"] = to_json(res.report);
      nlohmann::json rows = nlohmann::json::array();
      std::string csv =
          "seed,rho,lambda2_hat,lambda2_alpha_hat,below_threshold,above_lower\n";
      char buf[256];
      for (const auto& r : res.rows) {
        rows.push_back({{"seed", r.seed},
                        {"rho", r.rho},
                        {"lambda2_hat", r.lambda2_hat},
                        {"lambda2_alpha_hat", r.lambda2_alpha_hat},
                        {"below_threshold", r.below_threshold},
                        {"above_lower", r.above_lower}});
        std::snprintf(buf, sizeof(buf), "%llu,%.12g,%.12g,%.12g,%d,%d\n",
                      static_cast<unsigned long long>(r.seed), r.rho,
                      r.lambda2_hat, r.lambda2_alpha_hat,
                      r.below_threshold ? 1 : 0, r.above_lower ? 1 : 0);
        csv += buf;
      }
      out["rows"] = rows;
      const std::string csv_path =
          !cfg.csv.empty() ? cfg.csv
                           : (!cfg.output.empty() ? cfg.output + ".csv" : "");
      if (!csv_path.empty()) {
        std::ofstream f(csv_path);
        f << csv;
      }
    } else {
      throw std::invalid_argument("unknown command: " + cfg.command);
    }
  } catch (const BudgetError& e) {
    out["error"] = e.what();
    result.exit_code = 2;
  } catch (const SchemaError& e) {
    out["error"] = e.what();
    result.exit_code = 2;
  } catch (const std::invalid_argument& e) {
    out["error"] = e.what();
    result.exit_code = 2;
  } catch (const TheoremViolation& e) {
    out["error"] = e.what();
    result.exit_code = 1;
  } catch (const std::bad_variant_access&) {
    out["error"] = "object type does not match this command";
    result.exit_code = 2;
  }

  if (result.exit_code == 0 && theorem_backed && !pass) result.exit_code = 1;
  const auto t1 = std::chrono::steady_clock::now();
  out["wall_time_s"] =
      std::chrono::duration_cast<std::chrono::duration<double>>(t1 - t0).count();
  if (result.exit_code != 2 && !cfg.output.empty() &&
      cfg.command != "gen-complex" && cfg.command != "gen-hypergraph")
    write_json_file(out, cfg.output);
  return result;
}

inline int env_workers() {
  if (const char* w = std::getenv("SPECMIX_WORKERS")) {
    const int v = std::atoi(w);
    if (v >= 1) return v;
  }
  return 1;
}

}  // namespace specmix
