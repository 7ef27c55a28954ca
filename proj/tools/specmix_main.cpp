// Command-line front door for the spectral / discrepancy toolkit.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "specmix/specmix.hpp"

namespace {

void add_budget_opts(CLI::App* cmd, specmix::RunConfig& cfg) {
  cmd->add_option("--max-states", cfg.max_states,
                  "enumeration state budget (default 1e8)");
  cmd->add_flag("--force", cfg.force, "run past the enumeration budget");
}

void add_optimizer_opts(CLI::App* cmd, specmix::RunConfig& cfg) {
  cmd->add_option("--starts", cfg.starts, "random optimizer starts");
  cmd->add_option("--iters", cfg.max_iters, "optimizer iteration cap");
  cmd->add_option("--tol", cfg.tol, "optimizer convergence tolerance");
}

void print_summary(const nlohmann::json& report) {
  if (report.contains("error")) {
    std::fprintf(stderr, "error: %s\n",
                 report.at("error").get<std::string>().c_str());
    return;
  }
  if (!report.contains("report")) return;
  const auto& r = report.at("report");
  if (r.contains("statement"))
    std::printf("statement: %s\n", r.at("statement").get<std::string>().c_str());
  for (const char* key : {"rho", "min_margin", "fitted_constant"})
    if (r.contains(key) && r.at(key).is_number())
      std::printf("%s: %.12g\n", key, r.at(key).get<double>());
  if (r.contains("pass"))
    std::printf("pass: %s\n", r.at("pass").get<bool>() ? "true" : "false");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral and combinatorial discrepancy toolkit for simplicial "
               "complexes and uniform hypergraphs"};
  app.require_subcommand(1);

  specmix::RunConfig cfg;
  int workers = specmix::env_workers();
  app.add_option("--workers", workers, "worker threads (results are identical "
                                       "for any count)");

  auto* gen = app.add_subcommand("gen", "generate an object file");
  gen->require_subcommand(1);
  auto* genc = gen->add_subcommand("complex", "simplicial complex");
  genc->add_option("--kind", cfg.kind, "complete|empty|lm")->required();
  genc->add_option("--n", cfg.n, "vertex count")->required();
  genc->add_option("--d", cfg.d, "dimension")->required();
  genc->add_option("--p", cfg.p, "facet probability (lm)");
  genc->add_option("--seed", cfg.seed, "seed (lm)");
  genc->add_option("--out", cfg.output, "object path")->required();
  auto* genh = gen->add_subcommand("hypergraph", "k-uniform hypergraph");
  genh->add_option("--kind", cfg.kind, "complete|gnp")->required();
  genh->add_option("--n", cfg.n, "vertex count")->required();
  genh->add_option("--k", cfg.k, "uniformity")->required();
  genh->add_option("--alpha", cfg.alpha, "edge probability (gnp)");
  genh->add_option("--seed", cfg.seed, "seed (gnp)");
  genh->add_option("--out", cfg.output, "object path")->required();

  auto* spectrum = app.add_subcommand("spectrum", "spectral quantities of an object");
  spectrum->add_option("--in", cfg.input, "object path")->required();
  spectrum->add_option("--alpha", cfg.alpha, "density parameter");
  spectrum->add_option("--seed", cfg.seed, "optimizer seed");
  spectrum->add_option("--out", cfg.output, "report path");
  add_optimizer_opts(spectrum, cfg);

  auto* disc = app.add_subcommand("discrepancy", "rho of an object");
  disc->add_option("--in", cfg.input, "object path")->required();
  disc->add_option("--alpha", cfg.alpha, "density parameter");
  disc->add_option("--mode", cfg.mode,
                   "exhaustive|singleton-tail|singleton-witness|sample");
  disc->add_option("--samples", cfg.samples, "sample count (sample mode)");
  disc->add_option("--seed", cfg.seed, "sample seed");
  disc->add_option("--out", cfg.output, "report path");
  add_budget_opts(disc, cfg);

  auto* verify = app.add_subcommand("verify", "verify a statement");
  verify->require_subcommand(1);
  const char* names[] = {"mixing", "inverse", "fw", "lemmas", "bilu-linial"};
  const char* descs[] = {"partite-count inequality against the spectral bound",
                         "inverse bound from the exhaustive discrepancy",
                         "all-pairs vs density-centered comparison",
                         "constructive lemma suite on a hypergraph",
                         "centered-matrix hypotheses and fitted constant"};
  for (int i = 0; i < 5; ++i) {
    auto* sub = verify->add_subcommand(names[i], descs[i]);
    sub->add_option("--in", cfg.input, "object path")->required();
    sub->add_option("--alpha", cfg.alpha, "density parameter");
    sub->add_option("--out", cfg.output, "report path");
    sub->add_option("--seed", cfg.seed, "seed");
    add_budget_opts(sub, cfg);
    add_optimizer_opts(sub, cfg);
    if (std::string(names[i]) == "lemmas")
      sub->add_option("--samples", cfg.samples, "identity-check tuples");
    if (std::string(names[i]) == "bilu-linial")
      sub->add_option("--m", cfg.m_bound, "row l1 budget (0 = derive)");
  }

  auto* exp = app.add_subcommand("experiment", "batch experiments");
  auto* rr = exp->add_subcommand("random-rho", "rho of random hypergraphs");
  rr->add_option("--n", cfg.n, "vertex count")->required();
  rr->add_option("--k", cfg.k, "uniformity")->required();
  rr->add_option("--alpha", cfg.alpha, "edge probability")->required();
  rr->add_option("--seeds", cfg.seeds, "number of seeds")->required();
  rr->add_option("--delta", cfg.delta, "tail probability (0 = e^-n)");
  rr->add_option("--out", cfg.output, "report path");
  rr->add_option("--csv", cfg.csv, "per-seed csv path");
  add_budget_opts(rr, cfg);
  add_optimizer_opts(rr, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints message / help text
    return code == 0 ? 0 : 2;     // usage errors map to exit 2
  }

  if (gen->parsed())
    cfg.command = genc->parsed() ? "gen-complex" : "gen-hypergraph";
  else if (spectrum->parsed())
    cfg.command = "spectrum";
  else if (disc->parsed())
    cfg.command = "discrepancy";
  else if (verify->parsed()) {
    for (int i = 0; i < 5; ++i)
      if (verify->get_subcommand(names[i])->parsed())
        cfg.command = std::string("verify-") + names[i];
  } else if (exp->parsed()) {
    cfg.command = "experiment-random-rho";
  }

  const auto result = specmix::run_config(cfg, workers);
  print_summary(result.report);
  if (result.exit_code == 0 &&
      (cfg.command == "gen-complex" || cfg.command == "gen-hypergraph"))
    std::printf("wrote %s\n", cfg.output.c_str());
  return result.exit_code;
}
