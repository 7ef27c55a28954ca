#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>

#include "specmix/cli.hpp"

using namespace specmix;
namespace fs = std::filesystem;

namespace {

fs::path tmp_path(const std::string& name) {
  return fs::temp_directory_path() / ("specmix_test_" + name);
}

}  // namespace

TEST_CASE("run config json round trip") {
  RunConfig c;
  c.command = "verify-inverse";
  c.input = "h.json";
  c.alpha = 0.5;
  c.seed = 42;
  c.starts = 7;
  c.force = true;
  const auto back = run_config_from_json(to_json(c));
  CHECK(to_json(back) == to_json(c));

  RunConfig defaulted;  // alpha stays NaN through the round trip
  const auto back2 = run_config_from_json(to_json(defaulted));
  CHECK(std::isnan(back2.alpha));
}

TEST_CASE("gen command writes a loadable object") {
  const auto path = tmp_path("gen_h.json");
  RunConfig c;
  c.command = "gen-hypergraph";
  c.kind = "gnp";
  c.n = 8;
  c.k = 3;
  c.alpha = 0.5;
  c.seed = 1;
  c.output = path.string();
  const auto res = run_config(c);
  REQUIRE(res.exit_code == 0);
  const auto obj = read_object(path.string());
  const auto& h = std::get<Hypergraph>(obj);
  CHECK(h.n == 8);
  CHECK(h.edges == gen_hypergraph(HypergraphKind::gnp, 8, 3, 0.5, 1).edges);
  fs::remove(path);
}

TEST_CASE("reports embed schema, config, and conventions") {
  const auto hpath = tmp_path("conv_h.json");
  write_object(gen_hypergraph(HypergraphKind::gnp, 7, 3, 0.5, 2), hpath.string());
  RunConfig c;
  c.command = "verify-inverse";
  c.input = hpath.string();
  c.alpha = 0.5;
  const auto res = run_config(c);
  REQUIRE(res.exit_code == 0);
  CHECK(res.report.at("schema") == "specmix/1");
  CHECK(res.report.at("conventions").at("bound_log_base") == 2);
  CHECK(res.report.at("conventions").contains("r_definition"));
  CHECK(res.report.at("conventions").contains("witness_lower_denominator"));
  CHECK(res.report.at("report").at("statement") == "hypergraph-inverse-mixing");
  CHECK(res.report.contains("wall_time_s"));
  CHECK(res.report.at("config").at("command") == "verify-inverse");
  fs::remove(hpath);
}

TEST_CASE("rerunning the embedded config reproduces the payload") {
  const auto hpath = tmp_path("rerun_h.json");
  write_object(gen_hypergraph(HypergraphKind::gnp, 8, 3, 0.5, 3), hpath.string());
  RunConfig c;
  c.command = "verify-inverse";
  c.input = hpath.string();
  c.alpha = 0.5;
  const auto first = run_config(c, 1);
  const auto cfg = run_config_from_json(first.report.at("config"));
  const auto second = run_config(cfg, 8);
  CHECK(strip_volatile(first.report) == strip_volatile(second.report));
  fs::remove(hpath);
}

TEST_CASE("worker count never changes a payload") {
  const auto xpath = tmp_path("workers_x.json");
  write_object(gen_complex(ComplexKind::linial_meshulam, 7, 2, 0.5, 4),
               xpath.string());
  for (const char* cmd : {"verify-mixing", "discrepancy"}) {
    RunConfig c;
    c.command = cmd;
    c.input = xpath.string();
    const auto one = run_config(c, 1);
    const auto eight = run_config(c, 8);
    REQUIRE(one.exit_code == eight.exit_code);
    CHECK(strip_volatile(one.report) == strip_volatile(eight.report));
  }
  fs::remove(xpath);
}

TEST_CASE("exit code contract") {
  RunConfig bad;
  bad.command = "spectrum";
  bad.input = tmp_path("missing.json").string();
  CHECK(run_config(bad).exit_code == 2);

  const auto hpath = tmp_path("budget_h.json");
  write_object(gen_hypergraph(HypergraphKind::gnp, 8, 3, 0.5, 1), hpath.string());
  RunConfig tight;
  tight.command = "discrepancy";
  tight.input = hpath.string();
  tight.alpha = 0.5;
  tight.max_states = 10;
  CHECK(run_config(tight).exit_code == 2);
  tight.force = true;
  CHECK(run_config(tight).exit_code == 0);

  RunConfig unknown;
  unknown.command = "frobnicate";
  CHECK(run_config(unknown).exit_code == 2);

  const auto cpath = tmp_path("mix_c.json");
  write_object(gen_complex(ComplexKind::complete, 6, 2), cpath.string());
  RunConfig mix;
  mix.command = "verify-mixing";
  mix.input = cpath.string();
  mix.alpha = 4.0;
  CHECK(run_config(mix).exit_code == 0);
  fs::remove(hpath);
  fs::remove(cpath);
}

TEST_CASE("spectrum, lemmas, fw, and bilu-linial commands run end to end") {
  const auto hpath = tmp_path("cmd_h.json");
  write_object(gen_hypergraph(HypergraphKind::gnp, 7, 3, 0.5, 5), hpath.string());
  const auto cpath = tmp_path("cmd_c.json");
  write_object(gen_complex(ComplexKind::complete, 6, 2), cpath.string());

  for (const char* cmd : {"spectrum", "verify-lemmas", "verify-fw"}) {
    RunConfig c;
    c.command = cmd;
    c.input = hpath.string();
    c.starts = 4;
    c.max_iters = 300;
    const auto res = run_config(c);
    INFO(cmd << ": " << res.report.dump());
    CHECK(res.exit_code == 0);
  }
  RunConfig spec_c;
  spec_c.command = "spectrum";
  spec_c.input = cpath.string();
  const auto sres = run_config(spec_c);
  CHECK(sres.exit_code == 0);
  CHECK(sres.report.at("report").at("norm_j_restricted").get<double>() <= 1e-8);

  RunConfig bl;
  bl.command = "verify-bilu-linial";
  bl.input = cpath.string();
  const auto bres = run_config(bl);
  CHECK(bres.exit_code == 0);
  CHECK(bres.report.at("report").at("params").at("m").get<double>() == 16.0);
  fs::remove(hpath);
  fs::remove(cpath);
}

TEST_CASE("experiment command emits csv rows") {
  const auto out = tmp_path("exp.json");
  const auto csv = tmp_path("exp.csv");
  RunConfig c;
  c.command = "experiment-random-rho";
  c.n = 7;
  c.k = 3;
  c.alpha = 0.5;
  c.seeds = 5;
  c.starts = 2;
  c.max_iters = 200;
  c.output = out.string();
  c.csv = csv.string();
  const auto res = run_config(c);
  REQUIRE(res.exit_code == 0);
  REQUIRE(fs::exists(csv));
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header ==
        "seed,rho,lambda2_hat,lambda2_alpha_hat,below_threshold,above_lower");
  int rows = 0;
  for (std::string line; std::getline(in, line) && !line.empty();) ++rows;
  CHECK(rows == 5);
  CHECK(res.report.at("rows").size() == 5);
  fs::remove(out);
  fs::remove(csv);
}

TEST_CASE("operator csv dump names cells by dashed vertices") {
  const auto a = operator_matrix(gen_complex(ComplexKind::complete, 3, 1),
                                 OperatorKind::adjacency);
  const auto csv = operator_to_csv(a.m, 3, 1);
  CHECK(csv.find("cell,0,1,2") == 0);
  CHECK(csv.find("\n0,0,1,1\n") != std::string::npos);

  const auto j = operator_matrix(gen_complex(ComplexKind::complete, 4, 2),
                                 OperatorKind::all_pairs);
  const auto csv2 = operator_to_csv(j.m, 4, 2);
  CHECK(csv2.find("0-1") != std::string::npos);
}
