#include <catch2/catch_amalgamated.hpp>

#include "specmix/lemma_lab.hpp"

using namespace specmix;

namespace {

Vector vec(std::initializer_list<double> vals) {
  Vector v(static_cast<Eigen::Index>(vals.size()));
  Eigen::Index i = 0;
  for (double x : vals) v(i++) = x;
  return v;
}

}  // namespace

TEST_CASE("sign split") {
  const auto [p1, m1] = sign_split(vec({1, -1, 0}));
  CHECK(p1 == vec({1, 0, 0}));
  CHECK(m1 == vec({0, 1, 0}));
  const auto [p2, m2] = sign_split(Vector::Zero(4));
  CHECK(p2 == Vector::Zero(4));
  CHECK(m2 == Vector::Zero(4));
  const auto [p3, m3] = sign_split(vec({-1, -1, 1, 1}));
  CHECK(p3 == vec({0, 0, 1, 1}));
  CHECK(m3 == vec({1, 1, 0, 0}));
  CHECK_THROWS_AS(sign_split(vec({0.5, 0, 0})), std::invalid_argument);
}

TEST_CASE("dyadic decomposition layers") {
  const auto layers = dyadic_decompose(vec({1.0, -0.5, 0.25}));
  REQUIRE(layers.size() == 3);
  CHECK(layers[0] == vec({1, 0, 0}));
  CHECK(layers[1] == vec({0, -1, 0}));
  CHECK(layers[2] == vec({0, 0, 1}));

  const auto ones = dyadic_decompose(Vector::Ones(5));
  REQUIRE(ones.size() == 1);
  CHECK(ones[0] == Vector::Ones(5));

  const auto halves = dyadic_decompose(vec({0.5, 0.5}));
  REQUIRE(halves.size() == 2);
  CHECK(halves[0] == Vector::Zero(2));
  CHECK(halves[1] == vec({1, 1}));

  CHECK(dyadic_decompose(Vector::Zero(3)).empty());
  CHECK_THROWS_AS(dyadic_decompose(vec({0.3})), std::invalid_argument);
  CHECK_THROWS_AS(dyadic_decompose(vec({2.0})), std::invalid_argument);
}

TEST_CASE("dyadic reconstruction is exact on random dyadic vectors") {
  for (int trial = 0; trial < 1000; ++trial) {
    CounterRng rng(4242, static_cast<std::uint64_t>(trial));
    Vector x(12);
    std::uint64_t c = 0;
    for (int i = 0; i < 12; ++i) {
      const int level = static_cast<int>(rng.unit_at(c++) * 8.0);
      const bool zero = rng.unit_at(c++) < 0.2;
      const double sgn = rng.unit_at(c++) < 0.5 ? -1.0 : 1.0;
      x(i) = zero ? 0.0 : sgn * std::ldexp(1.0, -level);
    }
    const auto layers = dyadic_decompose(x);
    Vector back = Vector::Zero(12);
    for (std::size_t l = 0; l < layers.size(); ++l)
      back += std::ldexp(1.0, -static_cast<int>(l)) * layers[l];
    REQUIRE((back.array() == x.array()).all());
    // disjoint supports and exact norm bookkeeping
    double norm1 = 0.0, norm2sq = 0.0;
    for (std::size_t l = 0; l < layers.size(); ++l) {
      const double s = layers[l].cwiseAbs().sum();
      norm1 += std::ldexp(s, -static_cast<int>(l));
      norm2sq += std::ldexp(s, -2 * static_cast<int>(l));
    }
    REQUIRE(norm1 == x.cwiseAbs().sum());
    REQUIRE(norm2sq == x.squaredNorm());
  }
}

TEST_CASE("dyadic index split") {
  const auto s1 = dyadic_index_split({{0, 0}, {0, 1}, {3, 3}}, 1.0);
  CHECK(s1.near == std::vector<std::vector<int>>{{0, 0}, {3, 3}});
  CHECK(s1.far == std::vector<std::vector<int>>{{0, 1}});

  const auto s2 = dyadic_index_split({{0, 0}, {2, 2}}, 0.0);
  CHECK(s2.near.empty());  // strict inequality
  CHECK(s2.far.size() == 2);

  const auto s3 = dyadic_index_split({{1, 2, 2}}, 2.0);
  CHECK(s3.near.size() == 1);

  CHECK_THROWS_AS(dyadic_index_split({{1}}, -1.0), std::invalid_argument);
  CHECK(dyadic_split_gamma(2.0, 8.0, 4, 2, 4.0) == std::log2(4.0));
}

TEST_CASE("randomized rounding: per-coordinate law") {
  // 0.375 = 2^-2 (1 + 0.5): rounds to 0.25 or 0.5, each about half the time
  int ups = 0;
  const int trials = 4000;
  for (int s = 0; s < trials; ++s) {
    const Vector z = randomized_round(vec({0.375}), static_cast<std::uint64_t>(s));
    REQUIRE((z(0) == 0.25 || z(0) == 0.5));
    ups += z(0) == 0.5;
  }
  CHECK(std::abs(ups / static_cast<double>(trials) - 0.5) < 0.05);

  for (int s = 0; s < 50; ++s) {
    CHECK(randomized_round(vec({0.25}), static_cast<std::uint64_t>(s))(0) == 0.25);
    CHECK(randomized_round(vec({-0.375}), static_cast<std::uint64_t>(s))(0) < 0.0);
  }
  CHECK(randomized_round(Vector::Zero(3), 1) == Vector::Zero(3));
  CHECK_THROWS_AS(randomized_round(vec({0.6}), 1), std::invalid_argument);
}

TEST_CASE("randomized rounding: mean and norm invariants") {
  CounterRng rng(31337);
  Vector x(8);
  for (int i = 0; i < 8; ++i) x(i) = (rng.next_unit() - 0.5) * 0.999;
  const int samples = 10000;
  Vector sum = Vector::Zero(8), sumsq = Vector::Zero(8);
  for (int s = 0; s < samples; ++s) {
    const Vector z = randomized_round(x, 1000 + static_cast<std::uint64_t>(s));
    REQUIRE(z.norm() <= 2.0 * x.norm());  // deterministic, zero exceptions
    for (int i = 0; i < 8; ++i) {
      REQUIRE(detail::dyadic_level(z(i), nullptr));
      sum(i) += z(i);
      sumsq(i) += z(i) * z(i);
    }
  }
  for (int i = 0; i < 8; ++i) {
    const double mean = sum(i) / samples;
    const double var = std::max(0.0, sumsq(i) / samples - mean * mean);
    const double tol = 3.0 * std::sqrt(var) / 100.0;  // 3 * (sample std / sqrt(1e4))
    REQUIRE(std::abs(mean - x(i)) <= tol + 1e-12);
  }
}

TEST_CASE("randomized rounding feeds multilinear forms unbiasedly") {
  const auto h = gen_hypergraph(HypergraphKind::gnp, 8, 3, 0.5, 3);
  const auto phi = MultilinearForm::density_centered(h, 0.5);
  REQUIRE(phi.zero_on_repeated());
  CounterRng rng(555);
  Vector x(8);
  for (int i = 0; i < 8; ++i) x(i) = (rng.next_unit() - 0.5) * 0.999;
  const double target = phi.eval_sym(x);
  const int samples = 10000;
  double sum = 0.0, sumsq = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double fz =
        phi.eval_sym(randomized_round(x, 7000 + static_cast<std::uint64_t>(s)));
    sum += fz;
    sumsq += fz * fz;
  }
  const double mean = sum / samples;
  const double se =
      std::sqrt(std::max(0.0, sumsq / samples - mean * mean) / samples);
  CHECK(std::abs(mean - target) <= 4.0 * se + 1e-12);
}

TEST_CASE("partition identity: examples") {
  const auto complete = gen_hypergraph(HypergraphKind::complete, 5, 3);
  CHECK(partition_identity_check(complete, {{0}, {1}, {2}}).pass);

  Hypergraph empty;
  empty.n = 5;
  empty.k = 3;
  const auto rep = partition_identity_check(empty, {{0, 1}, {2}, {3, 4}});
  CHECK(rep.pass);
  CHECK(rep.details.at("lhs_e_scaled").get<std::int64_t>() == 0);

  const auto g = gen_hypergraph(HypergraphKind::gnp, 6, 3, 0.5, 2);
  CHECK(partition_identity_check(g, {{0, 2, 4}, {1, 3}, {2, 5}}).pass);
}

TEST_CASE("partition identity: 50 random instances") {
  for (int trial = 0; trial < 50; ++trial) {
    CounterRng rng(91, static_cast<std::uint64_t>(trial));
    const int n = 5 + static_cast<int>(rng.unit_at(1000) * 3.0);  // 5..7
    const auto h = gen_hypergraph(HypergraphKind::gnp, n, 3, 0.5,
                                  static_cast<std::uint64_t>(trial));
    std::vector<std::vector<int>> sets(3);
    std::uint64_t c = 0;
    for (int i = 0; i < 3; ++i)
      for (int v = 0; v < n; ++v)
        if (rng.unit_at(c++) < 0.5) sets[static_cast<std::size_t>(i)].push_back(v);
    REQUIRE(partition_identity_check(h, sets).pass);
  }
}

TEST_CASE("centered-matrix hypotheses checker on the complete graph") {
  const int n = 6;
  const Matrix a =
      MultilinearForm::density_centered(gen_hypergraph(HypergraphKind::complete, n, 2), 0.0)
          .dense_matrix();
  const double c = 5.0 / 6.0;
  const Matrix m = a - c * Matrix::Ones(n, n) + c * Matrix::Identity(n, n);
  const auto rep = bilu_linial_check(m, 2.0 * 5.0);
  CHECK(rep.pass);
  CHECK(!rep.degenerate);
  CHECK(rep.details.at("row_bound_holds").get<bool>());
  // M = (1/6)(J - I): beta = (1/6) sqrt(3*3), norm = 5/6
  CHECK(rep.details.at("beta").get<double>() == Catch::Approx(0.5).margin(1e-12));
  CHECK(rep.details.at("norm").get<double>() == Catch::Approx(5.0 / 6.0).margin(1e-10));
  CHECK(std::isfinite(rep.fitted_constant));
}

TEST_CASE("checker degenerates on the zero matrix") {
  const auto rep = bilu_linial_check(Matrix::Zero(5, 5), 1.0);
  CHECK(rep.degenerate);
  CHECK(rep.pass);
}

TEST_CASE("checker accepts the centered simplicial operator with m = 2dr") {
  const auto x = gen_complex(ComplexKind::complete, 6, 2);  // r = 4, d = 2
  const auto b = operator_matrix(x, OperatorKind::centered_adjacency, 4.0 / 6.0);
  const auto rep = bilu_linial_check(b.m, 2.0 * 2.0 * 4.0);
  CHECK(rep.pass);
  CHECK(rep.details.at("row_bound_holds").get<bool>());
  CHECK(rep.details.at("beta").get<double>() > 0.0);
}

TEST_CASE("checker rejects asymmetric or nonzero-diagonal input") {
  Matrix bad = Matrix::Zero(3, 3);
  bad(0, 1) = 1.0;
  CHECK_THROWS_WITH(bilu_linial_check(bad, 1.0),
                    Catch::Matchers::ContainsSubstring("asymmetric"));
  Matrix diag = Matrix::Identity(3, 3);
  CHECK_THROWS_WITH(bilu_linial_check(diag, 1.0),
                    Catch::Matchers::ContainsSubstring("diagonal"));
  CHECK_THROWS_AS(bilu_linial_check(Matrix::Zero(2, 3), 1.0),
                  std::invalid_argument);
}

TEST_CASE("checker beta agrees with the k=2 discrepancy sweep at alpha 0") {
  const auto g = gen_hypergraph(HypergraphKind::gnp, 9, 2, 0.5, 14);
  const Matrix a = MultilinearForm::density_centered(g, 0.0).dense_matrix();
  const auto rep = bilu_linial_check(a, 100.0);
  const auto rho = rho_alpha(g, 0.0, HyperRhoMode::exhaustive);
  CHECK(rep.details.at("beta").get<double>() ==
        Catch::Approx(rho.rho).margin(1e-12));
}
