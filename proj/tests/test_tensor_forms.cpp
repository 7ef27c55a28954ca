#include <catch2/catch_amalgamated.hpp>

#include "specmix/tensor_forms.hpp"

using namespace specmix;

namespace {

Vector basis_vec(int n, int i) {
  Vector v = Vector::Zero(n);
  v(i) = 1.0;
  return v;
}

Vector random_vec(int n, std::uint64_t seed) {
  CounterRng rng(seed);
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.next_normal();
  return v;
}

std::vector<Vector> indicators(int n, const std::vector<std::vector<int>>& sets) {
  std::vector<Vector> xs;
  for (const auto& s : sets) {
    Vector x = Vector::Zero(n);
    for (int v : s) x(v) = 1.0;
    xs.push_back(std::move(x));
  }
  return xs;
}

// phi(x,..,x) = (v . x)^k; its norm is ||v||^k, attained at x = v/||v||.
struct RankOneForm {
  Vector v;
  int k = 3;
  int dim() const { return static_cast<int>(v.size()); }
  int order() const { return k; }
  bool is_symmetric() const { return true; }
  double entry_bound() const { return std::pow(v.cwiseAbs().maxCoeff(), k); }
  double eval_sym(const Vector& x) const { return std::pow(v.dot(x), k); }
  Vector grad_sym(const Vector& x) const { return std::pow(v.dot(x), k - 1) * v; }
};

struct AsymmetricForm {
  int dim() const { return 3; }
  int order() const { return 2; }
  bool is_symmetric() const { return false; }
  double entry_bound() const { return 1.0; }
  double eval_sym(const Vector&) const { return 0.0; }
  Vector grad_sym(const Vector&) const { return Vector::Zero(3); }
};

}  // namespace

TEST_CASE("basis-tuple evaluations match the defining case split") {
  const int n = 4, k = 3;
  const auto ak = MultilinearForm::complete(n, k);
  const auto j = MultilinearForm::all_ones(n, k);
  const auto d = MultilinearForm::diagonal_gap(n, k);

  CHECK(ak.eval({basis_vec(n, 1), basis_vec(n, 2), basis_vec(n, 3)}) == 1.0);
  CHECK(ak.eval({basis_vec(n, 1), basis_vec(n, 1), basis_vec(n, 2)}) == 0.0);
  CHECK(j.eval({basis_vec(n, 1), basis_vec(n, 1), basis_vec(n, 2)}) == 1.0);
  CHECK(d.eval({basis_vec(n, 1), basis_vec(n, 1), basis_vec(n, 2)}) == 1.0);
  CHECK(d.eval({basis_vec(n, 0), basis_vec(n, 1), basis_vec(n, 2)}) == 0.0);

  const Vector ones = Vector::Ones(n);
  CHECK(d.eval({ones, ones, ones}) == 40.0);  // n^k - n!/(n-k)! = 64 - 24
  CHECK(d.eval_sym(ones) == 40.0);

  const auto h = gen_hypergraph(HypergraphKind::complete, n, k);
  const auto a = MultilinearForm::adjacency(h);
  CHECK(a.eval({basis_vec(n, 0), basis_vec(n, 1), basis_vec(n, 2)}) == 1.0);
  CHECK(a.eval({basis_vec(n, 0), basis_vec(n, 0), basis_vec(n, 2)}) == 0.0);
  CHECK_THROWS_AS(a.eval({basis_vec(n, 0), basis_vec(n, 1)}), std::invalid_argument);
  CHECK_THROWS_AS(a.eval({basis_vec(n, 0), basis_vec(n, 1), basis_vec(5, 2)}),
                  std::invalid_argument);
}

TEST_CASE("count_e basics") {
  const auto h = gen_hypergraph(HypergraphKind::complete, 5, 3);
  CHECK(count_e(h, {{0}, {1}, {2, 3}}) == 2);
  CHECK(count_e(h, {{0, 1}, {0, 1}, {2}}) == 2);  // (0,1,2) and (1,0,2)
  Hypergraph empty;
  empty.n = 5;
  empty.k = 3;
  CHECK(count_e(empty, {{0, 1}, {1, 2}, {3}}) == 0);
}

TEST_CASE("count_e equals the adjacency form on indicators") {
  const auto h5 = gen_hypergraph(HypergraphKind::gnp, 5, 3, 0.6, 8);
  const auto a5 = MultilinearForm::adjacency(h5);
  for (int c0 = 0; c0 < 32; ++c0)
    for (int c1 = 0; c1 < 32; ++c1)
      for (int c2 = 0; c2 < 32; c2 += 3) {
        std::vector<std::vector<int>> sets(3);
        for (int v = 0; v < 5; ++v) {
          if (c0 >> v & 1) sets[0].push_back(v);
          if (c1 >> v & 1) sets[1].push_back(v);
          if (c2 >> v & 1) sets[2].push_back(v);
        }
        REQUIRE(static_cast<double>(count_e(h5, sets)) ==
                a5.eval(indicators(5, sets)));
      }

  const auto h12 = gen_hypergraph(HypergraphKind::gnp, 12, 3, 0.3, 5);
  const auto a12 = MultilinearForm::adjacency(h12);
  CounterRng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::vector<int>> sets(3);
    for (auto& s : sets)
      for (int v = 0; v < 12; ++v)
        if (rng.next_unit() < 0.4) s.push_back(v);
    REQUIRE(static_cast<double>(count_e(h12, sets)) ==
            a12.eval(indicators(12, sets)));
  }
}

TEST_CASE("density-centered form on the complete hypergraph vanishes") {
  const auto h = gen_hypergraph(HypergraphKind::complete, 6, 3);
  const auto phi = MultilinearForm::density_centered(h, 1.0);
  for (int t = 0; t < 5; ++t) {
    const Vector x = random_vec(6, 100 + static_cast<std::uint64_t>(t));
    CHECK(std::abs(phi.eval_sym(x)) <= 1e-9 * std::pow(x.norm(), 3));
  }
  const auto est = spectral_norm_estimate(phi, {4, 200, 1e-9, 1});
  CHECK(est.value <= 1e-8);
}

TEST_CASE("diagonal gap at k=2 is the identity pattern") {
  const auto d = MultilinearForm::diagonal_gap(5, 2);
  CHECK(d.dense_matrix() == Matrix::Identity(5, 5));
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      CHECK(d.eval({basis_vec(5, i), basis_vec(5, j)}) == (i == j ? 1.0 : 0.0));
}

TEST_CASE("all-pairs coefficient equals r/n for regular graphs") {
  Hypergraph h;
  h.n = 6;
  h.k = 2;
  h.edges = {{0, 1}, {0, 5}, {1, 2}, {2, 3}, {3, 4}, {4, 5}};
  CHECK(MultilinearForm::uniform_density(h) == 2.0 / 6.0);
}

TEST_CASE("forms are symmetric under argument permutations") {
  const auto h = gen_hypergraph(HypergraphKind::gnp, 8, 3, 0.5, 13);
  const std::vector<MultilinearForm> forms = {
      MultilinearForm::adjacency(h), MultilinearForm::complete(8, 3),
      MultilinearForm::all_ones(8, 3), MultilinearForm::diagonal_gap(8, 3),
      MultilinearForm::density_centered(h, 0.4)};
  for (const auto& phi : forms) {
    for (int trial = 0; trial < 17; ++trial) {
      std::vector<Vector> xs;
      for (int i = 0; i < 3; ++i)
        xs.push_back(random_vec(8, 1000 + static_cast<std::uint64_t>(trial * 3 + i)));
      const double base = phi.eval(xs);
      std::vector<int> order = {0, 1, 2};
      while (std::next_permutation(order.begin(), order.end())) {
        std::vector<Vector> perm;
        for (int i : order) perm.push_back(xs[static_cast<std::size_t>(i)]);
        REQUIRE(phi.eval(perm) ==
                Catch::Approx(base).epsilon(1e-10).margin(1e-10));
      }
    }
  }
}

TEST_CASE("forms are multilinear in each slot") {
  const auto h = gen_hypergraph(HypergraphKind::gnp, 7, 3, 0.5, 21);
  const auto phi = MultilinearForm::density_centered(h, 0.3);
  for (int slot = 0; slot < 3; ++slot) {
    std::vector<Vector> xs = {random_vec(7, 1), random_vec(7, 2), random_vec(7, 3)};
    const Vector u = random_vec(7, 10 + static_cast<std::uint64_t>(slot));
    const Vector w = random_vec(7, 20 + static_cast<std::uint64_t>(slot));
    const double a = 0.7, b = -1.3;
    auto at = [&](const Vector& v) {
      auto ys = xs;
      ys[static_cast<std::size_t>(slot)] = v;
      return phi.eval(ys);
    };
    const double lhs = at(a * u + b * w);
    const double rhs = a * at(u) + b * at(w);
    REQUIRE(lhs == Catch::Approx(rhs).epsilon(1e-10).margin(1e-10));
  }
}

TEST_CASE("gradient matches direct slot evaluation") {
  const auto h = gen_hypergraph(HypergraphKind::gnp, 7, 3, 0.5, 31);
  for (const auto& phi :
       {MultilinearForm::adjacency(h), MultilinearForm::diagonal_gap(7, 3),
        MultilinearForm::density_centered(h, 0.5)}) {
    const Vector x = random_vec(7, 77);
    const Vector g = phi.grad_sym(x);
    for (int j = 0; j < 7; ++j) {
      const double direct = phi.eval({x, x, basis_vec(7, j)});
      REQUIRE(g(j) == Catch::Approx(direct).epsilon(1e-9).margin(1e-9));
    }
  }
}

TEST_CASE("k=2 estimates match dense singular values") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const int n = 8 + static_cast<int>(seed);
    const auto g = gen_hypergraph(HypergraphKind::gnp, n, 2, 0.5, seed);
    const double density =
        static_cast<double>(g.edges.size()) / static_cast<double>(binomial(n, 2));
    const auto phi = MultilinearForm::density_centered(g, density);
    const auto est = spectral_norm_estimate(phi, {32, 5000, 1e-12, seed});
    const double exact = dense_norm(phi.dense_matrix());
    REQUIRE(est.value == Catch::Approx(exact).margin(1e-6));
    REQUIRE(est.value <= exact + 1e-9);  // never exceeds the true norm
  }
}

TEST_CASE("rank-one forms reach their closed-form norm") {
  RankOneForm phi;
  phi.v = random_vec(6, 5);
  phi.k = 3;
  const auto est = spectral_norm_estimate(phi, {8, 2000, 1e-12, 3});
  CHECK(est.value == Catch::Approx(std::pow(phi.v.norm(), 3)).margin(1e-8));
  CHECK(est.value <= std::pow(phi.v.norm(), 3) + 1e-9);
}

TEST_CASE("estimator rejects bad inputs") {
  CHECK_THROWS_AS(spectral_norm_estimate(AsymmetricForm{}, {4, 10, 1e-9, 0}),
                  std::invalid_argument);
  const auto d = MultilinearForm::diagonal_gap(4, 2);
  CHECK_THROWS_AS(spectral_norm_estimate(d, {0, 10, 1e-9, 0}),
                  std::invalid_argument);
}

TEST_CASE("estimate value never decreases with more starts") {
  const auto h = gen_hypergraph(HypergraphKind::gnp, 8, 3, 0.5, 17);
  const auto phi = MultilinearForm::density_centered(h, 0.5);
  double prev = 0.0;
  for (int starts : {1, 4, 16, 32}) {
    const auto est = spectral_norm_estimate(phi, {starts, 600, 1e-9, 9});
    CHECK(est.value >= prev);
    prev = est.value;
  }
}

TEST_CASE("estimate invariants: witness reproduces its ratio") {
  const auto h = gen_hypergraph(HypergraphKind::gnp, 8, 3, 0.5, 23);
  const auto phi = MultilinearForm::density_centered(h, 0.5);
  const auto est = spectral_norm_estimate(phi, {8, 1000, 1e-10, 4});
  REQUIRE(est.witness.size() == 8);
  const double ratio =
      std::abs(phi.eval_sym(est.witness)) / std::pow(est.witness.norm(), 3);
  CHECK(est.witness_value == Catch::Approx(ratio).margin(1e-10));
  CHECK(est.value >= est.witness_value);
  CHECK(est.value == std::max(est.witness_value, est.tuple_value));
}

TEST_CASE("witness tuples feed the estimate") {
  const auto h = gen_hypergraph(HypergraphKind::gnp, 8, 3, 0.5, 29);
  const auto phi = MultilinearForm::density_centered(h, 0.5);
  const auto xs = indicators(8, {{0, 1, 2}, {3, 4}, {5, 6}});
  double denom = 1.0;
  for (const auto& x : xs) denom *= x.norm();
  const double tuple_ratio = std::abs(phi.eval(xs)) / denom;
  const auto est = spectral_norm_estimate(phi, {1, 10, 1e-9, 0}, {}, {xs});
  CHECK(est.tuple_value >= tuple_ratio - 1e-15);
  CHECK(est.value >= tuple_ratio - 1e-15);
}

TEST_CASE("diagonal-gap norm bounds") {
  for (int n : {4, 7, 11}) {
    const auto b = d_norm_bounds(n, 2);
    CHECK(b.lower == 1.0);  // (n^2 - n(n-1))/n
    CHECK(b.upper == 4.0);
  }
  const auto b43 = d_norm_bounds(4, 3);
  CHECK(b43.lower == 5.0);
  CHECK(b43.upper == 18.0);
  const auto b93 = d_norm_bounds(9, 3);
  CHECK(b93.lower == Catch::Approx(225.0 / 27.0).epsilon(1e-14));
  CHECK(b93.upper == 27.0);
  CHECK_THROWS_AS(d_norm_bounds(2, 3), std::invalid_argument);
}

TEST_CASE("diagonal-gap estimates sit inside the closed-form sandwich") {
  for (auto [n, k] : std::vector<std::pair<int, int>>{{6, 2}, {8, 3}, {10, 3}, {8, 4}}) {
    const auto phi = MultilinearForm::diagonal_gap(n, k);
    const auto est = spectral_norm_estimate(phi, {16, 3000, 1e-10, 11});
    const auto b = d_norm_bounds(n, k);
    CHECK(b.lower <= est.value);
    CHECK(est.value <= b.upper);
    if (k == 2) CHECK(est.value == Catch::Approx(1.0).margin(1e-8));
  }
}
