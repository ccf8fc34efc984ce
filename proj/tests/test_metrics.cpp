#include <cmath>
#include <random>

#include "doctest.h"
#include "maskfill/metrics.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace maskfill;
using namespace maskfill::metrics;

namespace {

constexpr Label C = Label::Consistent;
constexpr Label I = Label::Inconsistent;

std::vector<int> ints(const std::vector<Label>& v) {
  std::vector<int> out;
  for (auto l : v) out.push_back(l == I);
  return out;
}

std::vector<Label> flip(const std::vector<Label>& v) {
  std::vector<Label> out;
  for (auto l : v) out.push_back(l == C ? I : C);
  return out;
}

}  // namespace

TEST_CASE("macro_f1 examples") {
  std::vector<Label> t = {C, C, I, I}, p = {C, I, C, I};
  CHECK(macro_f1(t, t) == 1.0);
  CHECK(macro_f1(t, p) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(macro_f1(flip(t), flip(p)) == macro_f1(t, p));
  std::vector<Label> all_c = {C, C, C};
  CHECK(macro_f1(all_c, all_c) == 0.5);  // absent inconsistent class scores 0
  CHECK_THROWS_AS(macro_f1(t, std::vector<Label>{C}), Error);
  CHECK_THROWS_AS(macro_f1(std::vector<Label>{}, std::vector<Label>{}), Error);
}

TEST_CASE("balanced_accuracy examples") {
  std::vector<Label> t = {C, C, I, I};
  CHECK(balanced_accuracy(t, t) == 1.0);
  CHECK(balanced_accuracy(t, std::vector<Label>{C, C, C, C}) == 0.5);
  CHECK_THROWS_AS(balanced_accuracy(std::vector<Label>{C, C}, std::vector<Label>{C, I}), Error);
}

TEST_CASE("classification metrics match recount oracles and are permutation invariant") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng() % 11;
    std::vector<Label> t(n), p(n);
    for (std::size_t i = 0; i < n; ++i) {
      t[i] = rng() % 2 ? C : I;
      p[i] = rng() % 2 ? C : I;
    }
    t[0] = C;
    t[1] = I;
    CHECK(std::fabs(macro_f1(t, p) - oracle::macro_f1(ints(t), ints(p))) <= 1e-12);
    CHECK(std::fabs(balanced_accuracy(t, p) - oracle::balanced_accuracy(ints(t), ints(p))) <= 1e-12);
    auto cc = confusion(t, p);
    CHECK(cc.total() == n);
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Label> tp(n), pp(n);
    for (std::size_t i = 0; i < n; ++i) {
      tp[i] = t[perm[i]];
      pp[i] = p[perm[i]];
    }
    CHECK(macro_f1(tp, pp) == macro_f1(t, p));
    CHECK(balanced_accuracy(tp, pp) == balanced_accuracy(t, p));
  }
}

TEST_CASE("pearson examples and invariants") {
  std::vector<double> x = {1, 2, 3, 4, 5};
  std::vector<double> y, z;
  for (double v : x) {
    y.push_back(2 * v + 1);
    z.push_back(-v);
  }
  CHECK(pearson(x, y) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pearson(x, z) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK_THROWS_AS(pearson(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}), Error);
  CHECK_THROWS_AS(pearson(std::vector<double>{1, 2}, std::vector<double>{1, 2}), Error);

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3 + rng() % 18;
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = u(rng);
      b[i] = u(rng);
    }
    const double r = pearson(a, b);
    CHECK(std::fabs(r - oracle::pearson(a, b)) <= 1e-9);
    std::vector<double> a2(n), a3(n);
    for (std::size_t i = 0; i < n; ++i) {
      a2[i] = 3.5 * a[i] - 2;
      a3[i] = -0.5 * a[i];
    }
    CHECK(pearson(a2, b) == doctest::Approx(r).epsilon(1e-9));
    CHECK(pearson(a3, b) == doctest::Approx(-r).epsilon(1e-9));
  }
}

TEST_CASE("spearman examples, ties and monotone invariance") {
  CHECK(spearman(std::vector<double>{1, 2, 3}, std::vector<double>{3, 2, 1}) == doctest::Approx(-1.0));
  std::vector<double> x = {0.1, 0.5, 0.2, 0.9, 0.3};
  std::vector<double> y;
  for (double v : x) y.push_back(std::exp(3 * v));
  CHECK(spearman(x, y) == doctest::Approx(1.0));
  CHECK(fractional_ranks(std::vector<double>{10, 20, 20, 30}) == std::vector<double>{1, 2.5, 2.5, 4});

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3 + rng() % 15;
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = static_cast<double>(rng() % 4);
      b[i] = static_cast<double>(rng() % 3);
    }
    a[0] = 0;
    a[1] = 5;
    b[0] = 0;
    b[1] = 7;
    const double rho = spearman(a, b);
    CHECK(std::fabs(rho - oracle::spearman(a, b)) <= 1e-9);
    std::vector<double> a2;
    for (double v : a) a2.push_back(v * v * v + 10);
    CHECK(spearman(a2, b) == doctest::Approx(rho).epsilon(1e-12));
  }
}

TEST_CASE("correlation significance") {
  for (std::size_t n : {3u, 5u, 20u, 200u}) CHECK(correlation_significance(0.0, n) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(correlation_significance(1.0, 10) == 0.0);
  CHECK(correlation_significance(-1.0, 10) == 0.0);
  const double p = correlation_significance(0.9, 20);
  CHECK(std::fabs(p - oracle::correlation_p(0.9, 20)) <= 1e-9);
  CHECK(p < 1e-6);
  double prev = 1.1;
  for (double r = 0; r < 0.99; r += 0.05) {
    const double q = correlation_significance(r, 12);
    CHECK(q < prev);
    CHECK(correlation_significance(-r, 12) == doctest::Approx(q).epsilon(1e-12));
    prev = q;
  }
  CHECK_THROWS_AS(correlation_significance(0.5, 2), Error);
}

TEST_CASE("quadratic fit") {
  std::vector<double> x = {0, 1, 2, 3, 4}, y;
  for (double v : x) y.push_back(2 * v * v - 3 * v + 1);
  auto fit = fit_quadratic(x, y);
  CHECK(fit.a == doctest::Approx(2));
  CHECK(fit.b == doctest::Approx(-3));
  CHECK(fit.c == doctest::Approx(1));
  CHECK(std::fabs(fit.r_squared - 1.0) <= 1e-12);
  CHECK(fit_quadratic(x, std::vector<double>(5, 0.7)).r_squared == 0.0);
  CHECK_THROWS_AS(fit_quadratic(std::vector<double>{1, 1, 2, 2}, std::vector<double>{1, 2, 3, 4}), Error);

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3 + rng() % 20;
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = u(rng);
      b[i] = u(rng);
    }
    auto f = fit_quadratic(a, b);
    auto o = oracle::quadratic(a, b);
    CHECK(std::fabs(f.a - o.a) <= 1e-8 * std::max(1.0, std::fabs(o.a)));
    CHECK(std::fabs(f.b - o.b) <= 1e-8 * std::max(1.0, std::fabs(o.b)));
    CHECK(std::fabs(f.c - o.c) <= 1e-8 * std::max(1.0, std::fabs(o.c)));
    CHECK(std::fabs(f.r_squared - o.r2) <= 1e-9);
  }
}

TEST_CASE("token_f1 scorer matches the set-overlap oracle") {
  TokenF1Scorer s;
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    auto a = testutil::random_text(rng, 1 + rng() % 15), b = testutil::random_text(rng, 1 + rng() % 15);
    CHECK(std::fabs(s.similarity(a, b) - oracle::set_f1(a, b)) <= 1e-12);
    CHECK(s.similarity(a, b) == s.similarity(b, a));
    CHECK(s.similarity(a, a) == s.max_value());
  }
}

TEST_CASE("ngram cosine scorer contract") {
  NgramCosineScorer s;
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    auto a = testutil::random_text(rng, 1 + rng() % 15), b = testutil::random_text(rng, 1 + rng() % 15);
    const double v = s.similarity(a, b);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0 + 1e-12);
    CHECK(v == s.similarity(b, a));
    CHECK(s.similarity(a, a) == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(make_scorer("ngram_cosine")->name() == "ngram_cosine");
  CHECK_THROWS_AS(make_scorer("bertscore"), Error);
}

TEST_CASE("distance_from_reference and diversity") {
  TokenF1Scorer s;
  CHECK(distance_from_reference(s, "Leeds beat Hull.", "Leeds beat Hull.") == 1.0);
  CHECK(diversity({"same text", "same text", "same text", "same text"}, s) == -1.0);
  CHECK(diversity({"a b", "b c"}, s) == -s.similarity("a b", "b c"));
  CHECK_THROWS_AS(diversity({"only"}, s), Error);

  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::string> xs;
    for (int i = 0; i < 4; ++i) xs.push_back(testutil::random_text(rng, 2 + rng() % 10));
    const double d = diversity(xs, s);
    CHECK(std::fabs(d - oracle::diversity(xs, oracle::set_f1)) <= 1e-12);
    std::shuffle(xs.begin(), xs.end(), rng);
    CHECK(diversity(xs, s) == doctest::Approx(d).epsilon(1e-14));
  }
}

TEST_CASE("metric entries serialize") {
  MetricEntry e{"pearson", 0.5, 10, 0.14};
  auto j = e.to_json();
  CHECK(j["metric_name"] == "pearson");
  CHECK(j["n"] == 10);
  CHECK(j["p_value"] == 0.14);
  MetricEntry f{"macro_f1", 0.9, 10, std::nullopt};
  CHECK_FALSE(f.to_json().contains("p_value"));
}
