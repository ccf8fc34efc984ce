#include <random>
#include <set>

#include "doctest.h"
#include "maskfill/common.hpp"
#include "maskfill/io.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace maskfill;

TEST_CASE("hasher matches the independent oracle") {
  std::mt19937_64 gen(7);
  for (int i = 0; i < 200; ++i) {
    const std::uint64_t seed = gen();
    const std::string id = "pair-" + std::to_string(gen() % 1000);
    const std::uint64_t idx = gen() % 8;
    const double d = static_cast<double>(gen() % 1000) / 7.0;
    CHECK(hash::Hasher(seed).add(id).add(idx).add_double(d).digest() ==
          oracle::Hasher(seed).str(id).word(idx).real(d).value());
    CHECK(derive_seed(seed, id, "article", idx) == oracle::derive_seed(seed, id, "article", idx));
  }
}

TEST_CASE("hasher frames fields by length") {
  CHECK(hash::Hasher(1).add("ab").add("c").digest() != hash::Hasher(1).add("a").add("bc").digest());
  CHECK(hash::Hasher(1).add_double(0.0).digest() == hash::Hasher(1).add_double(-0.0).digest());
  CHECK(derive_seed(0, "x", "article", 0) != derive_seed(0, "x", "summary", 0));
  CHECK(derive_seed(0, "x", "article", 0) != derive_seed(0, "x", "article", 1));
}

TEST_CASE("rng stream and bounded draws match the oracle") {
  for (std::uint64_t seed : {0ULL, 1ULL, 42ULL, 0xdeadbeefULL}) {
    Rng a(seed);
    oracle::SplitMix b{seed};
    for (int i = 0; i < 100; ++i) CHECK(a.next() == b());
    Rng c(seed);
    oracle::SplitMix d{seed};
    for (std::uint64_t bound : {1ULL, 2ULL, 3ULL, 7ULL, 1000ULL, (1ULL << 63) + 5}) CHECK(c.below(bound) == d.uniform(bound));
  }
}

TEST_CASE("below stays in range and covers small ranges") {
  Rng rng(3);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 500; ++i) {
    auto v = rng.below(6);
    CHECK(v < 6);
    seen.insert(v);
  }
  CHECK(seen.size() == 6);
}

TEST_CASE("shuffle is a seeded permutation") {
  std::vector<int> v(20);
  for (int i = 0; i < 20; ++i) v[i] = i;
  auto a = v, b = v;
  shuffle(a, 9);
  shuffle(b, 9);
  CHECK(a == b);
  std::sort(a.begin(), a.end());
  CHECK(a == v);
}

TEST_CASE("labels and methods parse") {
  CHECK(parse_label("C") == Label::Consistent);
  CHECK(parse_label("inconsistent") == Label::Inconsistent);
  CHECK_THROWS_AS(parse_label("maybe"), Error);
  CHECK(parse_method("msm") == Method::Msm);
  try {
    parse_method("xyz");
    FAIL("expected a config error");
  } catch (const Error& e) {
    CHECK(e.exit_code() == 1);
  }
}

TEST_CASE("text helpers") {
  CHECK(text::normalize_whitespace("  a \t b\n\nc  ") == "a b c");
  CHECK(text::normalize_whitespace("") == "");
  auto b = text::token_bounds("a bb  c");
  REQUIRE(b.size() == 3);
  CHECK(b[1] == std::pair<std::size_t, std::size_t>{2, 4});
  CHECK(text::content_word("\"Hello,") == "hello");
  CHECK(text::content_word("...") == "");
}

TEST_CASE("jsonl reader names the bad line") {
  auto dir = testutil::scratch("common_jsonl");
  io::write_file(dir / "x.jsonl", "{\"a\":1}\n\n{oops\n");
  try {
    io::read_jsonl(dir / "x.jsonl");
    FAIL("expected a data error");
  } catch (const Error& e) {
    CHECK(e.exit_code() == 2);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(io::read_file(dir / "missing.txt"), Error);
}
