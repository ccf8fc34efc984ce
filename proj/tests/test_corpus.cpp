#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "maskfill/corpus.hpp"
#include "maskfill/io.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace maskfill;

namespace {

std::vector<DocumentPair> make_pairs(std::size_t n) {
  std::vector<DocumentPair> out;
  for (std::size_t i = 0; i < n; ++i)
    out.push_back({"id" + std::to_string(i), "Article " + std::to_string(i) + ".", "Summary " + std::to_string(i) + "."});
  return out;
}

std::set<std::string> ids(const std::vector<DocumentPair>& v) {
  std::set<std::string> out;
  for (const auto& p : v) out.insert(p.id);
  return out;
}

std::string error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("load_pairs reads JSONL in file order and normalizes whitespace") {
  auto dir = testutil::scratch("corpus_load");
  io::write_file(dir / "c.jsonl",
                 "{\"id\":\"a\",\"article\":\"  One   two. \",\"summary\":\"One.\"}\n"
                 "{\"id\":\"b\",\"article\":\"Three.\",\"summary\":\"Three\\n\\tthree.\"}\n"
                 "{\"article\":\"Four.\",\"summary\":\"Four.\"}\n");
  auto pairs = load_pairs(dir / "c.jsonl", CorpusFormat::JsonlPairs);
  REQUIRE(pairs.size() == 3);
  CHECK(pairs[0].id == "a");
  CHECK(pairs[0].article == "One two.");
  CHECK(pairs[1].summary == "Three three.");
  CHECK(pairs[2].id == "c.jsonl:3");
}

TEST_CASE("load_pairs rejects bad input with line numbers") {
  auto dir = testutil::scratch("corpus_bad");
  io::write_file(dir / "e.jsonl",
                 "{\"id\":\"a\",\"article\":\"x\",\"summary\":\"y\"}\n{\"id\":\"b\",\"article\":\"x\",\"summary\":\"  \"}\n");
  CHECK(error_of([&] { load_pairs(dir / "e.jsonl", CorpusFormat::JsonlPairs); }).find("empty summary at line 2") !=
        std::string::npos);
  io::write_file(dir / "m.jsonl", "{\"id\":\"a\",\"summary\":\"y\"}\n");
  CHECK(error_of([&] { load_pairs(dir / "m.jsonl", CorpusFormat::JsonlPairs); }).find("line 1") != std::string::npos);
  io::write_file(dir / "empty.jsonl", "\n");
  CHECK_THROWS_AS(load_pairs(dir / "empty.jsonl", CorpusFormat::JsonlPairs), Error);
  io::write_file(dir / "dup.jsonl",
                 "{\"id\":\"a\",\"article\":\"x\",\"summary\":\"y\"}\n{\"id\":\"a\",\"article\":\"x\",\"summary\":\"y\"}\n");
  CHECK_THROWS_AS(load_pairs(dir / "dup.jsonl", CorpusFormat::JsonlPairs), Error);
}

TEST_CASE("cnndm stories become pairs with highlights as the summary") {
  auto dir = testutil::scratch("corpus_stories");
  io::write_file(dir / "s1.story", "First line.\n\nSecond line.\n\n@highlight\n\nPoint one\n\n@highlight\n\nPoint two\n");
  io::write_file(dir / "s2.story", "Body.\n\n@highlight\n\nOnly point\n");
  auto pairs = load_pairs(dir, CorpusFormat::CnndmStories);
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0].id == "s1");
  CHECK(pairs[0].article == "First line. Second line.");
  CHECK(pairs[0].summary.find("Point one") != std::string::npos);
  CHECK(pairs[0].summary.find("Point two") != std::string::npos);
}

TEST_CASE("save_pairs then load_pairs is the identity") {
  auto dir = testutil::scratch("corpus_roundtrip");
  std::mt19937_64 rng(5);
  auto pairs = testutil::random_corpus(rng, 30);
  pairs[0].summary = "Unicode \xc3\xa9t\xc3\xa9 and \"quotes\" \\ too.";
  save_pairs(dir / "p.jsonl", pairs);
  CHECK(load_pairs(dir / "p.jsonl", CorpusFormat::JsonlPairs) == pairs);
}

TEST_CASE("split_half on 4 pairs is a 2+2 partition and deterministic") {
  auto pairs = make_pairs(4);
  auto a = split_half(pairs, 0);
  auto b = split_half(pairs, 0);
  CHECK(a.train_half.size() == 2);
  CHECK(a.gen_half.size() == 2);
  CHECK(a.train_half == b.train_half);
  CHECK(a.gen_half == b.gen_half);
  auto u = ids(a.train_half);
  for (const auto& p : a.gen_half) CHECK(u.insert(p.id).second);
  CHECK(u == ids(pairs));
}

TEST_CASE("split_half membership matches a replayed permutation") {
  auto pairs = make_pairs(5);
  for (std::uint64_t seed : {0ULL, 1ULL, 17ULL, 123456789ULL}) {
    std::vector<std::string> order;
    for (const auto& p : pairs) order.push_back(p.id);
    std::sort(order.begin(), order.end());
    oracle::SplitMix g{oracle::Hasher(seed).str("split_half").value()};
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[g.uniform(i)]);
    auto split = split_half(pairs, seed);
    REQUIRE(split.train_half.size() == 3);
    REQUIRE(split.gen_half.size() == 2);
    for (std::size_t i = 0; i < 3; ++i) CHECK(split.train_half[i].id == order[i]);
    for (std::size_t i = 0; i < 2; ++i) CHECK(split.gen_half[i].id == order[3 + i]);
  }
}

TEST_CASE("split_half is a balanced partition for random corpora (property)") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + rng() % 999;
    auto pairs = make_pairs(n);
    const std::uint64_t seed = rng();
    auto split = split_half(pairs, seed);
    const auto tr = ids(split.train_half), ge = ids(split.gen_half);
    CHECK(tr.size() == split.train_half.size());
    std::set<std::string> all = tr;
    for (const auto& id : ge) CHECK(all.insert(id).second);
    CHECK(all == ids(pairs));
    const auto diff = static_cast<long>(tr.size()) - static_cast<long>(ge.size());
    CHECK(std::abs(diff) <= 1);

    // Order of the input must not matter.
    auto shuffled = pairs;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    auto again = split_half(shuffled, seed);
    CHECK(again.train_half == split.train_half);
    CHECK(again.gen_half == split.gen_half);
  }
}

TEST_CASE("split_half needs two pairs") {
  CHECK_THROWS_AS(split_half(make_pairs(1), 0), Error);
}

TEST_CASE("load_benchmark handles each schema family") {
  auto dir = testutil::scratch("corpus_bench");
  io::write_file(dir / "se.jsonl", "{\"id\":\"1\",\"article\":\"A.\",\"summary\":\"S.\",\"judgments\":[5,4,5]}\n");
  auto se = load_benchmark(dir / "se.jsonl", Benchmark::SummEval);
  REQUIRE(se.size() == 1);
  CHECK(se[0].judgments == std::vector<int>{5, 4, 5});
  CHECK_FALSE(se[0].binary_label.has_value());
  REQUIRE(se[0].numeric_score.has_value());
  CHECK(*se[0].numeric_score == doctest::Approx(14.0 / 3));

  io::write_file(dir / "qg.jsonl", "{\"id\":\"1\",\"article\":\"A.\",\"summary\":\"S.\",\"judgments\":[\"C\",\"I\",1]}\n");
  auto qg = load_benchmark(dir / "qg.jsonl", Benchmark::QagsCnndm);
  CHECK(qg[0].judgments == std::vector<int>{1, 0, 1});

  io::write_file(dir / "fc.jsonl", "{\"id\":\"1\",\"article\":\"A.\",\"summary\":\"S.\",\"label\":\"incorrect\"}\n");
  auto fc = load_benchmark(dir / "fc.jsonl", Benchmark::FactccTest);
  CHECK(fc[0].binary_label == Label::Inconsistent);

  io::write_file(dir / "bad.jsonl", "{\"id\":\"1\",\"article\":\"A.\",\"summary\":\"S.\"}\n");
  CHECK_THROWS_AS(load_benchmark(dir / "bad.jsonl", Benchmark::SummEval), Error);
  CHECK_THROWS_AS(load_benchmark(dir / "bad.jsonl", Benchmark::FactccTest), Error);
  io::write_file(dir / "likert.jsonl", "{\"id\":\"1\",\"article\":\"A.\",\"summary\":\"S.\",\"judgments\":[6]}\n");
  CHECK_THROWS_AS(load_benchmark(dir / "likert.jsonl", Benchmark::SummEval), Error);
  CHECK_THROWS_AS(parse_benchmark("nope"), Error);
}

TEST_CASE("bundled toy files load") {
  auto corpus = load_pairs(testutil::data_dir() / "toy_corpus.jsonl", CorpusFormat::JsonlPairs);
  CHECK(corpus.size() == 50);
  auto bench = load_benchmark(testutil::data_dir() / "toy_benchmark.jsonl", Benchmark::FactccTest);
  CHECK(bench.size() == 20);
  std::size_t inconsistent = 0;
  for (const auto& r : bench) inconsistent += r.binary_label == Label::Inconsistent;
  CHECK(inconsistent == 10);
}
