#ifndef MASKFILL_CORPUS_HPP
#define MASKFILL_CORPUS_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "maskfill/common.hpp"

namespace maskfill {

// An article with its reference (positive) summary.
struct DocumentPair {
  std::string id;
  std::string article;
  std::string summary;

  bool operator==(const DocumentPair&) const = default;
};

// Disjoint halves of a corpus: one trains the infiller, the other is used
// to generate negatives.
struct CorpusSplit {
  std::vector<DocumentPair> train_half;
  std::vector<DocumentPair> gen_half;
  std::uint64_t seed = 0;
};

enum class CorpusFormat { JsonlPairs, CnndmStories };
CorpusFormat parse_corpus_format(std::string_view s);

enum class Benchmark { FactccTest, XsumHall, SummEval, QagsCnndm, QagsXsum, FrankCnndm, FrankXsum };
std::string_view to_string(Benchmark b);
Benchmark parse_benchmark(std::string_view s);
// True for benchmarks whose files already carry a binary label.
bool is_binary_benchmark(Benchmark b);
// True for benchmarks annotated with per-annotator consistent/inconsistent flags.
bool is_flag_benchmark(Benchmark b);

// Human-judged benchmark item. For flag benchmarks judgments hold 1 for a
// consistent vote and 0 for inconsistent; SummEval holds Likert 1..5.
struct BenchmarkRecord {
  std::string id;
  Benchmark benchmark = Benchmark::FactccTest;
  std::string article;
  std::string summary;
  std::vector<int> judgments;
  std::optional<Label> binary_label;
  std::optional<double> numeric_score;
};

// Reads a corpus. jsonl-pairs expects one {id, article, summary} object per
// line; a missing id becomes "<filename>:<line>". cnndm-stories accepts a
// single .story file or a directory of them (taken in filename order), with
// the summary assembled from the @highlight lines.
std::vector<DocumentPair> load_pairs(const std::filesystem::path& path, CorpusFormat format);
void save_pairs(const std::filesystem::path& path, const std::vector<DocumentPair>& pairs);

// Parses one jsonl-pairs line; exposed for the python module and tests.
DocumentPair parse_pair_line(std::string_view line, std::string_view fallback_id, std::size_t line_no);

CorpusSplit split_half(const std::vector<DocumentPair>& pairs, std::uint64_t seed);

std::vector<BenchmarkRecord> load_benchmark(const std::filesystem::path& path, Benchmark schema);
void save_benchmark(const std::filesystem::path& path, const std::vector<BenchmarkRecord>& records);

}  // namespace maskfill

#endif  // MASKFILL_CORPUS_HPP
