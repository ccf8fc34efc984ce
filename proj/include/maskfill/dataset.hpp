#ifndef MASKFILL_DATASET_HPP
#define MASKFILL_DATASET_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "maskfill/corpus.hpp"
#include "maskfill/infill.hpp"

namespace maskfill {

enum class Origin { Reference, Mfma, Msm, Mf };
std::string_view to_string(Origin o);
Origin parse_origin(std::string_view s);
Origin origin_of(Method m);

// Classifier training/eval record. label == consistent iff origin == reference.
struct LabeledExample {
  std::string pair_id;
  std::string article;
  std::string summary;
  Label label = Label::Consistent;
  Origin origin = Origin::Reference;

  bool operator==(const LabeledExample&) const = default;
};

struct FilterPolicy {
  // Negatives whose normalized edit distance to their reference is below
  // this are treated as copies and dropped. 0 disables the filter.
  double min_edit_distinctness = 0.0;
  bool drop_empty = true;
};

// Character-level Levenshtein distance divided by the longer length; 0 for two empty strings.
double normalized_edit_distance(std::string_view a, std::string_view b);

// Positives: every train-half pair with its reference summary. Negatives:
// surviving generated summaries paired with their gen-half article. The
// result is shuffled with `dataset_seed`.
std::vector<LabeledExample> assemble(const CorpusSplit& split, const std::vector<GeneratedSummary>& negatives,
                                     const FilterPolicy& policy, std::uint64_t dataset_seed);

struct LengthPercentiles {
  std::size_t p10 = 0, p50 = 0, p90 = 0, max = 0;
};

struct DatasetStats {
  std::size_t total = 0;
  std::map<std::string, std::size_t> per_label;
  std::map<std::string, std::size_t> per_origin;
  double consistent_fraction = 0.0;
  LengthPercentiles summary_tokens;
  LengthPercentiles article_tokens;

  nlohmann::json to_json() const;
};

DatasetStats dataset_stats(const std::vector<LabeledExample>& examples);

// Nearest-rank percentile of an unsorted sample; q in [0, 100].
std::size_t percentile(std::vector<std::size_t> values, double q);

nlohmann::json to_json(const LabeledExample& e);
LabeledExample labeled_from_json(const nlohmann::json& j);
void save_dataset(const std::filesystem::path& path, const std::vector<LabeledExample>& examples);
std::vector<LabeledExample> load_dataset(const std::filesystem::path& path);

}  // namespace maskfill

#endif  // MASKFILL_DATASET_HPP
