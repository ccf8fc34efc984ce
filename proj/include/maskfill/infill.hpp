#ifndef MASKFILL_INFILL_HPP
#define MASKFILL_INFILL_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "maskfill/common.hpp"
#include "maskfill/corpus.hpp"
#include "maskfill/masker.hpp"
#include "maskfill/spanner.hpp"

namespace maskfill {

struct MaskingConfig {
  double gamma_a = 0.6;
  double gamma_s = 0.8;
  Unit unit = Unit::NpEnt;
  std::string annotator = "rule";
};

// Seq2seq training pair: masked input, original reference summary as target.
struct Seq2SeqExample {
  std::string input;
  std::string target;
  std::string pair_id;
};

// A model input together with the masked parts it was built from.
struct PreparedInput {
  std::string input;
  std::optional<MaskedText> summary;
  std::optional<MaskedText> article;
};

// Masks the parts `method` uses. Article and summary masks are seeded with
// derive_seed(seed, pair.id, "article" | "summary", sample_index).
PreparedInput prepare_input(const DocumentPair& pair, Method method, const MaskingConfig& masking,
                            const Annotator& annotator, std::uint64_t seed, std::size_t sample_index);

struct TrainConfig {
  int epochs = 5;
  int batch_size = 48;
  int max_input_len = 1024;
  int max_target_len = 140;

  nlohmann::json to_json() const;
  static TrainConfig from_json(const nlohmann::json& j);
};

// Beam search with a fixed width; sample diversity comes from mask
// placement, never from stochastic decoding.
struct DecodeConfig {
  int beam_size = 4;
  int max_length = 140;

  nlohmann::json to_json() const;
  static DecodeConfig from_json(const nlohmann::json& j);
};

// Opaque trained infiller.
class InfillModel {
 public:
  virtual ~InfillModel() = default;
  virtual std::string backend() const = 0;
  virtual nlohmann::json to_json() const = 0;
};

struct GenerationRequest {
  std::string_view input;
  Method method = Method::Mfma;
  DecodeConfig decode;
  std::uint64_t seed = 0;
};

// Sequence-to-sequence backend. generate() must depend only on its
// arguments so that items can be produced on any worker in any order.
class Seq2SeqBackend {
 public:
  virtual ~Seq2SeqBackend() = default;
  virtual std::string name() const = 0;
  virtual bool supports_training() const = 0;
  virtual int max_input_len() const { return 1024; }
  virtual int max_target_len() const { return 140; }
  virtual std::unique_ptr<InfillModel> train(const std::vector<Seq2SeqExample>& examples,
                                             const TrainConfig& config) const;
  virtual std::unique_ptr<InfillModel> load(const nlohmann::json& j) const;
  virtual std::string generate(const InfillModel* model, const GenerationRequest& request) const = 0;
};

// Fills every "<mask_i>" with a word picked by stable-hash(seed, i) from the
// distinct words of the input's article segment (the whole input when
// there is no article segment). Words are whitespace tokens with their
// surrounding punctuation removed, in first-appearance order.
std::string mock_fill(std::string_view input, std::uint64_t seed);

// Deterministic zero-shot stand-in for a pretrained denoiser: mock_fill,
// then keep the summary segment (mfma), the first sentence (msm) or the
// whole text (mf). Cannot be trained.
class MockBackend final : public Seq2SeqBackend {
 public:
  std::string name() const override { return "mock"; }
  bool supports_training() const override { return false; }
  std::string generate(const InfillModel* model, const GenerationRequest& request) const override;
};

// Trainable deterministic backend: learns the most frequent words of the
// training targets and mixes them into the fill vocabulary, so fills can
// introduce content absent from the article.
class LexiconBackend final : public Seq2SeqBackend {
 public:
  static constexpr std::size_t kVocabSize = 64;
  std::string name() const override { return "lexicon"; }
  bool supports_training() const override { return true; }
  std::unique_ptr<InfillModel> train(const std::vector<Seq2SeqExample>& examples,
                                     const TrainConfig& config) const override;
  std::unique_ptr<InfillModel> load(const nlohmann::json& j) const override;
  std::string generate(const InfillModel* model, const GenerationRequest& request) const override;
};

using BackendFactory = std::function<std::unique_ptr<Seq2SeqBackend>()>;
void register_backend(std::string name, BackendFactory factory);
std::unique_ptr<Seq2SeqBackend> make_backend(std::string_view name);

// One example per train-half pair (sample index 0). MF is never trained.
std::vector<Seq2SeqExample> make_training_examples(const CorpusSplit& split, Method method, const MaskingConfig& masking,
                                                   const Annotator& annotator, std::uint64_t seed);

std::unique_ptr<InfillModel> train_infiller(const Seq2SeqBackend& backend, const std::vector<Seq2SeqExample>& examples,
                                            const TrainConfig& config);

// A synthesized negative summary with the provenance needed to rebuild its
// mask plans.
struct GeneratedSummary {
  std::string pair_id;
  std::string text;
  Method method = Method::Mfma;
  std::optional<double> gamma_a;
  std::optional<double> gamma_s;
  Unit unit = Unit::NpEnt;
  std::size_t sample_index = 0;
  std::uint64_t seed = 0;

  bool operator==(const GeneratedSummary&) const = default;
};

nlohmann::json to_json(const GeneratedSummary& g);
GeneratedSummary generated_from_json(const nlohmann::json& j);
void save_negatives(const std::filesystem::path& path, const std::vector<GeneratedSummary>& negatives);
std::vector<GeneratedSummary> load_negatives(const std::filesystem::path& path);

struct GenerateOptions {
  std::size_t n_samples = 1;
  std::uint64_t seed = 0;
  DecodeConfig decode;
  std::size_t jobs = 1;
};

// n_samples negatives for every gen-half pair, each with its own mask
// placement. Empty generations are dropped with a warning.
std::vector<GeneratedSummary> generate_negatives(const Seq2SeqBackend& backend, const InfillModel* model,
                                                 const CorpusSplit& split, Method method, const MaskingConfig& masking,
                                                 const Annotator& annotator, const GenerateOptions& options);

}  // namespace maskfill

#endif  // MASKFILL_INFILL_HPP
