#ifndef MASKFILL_CLASSIFIER_HPP
#define MASKFILL_CLASSIFIER_HPP

#include <array>
#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "maskfill/corpus.hpp"
#include "maskfill/dataset.hpp"

namespace maskfill {

inline constexpr std::string_view kSeparator = "<sep>";

// "summary <sep> article". The summary is always kept whole; when the pair
// exceeds max_input_len whitespace tokens the article tail is cut.
std::string encode_pair(std::string_view summary, std::string_view article, std::size_t max_input_len = 512);

struct ClassifierConfig {
  int epochs = 5;
  double learning_rate = 2e-5;
  int batch_size = 96;
  std::size_t max_input_len = 512;

  nlohmann::json to_json() const;
  static ClassifierConfig from_json(const nlohmann::json& j);
};

// Probability of the consistent class plus the label it implies.
struct ConsistencyScore {
  double confidence = 0.0;
  Label label = Label::Consistent;
};

// consistent iff confidence >= threshold.
ConsistencyScore make_score(double confidence, double threshold = 0.5);

// A trained classifier. confidence() is read-only and safe to call concurrently.
class ConsistencyModel {
 public:
  virtual ~ConsistencyModel() = default;
  virtual std::string backend() const = 0;
  virtual double confidence(std::string_view summary, std::string_view article) const = 0;
  virtual nlohmann::json to_json() const = 0;
};

ConsistencyScore score(const ConsistencyModel& model, std::string_view summary, std::string_view article,
                       double threshold = 0.5);

class ClassifierBackend {
 public:
  virtual ~ClassifierBackend() = default;
  virtual std::string name() const = 0;
  virtual std::size_t max_input_len() const { return 512; }
  // One checkpoint per epoch, oldest first.
  virtual std::vector<std::unique_ptr<ConsistencyModel>> train(const std::vector<LabeledExample>& dataset,
                                                               const ClassifierConfig& config) const = 0;
  virtual std::unique_ptr<ConsistencyModel> load(const nlohmann::json& j) const = 0;
};

// Lexical-overlap features of a (summary, article) pair: the fraction of
// summary words and of summary word bigrams found in the article.
std::array<double, 2> overlap_features(std::string_view summary, std::string_view article);

// Logistic regression on overlap_features, fitted by one full-batch Newton
// step per epoch with a small ridge penalty. Learning rate and batch size
// are recorded but not used.
class OverlapModel final : public ConsistencyModel {
 public:
  OverlapModel(std::array<double, 3> weights, std::size_t max_input_len)
      : weights_(weights), max_input_len_(max_input_len) {}
  std::string backend() const override { return "overlap"; }
  double confidence(std::string_view summary, std::string_view article) const override;
  nlohmann::json to_json() const override;
  const std::array<double, 3>& weights() const { return weights_; }

 private:
  std::array<double, 3> weights_;  // bias, unigram, bigram
  std::size_t max_input_len_;
};

class OverlapBackend final : public ClassifierBackend {
 public:
  static constexpr double kRidge = 1e-2;
  std::string name() const override { return "overlap"; }
  std::vector<std::unique_ptr<ConsistencyModel>> train(const std::vector<LabeledExample>& dataset,
                                                       const ClassifierConfig& config) const override;
  std::unique_ptr<ConsistencyModel> load(const nlohmann::json& j) const override;
};

using ClassifierFactory = std::function<std::unique_ptr<ClassifierBackend>()>;
void register_classifier(std::string name, ClassifierFactory factory);
std::unique_ptr<ClassifierBackend> make_classifier(std::string_view name);

// Final-epoch model. Errors when the dataset lacks either label.
std::unique_ptr<ConsistencyModel> train_classifier(const ClassifierBackend& backend,
                                                   const std::vector<LabeledExample>& dataset,
                                                   const ClassifierConfig& config);
std::vector<std::unique_ptr<ConsistencyModel>> train_classifier_checkpoints(const ClassifierBackend& backend,
                                                                            const std::vector<LabeledExample>& dataset,
                                                                            const ClassifierConfig& config);

struct Selection {
  std::size_t index = 0;
  double balanced_accuracy = 0.0;
  std::vector<double> all_scores;
};

// Checkpoint with the highest balanced accuracy on binarized validation
// records; ties go to the earliest.
Selection select_model(std::span<const ConsistencyModel* const> checkpoints,
                       const std::vector<BenchmarkRecord>& validation, double threshold = 0.5);

struct Prediction {
  std::string id;
  double confidence = 0.0;
  Label label = Label::Consistent;
};

void save_predictions(const std::filesystem::path& path, const std::vector<Prediction>& predictions);
std::vector<Prediction> load_predictions(const std::filesystem::path& path);

std::string dataset_fingerprint(const std::vector<LabeledExample>& dataset);

// Checkpoint directory: model.json (weights) and manifest.json (dataset
// hash, config, selection metric, pair encoding).
void save_checkpoint(const std::filesystem::path& dir, const ConsistencyModel& model, const nlohmann::json& manifest);
std::unique_ptr<ConsistencyModel> load_checkpoint(const std::filesystem::path& dir);

}  // namespace maskfill

#endif  // MASKFILL_CLASSIFIER_HPP
