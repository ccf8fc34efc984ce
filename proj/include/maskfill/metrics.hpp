#ifndef MASKFILL_METRICS_HPP
#define MASKFILL_METRICS_HPP

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "maskfill/common.hpp"

namespace maskfill::metrics {

// Binary confusion matrix with `consistent` as the positive class. The
// inconsistent-class view swaps tp<->tn and fp<->fn.
struct ConfusionCounts {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  std::size_t total() const { return tp + fp + tn + fn; }
};

ConfusionCounts confusion(std::span<const Label> y_true, std::span<const Label> y_pred);

// Unweighted mean of the consistent and inconsistent F1. A class absent
// from both labelings scores 0.
double macro_f1(std::span<const Label> y_true, std::span<const Label> y_pred);

// Mean per-class recall. Both classes must occur in y_true.
double balanced_accuracy(std::span<const Label> y_true, std::span<const Label> y_pred);

double pearson(std::span<const double> x, std::span<const double> y);

// 1-based fractional ranks; ties share their mean rank.
std::vector<double> fractional_ranks(std::span<const double> v);

double spearman(std::span<const double> x, std::span<const double> y);

// Two-sided p-value of t = r * sqrt((n - 2) / (1 - r^2)) under Student's t
// with n - 2 degrees of freedom. |r| == 1 gives 0.
double correlation_significance(double r, std::size_t n);

// y = a x^2 + b x + c by least squares.
struct QuadraticFit {
  double a = 0, b = 0, c = 0;
  double r_squared = 0;
  double operator()(double x) const { return (a * x + b) * x + c; }
};

// Needs at least three distinct x values. R^2 is reported as 0 when y is constant.
QuadraticFit fit_quadratic(std::span<const double> x, std::span<const double> y);

// Symmetric similarity with sim(a, a) == max_value().
class SimilarityScorer {
 public:
  virtual ~SimilarityScorer() = default;
  virtual std::string name() const = 0;
  virtual double max_value() const { return 1.0; }
  virtual double similarity(std::string_view a, std::string_view b) const = 0;
};

// F1 between the sets of lowercased, punctuation-stripped words.
class TokenF1Scorer final : public SimilarityScorer {
 public:
  std::string name() const override { return "token_f1"; }
  double similarity(std::string_view a, std::string_view b) const override;
};

// Cosine between bags of hashed character trigrams: a dense-vector scorer
// that needs no model download.
class NgramCosineScorer final : public SimilarityScorer {
 public:
  static constexpr std::size_t kDims = 1024;
  std::string name() const override { return "ngram_cosine"; }
  double similarity(std::string_view a, std::string_view b) const override;
  std::vector<double> embed(std::string_view s) const;
};

using ScorerFactory = std::function<std::unique_ptr<SimilarityScorer>()>;
void register_scorer(std::string name, ScorerFactory factory);
std::unique_ptr<SimilarityScorer> make_scorer(std::string_view name);

// Similarity between a reference summary and a negative generated from it;
// lower means farther away.
double distance_from_reference(const SimilarityScorer& scorer, std::string_view reference, std::string_view negative);

// Negated mean similarity over all unordered pairs of samples.
double diversity(const std::vector<std::string>& samples, const SimilarityScorer& scorer);

struct MetricEntry {
  std::string metric_name;
  double value = 0;
  std::size_t n = 0;
  std::optional<double> p_value;

  nlohmann::json to_json() const;
};

}  // namespace maskfill::metrics

#endif  // MASKFILL_METRICS_HPP
