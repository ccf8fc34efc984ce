#ifndef MASKFILL_HARNESS_HPP
#define MASKFILL_HARNESS_HPP

#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "maskfill/classifier.hpp"
#include "maskfill/config.hpp"
#include "maskfill/corpus.hpp"
#include "maskfill/dataset.hpp"
#include "maskfill/infill.hpp"
#include "maskfill/metrics.hpp"

namespace maskfill {

// ---- Binarization ---------------------------------------------------------

enum class RuleKind {
  Passthrough,  // factcc-test, xsumhall: label already binary
  LikertMin,    // summeval: inconsistent iff some annotator gave < cutoff
  AnyFlag,      // qags, frank: inconsistent iff some annotator flagged it
};

struct BinarizationRule {
  Benchmark benchmark = Benchmark::FactccTest;
  RuleKind kind = RuleKind::Passthrough;
  int likert_cutoff = 5;

  std::string description() const;
};

BinarizationRule rule_for(Benchmark benchmark);
BenchmarkRecord binarize(BenchmarkRecord record, const BinarizationRule& rule);
std::vector<BenchmarkRecord> binarize_all(std::vector<BenchmarkRecord> records);

// ---- Evaluation -------------------------------------------------------------

enum class EvalMode { Classification, Correlation };

struct EvaluationReport {
  std::string benchmark;
  EvalMode mode = EvalMode::Classification;
  std::size_t n = 0;
  std::optional<double> macro_f1;
  std::optional<double> balanced_accuracy;
  std::optional<double> pearson;
  std::optional<double> spearman;
  std::optional<double> pearson_p;
  std::optional<double> spearman_p;
  std::string fingerprint;

  std::vector<metrics::MetricEntry> entries() const;
  nlohmann::json to_json() const;
};

// Thresholds precomputed confidences against binarized labels.
EvaluationReport classification_report(const std::vector<BenchmarkRecord>& records, std::span<const double> confidences,
                                       double threshold);
// Correlates confidences with the records' numeric human scores.
EvaluationReport correlation_report(const std::vector<BenchmarkRecord>& records, std::span<const double> confidences);

std::vector<double> confidences(const ConsistencyModel& model, const std::vector<BenchmarkRecord>& records);

EvaluationReport evaluate_classification(const ConsistencyModel& model, const std::vector<BenchmarkRecord>& records,
                                         double threshold = 0.5);
EvaluationReport evaluate_correlation(const ConsistencyModel& model, const std::vector<BenchmarkRecord>& records);

// Aligns a pre-computed prediction file (e.g. a baseline metric) with the
// records by id.
std::vector<double> confidences_from_predictions(const std::vector<Prediction>& predictions,
                                                 const std::vector<BenchmarkRecord>& records);

// ---- Pipeline ---------------------------------------------------------------

struct PipelineResult {
  CorpusSplit split;
  std::vector<Seq2SeqExample> training_examples;
  std::unique_ptr<InfillModel> infiller;
  std::vector<GeneratedSummary> negatives;
  std::vector<LabeledExample> dataset;
  std::vector<std::unique_ptr<ConsistencyModel>> checkpoints;
  std::optional<Selection> selection;  // set when validation records were given
  std::optional<double> mean_distance;   // absent when nothing was generated
  std::optional<double> mean_diversity;  // needs n_samples >= 2

  const ConsistencyModel& selected() const;
};

// split -> mask -> (train infiller) -> generate -> assemble -> train
// classifier -> select on validation. The corpus split uses config.seed;
// masking, decoding and shuffling use `row_seed` (config.seed when absent).
PipelineResult run_pipeline(const std::vector<DocumentPair>& corpus, const std::vector<BenchmarkRecord>& validation,
                            const PipelineConfig& config, std::optional<std::uint64_t> row_seed = std::nullopt);

// Mean similarity of each negative to its reference summary.
std::optional<double> mean_distance(const std::vector<GeneratedSummary>& negatives, const CorpusSplit& split,
                                    const metrics::SimilarityScorer& scorer);
// Mean per-pair diversity over pairs with at least two samples.
std::optional<double> mean_diversity(const std::vector<GeneratedSummary>& negatives,
                                     const metrics::SimilarityScorer& scorer);

// ---- Sweep ------------------------------------------------------------------

struct SweepGrid {
  std::vector<double> gamma_a = {0.2, 0.4, 0.6, 0.8, 1.0};
  std::vector<double> gamma_s = {0.2, 0.4, 0.6, 0.8, 1.0};
  Unit unit = Unit::NpEnt;
  Method method = Method::Mfma;

  static SweepGrid from_config(const PipelineConfig& config);
};

struct SweepRow {
  double gamma_a = 0, gamma_s = 0;
  std::optional<double> ba;
  std::optional<double> distance;
  std::optional<double> diversity;
  bool ok = true;
  std::string error;

  nlohmann::json to_json() const;
};

std::uint64_t row_seed(std::uint64_t seed, double gamma_a, double gamma_s);

// One hermetic pipeline per (gamma_a, gamma_s), row-major over gamma_a.
// A failing row is flagged rather than aborting the sweep.
std::vector<SweepRow> run_sweep(const SweepGrid& grid, const PipelineConfig& config,
                                const std::vector<DocumentPair>& corpus, const std::vector<BenchmarkRecord>& validation);

nlohmann::json sweep_report(const std::vector<SweepRow>& rows, const PipelineConfig& config);
std::vector<SweepRow> rows_from_report(const nlohmann::json& report);

enum class AnalysisField { Distance, Diversity };
AnalysisField parse_analysis_field(std::string_view s);

// Quadratic fit of validation BA against the chosen field over usable rows.
metrics::QuadraticFit fit_analysis(const std::vector<SweepRow>& rows, AnalysisField field);

// ---- Plots ------------------------------------------------------------------

// CSV with header gamma_a,gamma_s,ba,distance,diversity; absent values are
// empty cells. Numbers use the shortest round-trip representation.
std::string sweep_csv(const std::vector<SweepRow>& rows);
std::vector<SweepRow> parse_sweep_csv(std::string_view csv);

// Writes heatmap.{svg,csv}, distance.{svg,csv} and diversity.{svg,csv}.
// Scatter files are skipped when fewer than three rows carry the field.
std::vector<std::filesystem::path> emit_plots(const std::vector<SweepRow>& rows, const std::filesystem::path& dir);

}  // namespace maskfill

#endif  // MASKFILL_HARNESS_HPP
