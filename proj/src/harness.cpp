#include "maskfill/harness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>
#include <unordered_map>

namespace maskfill {

using nlohmann::json;

std::string BinarizationRule::description() const {
  switch (kind) {
    case RuleKind::Passthrough: return "label is already binary";
    case RuleKind::LikertMin:
      return "inconsistent if at least one annotator scored consistency below " + std::to_string(likert_cutoff);
    case RuleKind::AnyFlag: return "inconsistent if at least one annotator flagged the summary inconsistent";
  }
  return {};
}

BinarizationRule rule_for(Benchmark benchmark) {
  if (is_binary_benchmark(benchmark)) return {benchmark, RuleKind::Passthrough, 5};
  if (benchmark == Benchmark::SummEval) return {benchmark, RuleKind::LikertMin, 5};
  return {benchmark, RuleKind::AnyFlag, 5};
}

BenchmarkRecord binarize(BenchmarkRecord record, const BinarizationRule& rule) {
  const Benchmark b = record.benchmark;
  const bool compatible = (rule.kind == RuleKind::Passthrough && is_binary_benchmark(b)) ||
                          (rule.kind == RuleKind::LikertMin && b == Benchmark::SummEval) ||
                          (rule.kind == RuleKind::AnyFlag && is_flag_benchmark(b));
  if (!compatible)
    data_error("binarization rule for " + std::string(to_string(rule.benchmark)) + " cannot apply to a " +
               std::string(to_string(b)) + " record");
  switch (rule.kind) {
    case RuleKind::Passthrough:
      if (!record.binary_label) data_error("record '" + record.id + "' has no binary label");
      break;
    case RuleKind::LikertMin: {
      if (record.judgments.empty()) data_error("record '" + record.id + "' has no judgments");
      const int lowest = *std::min_element(record.judgments.begin(), record.judgments.end());
      record.binary_label = lowest < rule.likert_cutoff ? Label::Inconsistent : Label::Consistent;
      break;
    }
    case RuleKind::AnyFlag: {
      if (record.judgments.empty()) data_error("record '" + record.id + "' has no judgments");
      const bool flagged = std::any_of(record.judgments.begin(), record.judgments.end(), [](int v) { return v == 0; });
      record.binary_label = flagged ? Label::Inconsistent : Label::Consistent;
      break;
    }
  }
  return record;
}

std::vector<BenchmarkRecord> binarize_all(std::vector<BenchmarkRecord> records) {
  for (auto& r : records) r = binarize(std::move(r), rule_for(r.benchmark));
  return records;
}

std::vector<metrics::MetricEntry> EvaluationReport::entries() const {
  std::vector<metrics::MetricEntry> out;
  if (macro_f1) out.push_back({"macro_f1", *macro_f1, n, std::nullopt});
  if (balanced_accuracy) out.push_back({"balanced_accuracy", *balanced_accuracy, n, std::nullopt});
  if (pearson) out.push_back({"pearson", *pearson, n, pearson_p});
  if (spearman) out.push_back({"spearman", *spearman, n, spearman_p});
  return out;
}

json EvaluationReport::to_json() const {
  json metrics_json = json::array();
  for (const auto& e : entries()) metrics_json.push_back(e.to_json());
  return {{"benchmark", benchmark},
          {"mode", mode == EvalMode::Classification ? "classification" : "correlation"},
          {"n", n},
          {"fingerprint", fingerprint},
          {"metrics", metrics_json}};
}

namespace {

std::string benchmark_name(const std::vector<BenchmarkRecord>& records) {
  return records.empty() ? std::string() : std::string(to_string(records.front().benchmark));
}

}  // namespace

EvaluationReport classification_report(const std::vector<BenchmarkRecord>& records, std::span<const double> conf,
                                       double threshold) {
  if (records.size() != conf.size()) data_error("classification_report: one confidence per record required");
  if (records.empty()) data_error("classification_report: no records");
  std::vector<Label> truth, pred;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!records[i].binary_label) data_error("record '" + records[i].id + "' is not binarized");
    truth.push_back(*records[i].binary_label);
    pred.push_back(make_score(conf[i], threshold).label);
  }
  EvaluationReport r;
  r.benchmark = benchmark_name(records);
  r.mode = EvalMode::Classification;
  r.n = records.size();
  r.macro_f1 = metrics::macro_f1(truth, pred);
  r.balanced_accuracy = metrics::balanced_accuracy(truth, pred);
  return r;
}

EvaluationReport correlation_report(const std::vector<BenchmarkRecord>& records, std::span<const double> conf) {
  if (records.size() != conf.size()) data_error("correlation_report: one confidence per record required");
  if (records.size() < 3) data_error("correlation_report: need at least 3 records");
  std::vector<double> human;
  for (const auto& rec : records) {
    if (!rec.numeric_score) data_error("record '" + rec.id + "' has no numeric human score");
    human.push_back(*rec.numeric_score);
  }
  EvaluationReport r;
  r.benchmark = benchmark_name(records);
  r.mode = EvalMode::Correlation;
  r.n = records.size();
  r.pearson = metrics::pearson(conf, human);
  r.spearman = metrics::spearman(conf, human);
  r.pearson_p = metrics::correlation_significance(*r.pearson, r.n);
  r.spearman_p = metrics::correlation_significance(*r.spearman, r.n);
  return r;
}

std::vector<double> confidences(const ConsistencyModel& model, const std::vector<BenchmarkRecord>& records) {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(model.confidence(r.summary, r.article));
  return out;
}

EvaluationReport evaluate_classification(const ConsistencyModel& model, const std::vector<BenchmarkRecord>& records,
                                         double threshold) {
  for (const auto& r : records)
    if (!r.binary_label) data_error("record '" + r.id + "' is not binarized");
  return classification_report(records, confidences(model, records), threshold);
}

EvaluationReport evaluate_correlation(const ConsistencyModel& model, const std::vector<BenchmarkRecord>& records) {
  if (records.size() < 3) data_error("evaluate_correlation: need at least 3 records");
  return correlation_report(records, confidences(model, records));
}

std::vector<double> confidences_from_predictions(const std::vector<Prediction>& predictions,
                                                 const std::vector<BenchmarkRecord>& records) {
  std::unordered_map<std::string_view, double> by_id;
  for (const auto& p : predictions) by_id[p.id] = p.confidence;
  std::vector<double> out;
  for (const auto& r : records) {
    auto it = by_id.find(r.id);
    if (it == by_id.end()) data_error("no prediction for record '" + r.id + "'");
    out.push_back(it->second);
  }
  return out;
}

const ConsistencyModel& PipelineResult::selected() const {
  if (checkpoints.empty()) backend_error("pipeline produced no classifier");
  return *checkpoints[selection ? selection->index : checkpoints.size() - 1];
}

std::optional<double> mean_distance(const std::vector<GeneratedSummary>& negatives, const CorpusSplit& split,
                                    const metrics::SimilarityScorer& scorer) {
  if (negatives.empty()) return std::nullopt;
  std::unordered_map<std::string_view, std::string_view> reference;
  for (const auto& p : split.gen_half) reference[p.id] = p.summary;
  double sum = 0;
  for (const auto& g : negatives) {
    auto it = reference.find(g.pair_id);
    if (it == reference.end()) data_error("negative references unknown pair '" + g.pair_id + "'");
    sum += metrics::distance_from_reference(scorer, it->second, g.text);
  }
  return sum / static_cast<double>(negatives.size());
}

std::optional<double> mean_diversity(const std::vector<GeneratedSummary>& negatives,
                                     const metrics::SimilarityScorer& scorer) {
  std::map<std::string_view, std::vector<std::string>> groups;
  for (const auto& g : negatives) groups[g.pair_id].push_back(g.text);
  double sum = 0;
  std::size_t n = 0;
  for (const auto& [_, samples] : groups) {
    if (samples.size() < 2) continue;
    sum += metrics::diversity(samples, scorer);
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

PipelineResult run_pipeline(const std::vector<DocumentPair>& corpus, const std::vector<BenchmarkRecord>& validation,
                            const PipelineConfig& config, std::optional<std::uint64_t> row_seed) {
  const std::uint64_t seed = row_seed.value_or(config.seed);
  const auto annotator = make_annotator(config.masking.annotator);
  const auto backend = make_backend(config.infill_backend);
  const auto classifier = make_classifier(config.classifier_backend);
  const auto scorer = metrics::make_scorer(config.scorer);

  PipelineResult r;
  r.split = split_half(corpus, config.seed);
  if (config.method != Method::Mf) {
    r.training_examples = make_training_examples(r.split, config.method, config.masking, *annotator, seed);
    if (backend->supports_training()) r.infiller = train_infiller(*backend, r.training_examples, config.infill_train);
  }
  GenerateOptions gen{config.n_samples, seed, config.decode, config.jobs};
  r.negatives = generate_negatives(*backend, r.infiller.get(), r.split, config.method, config.masking, *annotator, gen);
  r.dataset = assemble(r.split, r.negatives, config.filter, derive_seed(seed, "", "dataset", 0));
  r.checkpoints = train_classifier_checkpoints(*classifier, r.dataset, config.classifier);
  if (!validation.empty()) {
    std::vector<const ConsistencyModel*> handles;
    for (const auto& c : r.checkpoints) handles.push_back(c.get());
    r.selection = select_model(handles, validation, config.threshold);
  }
  r.mean_distance = mean_distance(r.negatives, r.split, *scorer);
  r.mean_diversity = mean_diversity(r.negatives, *scorer);
  return r;
}

SweepGrid SweepGrid::from_config(const PipelineConfig& config) {
  return {config.sweep_gamma_a, config.sweep_gamma_s, config.masking.unit, config.method};
}

json SweepRow::to_json() const {
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json j = {{"gamma_a", gamma_a}, {"gamma_s", gamma_s}, {"ba", opt(ba)}, {"distance", opt(distance)},
            {"diversity", opt(diversity)}, {"ok", ok}};
  if (!ok) j["error"] = error;
  return j;
}

std::uint64_t row_seed(std::uint64_t seed, double gamma_a, double gamma_s) {
  return hash::Hasher(seed).add(std::string_view("sweep-row")).add_double(gamma_a).add_double(gamma_s).digest();
}

std::vector<SweepRow> run_sweep(const SweepGrid& grid, const PipelineConfig& config,
                                const std::vector<DocumentPair>& corpus, const std::vector<BenchmarkRecord>& validation) {
  if (grid.gamma_a.empty() || grid.gamma_s.empty()) config_error("sweep grid is empty");
  for (const auto* axis : {&grid.gamma_a, &grid.gamma_s})
    for (double g : *axis)
      if (!(g >= 0.0 && g <= 1.0)) config_error("sweep ratios must lie in [0, 1]");

  std::vector<SweepRow> rows;
  for (double ga : grid.gamma_a)
    for (double gs : grid.gamma_s) {
      SweepRow row;
      row.gamma_a = ga;
      row.gamma_s = gs;
      rows.push_back(std::move(row));
    }

  auto run_row = [&](SweepRow& row) {
    PipelineConfig cfg = config;
    cfg.masking.gamma_a = row.gamma_a;
    cfg.masking.gamma_s = row.gamma_s;
    cfg.masking.unit = grid.unit;
    cfg.method = grid.method;
    cfg.jobs = 1;
    try {
      auto result = run_pipeline(corpus, validation, cfg, row_seed(config.seed, row.gamma_a, row.gamma_s));
      if (result.selection) row.ba = result.selection->balanced_accuracy;
      row.distance = result.mean_distance;
      row.diversity = result.mean_diversity;
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
  };

  const std::size_t jobs = std::max<std::size_t>(1, std::min(config.jobs, rows.size()));
  if (jobs == 1) {
    for (auto& row : rows) run_row(row);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < jobs; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < rows.size(); i += jobs) run_row(rows[i]);
      });
    for (auto& t : pool) t.join();
  }
  return rows;
}

json sweep_report(const std::vector<SweepRow>& rows, const PipelineConfig& config) {
  json arr = json::array();
  for (const auto& r : rows) arr.push_back(r.to_json());
  return {{"fingerprint", config.fingerprint()}, {"config", config.to_json()}, {"rows", arr}};
}

std::vector<SweepRow> rows_from_report(const json& report) {
  if (!report.contains("rows") || !report["rows"].is_array()) data_error("sweep report has no rows");
  std::vector<SweepRow> out;
  auto opt = [](const json& j, const char* k) -> std::optional<double> {
    if (!j.contains(k) || j[k].is_null()) return std::nullopt;
    return j[k].get<double>();
  };
  try {
    for (const auto& j : report["rows"]) {
      SweepRow r;
      r.gamma_a = j.at("gamma_a").get<double>();
      r.gamma_s = j.at("gamma_s").get<double>();
      r.ba = opt(j, "ba");
      r.distance = opt(j, "distance");
      r.diversity = opt(j, "diversity");
      r.ok = j.value("ok", true);
      r.error = j.value("error", std::string());
      out.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    data_error(std::string("malformed sweep row: ") + e.what());
  }
  return out;
}

AnalysisField parse_analysis_field(std::string_view s) {
  if (s == "distance") return AnalysisField::Distance;
  if (s == "diversity") return AnalysisField::Diversity;
  config_error("unknown analysis field '" + std::string(s) + "' (expected distance or diversity)");
}

metrics::QuadraticFit fit_analysis(const std::vector<SweepRow>& rows, AnalysisField field) {
  std::vector<double> x, y;
  for (const auto& r : rows) {
    const auto& v = field == AnalysisField::Distance ? r.distance : r.diversity;
    if (!r.ok || !r.ba || !v || !std::isfinite(*v) || !std::isfinite(*r.ba)) continue;
    x.push_back(*v);
    y.push_back(*r.ba);
  }
  if (x.size() < 3) data_error("fit_analysis: need at least 3 usable rows, have " + std::to_string(x.size()));
  return metrics::fit_quadratic(x, y);
}

}  // namespace maskfill
