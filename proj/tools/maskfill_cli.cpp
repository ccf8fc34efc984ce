// maskfill command-line tool. Every verb takes one config file plus
// `--set section.key=value` overrides and writes <out>/manifest.json.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "maskfill/harness.hpp"
#include "maskfill/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace maskfill;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Common {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("-c,--config", c.config_path, "Run config (TOML subset)")->required();
  cmd->add_option("-s,--set", c.overrides, "Override, e.g. masking.gamma_a=0.4 (repeatable)");
  cmd->add_option("--seed", c.seed, "Global seed; overrides the config value");
  cmd->add_option("-o,--out", c.out, "Output directory")->capture_default_str();
}

// Relative data paths in a config are taken from the config file's
// directory. The config itself keeps them as written so that fingerprints
// do not depend on where the checkout lives.
fs::path g_config_dir;

fs::path data_path(const std::string& p) {
  if (p.empty() || fs::path(p).is_absolute()) return p;
  return g_config_dir / p;
}

PipelineConfig load_config(const Common& c) {
  json j = load_config_file(c.config_path);
  for (const auto& o : c.overrides) apply_override(j, o);
  if (c.seed) j["seed"] = *c.seed;
  g_config_dir = fs::absolute(c.config_path).parent_path();
  return PipelineConfig::from_json(j);
}

std::vector<DocumentPair> load_corpus(const PipelineConfig& cfg) {
  if (cfg.corpus_path.empty()) config_error("corpus.path is not set");
  return load_pairs(data_path(cfg.corpus_path), parse_corpus_format(cfg.corpus_format));
}

std::vector<BenchmarkRecord> load_validation(const PipelineConfig& cfg) {
  if (cfg.validation_path.empty()) return {};
  return binarize_all(load_benchmark(data_path(cfg.validation_path), parse_benchmark(cfg.validation_schema)));
}

CorpusSplit load_split(const fs::path& dir, std::uint64_t seed) {
  CorpusSplit s;
  s.train_half = load_pairs(dir / "train_half.jsonl", CorpusFormat::JsonlPairs);
  s.gen_half = load_pairs(dir / "gen_half.jsonl", CorpusFormat::JsonlPairs);
  s.seed = seed;
  return s;
}

class Manifest {
 public:
  Manifest(std::string verb, const PipelineConfig& cfg, const Common& c) : out_(c.out) {
    j_ = {{"verb", std::move(verb)},
          {"version", kVersion},
          {"seed", cfg.seed},
          {"fingerprint", cfg.fingerprint()},
          {"config_file", fs::absolute(c.config_path).string()},
          {"overrides", c.overrides},
          {"config", cfg.to_json()},
          {"inputs", json::object()},
          {"outputs", json::array()}};
  }
  void input(const std::string& name, const fs::path& p) { j_["inputs"][name] = p.string(); }
  void output(const fs::path& p) { j_["outputs"].push_back(p.filename().string()); }
  json& extra() { return j_; }
  void write() const { io::write_file(out_ / "manifest.json", j_.dump(2) + "\n"); }

 private:
  fs::path out_;
  json j_;
};

void write_json(const fs::path& p, const json& j, Manifest& m) {
  io::write_file(p, j.dump(2) + "\n");
  m.output(p);
}

void purge(const fs::path& negatives, Manifest& m) {
  std::error_code ec;
  if (!fs::remove(negatives, ec) || ec) data_error("cannot delete generated negatives at " + negatives.string());
  m.extra()["purged"] = negatives.string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mask-and-fill negative sampling and factual-consistency evaluation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "Suppress warnings");

  Common c;
  std::string split_dir, negatives_path, infiller_path, dataset_path, checkpoint_path, benchmark_path, schema,
      predictions_path, report_path, mode = "classification", field = "distance";
  std::size_t limit = 3;
  bool purge_generated = false;

  auto* split = app.add_subcommand("split", "Split the corpus into train and generation halves");
  auto* preview = app.add_subcommand("mask-preview", "Show serialized masked inputs for a few pairs");
  preview->add_option("-n,--limit", limit, "Pairs to show")->capture_default_str();
  auto* train_inf = app.add_subcommand("train-infiller", "Train the infilling model on the train half");
  auto* generate = app.add_subcommand("generate", "Generate negative summaries for the generation half");
  generate->add_option("--infiller", infiller_path, "Trained infiller (infiller.json)");
  auto* build = app.add_subcommand("build-dataset", "Assemble the labelled classifier dataset");
  build->add_option("--negatives", negatives_path, "negatives.jsonl")->required();
  build->add_flag("--purge-generated", purge_generated, "Delete the negatives file once the dataset is written");
  auto* train_cls = app.add_subcommand("train-classifier", "Train the consistency classifier");
  train_cls->add_option("--dataset", dataset_path, "dataset.jsonl")->required();
  train_cls->add_option("--negatives", negatives_path, "Negatives file to delete with --purge-generated");
  train_cls->add_flag("--purge-generated", purge_generated, "Delete the negatives file after training");
  auto* evaluate = app.add_subcommand("evaluate", "Score a benchmark with a classifier or a prediction file");
  evaluate->add_option("--benchmark", benchmark_path, "Benchmark JSONL")->required();
  evaluate->add_option("--schema", schema, "Benchmark id, e.g. factcc-test, summeval, qags-cnndm")->required();
  auto* src = evaluate->add_option_group("source")->require_option(1);
  src->add_option("--checkpoint", checkpoint_path, "Classifier checkpoint directory");
  src->add_option("--predictions", predictions_path, "Precomputed predictions JSONL (baselines)");
  evaluate->add_option("--mode", mode, "classification or correlation")
      ->check(CLI::IsMember({"classification", "correlation"}))
      ->capture_default_str();
  auto* sweep = app.add_subcommand("sweep", "Run the gamma_a x gamma_s grid");
  auto* analyze = app.add_subcommand("analyze", "Quadratic fit of validation BA against distance or diversity");
  analyze->add_option("--report", report_path, "Sweep report.json")->required();
  analyze->add_option("--field", field, "distance or diversity")
      ->check(CLI::IsMember({"distance", "diversity"}))
      ->capture_default_str();
  auto* plot = app.add_subcommand("plot", "Write heatmap and scatter plots (SVG plus CSV)");
  plot->add_option("--report", report_path, "Sweep report.json")->required();

  for (auto* cmd : {split, preview, train_inf, generate, build, train_cls, evaluate, sweep, analyze, plot})
    add_common(cmd, c);
  for (auto* cmd : {train_inf, generate, build})
    cmd->add_option("--split", split_dir, "Directory written by `split`")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(ErrorKind::Config);
  }
  log::set_quiet(quiet);

  try {
    const auto cfg = load_config(c);
    const fs::path out = c.out;
    fs::create_directories(out);
    CLI::App* verb = app.get_subcommands().front();
    Manifest m(verb->get_name(), cfg, c);
    const auto annotator = make_annotator(cfg.masking.annotator);

    if (verb == split) {
      const auto corpus = load_corpus(cfg);
      m.input("corpus", data_path(cfg.corpus_path));
      const auto s = split_half(corpus, cfg.seed);
      save_pairs(out / "train_half.jsonl", s.train_half);
      save_pairs(out / "gen_half.jsonl", s.gen_half);
      m.output(out / "train_half.jsonl");
      m.output(out / "gen_half.jsonl");
      m.extra()["counts"] = {{"train_half", s.train_half.size()}, {"gen_half", s.gen_half.size()}};
    } else if (verb == preview) {
      const auto corpus = load_corpus(cfg);
      m.input("corpus", data_path(cfg.corpus_path));
      std::vector<json> rows;
      for (std::size_t i = 0; i < corpus.size() && i < limit; ++i) {
        const auto p = prepare_input(corpus[i], cfg.method, cfg.masking, *annotator, cfg.seed, 0);
        std::cout << corpus[i].id << "\n  " << p.input << "\n";
        rows.push_back({{"id", corpus[i].id}, {"method", to_string(cfg.method)}, {"input", p.input}});
      }
      io::write_jsonl(out / "preview.jsonl", rows);
      m.output(out / "preview.jsonl");
    } else if (verb == train_inf) {
      const auto s = load_split(split_dir, cfg.seed);
      m.input("split", split_dir);
      if (cfg.method == Method::Mf) config_error("the mf method has no infiller to train");
      const auto examples = make_training_examples(s, cfg.method, cfg.masking, *annotator, cfg.seed);
      std::vector<json> rows;
      for (const auto& e : examples) rows.push_back({{"pair_id", e.pair_id}, {"input", e.input}, {"target", e.target}});
      io::write_jsonl(out / "training_examples.jsonl", rows);
      m.output(out / "training_examples.jsonl");
      const auto backend = make_backend(cfg.infill_backend);
      const auto model = train_infiller(*backend, examples, cfg.infill_train);
      write_json(out / "infiller.json", model->to_json(), m);
    } else if (verb == generate) {
      const auto s = load_split(split_dir, cfg.seed);
      m.input("split", split_dir);
      const auto backend = make_backend(cfg.infill_backend);
      std::unique_ptr<InfillModel> model;
      if (!infiller_path.empty()) {
        model = backend->load(json::parse(io::read_file(infiller_path)));
        m.input("infiller", infiller_path);
      }
      const GenerateOptions opt{cfg.n_samples, cfg.seed, cfg.decode, cfg.jobs};
      const auto negs = generate_negatives(*backend, model.get(), s, cfg.method, cfg.masking, *annotator, opt);
      save_negatives(out / "negatives.jsonl", negs);
      m.output(out / "negatives.jsonl");
      m.extra()["counts"] = {{"negatives", negs.size()}};
    } else if (verb == build) {
      const auto s = load_split(split_dir, cfg.seed);
      const auto negs = load_negatives(negatives_path);
      m.input("split", split_dir);
      m.input("negatives", negatives_path);
      const auto ds = assemble(s, negs, cfg.filter, derive_seed(cfg.seed, "", "dataset", 0));
      save_dataset(out / "dataset.jsonl", ds);
      m.output(out / "dataset.jsonl");
      write_json(out / "stats.json", dataset_stats(ds).to_json(), m);
      m.extra()["dataset_hash"] = dataset_fingerprint(ds);
      if (purge_generated) purge(negatives_path, m);
    } else if (verb == train_cls) {
      if (purge_generated && negatives_path.empty()) config_error("--purge-generated needs --negatives");
      const auto ds = load_dataset(dataset_path);
      m.input("dataset", dataset_path);
      const auto backend = make_classifier(cfg.classifier_backend);
      const auto ckpts = train_classifier_checkpoints(*backend, ds, cfg.classifier);
      std::size_t chosen = ckpts.size() - 1;
      json selection = {{"metric", "none"}, {"index", chosen}};
      const auto validation = load_validation(cfg);
      if (!validation.empty()) {
        m.input("validation", data_path(cfg.validation_path));
        std::vector<const ConsistencyModel*> handles;
        for (const auto& k : ckpts) handles.push_back(k.get());
        const auto sel = select_model(handles, validation, cfg.threshold);
        chosen = sel.index;
        selection = {{"metric", "balanced_accuracy"}, {"index", sel.index}, {"value", sel.balanced_accuracy},
                     {"per_epoch", sel.all_scores}};
      }
      save_checkpoint(out / "checkpoint", *ckpts[chosen],
                      {{"dataset_hash", dataset_fingerprint(ds)},
                       {"config", cfg.to_json()},
                       {"fingerprint", cfg.fingerprint()},
                       {"selection", selection},
                       {"encoding", "summary <sep> article, article tail truncated"}});
      m.output(out / "checkpoint");
      m.extra()["selection"] = selection;
      if (purge_generated) purge(negatives_path, m);
    } else if (verb == evaluate) {
      const auto records = binarize_all(load_benchmark(benchmark_path, parse_benchmark(schema)));
      m.input("benchmark", benchmark_path);
      std::vector<double> conf;
      if (!checkpoint_path.empty()) {
        const auto model = load_checkpoint(checkpoint_path);
        m.input("checkpoint", checkpoint_path);
        conf = confidences(*model, records);
      } else {
        conf = confidences_from_predictions(load_predictions(predictions_path), records);
        m.input("predictions", predictions_path);
      }
      auto rep = mode == "correlation" ? correlation_report(records, conf)
                                       : classification_report(records, conf, cfg.threshold);
      rep.fingerprint = cfg.fingerprint();
      std::vector<Prediction> preds;
      for (std::size_t i = 0; i < records.size(); ++i)
        preds.push_back({records[i].id, conf[i], make_score(conf[i], cfg.threshold).label});
      save_predictions(out / "predictions.jsonl", preds);
      m.output(out / "predictions.jsonl");
      write_json(out / "report.json", rep.to_json(), m);
      std::cout << rep.to_json().dump(2) << "\n";
    } else if (verb == sweep) {
      const auto corpus = load_corpus(cfg);
      const auto validation = load_validation(cfg);
      m.input("corpus", data_path(cfg.corpus_path));
      if (!validation.empty()) m.input("validation", data_path(cfg.validation_path));
      const auto rows = run_sweep(SweepGrid::from_config(cfg), cfg, corpus, validation);
      write_json(out / "report.json", sweep_report(rows, cfg), m);
      io::write_file(out / "sweep.csv", sweep_csv(rows));
      m.output(out / "sweep.csv");
      std::size_t failed = 0;
      for (const auto& r : rows) failed += !r.ok;
      m.extra()["counts"] = {{"rows", rows.size()}, {"failed_rows", failed}};
      if (failed) log::warn(std::to_string(failed) + " sweep rows failed; see report.json");
    } else if (verb == analyze) {
      const auto rows = rows_from_report(json::parse(io::read_file(report_path)));
      m.input("report", report_path);
      const auto fit = fit_analysis(rows, parse_analysis_field(field));
      const json result = {{"field", field}, {"a", fit.a}, {"b", fit.b}, {"c", fit.c}, {"r_squared", fit.r_squared}};
      write_json(out / ("analysis_" + field + ".json"), result, m);
      std::cout << result.dump(2) << "\n";
    } else if (verb == plot) {
      const auto rows = rows_from_report(json::parse(io::read_file(report_path)));
      m.input("report", report_path);
      for (const auto& p : emit_plots(rows, out)) m.output(p);
    }
    m.write();
    return 0;
  } catch (const Error& e) {
    std::cerr << "maskfill: " << e.what() << "\n";
    return e.exit_code();
  } catch (const json::exception& e) {
    std::cerr << "maskfill: malformed JSON: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::Data);
  } catch (const fs::filesystem_error& e) {
    std::cerr << "maskfill: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::Data);
  }
}
