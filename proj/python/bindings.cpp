#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "maskfill/harness.hpp"

namespace py = pybind11;
using nlohmann::json;
using namespace maskfill;

namespace {

// Round-trips through text so callers can pass and receive plain dicts.
json to_cpp(const py::object& o) {
  return json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}
py::object to_py(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

PipelineConfig config_from(const py::object& cfg, const std::vector<std::string>& overrides) {
  json j = py::isinstance<py::dict>(cfg) ? to_cpp(cfg) : load_config_file(cfg.cast<std::filesystem::path>());
  for (const auto& o : overrides) apply_override(j, o);
  return PipelineConfig::from_json(j);
}

std::vector<Label> labels(const std::vector<std::string>& xs) {
  std::vector<Label> out;
  for (const auto& x : xs) out.push_back(parse_label(x));
  return out;
}

py::dict pair_dict(const DocumentPair& p) {
  py::dict d;
  d["id"] = p.id;
  d["article"] = p.article;
  d["summary"] = p.summary;
  return d;
}

py::dict masked_dict(const MaskedText& m) {
  py::list spans;
  for (const auto& s : m.plan.masked_spans) spans.append(py::make_tuple(s.start, s.end, s.surface));
  py::dict d;
  d["text"] = m.text;
  d["masked_spans"] = spans;
  d["n_spans"] = m.plan.all_spans.size();
  d["sentinel_count"] = m.sentinel_count;
  d["no_spans"] = m.no_spans;
  return d;
}

}  // namespace

PYBIND11_MODULE(_maskfill, m) {
  m.doc() = "Mask-and-fill negative sampling and factual-consistency evaluation";

  static py::exception<Error> base(m, "MaskfillError");
  static py::exception<Error> config_exc(m, "ConfigError", base.ptr());
  static py::exception<Error> data_exc(m, "DataError", base.ptr());
  static py::exception<Error> backend_exc(m, "BackendError", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      switch (e.kind()) {
        case ErrorKind::Config: config_exc(e.what()); break;
        case ErrorKind::Data: data_exc(e.what()); break;
        case ErrorKind::Backend: backend_exc(e.what()); break;
      }
    }
  });

  // Masking.
  m.def("mask_count", &mask_count, py::arg("n_spans"), py::arg("gamma"));
  m.def(
      "extract_spans",
      [](const std::string& text, const std::string& unit, const std::string& annotator) {
        std::vector<std::tuple<std::size_t, std::size_t, std::string>> out;
        for (const auto& s : extract_spans(text, parse_unit(unit), *make_annotator(annotator)))
          out.emplace_back(s.start, s.end, s.surface);
        return out;
      },
      py::arg("text"), py::arg("unit") = "np_ent", py::arg("annotator") = "rule");
  m.def(
      "mask_text",
      [](const std::string& text, double gamma, std::uint64_t seed, const std::string& unit,
         const std::string& annotator) {
        return masked_dict(mask_text(text, parse_unit(unit), gamma, seed, *make_annotator(annotator)));
      },
      py::arg("text"), py::arg("gamma"), py::arg("seed"), py::arg("unit") = "np_ent", py::arg("annotator") = "rule");
  m.def(
      "prepare_input",
      [](const std::string& id, const std::string& article, const std::string& summary, const std::string& method,
         std::uint64_t seed, std::size_t sample_index, double gamma_a, double gamma_s, const std::string& unit) {
        MaskingConfig mc{gamma_a, gamma_s, parse_unit(unit), "rule"};
        return prepare_input({id, article, summary}, parse_method(method), mc, *make_annotator(mc.annotator), seed,
                             sample_index)
            .input;
      },
      py::arg("id"), py::arg("article"), py::arg("summary"), py::arg("method") = "mfma", py::arg("seed") = 0,
      py::arg("sample_index") = 0, py::arg("gamma_a") = 0.6, py::arg("gamma_s") = 0.8, py::arg("unit") = "np_ent");
  m.def("mock_fill", &mock_fill, py::arg("input"), py::arg("seed"));

  // Corpus.
  m.def(
      "load_pairs",
      [](const std::filesystem::path& path, const std::string& format) {
        py::list out;
        for (const auto& p : load_pairs(path, parse_corpus_format(format))) out.append(pair_dict(p));
        return out;
      },
      py::arg("path"), py::arg("format") = "jsonl-pairs");
  m.def(
      "split_half",
      [](const std::filesystem::path& path, std::uint64_t seed) {
        const auto s = split_half(load_pairs(path, CorpusFormat::JsonlPairs), seed);
        py::list train, gen;
        for (const auto& p : s.train_half) train.append(pair_dict(p));
        for (const auto& p : s.gen_half) gen.append(pair_dict(p));
        return py::make_tuple(train, gen);
      },
      py::arg("path"), py::arg("seed"));
  m.def(
      "binarize",
      [](const std::string& benchmark, const std::vector<int>& judgments) {
        BenchmarkRecord r;
        r.benchmark = parse_benchmark(benchmark);
        r.judgments = judgments;
        return std::string(to_string(*binarize(r, rule_for(r.benchmark)).binary_label));
      },
      py::arg("benchmark"), py::arg("judgments"));

  // Metrics.
  m.def(
      "macro_f1",
      [](const std::vector<std::string>& t, const std::vector<std::string>& p) {
        return metrics::macro_f1(labels(t), labels(p));
      },
      py::arg("truth"), py::arg("predicted"));
  m.def(
      "balanced_accuracy",
      [](const std::vector<std::string>& t, const std::vector<std::string>& p) {
        return metrics::balanced_accuracy(labels(t), labels(p));
      },
      py::arg("truth"), py::arg("predicted"));
  using Vec = const std::vector<double>&;
  m.def("pearson", [](Vec x, Vec y) { return metrics::pearson(x, y); }, py::arg("x"), py::arg("y"));
  m.def("spearman", [](Vec x, Vec y) { return metrics::spearman(x, y); }, py::arg("x"), py::arg("y"));
  m.def("correlation_significance", &metrics::correlation_significance, py::arg("r"), py::arg("n"));
  m.def(
      "fit_quadratic",
      [](const std::vector<double>& x, const std::vector<double>& y) {
        const auto f = metrics::fit_quadratic(x, y);
        py::dict d;
        d["a"] = f.a;
        d["b"] = f.b;
        d["c"] = f.c;
        d["r_squared"] = f.r_squared;
        return d;
      },
      py::arg("x"), py::arg("y"));
  m.def(
      "diversity",
      [](const std::vector<std::string>& samples, const std::string& scorer) {
        return metrics::diversity(samples, *metrics::make_scorer(scorer));
      },
      py::arg("samples"), py::arg("scorer") = "token_f1");

  // Config and runs. `config` is a dict in config-file shape or a path.
  m.def(
      "config_fingerprint",
      [](const py::object& cfg, const std::vector<std::string>& overrides) {
        return config_from(cfg, overrides).fingerprint();
      },
      py::arg("config"), py::arg("overrides") = std::vector<std::string>{});
  m.def(
      "run_pipeline",
      [](const py::object& cfg, const std::filesystem::path& corpus, const std::optional<std::filesystem::path>& validation,
         const std::vector<std::string>& overrides) {
        const auto c = config_from(cfg, overrides);
        const auto pairs = load_pairs(corpus, parse_corpus_format(c.corpus_format));
        std::vector<BenchmarkRecord> val;
        if (validation) val = binarize_all(load_benchmark(*validation, parse_benchmark(c.validation_schema)));
        PipelineResult r;
        {
          py::gil_scoped_release release;
          r = run_pipeline(pairs, val, c);
        }
        json out = {{"fingerprint", c.fingerprint()},
                    {"train_half", r.split.train_half.size()},
                    {"gen_half", r.split.gen_half.size()},
                    {"negatives", json::array()},
                    {"dataset_size", r.dataset.size()},
                    {"checkpoints", r.checkpoints.size()},
                    {"selected", r.selected().to_json()}};
        for (const auto& g : r.negatives) out["negatives"].push_back(to_json(g));
        if (r.selection) out["validation_ba"] = r.selection->balanced_accuracy;
        if (r.mean_distance) out["mean_distance"] = *r.mean_distance;
        if (r.mean_diversity) out["mean_diversity"] = *r.mean_diversity;
        return to_py(out);
      },
      py::arg("config"), py::arg("corpus"), py::arg("validation") = std::nullopt,
      py::arg("overrides") = std::vector<std::string>{});
  m.def(
      "run_sweep",
      [](const py::object& cfg, const std::filesystem::path& corpus, const std::optional<std::filesystem::path>& validation,
         const std::vector<std::string>& overrides) {
        const auto c = config_from(cfg, overrides);
        const auto pairs = load_pairs(corpus, parse_corpus_format(c.corpus_format));
        std::vector<BenchmarkRecord> val;
        if (validation) val = binarize_all(load_benchmark(*validation, parse_benchmark(c.validation_schema)));
        std::vector<SweepRow> rows;
        {
          py::gil_scoped_release release;
          rows = run_sweep(SweepGrid::from_config(c), c, pairs, val);
        }
        return to_py(sweep_report(rows, c));
      },
      py::arg("config"), py::arg("corpus"), py::arg("validation") = std::nullopt,
      py::arg("overrides") = std::vector<std::string>{});
  m.def(
      "fit_analysis",
      [](const py::dict& report, const std::string& field) {
        const auto f = fit_analysis(rows_from_report(to_cpp(report)), parse_analysis_field(field));
        py::dict d;
        d["a"] = f.a;
        d["b"] = f.b;
        d["c"] = f.c;
        d["r_squared"] = f.r_squared;
        return d;
      },
      py::arg("report"), py::arg("field") = "distance");
}
