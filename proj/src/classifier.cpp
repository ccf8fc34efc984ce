#include "maskfill/classifier.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <unordered_set>

#include "maskfill/io.hpp"
#include "maskfill/metrics.hpp"

namespace maskfill {

using io::json;

namespace {

std::string_view truncate_article(std::string_view summary, std::string_view article, std::size_t max_input_len) {
  const std::size_t summary_tokens = text::token_bounds(summary).size();
  const std::size_t budget = max_input_len > summary_tokens + 1 ? max_input_len - summary_tokens - 1 : 0;
  const auto bounds = text::token_bounds(article);
  if (bounds.size() <= budget) return article;
  if (budget == 0) return {};
  return article.substr(0, bounds[budget - 1].second);
}

std::vector<std::string> content_words(std::string_view s) {
  std::vector<std::string> out;
  for (auto tok : text::tokens(s)) {
    auto w = text::content_word(tok);
    if (!w.empty()) out.push_back(std::move(w));
  }
  return out;
}

double sigmoid(double z) {
  return z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

// Solves the 3x3 system h * x = g by Gaussian elimination with partial pivoting.
std::array<double, 3> solve3(std::array<std::array<double, 3>, 3> h, std::array<double, 3> g) {
  for (std::size_t k = 0; k < 3; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < 3; ++i)
      if (std::abs(h[i][k]) > std::abs(h[piv][k])) piv = i;
    std::swap(h[k], h[piv]);
    std::swap(g[k], g[piv]);
    if (h[k][k] == 0.0) backend_error("singular Hessian in overlap classifier");
    for (std::size_t i = k + 1; i < 3; ++i) {
      const double f = h[i][k] / h[k][k];
      for (std::size_t j = k; j < 3; ++j) h[i][j] -= f * h[k][j];
      g[i] -= f * g[k];
    }
  }
  std::array<double, 3> x{};
  for (int k = 2; k >= 0; --k) {
    const auto ku = static_cast<std::size_t>(k);
    double s = g[ku];
    for (std::size_t j = ku + 1; j < 3; ++j) s -= h[ku][j] * x[j];
    x[ku] = s / h[ku][ku];
  }
  return x;
}

struct ClassifierRegistry {
  std::mutex mu;
  std::map<std::string, ClassifierFactory, std::less<>> factories{
      {"overlap", [] { return std::make_unique<OverlapBackend>(); }}};
};

ClassifierRegistry& classifiers() {
  static ClassifierRegistry r;
  return r;
}

}  // namespace

std::string encode_pair(std::string_view summary, std::string_view article, std::size_t max_input_len) {
  const std::string_view kept = truncate_article(summary, article, max_input_len);
  std::string out(summary);
  out += ' ';
  out += kSeparator;
  if (!kept.empty()) {
    out += ' ';
    out += kept;
  }
  return out;
}

json ClassifierConfig::to_json() const {
  return {{"epochs", epochs}, {"lr", learning_rate}, {"batch", batch_size}, {"max_input_len", max_input_len}};
}

ClassifierConfig ClassifierConfig::from_json(const json& j) {
  ClassifierConfig c;
  c.epochs = j.value("epochs", c.epochs);
  c.learning_rate = j.value("lr", c.learning_rate);
  c.batch_size = j.value("batch", c.batch_size);
  c.max_input_len = j.value("max_input_len", c.max_input_len);
  return c;
}

ConsistencyScore make_score(double confidence, double threshold) {
  return {confidence, confidence >= threshold ? Label::Consistent : Label::Inconsistent};
}

ConsistencyScore score(const ConsistencyModel& model, std::string_view summary, std::string_view article,
                       double threshold) {
  return make_score(model.confidence(summary, article), threshold);
}

std::array<double, 2> overlap_features(std::string_view summary, std::string_view article) {
  const auto sw = content_words(summary);
  const auto aw = content_words(article);
  if (sw.empty()) return {0.0, 0.0};
  std::unordered_set<std::string> uni(aw.begin(), aw.end());
  std::unordered_set<std::string> bi;
  for (std::size_t i = 0; i + 1 < aw.size(); ++i) bi.insert(aw[i] + ' ' + aw[i + 1]);

  std::size_t hit1 = 0;
  for (const auto& w : sw) hit1 += uni.count(w);
  const double unigram = static_cast<double>(hit1) / static_cast<double>(sw.size());
  if (sw.size() < 2) return {unigram, unigram};
  std::size_t hit2 = 0;
  for (std::size_t i = 0; i + 1 < sw.size(); ++i) hit2 += bi.count(sw[i] + ' ' + sw[i + 1]);
  return {unigram, static_cast<double>(hit2) / static_cast<double>(sw.size() - 1)};
}

double OverlapModel::confidence(std::string_view summary, std::string_view article) const {
  const auto f = overlap_features(summary, truncate_article(summary, article, max_input_len_));
  return sigmoid(weights_[0] + weights_[1] * f[0] + weights_[2] * f[1]);
}

json OverlapModel::to_json() const {
  return {{"backend", "overlap"}, {"weights", weights_}, {"max_input_len", max_input_len_}};
}

std::vector<std::unique_ptr<ConsistencyModel>> OverlapBackend::train(const std::vector<LabeledExample>& dataset,
                                                                     const ClassifierConfig& config) const {
  std::vector<std::array<double, 3>> x;
  std::vector<double> y;
  x.reserve(dataset.size());
  for (const auto& e : dataset) {
    const auto f = overlap_features(e.summary, truncate_article(e.summary, e.article, config.max_input_len));
    x.push_back({1.0, f[0], f[1]});
    y.push_back(e.label == Label::Consistent ? 1.0 : 0.0);
  }
  const double n = static_cast<double>(dataset.size());

  std::vector<std::unique_ptr<ConsistencyModel>> checkpoints;
  std::array<double, 3> w{};
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::array<double, 3> grad{};
    std::array<std::array<double, 3>, 3> hess{};
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double p = sigmoid(w[0] * x[i][0] + w[1] * x[i][1] + w[2] * x[i][2]);
      const double r = p - y[i];
      const double s = p * (1.0 - p);
      for (std::size_t a = 0; a < 3; ++a) {
        grad[a] += r * x[i][a] / n;
        for (std::size_t b = 0; b < 3; ++b) hess[a][b] += s * x[i][a] * x[i][b] / n;
      }
    }
    // Ridge on the feature weights keeps separable data finite.
    for (std::size_t a = 1; a < 3; ++a) {
      grad[a] += kRidge * w[a];
      hess[a][a] += kRidge;
    }
    hess[0][0] += 1e-9;
    const auto step = solve3(hess, grad);
    for (std::size_t a = 0; a < 3; ++a) w[a] -= step[a];
    checkpoints.push_back(std::make_unique<OverlapModel>(w, config.max_input_len));
  }
  return checkpoints;
}

std::unique_ptr<ConsistencyModel> OverlapBackend::load(const json& j) const {
  if (j.value("backend", "") != "overlap" || !j.contains("weights")) backend_error("not an overlap model");
  return std::make_unique<OverlapModel>(j.at("weights").get<std::array<double, 3>>(),
                                        j.value("max_input_len", std::size_t{512}));
}

void register_classifier(std::string name, ClassifierFactory factory) {
  auto& r = classifiers();
  std::lock_guard lock(r.mu);
  r.factories[std::move(name)] = std::move(factory);
}

std::unique_ptr<ClassifierBackend> make_classifier(std::string_view name) {
  auto& r = classifiers();
  std::lock_guard lock(r.mu);
  auto it = r.factories.find(name);
  if (it == r.factories.end()) config_error("unknown classifier backend '" + std::string(name) + "'");
  return it->second();
}

std::vector<std::unique_ptr<ConsistencyModel>> train_classifier_checkpoints(const ClassifierBackend& backend,
                                                                            const std::vector<LabeledExample>& dataset,
                                                                            const ClassifierConfig& config) {
  bool has_c = false, has_i = false;
  for (const auto& e : dataset) (e.label == Label::Consistent ? has_c : has_i) = true;
  if (!has_c || !has_i) data_error("classifier training data must contain both labels");
  if (config.epochs < 1) config_error("classifier epochs must be at least 1");
  auto checkpoints = backend.train(dataset, config);
  if (checkpoints.empty()) backend_error("backend '" + backend.name() + "' produced no checkpoints");
  return checkpoints;
}

std::unique_ptr<ConsistencyModel> train_classifier(const ClassifierBackend& backend,
                                                   const std::vector<LabeledExample>& dataset,
                                                   const ClassifierConfig& config) {
  auto checkpoints = train_classifier_checkpoints(backend, dataset, config);
  return std::move(checkpoints.back());
}

Selection select_model(std::span<const ConsistencyModel* const> checkpoints,
                       const std::vector<BenchmarkRecord>& validation, double threshold) {
  if (checkpoints.empty()) config_error("select_model: no checkpoints");
  std::vector<Label> truth;
  truth.reserve(validation.size());
  for (const auto& r : validation) {
    if (!r.binary_label) data_error("select_model: validation record '" + r.id + "' is not binarized");
    truth.push_back(*r.binary_label);
  }
  Selection sel;
  for (std::size_t c = 0; c < checkpoints.size(); ++c) {
    std::vector<Label> pred;
    pred.reserve(validation.size());
    for (const auto& r : validation) pred.push_back(score(*checkpoints[c], r.summary, r.article, threshold).label);
    const double ba = metrics::balanced_accuracy(truth, pred);
    sel.all_scores.push_back(ba);
    if (c == 0 || ba > sel.balanced_accuracy) {
      sel.index = c;
      sel.balanced_accuracy = ba;
    }
  }
  return sel;
}

void save_predictions(const std::filesystem::path& path, const std::vector<Prediction>& predictions) {
  std::vector<json> rows;
  for (const auto& p : predictions)
    rows.push_back({{"id", p.id}, {"confidence", p.confidence}, {"label", to_string(p.label)}});
  io::write_jsonl(path, rows);
}

std::vector<Prediction> load_predictions(const std::filesystem::path& path) {
  std::vector<Prediction> out;
  for (const auto& [line_no, j] : io::read_jsonl(path)) {
    try {
      Prediction p;
      p.id = j.at("id").is_string() ? j.at("id").get<std::string>() : j.at("id").dump();
      p.confidence = j.at("confidence").get<double>();
      if (!(p.confidence >= 0.0 && p.confidence <= 1.0)) data_error("confidence outside [0, 1]");
      p.label = j.contains("label") ? parse_label(j.at("label").get<std::string>()) : make_score(p.confidence).label;
      out.push_back(std::move(p));
    } catch (const json::exception& e) {
      data_error("malformed prediction at line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::string dataset_fingerprint(const std::vector<LabeledExample>& dataset) {
  hash::Hasher h(0);
  for (const auto& e : dataset)
    h.add(e.pair_id).add(e.article).add(e.summary).add(to_string(e.label)).add(to_string(e.origin));
  return hash::hex(h.digest());
}

void save_checkpoint(const std::filesystem::path& dir, const ConsistencyModel& model, const json& manifest) {
  json m = manifest;
  m["backend"] = model.backend();
  m["encoding"] = {{"order", "summary-first"}, {"separator", kSeparator}, {"truncation", "article-tail"}};
  io::write_file(dir / "model.json", model.to_json().dump(2) + "\n");
  io::write_file(dir / "manifest.json", m.dump(2) + "\n");
}

std::unique_ptr<ConsistencyModel> load_checkpoint(const std::filesystem::path& dir) {
  const json j = json::parse(io::read_file(dir / "model.json"), nullptr, false);
  if (j.is_discarded() || !j.is_object()) data_error("malformed model.json in " + dir.string());
  return make_classifier(j.value("backend", ""))->load(j);
}

}  // namespace maskfill
