#include "maskfill/infill.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "maskfill/io.hpp"

namespace maskfill {

using io::json;

PreparedInput prepare_input(const DocumentPair& pair, Method method, const MaskingConfig& masking,
                            const Annotator& annotator, std::uint64_t seed, std::size_t sample_index) {
  PreparedInput out;
  if (method != Method::Msm) {
    out.summary = mask_text(pair.summary, masking.unit, masking.gamma_s,
                            derive_seed(seed, pair.id, "summary", sample_index), annotator);
  }
  if (method != Method::Mf) {
    out.article = mask_text(pair.article, masking.unit, masking.gamma_a,
                            derive_seed(seed, pair.id, "article", sample_index), annotator);
  }
  out.input = build_input(method, out.summary, out.article);
  return out;
}

json TrainConfig::to_json() const {
  return {{"epochs", epochs}, {"batch", batch_size}, {"max_in", max_input_len}, {"max_tgt", max_target_len}};
}

TrainConfig TrainConfig::from_json(const json& j) {
  TrainConfig c;
  c.epochs = j.value("epochs", c.epochs);
  c.batch_size = j.value("batch", c.batch_size);
  c.max_input_len = j.value("max_in", c.max_input_len);
  c.max_target_len = j.value("max_tgt", c.max_target_len);
  return c;
}

json DecodeConfig::to_json() const { return {{"beam_size", beam_size}, {"max_length", max_length}}; }

DecodeConfig DecodeConfig::from_json(const json& j) {
  DecodeConfig c;
  c.beam_size = j.value("beam_size", c.beam_size);
  c.max_length = j.value("max_length", c.max_length);
  return c;
}

std::unique_ptr<InfillModel> Seq2SeqBackend::train(const std::vector<Seq2SeqExample>&, const TrainConfig&) const {
  backend_error("backend does not support training");
}

std::unique_ptr<InfillModel> Seq2SeqBackend::load(const json&) const {
  backend_error("backend '" + name() + "' has no loadable models");
}

namespace {

struct SentinelHit {
  std::size_t pos, len, index;
};

std::vector<SentinelHit> find_sentinels(std::string_view s) {
  std::vector<SentinelHit> out;
  std::size_t pos = 0;
  while ((pos = s.find("<mask_", pos)) != std::string_view::npos) {
    std::size_t i = pos + 6, index = 0;
    const std::size_t digits_start = i;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9' && i - digits_start < 9) index = index * 10 + (s[i++] - '0');
    if (i > digits_start && i < s.size() && s[i] == '>') {
      out.push_back({pos, i + 1 - pos, index});
      pos = i + 1;
    } else {
      pos += 1;
    }
  }
  return out;
}

std::string strip_punct(std::string_view token) {
  std::size_t b = 0, e = token.size();
  while (b < e && text::is_punct(token[b])) ++b;
  while (e > b && text::is_punct(token[e - 1])) --e;
  return std::string(token.substr(b, e - b));
}

std::vector<std::string> fill_vocabulary(std::string_view input) {
  std::string_view source = input;
  if (auto seg = split_mfma_input(input)) source = seg->article;
  std::vector<std::string> vocab;
  std::unordered_set<std::string> seen;
  for (auto tok : text::tokens(source)) {
    if (tok.find("<mask_") != std::string_view::npos) continue;
    std::string w = strip_punct(tok);
    if (!w.empty() && seen.insert(w).second) vocab.push_back(std::move(w));
  }
  return vocab;
}

std::string fill(std::string_view input, std::uint64_t seed, std::string_view salt,
                 const std::vector<std::string>& vocab) {
  std::string out;
  std::size_t cursor = 0;
  for (const auto& hit : find_sentinels(input)) {
    out.append(input.substr(cursor, hit.pos - cursor));
    if (vocab.empty()) {
      out += "unk";
    } else {
      const auto h = hash::Hasher(seed).add(salt).add(static_cast<std::uint64_t>(hit.index)).digest();
      out += vocab[h % vocab.size()];
    }
    cursor = hit.pos + hit.len;
  }
  out.append(input.substr(cursor));
  return out;
}

std::string truncate_tokens(std::string_view s, int max_tokens) {
  const auto bounds = text::token_bounds(s);
  if (max_tokens <= 0 || bounds.size() <= static_cast<std::size_t>(max_tokens)) return std::string(s);
  return std::string(s.substr(0, bounds[static_cast<std::size_t>(max_tokens) - 1].second));
}

// Shapes a filled input into a summary-like output for the method.
std::string shape_output(const std::string& filled, Method method, const DecodeConfig& decode) {
  std::string out;
  switch (method) {
    case Method::Mfma: {
      auto seg = split_mfma_input(filled);
      out = seg ? std::string(seg->summary) : filled;
      break;
    }
    case Method::Msm: {
      const auto sents = RuleAnnotator().sentences(filled);
      out = sents.empty() ? filled : filled.substr(sents.front().first, sents.front().second - sents.front().first);
      break;
    }
    case Method::Mf:
      out = filled;
      break;
  }
  return truncate_tokens(text::normalize_whitespace(out), decode.max_length);
}

class LexiconModel final : public InfillModel {
 public:
  explicit LexiconModel(std::vector<std::string> vocab) : vocab_(std::move(vocab)) {}
  std::string backend() const override { return "lexicon"; }
  json to_json() const override { return {{"backend", "lexicon"}, {"vocab", vocab_}}; }
  const std::vector<std::string>& vocab() const { return vocab_; }

 private:
  std::vector<std::string> vocab_;
};

struct BackendRegistry {
  std::mutex mu;
  std::map<std::string, BackendFactory, std::less<>> factories{
      {"mock", [] { return std::make_unique<MockBackend>(); }},
      {"lexicon", [] { return std::make_unique<LexiconBackend>(); }}};
};

BackendRegistry& backends() {
  static BackendRegistry r;
  return r;
}

}  // namespace

std::string mock_fill(std::string_view input, std::uint64_t seed) {
  return fill(input, seed, "mock_fill", fill_vocabulary(input));
}

std::string MockBackend::generate(const InfillModel*, const GenerationRequest& request) const {
  return shape_output(mock_fill(request.input, request.seed), request.method, request.decode);
}

std::unique_ptr<InfillModel> LexiconBackend::train(const std::vector<Seq2SeqExample>& examples,
                                                   const TrainConfig& config) const {
  if (examples.empty()) data_error("no training examples");
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& ex : examples) {
    const std::string target = truncate_tokens(ex.target, config.max_target_len);
    for (auto tok : text::tokens(target)) {
      std::string w = strip_punct(tok);
      if (!w.empty()) ++counts[w];
    }
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  std::vector<std::string> vocab;
  for (std::size_t i = 0; i < ranked.size() && i < kVocabSize; ++i) vocab.push_back(ranked[i].first);
  return std::make_unique<LexiconModel>(std::move(vocab));
}

std::unique_ptr<InfillModel> LexiconBackend::load(const json& j) const {
  if (j.value("backend", "") != "lexicon" || !j.contains("vocab")) backend_error("not a lexicon model");
  return std::make_unique<LexiconModel>(j.at("vocab").get<std::vector<std::string>>());
}

std::string LexiconBackend::generate(const InfillModel* model, const GenerationRequest& request) const {
  auto vocab = fill_vocabulary(request.input);
  if (const auto* lex = dynamic_cast<const LexiconModel*>(model)) {
    std::unordered_set<std::string> seen(vocab.begin(), vocab.end());
    for (const auto& w : lex->vocab())
      if (seen.insert(w).second) vocab.push_back(w);
  }
  return shape_output(fill(request.input, request.seed, "lexicon", vocab), request.method, request.decode);
}

void register_backend(std::string name, BackendFactory factory) {
  auto& r = backends();
  std::lock_guard lock(r.mu);
  r.factories[std::move(name)] = std::move(factory);
}

std::unique_ptr<Seq2SeqBackend> make_backend(std::string_view name) {
  auto& r = backends();
  std::lock_guard lock(r.mu);
  auto it = r.factories.find(name);
  if (it == r.factories.end()) config_error("unknown infill backend '" + std::string(name) + "'");
  return it->second();
}

std::vector<Seq2SeqExample> make_training_examples(const CorpusSplit& split, Method method, const MaskingConfig& masking,
                                                   const Annotator& annotator, std::uint64_t seed) {
  if (method == Method::Mf) config_error("mf uses a pretrained denoiser zero-shot and has no training examples");
  std::vector<Seq2SeqExample> out;
  out.reserve(split.train_half.size());
  for (const auto& pair : split.train_half) {
    auto prepared = prepare_input(pair, method, masking, annotator, seed, 0);
    out.push_back({std::move(prepared.input), pair.summary, pair.id});
  }
  return out;
}

std::unique_ptr<InfillModel> train_infiller(const Seq2SeqBackend& backend, const std::vector<Seq2SeqExample>& examples,
                                            const TrainConfig& config) {
  if (!backend.supports_training()) backend_error("backend does not support training");
  if (examples.empty()) data_error("train_infiller: no training examples");
  return backend.train(examples, config);
}

json to_json(const GeneratedSummary& g) {
  json j = {{"pair_id", g.pair_id},
            {"text", g.text},
            {"method", to_string(g.method)},
            {"gamma_a", nullptr},
            {"gamma_s", nullptr},
            {"unit", to_string(g.unit)},
            {"sample_index", g.sample_index},
            {"seed", g.seed}};
  if (g.gamma_a) j["gamma_a"] = *g.gamma_a;
  if (g.gamma_s) j["gamma_s"] = *g.gamma_s;
  return j;
}

GeneratedSummary generated_from_json(const json& j) {
  try {
    GeneratedSummary g;
    g.pair_id = j.at("pair_id").get<std::string>();
    g.text = j.at("text").get<std::string>();
    g.method = parse_method(j.at("method").get<std::string>());
    if (j.contains("gamma_a") && !j["gamma_a"].is_null()) g.gamma_a = j["gamma_a"].get<double>();
    if (j.contains("gamma_s") && !j["gamma_s"].is_null()) g.gamma_s = j["gamma_s"].get<double>();
    g.unit = parse_unit(j.value("unit", std::string("np_ent")));
    g.sample_index = j.value("sample_index", std::size_t{0});
    g.seed = j.value("seed", std::uint64_t{0});
    return g;
  } catch (const json::exception& e) {
    data_error(std::string("malformed generated summary: ") + e.what());
  }
}

void save_negatives(const std::filesystem::path& path, const std::vector<GeneratedSummary>& negatives) {
  std::vector<json> rows;
  rows.reserve(negatives.size());
  for (const auto& g : negatives) rows.push_back(to_json(g));
  io::write_jsonl(path, rows);
}

std::vector<GeneratedSummary> load_negatives(const std::filesystem::path& path) {
  std::vector<GeneratedSummary> out;
  for (const auto& [line_no, j] : io::read_jsonl(path)) {
    try {
      out.push_back(generated_from_json(j));
    } catch (const Error& e) {
      data_error(std::string(e.what()) + " at line " + std::to_string(line_no));
    }
  }
  return out;
}

std::vector<GeneratedSummary> generate_negatives(const Seq2SeqBackend& backend, const InfillModel* model,
                                                 const CorpusSplit& split, Method method, const MaskingConfig& masking,
                                                 const Annotator& annotator, const GenerateOptions& options) {
  if (options.n_samples < 1) config_error("n_samples must be at least 1");
  if (method == Method::Mf && model != nullptr) config_error("mf runs the denoiser zero-shot; no trained model expected");
  if (method != Method::Mf && backend.supports_training() && model == nullptr)
    config_error("backend '" + backend.name() + "' needs a trained model for " + std::string(to_string(method)));
  if (options.jobs > 1 && !annotator.reentrant())
    config_error("annotator '" + std::string(annotator.name()) + "' is not reentrant; run with jobs = 1");

  const std::size_t n_pairs = split.gen_half.size();
  const std::size_t total = n_pairs * options.n_samples;
  std::vector<std::optional<GeneratedSummary>> slots(total);

  auto work = [&](std::size_t item) {
    const auto& pair = split.gen_half[item / options.n_samples];
    const std::size_t sample = item % options.n_samples;
    auto prepared = prepare_input(pair, method, masking, annotator, options.seed, sample);
    GenerationRequest req{prepared.input, method, options.decode, derive_seed(options.seed, pair.id, "decode", sample)};
    std::string text = text::normalize_whitespace(backend.generate(model, req));
    if (text.empty()) {
      log::warn("dropping empty generation for pair " + pair.id + " sample " + std::to_string(sample));
      return;
    }
    GeneratedSummary g;
    g.pair_id = pair.id;
    g.text = std::move(text);
    g.method = method;
    if (method != Method::Mf) g.gamma_a = masking.gamma_a;
    if (method != Method::Msm) g.gamma_s = masking.gamma_s;
    g.unit = masking.unit;
    g.sample_index = sample;
    g.seed = options.seed;
    slots[item] = std::move(g);
  };

  const std::size_t jobs = std::max<std::size_t>(1, std::min(options.jobs, total));
  if (jobs == 1) {
    for (std::size_t i = 0; i < total; ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(jobs);
    for (std::size_t w = 0; w < jobs; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < total; i += jobs) work(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  std::vector<GeneratedSummary> out;
  out.reserve(total);
  for (auto& s : slots)
    if (s) out.push_back(std::move(*s));
  return out;
}

}  // namespace maskfill
