#include "maskfill/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "maskfill/io.hpp"

namespace maskfill {

using io::json;

std::string_view to_string(Origin o) {
  switch (o) {
    case Origin::Reference: return "reference";
    case Origin::Mfma: return "mfma";
    case Origin::Msm: return "msm";
    case Origin::Mf: return "mf";
  }
  return "reference";
}

Origin parse_origin(std::string_view s) {
  if (s == "reference") return Origin::Reference;
  if (s == "mfma") return Origin::Mfma;
  if (s == "msm") return Origin::Msm;
  if (s == "mf") return Origin::Mf;
  data_error("unknown origin '" + std::string(s) + "'");
}

Origin origin_of(Method m) {
  switch (m) {
    case Method::Mfma: return Origin::Mfma;
    case Method::Msm: return Origin::Msm;
    case Method::Mf: return Origin::Mf;
  }
  return Origin::Mfma;
}

double normalized_edit_distance(std::string_view a, std::string_view b) {
  const std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 0.0;
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return static_cast<double>(prev[b.size()]) / static_cast<double>(longest);
}

std::vector<LabeledExample> assemble(const CorpusSplit& split, const std::vector<GeneratedSummary>& negatives,
                                     const FilterPolicy& policy, std::uint64_t dataset_seed) {
  if (!(policy.min_edit_distinctness >= 0.0 && policy.min_edit_distinctness <= 1.0))
    config_error("min_edit_distinctness must lie in [0, 1]");

  std::unordered_map<std::string_view, const DocumentPair*> gen, train;
  for (const auto& p : split.gen_half) gen.emplace(p.id, &p);
  for (const auto& p : split.train_half) train.emplace(p.id, &p);

  std::vector<LabeledExample> out;
  out.reserve(split.train_half.size() + negatives.size());
  for (const auto& p : split.train_half)
    out.push_back({p.id, p.article, p.summary, Label::Consistent, Origin::Reference});

  for (const auto& g : negatives) {
    if (train.contains(g.pair_id)) data_error("negative for '" + g.pair_id + "' comes from the infiller-training half");
    auto it = gen.find(g.pair_id);
    if (it == gen.end()) data_error("negative references unknown pair '" + g.pair_id + "'");
    if (policy.drop_empty && text::normalize_whitespace(g.text).empty()) continue;
    if (policy.min_edit_distinctness > 0.0 &&
        normalized_edit_distance(g.text, it->second->summary) < policy.min_edit_distinctness)
      continue;
    out.push_back({g.pair_id, it->second->article, g.text, Label::Inconsistent, origin_of(g.method)});
  }
  shuffle(out, hash::Hasher(dataset_seed).add(std::string_view("assemble")).digest());
  return out;
}

std::size_t percentile(std::vector<std::size_t> values, double q) {
  if (values.empty()) return 0;
  std::sort(values.begin(), values.end());
  const double rank = std::ceil(q / 100.0 * static_cast<double>(values.size()));
  const auto idx = static_cast<std::size_t>(std::clamp(rank, 1.0, static_cast<double>(values.size()))) - 1;
  return values[idx];
}

namespace {

LengthPercentiles lengths(const std::vector<std::size_t>& v) {
  return {percentile(v, 10), percentile(v, 50), percentile(v, 90), v.empty() ? 0 : *std::max_element(v.begin(), v.end())};
}

json lengths_json(const LengthPercentiles& l) {
  return {{"p10", l.p10}, {"p50", l.p50}, {"p90", l.p90}, {"max", l.max}};
}

}  // namespace

DatasetStats dataset_stats(const std::vector<LabeledExample>& examples) {
  DatasetStats s;
  s.total = examples.size();
  s.per_label = {{"consistent", 0}, {"inconsistent", 0}};
  s.per_origin = {{"reference", 0}, {"mfma", 0}, {"msm", 0}, {"mf", 0}};
  std::vector<std::size_t> sum_len, art_len;
  for (const auto& e : examples) {
    ++s.per_label[std::string(to_string(e.label))];
    ++s.per_origin[std::string(to_string(e.origin))];
    sum_len.push_back(text::token_bounds(e.summary).size());
    art_len.push_back(text::token_bounds(e.article).size());
  }
  if (s.total > 0)
    s.consistent_fraction = static_cast<double>(s.per_label["consistent"]) / static_cast<double>(s.total);
  s.summary_tokens = lengths(sum_len);
  s.article_tokens = lengths(art_len);
  return s;
}

json DatasetStats::to_json() const {
  return {{"total", total},
          {"per_label", per_label},
          {"per_origin", per_origin},
          {"consistent_fraction", consistent_fraction},
          {"summary_tokens", lengths_json(summary_tokens)},
          {"article_tokens", lengths_json(article_tokens)}};
}

json to_json(const LabeledExample& e) {
  return {{"pair_id", e.pair_id},
          {"article", e.article},
          {"summary", e.summary},
          {"label", to_string(e.label)},
          {"origin", to_string(e.origin)}};
}

LabeledExample labeled_from_json(const json& j) {
  try {
    LabeledExample e;
    e.pair_id = j.at("pair_id").get<std::string>();
    e.article = j.at("article").get<std::string>();
    e.summary = j.at("summary").get<std::string>();
    e.label = parse_label(j.at("label").get<std::string>());
    e.origin = parse_origin(j.at("origin").get<std::string>());
    if ((e.label == Label::Consistent) != (e.origin == Origin::Reference))
      data_error("label '" + std::string(to_string(e.label)) + "' contradicts origin '" +
                 std::string(to_string(e.origin)) + "'");
    return e;
  } catch (const json::exception& ex) {
    data_error(std::string("malformed labeled example: ") + ex.what());
  }
}

void save_dataset(const std::filesystem::path& path, const std::vector<LabeledExample>& examples) {
  std::vector<json> rows;
  rows.reserve(examples.size());
  for (const auto& e : examples) rows.push_back(to_json(e));
  io::write_jsonl(path, rows);
}

std::vector<LabeledExample> load_dataset(const std::filesystem::path& path) {
  std::vector<LabeledExample> out;
  for (const auto& [line_no, j] : io::read_jsonl(path)) {
    try {
      out.push_back(labeled_from_json(j));
    } catch (const Error& e) {
      data_error(std::string(e.what()) + " at line " + std::to_string(line_no));
    }
  }
  return out;
}

}  // namespace maskfill
