#include "maskfill/corpus.hpp"

#include <algorithm>
#include <unordered_set>

#include "maskfill/io.hpp"

namespace maskfill {

using io::json;

namespace {

std::string at_line(std::size_t line_no) { return " at line " + std::to_string(line_no); }

std::string required_text(const json& j, const char* field, std::size_t line_no) {
  auto it = j.find(field);
  if (it == j.end() || !it->is_string())
    data_error(std::string("missing ") + field + at_line(line_no));
  std::string value = text::normalize_whitespace(it->get<std::string>());
  if (value.empty()) data_error(std::string("empty ") + field + at_line(line_no));
  return value;
}

std::string id_of(const json& j, std::string_view fallback, std::size_t line_no) {
  auto it = j.find("id");
  if (it == j.end() || it->is_null()) return std::string(fallback);
  if (it->is_string()) {
    if (it->get<std::string>().empty()) data_error("empty id" + at_line(line_no));
    return it->get<std::string>();
  }
  if (it->is_number_integer()) return std::to_string(it->get<long long>());
  data_error("id must be a string" + at_line(line_no));
}

void check_unique(const std::vector<DocumentPair>& pairs) {
  std::unordered_set<std::string_view> seen;
  for (const auto& p : pairs)
    if (!seen.insert(p.id).second) data_error("duplicate id '" + p.id + "'");
}

DocumentPair parse_story(const std::string& content, std::string id) {
  // Article paragraphs precede the first @highlight; each highlight line
  // becomes one summary sentence.
  std::vector<std::string> article_lines, highlights;
  bool next_is_highlight = false;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    std::size_t end = content.find('\n', pos);
    if (end == std::string::npos) end = content.size();
    std::string line = text::normalize_whitespace(std::string_view(content).substr(pos, end - pos));
    pos = end + 1;
    if (line.empty()) continue;
    if (line == "@highlight") {
      next_is_highlight = true;
      continue;
    }
    if (next_is_highlight) {
      if (line.back() != '.' && line.back() != '!' && line.back() != '?') line += " .";
      highlights.push_back(std::move(line));
      next_is_highlight = false;
    } else if (highlights.empty()) {
      article_lines.push_back(std::move(line));
    }
  }
  DocumentPair pair;
  pair.id = std::move(id);
  for (const auto& l : article_lines) pair.article += (pair.article.empty() ? "" : " ") + l;
  for (const auto& h : highlights) pair.summary += (pair.summary.empty() ? "" : " ") + h;
  if (pair.article.empty()) data_error("empty article in story " + pair.id);
  if (pair.summary.empty()) data_error("empty summary in story " + pair.id);
  return pair;
}

std::vector<DocumentPair> load_stories(const std::filesystem::path& path) {
  std::vector<std::filesystem::path> files;
  if (std::filesystem::is_directory(path)) {
    for (const auto& entry : std::filesystem::directory_iterator(path))
      if (entry.is_regular_file() && entry.path().extension() == ".story") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
  } else {
    files.push_back(path);
  }
  std::vector<DocumentPair> out;
  for (const auto& f : files) out.push_back(parse_story(io::read_file(f), f.stem().string()));
  return out;
}

int parse_flag(const json& v, std::size_t line_no) {
  if (v.is_boolean()) return v.get<bool>() ? 1 : 0;
  if (v.is_number_integer()) {
    int x = v.get<int>();
    if (x == 0 || x == 1) return x;
  }
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "C" || s == "consistent" || s == "yes" || s == "correct") return 1;
    if (s == "I" || s == "inconsistent" || s == "no" || s == "incorrect") return 0;
  }
  data_error("unrecognised annotator flag" + at_line(line_no));
}

int parse_likert(const json& v, std::size_t line_no) {
  if (!v.is_number()) data_error("non-numeric Likert judgment" + at_line(line_no));
  double d = v.get<double>();
  int x = static_cast<int>(d);
  if (static_cast<double>(x) != d || x < 1 || x > 5) data_error("Likert judgment outside 1..5" + at_line(line_no));
  return x;
}

}  // namespace

CorpusFormat parse_corpus_format(std::string_view s) {
  if (s == "jsonl-pairs") return CorpusFormat::JsonlPairs;
  if (s == "cnndm-stories") return CorpusFormat::CnndmStories;
  config_error("unknown corpus format '" + std::string(s) + "'");
}

std::string_view to_string(Benchmark b) {
  switch (b) {
    case Benchmark::FactccTest: return "factcc-test";
    case Benchmark::XsumHall: return "xsumhall";
    case Benchmark::SummEval: return "summeval";
    case Benchmark::QagsCnndm: return "qags-cnndm";
    case Benchmark::QagsXsum: return "qags-xsum";
    case Benchmark::FrankCnndm: return "frank-cnndm";
    case Benchmark::FrankXsum: return "frank-xsum";
  }
  return "factcc-test";
}

Benchmark parse_benchmark(std::string_view s) {
  for (auto b : {Benchmark::FactccTest, Benchmark::XsumHall, Benchmark::SummEval, Benchmark::QagsCnndm,
                 Benchmark::QagsXsum, Benchmark::FrankCnndm, Benchmark::FrankXsum})
    if (to_string(b) == s) return b;
  config_error("unknown benchmark schema '" + std::string(s) + "'");
}

bool is_binary_benchmark(Benchmark b) { return b == Benchmark::FactccTest || b == Benchmark::XsumHall; }

bool is_flag_benchmark(Benchmark b) {
  return b == Benchmark::QagsCnndm || b == Benchmark::QagsXsum || b == Benchmark::FrankCnndm ||
         b == Benchmark::FrankXsum;
}

DocumentPair parse_pair_line(std::string_view line, std::string_view fallback_id, std::size_t line_no) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) data_error("malformed record" + at_line(line_no));
  DocumentPair p;
  p.id = id_of(j, fallback_id, line_no);
  p.article = required_text(j, "article", line_no);
  p.summary = required_text(j, "summary", line_no);
  return p;
}

std::vector<DocumentPair> load_pairs(const std::filesystem::path& path, CorpusFormat format) {
  if (!std::filesystem::exists(path)) data_error("no such file: " + path.string());
  std::vector<DocumentPair> pairs;
  if (format == CorpusFormat::CnndmStories) {
    pairs = load_stories(path);
  } else {
    const auto lines = io::read_lines(path);
    const std::string name = path.filename().string();
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (lines[i].find_first_not_of(" \t") == std::string::npos) continue;
      pairs.push_back(parse_pair_line(lines[i], name + ":" + std::to_string(i + 1), i + 1));
    }
  }
  if (pairs.empty()) data_error("empty corpus: " + path.string());
  check_unique(pairs);
  return pairs;
}

void save_pairs(const std::filesystem::path& path, const std::vector<DocumentPair>& pairs) {
  std::vector<json> rows;
  rows.reserve(pairs.size());
  for (const auto& p : pairs) rows.push_back({{"id", p.id}, {"article", p.article}, {"summary", p.summary}});
  io::write_jsonl(path, rows);
}

CorpusSplit split_half(const std::vector<DocumentPair>& pairs, std::uint64_t seed) {
  if (pairs.size() < 2) data_error("split_half needs at least 2 pairs, got " + std::to_string(pairs.size()));
  check_unique(pairs);
  // Sort by id first so the split depends only on ids and seed.
  std::vector<const DocumentPair*> order;
  order.reserve(pairs.size());
  for (const auto& p : pairs) order.push_back(&p);
  std::sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->id < b->id; });
  shuffle(order, hash::Hasher(seed).add(std::string_view("split_half")).digest());

  CorpusSplit split;
  split.seed = seed;
  const std::size_t n_train = (order.size() + 1) / 2;
  for (std::size_t i = 0; i < order.size(); ++i)
    (i < n_train ? split.train_half : split.gen_half).push_back(*order[i]);
  return split;
}

std::vector<BenchmarkRecord> load_benchmark(const std::filesystem::path& path, Benchmark schema) {
  std::vector<BenchmarkRecord> out;
  const std::string name = path.filename().string();
  for (auto& [line_no, j] : io::read_jsonl(path)) {
    BenchmarkRecord r;
    r.benchmark = schema;
    r.id = id_of(j, name + ":" + std::to_string(line_no), line_no);
    r.article = required_text(j, "article", line_no);
    r.summary = required_text(j, "summary", line_no);

    auto jit = j.find("judgments");
    if (jit != j.end() && !jit->is_null()) {
      if (!jit->is_array()) data_error("judgments must be an array" + at_line(line_no));
      for (const auto& v : *jit)
        r.judgments.push_back(schema == Benchmark::SummEval ? parse_likert(v, line_no) : parse_flag(v, line_no));
    }
    if (!is_binary_benchmark(schema) && r.judgments.empty())
      data_error("record missing annotator judgments" + at_line(line_no));

    if (is_binary_benchmark(schema)) {
      auto lit = j.find("label");
      if (lit == j.end() || lit->is_null()) data_error("record missing label" + at_line(line_no));
      if (lit->is_string()) {
        r.binary_label = parse_label(lit->get<std::string>());
      } else {
        r.binary_label = parse_flag(*lit, line_no) == 1 ? Label::Consistent : Label::Inconsistent;
      }
    }

    auto sit = j.find("score");
    if (sit != j.end() && !sit->is_null()) {
      if (!sit->is_number()) data_error("score must be numeric" + at_line(line_no));
      r.numeric_score = sit->get<double>();
    } else if (!r.judgments.empty()) {
      double sum = 0;
      for (int v : r.judgments) sum += v;
      r.numeric_score = sum / static_cast<double>(r.judgments.size());
    }
    out.push_back(std::move(r));
  }
  if (out.empty()) data_error("empty benchmark file: " + path.string());
  return out;
}

void save_benchmark(const std::filesystem::path& path, const std::vector<BenchmarkRecord>& records) {
  std::vector<json> rows;
  for (const auto& r : records) {
    json j = {{"id", r.id}, {"article", r.article}, {"summary", r.summary}, {"judgments", r.judgments}};
    if (r.binary_label) j["label"] = to_string(*r.binary_label);
    if (r.numeric_score) j["score"] = *r.numeric_score;
    rows.push_back(std::move(j));
  }
  io::write_jsonl(path, rows);
}

}  // namespace maskfill
