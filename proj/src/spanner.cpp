#include "maskfill/spanner.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <mutex>
#include <unordered_set>

#include "maskfill/common.hpp"

namespace maskfill {

namespace {

using WordSet = std::unordered_set<std::string_view>;

const WordSet kDeterminers = {"the", "a", "an", "this", "that", "these", "those", "his", "her", "its",
                              "their", "our", "my", "your", "some", "every", "each", "another", "several",
                              "many", "both", "all", "any"};

const WordSet kNumerals = {"one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten",
                           "eleven", "twelve", "twenty", "thirty", "forty", "fifty", "hundred", "thousand",
                           "million", "billion", "dozens", "hundreds", "thousands", "millions"};

// Closed-class words and frequent verbs that end a noun chunk.
const WordSet kChunkBreakers = {
    "of", "in", "on", "at", "to", "for", "from", "with", "by", "about", "into", "over", "after", "before",
    "around", "under", "between", "through", "during", "against", "without", "within", "since", "until",
    "than", "as", "like", "per", "via", "across", "behind", "beyond", "near", "off", "up", "down", "out",
    "or", "but", "nor", "so", "yet", "because", "while", "if", "when", "where", "which", "who", "whom",
    "whose", "what", "why", "how", "that", "not", "no", "is", "are", "was", "were", "be", "been", "being",
    "am", "has", "have", "had", "do", "does", "did", "will", "would", "shall", "should", "can", "could",
    "may", "might", "must", "he", "she", "it", "they", "we", "i", "you", "him", "them", "us", "me",
    "said", "says", "say", "told", "tells", "won", "beat", "lost", "made", "makes", "took", "takes",
    "gave", "gives", "got", "gets", "came", "comes", "went", "goes", "left", "remain", "remains",
    "insists", "insisted", "includes", "included", "killed", "expected", "formed", "moving", "marking",
    "also", "then", "there", "here", "very", "just", "only", "even", "still", "now", "currently",
    "the", "a", "an", "this", "these", "those", "his", "her", "its", "their", "our", "my", "your"};

// Capitalized words that do not start an entity run.
const WordSet kNonEntityCaps = {"The", "A", "An", "This", "That", "These", "Those", "He", "She", "It",
                                "They", "We", "I", "You", "His", "Her", "Its", "Their", "Our", "My",
                                "Your", "But", "And", "Or", "In", "On", "At", "For", "From", "With",
                                "By", "As", "If", "When", "While", "After", "Before", "Some", "Many",
                                "Every", "Each", "All", "There", "Here", "Then", "So", "Yet", "Also",
                                "However"};

const WordSet kEntityConnectors = {"of", "de", "van", "von", "der", "del", "la", "le", "du", "bin", "al"};

const WordSet kAbbreviations = {"Mr.", "Mrs.", "Ms.", "Dr.", "St.", "Jr.", "Sr.", "Prof.", "Gen.", "Gov.",
                                "Sen.", "Rep.", "Lt.", "Col.", "Capt.", "Sgt.", "vs.", "etc.", "e.g.",
                                "i.e.", "No.", "Inc.", "Ltd.", "Co.", "Corp.", "U.S.", "U.K.", "U.N.",
                                "Jan.", "Feb.", "Aug.", "Sept.", "Oct.", "Nov.", "Dec.", "Mt.", "Ft."};

// A whitespace token with its punctuation-stripped core.
struct Word {
  std::size_t start, end;            // whole token
  std::size_t core_start, core_end;  // without surrounding punctuation
  std::string_view core;
  std::string lower;
  bool trailing_punct;  // punctuation after the core ends a phrase
};

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::vector<Word> words(std::string_view text) {
  std::vector<Word> out;
  for (auto [b, e] : text::token_bounds(text)) {
    std::size_t cb = b, ce = e;
    // Keep a leading '$' or '#' with the word; strip other punctuation.
    while (cb < ce && text::is_punct(text[cb]) && text[cb] != '$' && text[cb] != '#') ++cb;
    while (ce > cb && text::is_punct(text[ce - 1]) && text[ce - 1] != '%') --ce;
    std::string_view core = text.substr(cb, ce - cb);
    // Possessive suffix belongs to the surrounding phrase, not the name.
    if (core.size() > 2 && (core.ends_with("'s") || core.ends_with("'S"))) {
      ce -= 2;
      core = text.substr(cb, ce - cb);
    }
    Word w{b, e, cb, ce, core, text::content_word(core), ce < e};
    out.push_back(std::move(w));
  }
  return out;
}

bool is_capitalized(const Word& w) { return !w.core.empty() && is_upper(w.core.front()); }
bool is_number(const Word& w) {
  return !w.core.empty() && (is_digit(w.core.front()) || (w.core.front() == '$' && w.core.size() > 1));
}

}  // namespace

std::string_view to_string(Unit u) {
  switch (u) {
    case Unit::NpEnt: return "np_ent";
    case Unit::Token: return "token";
    case Unit::Sentence: return "sentence";
  }
  return "np_ent";
}

Unit parse_unit(std::string_view s) {
  if (s == "np_ent") return Unit::NpEnt;
  if (s == "token") return Unit::Token;
  if (s == "sentence") return Unit::Sentence;
  config_error("unknown unit '" + std::string(s) + "' (expected np_ent, token or sentence)");
}

std::vector<Offsets> RuleAnnotator::entities(std::string_view text) const {
  const auto ws = words(text);
  std::vector<Offsets> out;
  std::size_t i = 0;
  while (i < ws.size()) {
    const Word& w = ws[i];
    if (w.core.empty() || !(is_capitalized(w) || is_number(w)) || kNonEntityCaps.contains(w.core)) {
      ++i;
      continue;
    }
    if (is_number(w)) {
      out.emplace_back(w.core_start, w.core_end);
      ++i;
      continue;
    }
    std::size_t j = i;
    std::size_t end = w.core_end;
    while (!ws[j].trailing_punct && j + 1 < ws.size()) {
      const Word& next = ws[j + 1];
      if (is_capitalized(next) && !kNonEntityCaps.contains(next.core) && next.core_start == next.start) {
        ++j;
        end = next.core_end;
        continue;
      }
      // "Bank of England": a connector joins two capitalized words.
      if (kEntityConnectors.contains(next.lower) && !next.trailing_punct && j + 2 < ws.size() &&
          is_capitalized(ws[j + 2]) && ws[j + 2].core_start == ws[j + 2].start) {
        j += 2;
        end = ws[j].core_end;
        continue;
      }
      break;
    }
    out.emplace_back(w.core_start, end);
    i = j + 1;
  }
  return out;
}

std::vector<Offsets> RuleAnnotator::noun_chunks(std::string_view text) const {
  constexpr std::size_t kMaxChunkWords = 6;
  const auto ws = words(text);
  std::vector<Offsets> out;
  std::size_t i = 0;
  while (i < ws.size()) {
    const Word& head = ws[i];
    const bool starter = kDeterminers.contains(head.lower) || kNumerals.contains(head.lower) || is_number(head);
    if (!starter || head.core.empty() || head.trailing_punct) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < ws.size() && j + 1 - i < kMaxChunkWords && !ws[j].trailing_punct) {
      const Word& next = ws[j + 1];
      if (next.core.empty() || next.core_start != next.start) break;
      if (next.lower == "and") {
        // Coordinated proper nouns stay inside the chunk: "the Russia and Chelsea coach".
        if (j + 2 < ws.size() && j > i && is_capitalized(ws[j]) && is_capitalized(ws[j + 2]) &&
            !next.trailing_punct) {
          j += 1;
          continue;
        }
        break;
      }
      if (kChunkBreakers.contains(next.lower)) break;
      ++j;
    }
    if (j > i) out.emplace_back(head.core_start, ws[j].core_end);
    i = j + 1;
  }
  return out;
}

std::vector<Offsets> RuleAnnotator::sentences(std::string_view text) const {
  std::vector<Offsets> out;
  std::size_t start = 0;
  while (start < text.size() && text::is_space(text[start])) ++start;
  std::size_t i = start;
  while (i < text.size()) {
    const char c = text[i];
    if (c != '.' && c != '!' && c != '?') {
      ++i;
      continue;
    }
    std::size_t end = i + 1;
    while (end < text.size() && (text[end] == '.' || text[end] == '!' || text[end] == '?')) ++end;
    while (end < text.size() && (text[end] == '"' || text[end] == '\'' || text[end] == ')' || text[end] == ']'))
      ++end;
    if (end < text.size() && !text::is_space(text[end])) {
      i = end;
      continue;
    }
    // Word ending at the terminator, for abbreviation checks.
    std::size_t wb = i;
    while (wb > start && !text::is_space(text[wb - 1])) --wb;
    std::string_view word = text.substr(wb, i + 1 - wb);
    const bool initial = word.size() == 2 && is_upper(word[0]);
    if (c == '.' && (kAbbreviations.contains(word) || initial)) {
      i = end;
      continue;
    }
    std::size_t next = end;
    while (next < text.size() && text::is_space(text[next])) ++next;
    const bool opener = next == text.size() || is_upper(text[next]) || is_digit(text[next]) ||
                        text[next] == '"' || text[next] == '\'' || text[next] == '(' ||
                        static_cast<unsigned char>(text[next]) >= 0x80;
    if (!opener) {
      i = end;
      continue;
    }
    out.emplace_back(start, end);
    start = next;
    i = next;
  }
  if (start < text.size()) {
    std::size_t end = text.size();
    while (end > start && text::is_space(text[end - 1])) --end;
    if (end > start) out.emplace_back(start, end);
  }
  return out;
}

std::vector<Offsets> RuleAnnotator::mentions(std::string_view text, Unit unit) const {
  switch (unit) {
    case Unit::Token: return text::token_bounds(text);
    case Unit::Sentence: return sentences(text);
    case Unit::NpEnt: {
      auto all = noun_chunks(text);
      auto ents = entities(text);
      all.insert(all.end(), ents.begin(), ents.end());
      return all;
    }
  }
  return {};
}

namespace {

struct Registry {
  std::mutex mu;
  std::map<std::string, AnnotatorFactory, std::less<>> factories{
      {"rule", [] { return std::make_unique<RuleAnnotator>(); }}};
};

Registry& registry() {
  static Registry r;
  return r;
}

}  // namespace

void register_annotator(std::string name, AnnotatorFactory factory) {
  auto& r = registry();
  std::lock_guard lock(r.mu);
  r.factories[std::move(name)] = std::move(factory);
}

std::unique_ptr<Annotator> make_annotator(std::string_view name) {
  auto& r = registry();
  std::lock_guard lock(r.mu);
  auto it = r.factories.find(name);
  if (it == r.factories.end()) config_error("unknown annotator '" + std::string(name) + "'");
  return it->second();
}

std::vector<std::string> annotator_names() {
  auto& r = registry();
  std::lock_guard lock(r.mu);
  std::vector<std::string> out;
  for (const auto& [k, _] : r.factories) out.push_back(k);
  return out;
}

std::vector<Span> merge_overlaps(const std::vector<Span>& spans) {
  std::vector<Span> out;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const Span& s = spans[i];
    if (s.start >= s.end) data_error("empty or inverted span at index " + std::to_string(i));
    if (i > 0 && s.start < spans[i - 1].start) data_error("merge_overlaps: spans not sorted by start");
    if (!out.empty() && s.start < out.back().end) {
      Span& cur = out.back();
      if (s.end > cur.end) {
        const std::size_t overlap = cur.end - s.start;
        if (s.surface.size() >= overlap) cur.surface += s.surface.substr(overlap);
        cur.end = s.end;
      }
      continue;
    }
    out.push_back(s);
  }
  return out;
}

std::vector<Span> extract_spans(std::string_view text, Unit unit, const Annotator& annotator) {
  if (text.empty()) data_error("extract_spans: empty text");
  if (!annotator.supports(unit))
    config_error("annotator '" + std::string(annotator.name()) + "' cannot produce unit " +
                 std::string(to_string(unit)));
  auto raw = annotator.mentions(text, unit);
  std::sort(raw.begin(), raw.end());
  std::vector<Span> spans;
  spans.reserve(raw.size());
  for (auto [b, e] : raw) {
    if (b >= e || e > text.size())
      backend_error("annotator '" + std::string(annotator.name()) + "' returned an out-of-bounds span");
    spans.push_back(Span{b, e, unit, std::string(text.substr(b, e - b))});
  }
  return merge_overlaps(spans);
}

}  // namespace maskfill
