#ifndef MASKFILL_SPANNER_HPP
#define MASKFILL_SPANNER_HPP

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace maskfill {

// Linguistic unit a span was extracted at. The CLI names are "np_ent",
// "token" and "sentence".
enum class Unit { NpEnt, Token, Sentence };

std::string_view to_string(Unit u);
Unit parse_unit(std::string_view s);

// A byte range [start, end) of some text together with its slice.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;
  Unit unit = Unit::NpEnt;
  std::string surface;

  std::size_t length() const { return end - start; }
  bool operator==(const Span&) const = default;
};

using Offsets = std::pair<std::size_t, std::size_t>;

// Produces raw mentions for a text. Mentions may overlap and arrive in any
// order; extract_spans normalizes them. Implementations must be
// deterministic for a fixed text. reentrant() == false means callers must
// give each worker its own instance.
class Annotator {
 public:
  virtual ~Annotator() = default;
  virtual std::string_view name() const = 0;
  virtual bool supports(Unit unit) const = 0;
  virtual bool reentrant() const { return true; }
  virtual std::vector<Offsets> mentions(std::string_view text, Unit unit) const = 0;
};

// Zero-download annotator. Entities are runs of capitalized words (plus
// numbers); noun phrases are determiner- or numeral-led chunks that stop at
// punctuation and closed-class words. Tokens are whitespace-delimited and
// sentences end at ., ! or ? followed by whitespace and an opener.
class RuleAnnotator final : public Annotator {
 public:
  std::string_view name() const override { return "rule"; }
  bool supports(Unit) const override { return true; }
  std::vector<Offsets> mentions(std::string_view text, Unit unit) const override;

  std::vector<Offsets> entities(std::string_view text) const;
  std::vector<Offsets> noun_chunks(std::string_view text) const;
  std::vector<Offsets> sentences(std::string_view text) const;
};

using AnnotatorFactory = std::function<std::unique_ptr<Annotator>()>;

// Name-keyed plugin registry. "rule" is always present.
void register_annotator(std::string name, AnnotatorFactory factory);
std::unique_ptr<Annotator> make_annotator(std::string_view name);
std::vector<std::string> annotator_names();

// Sorted, non-overlapping spans of `text` at `unit`. For np_ent the noun
// phrase and entity mentions are merged where they overlap.
std::vector<Span> extract_spans(std::string_view text, Unit unit, const Annotator& annotator);

// Merges spans whose byte ranges overlap. Input must be sorted by start;
// merged surfaces are stitched from the inputs' surfaces.
std::vector<Span> merge_overlaps(const std::vector<Span>& spans);

}  // namespace maskfill

#endif  // MASKFILL_SPANNER_HPP
