#ifndef MASKFILL_MASKER_HPP
#define MASKFILL_MASKER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "maskfill/common.hpp"
#include "maskfill/spanner.hpp"

namespace maskfill {

// Literal prefixes of the MFMA model input.
inline constexpr std::string_view kSummaryPrefix = "Summary: ";
inline constexpr std::string_view kArticlePrefix = " Article: ";

// "<mask_i>".
std::string sentinel(std::size_t index);

// Which spans of a text get masked.
struct MaskPlan {
  std::string source_text;
  std::vector<Span> all_spans;
  std::vector<Span> masked_spans;  // subset of all_spans, in text order
  double gamma = 0.0;
  std::uint64_t rng_seed = 0;
};

struct MaskedText {
  std::string text;
  MaskPlan plan;
  std::size_t sentinel_count = 0;
  // Set when the source had no extractable spans; the text is then unchanged.
  bool no_spans = false;
};

// 0 when gamma == 0 or there are no spans, otherwise
// max(1, round-half-up(gamma * n_spans)).
std::size_t mask_count(std::size_t n_spans, double gamma);

// Uniform seeded sample of mask_count spans without replacement. `spans`
// must be sorted and non-overlapping.
MaskPlan select_masks(const std::vector<Span>& spans, double gamma, std::uint64_t seed,
                      std::string source_text = {});

// Replaces each masked span with its sentinel, numbered left to right.
MaskedText apply_masks(std::string_view text, const MaskPlan& plan);

// Inverse of apply_masks: restores the masked surfaces from the plan.
std::string unmask(std::string_view masked_text, const MaskPlan& plan);

// extract_spans + select_masks + apply_masks.
MaskedText mask_text(std::string_view text, Unit unit, double gamma, std::uint64_t seed, const Annotator& annotator);

// Serialized model input:
//   mfma -> "Summary: " + S + " Article: " + A
//   msm  -> A
//   mf   -> S
std::string build_input(Method method, const std::optional<MaskedText>& masked_summary,
                        const std::optional<MaskedText>& masked_article);
std::string build_input(Method method, std::optional<std::string_view> summary, std::optional<std::string_view> article);

// Splits an MFMA input back into its summary and article segments. Returns
// nullopt when the input does not carry the prefixes.
struct InputSegments {
  std::string_view summary;
  std::string_view article;
};
std::optional<InputSegments> split_mfma_input(std::string_view input);

}  // namespace maskfill

#endif  // MASKFILL_MASKER_HPP
