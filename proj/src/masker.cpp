#include "maskfill/masker.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace maskfill {

std::string sentinel(std::size_t index) { return "<mask_" + std::to_string(index) + ">"; }

std::size_t mask_count(std::size_t n_spans, double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) config_error("mask ratio must lie in [0, 1], got " + std::to_string(gamma));
  if (gamma == 0.0 || n_spans == 0) return 0;
  // The epsilon absorbs representation error in products like 0.7 * 5.
  const double scaled = gamma * static_cast<double>(n_spans);
  const auto rounded = static_cast<std::size_t>(std::floor(scaled + 0.5 + 1e-9));
  return std::clamp<std::size_t>(rounded, 1, n_spans);
}

MaskPlan select_masks(const std::vector<Span>& spans, double gamma, std::uint64_t seed, std::string source_text) {
  const std::size_t k = mask_count(spans.size(), gamma);
  for (std::size_t i = 1; i < spans.size(); ++i)
    if (spans[i].start < spans[i - 1].end) data_error("select_masks: spans must be sorted and non-overlapping");

  // Partial Fisher-Yates over span indices.
  std::vector<std::size_t> idx(spans.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(spans.size() - i));
    std::swap(idx[i], idx[j]);
  }
  std::sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k));

  MaskPlan plan;
  plan.source_text = std::move(source_text);
  plan.all_spans = spans;
  plan.gamma = gamma;
  plan.rng_seed = seed;
  plan.masked_spans.reserve(k);
  for (std::size_t i = 0; i < k; ++i) plan.masked_spans.push_back(spans[idx[i]]);
  return plan;
}

MaskedText apply_masks(std::string_view text, const MaskPlan& plan) {
  if (!plan.source_text.empty() && plan.source_text != text) data_error("apply_masks: plan was built for another text");
  MaskedText out;
  out.plan = plan;
  out.no_spans = plan.all_spans.empty();
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < plan.masked_spans.size(); ++i) {
    const Span& s = plan.masked_spans[i];
    if (s.start < cursor || s.end > text.size() || text.substr(s.start, s.length()) != s.surface)
      data_error("apply_masks: span " + std::to_string(i) + " does not match the text");
    out.text.append(text.substr(cursor, s.start - cursor));
    out.text += sentinel(i);
    cursor = s.end;
  }
  out.text.append(text.substr(cursor));
  out.sentinel_count = plan.masked_spans.size();
  return out;
}

std::string unmask(std::string_view masked_text, const MaskPlan& plan) {
  std::string out;
  std::size_t pos = 0;   // in masked_text
  std::size_t prev = 0;  // in the source text
  for (std::size_t i = 0; i < plan.masked_spans.size(); ++i) {
    const Span& s = plan.masked_spans[i];
    const std::size_t gap = s.start - prev;
    const std::string tag = sentinel(i);
    if (pos + gap > masked_text.size() || masked_text.substr(pos + gap, tag.size()) != tag)
      data_error("unmask: sentinel " + tag + " not where the plan expects it");
    out.append(masked_text.substr(pos, gap));
    out += s.surface;
    pos += gap + tag.size();
    prev = s.end;
  }
  out.append(masked_text.substr(pos));
  return out;
}

MaskedText mask_text(std::string_view text, Unit unit, double gamma, std::uint64_t seed, const Annotator& annotator) {
  auto spans = extract_spans(text, unit, annotator);
  return apply_masks(text, select_masks(spans, gamma, seed, std::string(text)));
}

std::string build_input(Method method, std::optional<std::string_view> summary, std::optional<std::string_view> article) {
  switch (method) {
    case Method::Mfma:
      if (!summary || !article) data_error("mfma input needs both a masked summary and a masked article");
      return std::string(kSummaryPrefix) + std::string(*summary) + std::string(kArticlePrefix) + std::string(*article);
    case Method::Msm:
      if (!article) data_error("msm input needs a masked article");
      if (summary) data_error("msm input must not include a summary");
      return std::string(*article);
    case Method::Mf:
      if (!summary) data_error("mf input needs a masked summary");
      if (article) data_error("mf input must not include an article");
      return std::string(*summary);
  }
  return {};
}

std::string build_input(Method method, const std::optional<MaskedText>& masked_summary,
                        const std::optional<MaskedText>& masked_article) {
  std::optional<std::string_view> s, a;
  if (masked_summary) s = masked_summary->text;
  if (masked_article) a = masked_article->text;
  return build_input(method, s, a);
}

std::optional<InputSegments> split_mfma_input(std::string_view input) {
  if (!input.starts_with(kSummaryPrefix)) return std::nullopt;
  // Summaries are whitespace-normalized single lines, so the first article
  // prefix closes the summary segment.
  const std::size_t at = input.find(kArticlePrefix, kSummaryPrefix.size());
  if (at == std::string_view::npos) return std::nullopt;
  return InputSegments{input.substr(kSummaryPrefix.size(), at - kSummaryPrefix.size()),
                       input.substr(at + kArticlePrefix.size())};
}

}  // namespace maskfill
