#include "maskfill/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <set>

#include <boost/math/distributions/students_t.hpp>

namespace maskfill::metrics {

namespace {

void check_lengths(std::size_t a, std::size_t b, const char* what) {
  if (a != b) data_error(std::string(what) + ": length mismatch (" + std::to_string(a) + " vs " + std::to_string(b) + ")");
  if (a == 0) data_error(std::string(what) + ": empty input");
}

double ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

double f1(std::size_t tp, std::size_t fp, std::size_t fn) {
  // F1 = 2tp / (2tp + fp + fn), which is 0 when the class never occurs.
  return ratio(2.0 * static_cast<double>(tp), static_cast<double>(2 * tp + fp + fn));
}

}  // namespace

ConfusionCounts confusion(std::span<const Label> y_true, std::span<const Label> y_pred) {
  check_lengths(y_true.size(), y_pred.size(), "confusion");
  ConfusionCounts c;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const bool t = y_true[i] == Label::Consistent;
    const bool p = y_pred[i] == Label::Consistent;
    if (t && p) ++c.tp;
    else if (!t && p) ++c.fp;
    else if (!t && !p) ++c.tn;
    else ++c.fn;
  }
  return c;
}

double macro_f1(std::span<const Label> y_true, std::span<const Label> y_pred) {
  const auto c = confusion(y_true, y_pred);
  return 0.5 * (f1(c.tp, c.fp, c.fn) + f1(c.tn, c.fn, c.fp));
}

double balanced_accuracy(std::span<const Label> y_true, std::span<const Label> y_pred) {
  const auto c = confusion(y_true, y_pred);
  if (c.tp + c.fn == 0) data_error("balanced_accuracy: no consistent items in y_true");
  if (c.tn + c.fp == 0) data_error("balanced_accuracy: no inconsistent items in y_true");
  const double recall_c = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  const double recall_i = static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fp);
  return 0.5 * (recall_c + recall_i);
}

double pearson(std::span<const double> x, std::span<const double> y) {
  check_lengths(x.size(), y.size(), "pearson");
  if (x.size() < 3) data_error("pearson: need at least 3 points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) data_error("undefined correlation: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> fractional_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    // Positions i..j (0-based) share the mean of ranks i+1..j+1.
    const double mean_rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mean_rank;
    i = j + 1;
  }
  return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  check_lengths(x.size(), y.size(), "spearman");
  const auto rx = fractional_ranks(x);
  const auto ry = fractional_ranks(y);
  return pearson(rx, ry);
}

double correlation_significance(double r, std::size_t n) {
  if (n < 3) data_error("correlation_significance: need n >= 3");
  if (!(std::abs(r) <= 1.0)) data_error("correlation_significance: |r| > 1");
  if (std::abs(r) == 1.0) return 0.0;
  const double df = static_cast<double>(n - 2);
  const double t = r * std::sqrt(df / (1.0 - r * r));
  boost::math::students_t dist(df);
  return std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))));
}

QuadraticFit fit_quadratic(std::span<const double> x, std::span<const double> y) {
  check_lengths(x.size(), y.size(), "fit_quadratic");
  if (std::set<double>(x.begin(), x.end()).size() < 3) data_error("fit_quadratic: need at least 3 distinct x values");

  // Householder QR of the m x 3 design matrix [x^2, x, 1].
  const std::size_t m = x.size();
  std::vector<std::array<double, 3>> a(m);
  std::vector<double> rhs(y.begin(), y.end());
  for (std::size_t i = 0; i < m; ++i) a[i] = {x[i] * x[i], x[i], 1.0};

  for (std::size_t k = 0; k < 3; ++k) {
    double norm = 0;
    for (std::size_t i = k; i < m; ++i) norm += a[i][k] * a[i][k];
    norm = std::sqrt(norm);
    if (norm == 0.0) data_error("fit_quadratic: rank-deficient design");
    const double alpha = a[k][k] > 0 ? -norm : norm;
    std::vector<double> v(m, 0.0);
    v[k] = a[k][k] - alpha;
    for (std::size_t i = k + 1; i < m; ++i) v[i] = a[i][k];
    double vv = 0;
    for (std::size_t i = k; i < m; ++i) vv += v[i] * v[i];
    if (vv == 0.0) continue;
    for (std::size_t j = k; j < 3; ++j) {
      double dot = 0;
      for (std::size_t i = k; i < m; ++i) dot += v[i] * a[i][j];
      const double s = 2.0 * dot / vv;
      for (std::size_t i = k; i < m; ++i) a[i][j] -= s * v[i];
    }
    double dot = 0;
    for (std::size_t i = k; i < m; ++i) dot += v[i] * rhs[i];
    const double s = 2.0 * dot / vv;
    for (std::size_t i = k; i < m; ++i) rhs[i] -= s * v[i];
  }
  std::array<double, 3> coef{};
  for (int k = 2; k >= 0; --k) {
    const auto ku = static_cast<std::size_t>(k);
    double sum = rhs[ku];
    for (std::size_t j = ku + 1; j < 3; ++j) sum -= a[ku][j] * coef[j];
    if (a[ku][ku] == 0.0) data_error("fit_quadratic: rank-deficient design");
    coef[ku] = sum / a[ku][ku];
  }

  QuadraticFit fit{coef[0], coef[1], coef[2], 0.0};
  const double mean_y = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(m);
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = y[i] - fit(x[i]);
    ss_res += r * r;
    ss_tot += (y[i] - mean_y) * (y[i] - mean_y);
  }
  fit.r_squared = ss_tot == 0.0 ? 0.0 : 1.0 - ss_res / ss_tot;
  return fit;
}

double TokenF1Scorer::similarity(std::string_view a, std::string_view b) const {
  auto bag = [](std::string_view s) {
    std::set<std::string> out;
    for (auto tok : text::tokens(s)) {
      auto w = text::content_word(tok);
      if (!w.empty()) out.insert(std::move(w));
    }
    return out;
  };
  const auto sa = bag(a), sb = bag(b);
  if (sa.empty() && sb.empty()) return 1.0;
  if (sa.empty() || sb.empty()) return 0.0;
  std::size_t common = 0;
  for (const auto& w : sa) common += sb.count(w);
  return 2.0 * static_cast<double>(common) / static_cast<double>(sa.size() + sb.size());
}

std::vector<double> NgramCosineScorer::embed(std::string_view s) const {
  std::string norm = " " + text::normalize_whitespace(s) + " ";
  for (char& c : norm) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  std::vector<double> v(kDims, 0.0);
  for (std::size_t i = 0; i + 3 <= norm.size(); ++i) v[hash::fnv1a(std::string_view(norm).substr(i, 3)) % kDims] += 1.0;
  return v;
}

double NgramCosineScorer::similarity(std::string_view a, std::string_view b) const {
  if (text::normalize_whitespace(a) == text::normalize_whitespace(b)) return 1.0;
  const auto va = embed(a), vb = embed(b);
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < kDims; ++i) {
    dot += va[i] * vb[i];
    na += va[i] * va[i];
    nb += vb[i] * vb[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / std::sqrt(na * nb), 0.0, 1.0);
}

namespace {

struct ScorerRegistry {
  std::mutex mu;
  std::map<std::string, ScorerFactory, std::less<>> factories{
      {"token_f1", [] { return std::make_unique<TokenF1Scorer>(); }},
      {"ngram_cosine", [] { return std::make_unique<NgramCosineScorer>(); }}};
};

ScorerRegistry& scorers() {
  static ScorerRegistry r;
  return r;
}

}  // namespace

void register_scorer(std::string name, ScorerFactory factory) {
  auto& r = scorers();
  std::lock_guard lock(r.mu);
  r.factories[std::move(name)] = std::move(factory);
}

std::unique_ptr<SimilarityScorer> make_scorer(std::string_view name) {
  auto& r = scorers();
  std::lock_guard lock(r.mu);
  auto it = r.factories.find(name);
  if (it == r.factories.end()) config_error("unknown similarity scorer '" + std::string(name) + "'");
  return it->second();
}

double distance_from_reference(const SimilarityScorer& scorer, std::string_view reference, std::string_view negative) {
  if (reference.empty() || negative.empty()) data_error("distance_from_reference: empty text");
  return scorer.similarity(reference, negative);
}

double diversity(const std::vector<std::string>& samples, const SimilarityScorer& scorer) {
  if (samples.size() < 2) data_error("diversity: need at least 2 samples");
  double sum = 0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < samples.size(); ++i)
    for (std::size_t j = i + 1; j < samples.size(); ++j, ++pairs) sum += scorer.similarity(samples[i], samples[j]);
  return -sum / static_cast<double>(pairs);
}

nlohmann::json MetricEntry::to_json() const {
  nlohmann::json j = {{"metric_name", metric_name}, {"value", value}, {"n", n}};
  if (p_value) j["p_value"] = *p_value;
  return j;
}

}  // namespace maskfill::metrics
