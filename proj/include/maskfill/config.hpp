#ifndef MASKFILL_CONFIG_HPP
#define MASKFILL_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "maskfill/classifier.hpp"
#include "maskfill/dataset.hpp"
#include "maskfill/infill.hpp"

namespace maskfill {

// Parses the TOML subset used by run configs: top-level keys, [section]
// headers, and `key = value` with strings, numbers, booleans and flat
// arrays. '#' starts a comment outside strings. Returns a JSON object with
// one nested object per section.
nlohmann::json parse_config_text(std::string_view text);
nlohmann::json load_config_file(const std::filesystem::path& path);

// Applies "section.key=value" (or "key=value" for top-level keys). The
// value uses config syntax; a bare word is taken as a string.
void apply_override(nlohmann::json& config, std::string_view assignment);

// Everything a pipeline run needs. Defaults follow the reference setup:
// gamma_A 0.6, gamma_S 0.8, noun-phrase/entity masking, infiller training
// 5 epochs / batch 48 / 1024 input / 140 target tokens, classifier 5
// epochs / lr 2e-5 / batch 96.
struct PipelineConfig {
  std::uint64_t seed = 0;

  std::string corpus_path;
  std::string corpus_format = "jsonl-pairs";

  MaskingConfig masking;

  Method method = Method::Mfma;
  std::string infill_backend = "mock";
  TrainConfig infill_train;
  DecodeConfig decode;
  std::size_t n_samples = 1;
  std::size_t jobs = 1;

  FilterPolicy filter;

  std::string classifier_backend = "overlap";
  ClassifierConfig classifier;
  double threshold = 0.5;

  std::string validation_path;
  std::string validation_schema = "factcc-test";
  std::string scorer = "token_f1";

  std::vector<double> sweep_gamma_a = {0.2, 0.4, 0.6, 0.8, 1.0};
  std::vector<double> sweep_gamma_s = {0.2, 0.4, 0.6, 0.8, 1.0};

  static PipelineConfig from_json(const nlohmann::json& j);
  // Canonical form with every field present; fingerprints hash this.
  nlohmann::json to_json() const;
  std::string fingerprint() const;
};

}  // namespace maskfill

#endif  // MASKFILL_CONFIG_HPP
