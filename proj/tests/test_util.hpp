#ifndef MASKFILL_TESTS_TEST_UTIL_HPP
#define MASKFILL_TESTS_TEST_UTIL_HPP

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "maskfill/common.hpp"
#include "maskfill/corpus.hpp"

namespace testutil {

inline std::filesystem::path data_dir() { return MASKFILL_DATA_DIR; }
inline std::filesystem::path golden_dir() { return MASKFILL_GOLDEN_DIR; }

// Fresh, empty scratch directory under the build tree.
inline std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::path(MASKFILL_SCRATCH_DIR) / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// Random prose-like text: capitalized names, determiners, numbers and
// punctuation so that every span unit finds something.
inline std::string random_text(std::mt19937_64& rng, std::size_t n_words) {
  static const std::vector<std::string> words = {
      "the", "a", "coach", "team", "won", "Chelsea", "Leeds", "United", "beat", "three", "goals", "on",
      "Monday", "in", "Madrid", "said", "that", "his", "players", "were", "tired", "12", "fans", "of",
      "Guus", "Hiddink", "storm", "moved", "north", "and", "an", "old", "stadium", "2019", "with", "Russia"};
  std::string out;
  for (std::size_t i = 0; i < n_words; ++i) {
    std::string w = words[rng() % words.size()];
    if (i == 0 || out.back() == '.') w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
    if (!out.empty()) out += ' ';
    out += w;
    const auto r = rng() % 10;
    if (r == 0) out += '.';
    else if (r == 1) out += ',';
  }
  if (out.back() != '.') out += '.';
  return out;
}

inline std::vector<maskfill::DocumentPair> random_corpus(std::mt19937_64& rng, std::size_t n) {
  std::vector<maskfill::DocumentPair> out;
  for (std::size_t i = 0; i < n; ++i)
    out.push_back({"p" + std::to_string(i) + "-" + std::to_string(rng() % 1000), random_text(rng, 40),
                   random_text(rng, 12)});
  return out;
}

}  // namespace testutil

#endif  // MASKFILL_TESTS_TEST_UTIL_HPP
