#ifndef MASKFILL_COMMON_HPP
#define MASKFILL_COMMON_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace maskfill {

// Error categories map one-to-one onto CLI exit codes.
enum class ErrorKind { Config = 1, Data = 2, Backend = 3 };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void config_error(const std::string& msg) { throw Error(ErrorKind::Config, msg); }
[[noreturn]] inline void data_error(const std::string& msg) { throw Error(ErrorKind::Data, msg); }
[[noreturn]] inline void backend_error(const std::string& msg) { throw Error(ErrorKind::Backend, msg); }

enum class Label { Consistent, Inconsistent };

std::string_view to_string(Label label);
Label parse_label(std::string_view s);

// Negative-generation method. MF fills the masked summary alone, MSM
// summarizes a masked article, MFMA sees both.
enum class Method { Mfma, Msm, Mf };

std::string_view to_string(Method m);
Method parse_method(std::string_view s);

// Portable, platform-independent hashing and randomness. Every random
// decision in the toolkit flows through these so outputs are bit-identical
// across compilers and standard libraries.
namespace hash {

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t basis = 0xcbf29ce484222325ULL);
std::uint64_t mix(std::uint64_t x);

// Incremental hasher over a sequence of typed fields. Each field is framed
// with its length so ("ab","c") and ("a","bc") differ.
class Hasher {
 public:
  explicit Hasher(std::uint64_t seed = 0);
  Hasher& add(std::string_view s);
  Hasher& add(std::uint64_t v);
  Hasher& add_double(double v);
  std::uint64_t digest() const { return mix(state_); }

 private:
  std::uint64_t state_;
};

std::string hex(std::uint64_t v);

}  // namespace hash

// splitmix64 generator.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  // Uniform integer in [0, bound) by rejection; bound > 0.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::uint64_t state_;
};

// Seeded Fisher-Yates shuffle using Rng::below.
template <typename T>
void shuffle(std::vector<T>& items, std::uint64_t seed) {
  Rng rng(seed);
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng.below(i));
    std::swap(items[i - 1], items[j]);
  }
}

// Per-item seed: stable-hash(global_seed, id, role, index).
std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view id, std::string_view role,
                          std::uint64_t index);

// Warnings go to stderr unless silenced (tests and sweeps silence them).
namespace log {
void set_quiet(bool quiet);
void warn(std::string_view message);
}  // namespace log

// Text helpers shared by several modules.
namespace text {

// Collapse whitespace runs to one space and trim both ends.
std::string normalize_whitespace(std::string_view s);

// Byte ranges of whitespace-delimited tokens.
std::vector<std::pair<std::size_t, std::size_t>> token_bounds(std::string_view s);
std::vector<std::string_view> tokens(std::string_view s);

// Lowercased token with leading/trailing ASCII punctuation stripped; may be empty.
std::string content_word(std::string_view token);

bool is_space(char c);
bool is_punct(char c);

}  // namespace text

}  // namespace maskfill

#endif  // MASKFILL_COMMON_HPP
