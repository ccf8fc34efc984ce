#include "maskfill/common.hpp"

#include <atomic>
#include <bit>
#include <cctype>
#include <iostream>
#include <mutex>

namespace maskfill {

std::string_view to_string(Label label) {
  return label == Label::Consistent ? "consistent" : "inconsistent";
}

Label parse_label(std::string_view s) {
  if (s == "consistent" || s == "C" || s == "correct") return Label::Consistent;
  if (s == "inconsistent" || s == "I" || s == "incorrect") return Label::Inconsistent;
  data_error("unknown label '" + std::string(s) + "'");
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Mfma: return "mfma";
    case Method::Msm: return "msm";
    case Method::Mf: return "mf";
  }
  return "mfma";
}

Method parse_method(std::string_view s) {
  if (s == "mfma") return Method::Mfma;
  if (s == "msm") return Method::Msm;
  if (s == "mf") return Method::Mf;
  config_error("unknown method '" + std::string(s) + "' (expected mfma, msm or mf)");
}

namespace hash {

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t basis) {
  std::uint64_t h = basis;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t mix(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

Hasher::Hasher(std::uint64_t seed) : state_(mix(seed ^ 0x6a09e667f3bcc909ULL)) {}

Hasher& Hasher::add(std::string_view s) {
  add(static_cast<std::uint64_t>(s.size()));
  state_ = fnv1a(s, state_);
  return *this;
}

Hasher& Hasher::add(std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    state_ ^= (v >> (8 * i)) & 0xffU;
    state_ *= 0x100000001b3ULL;
  }
  return *this;
}

Hasher& Hasher::add_double(double v) {
  if (v == 0.0) v = 0.0;  // fold -0.0
  return add(std::bit_cast<std::uint64_t>(v));
}

std::string hex(std::uint64_t v) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kDigits[v & 0xf];
    v >>= 4;
  }
  return out;
}

}  // namespace hash

std::uint64_t Rng::next() {
  state_ += 0x9e3779b97f4a7c15ULL;
  return hash::mix(state_);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  // Reject the tail so every residue is equally likely.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t r;
  do {
    r = next();
  } while (r >= limit);
  return r % bound;
}

std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view id, std::string_view role,
                          std::uint64_t index) {
  return hash::Hasher(global_seed).add(id).add(role).add(index).digest();
}

namespace log {

namespace {
std::atomic<bool> g_quiet{false};
std::mutex g_mu;
}  // namespace

void set_quiet(bool quiet) { g_quiet = quiet; }

void warn(std::string_view message) {
  if (g_quiet) return;
  std::lock_guard lock(g_mu);
  std::cerr << "warning: " << message << '\n';
}

}  // namespace log

namespace text {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_punct(char c) {
  return std::ispunct(static_cast<unsigned char>(c)) != 0;
}

std::string normalize_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> token_bounds(std::string_view s) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    if (i == s.size()) break;
    std::size_t start = i;
    while (i < s.size() && !is_space(s[i])) ++i;
    out.emplace_back(start, i);
  }
  return out;
}

std::vector<std::string_view> tokens(std::string_view s) {
  std::vector<std::string_view> out;
  for (auto [b, e] : token_bounds(s)) out.push_back(s.substr(b, e - b));
  return out;
}

std::string content_word(std::string_view token) {
  std::size_t b = 0, e = token.size();
  while (b < e && is_punct(token[b])) ++b;
  while (e > b && is_punct(token[e - 1])) --e;
  std::string out(token.substr(b, e - b));
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace text

}  // namespace maskfill
