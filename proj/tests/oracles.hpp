// Independent reference implementations used to check the library. None of
// these include library headers beyond plain data types; each recomputes
// its answer the slow, obvious way.
#ifndef MASKFILL_TESTS_ORACLES_HPP
#define MASKFILL_TESTS_ORACLES_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

// ---- hashing / randomness -------------------------------------------------

inline std::uint64_t splitmix_finalize(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

struct Hasher {
  std::uint64_t h;
  explicit Hasher(std::uint64_t seed) : h(splitmix_finalize(seed ^ 0x6a09e667f3bcc909ULL)) {}
  Hasher& word(std::uint64_t v) {
    unsigned char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(v >> (8 * i));
    for (unsigned char b : bytes) h = (h ^ b) * kFnvPrime;
    return *this;
  }
  Hasher& str(const std::string& s) {
    word(s.size());
    for (unsigned char b : s) h = (h ^ b) * kFnvPrime;
    return *this;
  }
  Hasher& real(double d) {
    if (d == 0.0) d = 0.0;
    std::uint64_t bits;
    std::memcpy(&bits, &d, sizeof bits);
    return word(bits);
  }
  std::uint64_t value() const { return splitmix_finalize(h); }
};

inline std::uint64_t derive_seed(std::uint64_t seed, const std::string& id, const std::string& role, std::uint64_t i) {
  return Hasher(seed).str(id).str(role).word(i).value();
}

struct SplitMix {
  std::uint64_t s;
  std::uint64_t operator()() { return splitmix_finalize(s += 0x9e3779b97f4a7c15ULL); }
  // Unbiased draw in [0, n): redraw while the value falls in the short tail.
  std::uint64_t uniform(std::uint64_t n) {
    const std::uint64_t tail = (UINT64_MAX % n + 1) % n;  // 2^64 mod n
    for (;;) {
      std::uint64_t r = (*this)();
      if (tail == 0 || r < UINT64_MAX - tail + 1) return r % n;
    }
  }
};

// ---- masking ----------------------------------------------------------------

// Count rule with gamma given exactly as percent/100.
inline std::size_t mask_count_percent(std::size_t n, int percent) {
  if (percent == 0 || n == 0) return 0;
  std::size_t k = (static_cast<std::size_t>(percent) * n + 50) / 100;
  return std::min(n, std::max<std::size_t>(1, k));
}

// Seeded sampling without replacement, replayed from a pool: draw k
// positions, each time taking a uniform element of the not-yet-taken
// suffix. Returns the chosen span indices in ascending order.
inline std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, std::uint64_t seed) {
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < n; ++i) pool.push_back(i);
  SplitMix g{seed};
  std::vector<std::size_t> chosen;
  for (std::size_t step = 0; step < k; ++step) {
    std::size_t pick = step + g.uniform(n - step);
    std::swap(pool[step], pool[pick]);
    chosen.push_back(pool[step]);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

// Byte-level coverage of [start, end) intervals.
inline std::vector<bool> coverage(const std::vector<std::pair<std::size_t, std::size_t>>& spans, std::size_t len) {
  std::vector<bool> bits(len, false);
  for (auto [s, e] : spans)
    for (std::size_t i = s; i < e; ++i) bits[i] = true;
  return bits;
}

// ---- metrics ------------------------------------------------------------------

// Labels as 0 = consistent, 1 = inconsistent.
inline double f1_for(const std::vector<int>& t, const std::vector<int>& p, int cls) {
  double tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (p[i] == cls && t[i] == cls) tp += 1;
    if (p[i] == cls && t[i] != cls) fp += 1;
    if (p[i] != cls && t[i] == cls) fn += 1;
  }
  if (tp + fp + fn == 0) return 0.0;
  return 2 * tp / (2 * tp + fp + fn);
}

inline double macro_f1(const std::vector<int>& t, const std::vector<int>& p) {
  return (f1_for(t, p, 0) + f1_for(t, p, 1)) / 2;
}

inline double balanced_accuracy(const std::vector<int>& t, const std::vector<int>& p) {
  double sum = 0;
  for (int cls = 0; cls < 2; ++cls) {
    double hit = 0, all = 0;
    for (std::size_t i = 0; i < t.size(); ++i)
      if (t[i] == cls) {
        all += 1;
        if (p[i] == cls) hit += 1;
      }
    sum += hit / all;
  }
  return sum / 2;
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  long double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const long double mx = sx / n, my = sy / n;
  long double cxy = 0, cxx = 0, cyy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    cxy += (x[i] - mx) * (y[i] - my);
    cxx += (x[i] - mx) * (x[i] - mx);
    cyy += (y[i] - my) * (y[i] - my);
  }
  return static_cast<double>(cxy / std::sqrt(cxx * cyy));
}

// Rank = 1 + (number strictly smaller) + (ties other than self) / 2.
inline std::vector<double> mean_ranks(const std::vector<double>& v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double less = 0, equal = 0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (v[j] < v[i]) less += 1;
      else if (v[j] == v[i] && j != i) equal += 1;
    }
    r[i] = 1 + less + equal / 2;
  }
  return r;
}

inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  return pearson(mean_ranks(x), mean_ranks(y));
}

// Closed-form Student t tail for integer df (Abramowitz and Stegun),
// summed in long double with theta = atan(|t| / sqrt(df)).
inline double t_two_sided_p(double t, int df) {
  const long double th = std::atan(std::fabs(static_cast<long double>(t)) / std::sqrt(static_cast<long double>(df)));
  const long double s = std::sin(th), c2 = std::cos(th) * std::cos(th);
  long double a;
  if (df % 2 == 1) {
    long double sum = 0, term = 1;
    for (int k = 1; k <= (df - 3) / 2 + 1 && df > 1; ++k) {
      sum += term;
      term *= c2 * (2.0L * k) / (2.0L * k + 1);
    }
    a = 2 / static_cast<long double>(M_PI) * (th + s * std::cos(th) * sum);
  } else {
    long double sum = 0, term = 1;
    for (int k = 1; k <= (df - 2) / 2 + 1; ++k) {
      sum += term;
      term *= c2 * (2.0L * k - 1) / (2.0L * k);
    }
    a = s * sum;
  }
  return static_cast<double>(1 - a);
}

inline double correlation_p(double r, std::size_t n) {
  const int df = static_cast<int>(n) - 2;
  return t_two_sided_p(r * std::sqrt(df / (1 - r * r)), df);
}

struct Quad {
  double a, b, c, r2;
};

// Normal equations (X'X) beta = X'y solved by Cramer's rule in long double.
inline Quad quadratic(const std::vector<double>& x, const std::vector<double>& y) {
  long double s[5] = {0, 0, 0, 0, 0}, t[3] = {0, 0, 0};
  for (std::size_t i = 0; i < x.size(); ++i) {
    long double p = 1;
    for (int k = 0; k < 5; ++k) {
      s[k] += p;
      if (k < 3) t[k] += p * y[i];
      p *= x[i];
    }
  }
  // Rows for unknowns (c, b, a).
  long double m[3][3] = {{s[0], s[1], s[2]}, {s[1], s[2], s[3]}, {s[2], s[3], s[4]}};
  auto det = [](long double q[3][3]) {
    return q[0][0] * (q[1][1] * q[2][2] - q[1][2] * q[2][1]) - q[0][1] * (q[1][0] * q[2][2] - q[1][2] * q[2][0]) +
           q[0][2] * (q[1][0] * q[2][1] - q[1][1] * q[2][0]);
  };
  const long double d = det(m);
  long double sol[3];
  for (int col = 0; col < 3; ++col) {
    long double q[3][3];
    for (int r = 0; r < 3; ++r)
      for (int cc = 0; cc < 3; ++cc) q[r][cc] = cc == col ? t[r] : m[r][cc];
    sol[col] = det(q) / d;
  }
  Quad out{static_cast<double>(sol[2]), static_cast<double>(sol[1]), static_cast<double>(sol[0]), 0};
  long double mean = 0;
  for (double v : y) mean += v;
  mean /= y.size();
  long double ss_tot = 0, ss_res = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const long double f = sol[2] * x[i] * x[i] + sol[1] * x[i] + sol[0];
    ss_res += (y[i] - f) * (y[i] - f);
    ss_tot += (y[i] - mean) * (y[i] - mean);
  }
  out.r2 = ss_tot == 0 ? 0.0 : static_cast<double>(1 - ss_res / ss_tot);
  return out;
}

// ---- similarity -------------------------------------------------------------

inline std::set<std::string> word_set(const std::string& s) {
  std::set<std::string> out;
  std::string cur;
  auto flush = [&] {
    std::size_t b = 0, e = cur.size();
    while (b < e && std::ispunct(static_cast<unsigned char>(cur[b]))) ++b;
    while (e > b && std::ispunct(static_cast<unsigned char>(cur[e - 1]))) --e;
    std::string w = cur.substr(b, e - b);
    for (char& c : w) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (!w.empty()) out.insert(w);
    cur.clear();
  };
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) flush();
    else cur += c;
  }
  flush();
  return out;
}

// Set-overlap F1; two empty sets count as identical.
inline double set_f1(const std::string& a, const std::string& b) {
  const auto A = word_set(a), B = word_set(b);
  if (A.empty() && B.empty()) return 1.0;
  if (A.empty() || B.empty()) return 0.0;
  std::size_t common = 0;
  for (const auto& w : A) common += B.count(w);
  return 2.0 * common / static_cast<double>(A.size() + B.size());
}

template <typename Sim>
double diversity(const std::vector<std::string>& xs, Sim sim) {
  double total = 0;
  int pairs = 0;
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      total += sim(xs[i], xs[j]);
      ++pairs;
    }
  return -total / pairs;
}

}  // namespace oracle

#endif  // MASKFILL_TESTS_ORACLES_HPP
