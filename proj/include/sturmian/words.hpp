#pragma once

// theta-codings, the Fibonacci word, linear combinations of codings and
// factor complexity.

#include <algorithm>
#include <cmath>
#include <future>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "confrac.hpp"
#include "literal.hpp"

namespace sturmian {

/// u_n = 1 iff frac(x + n theta) in [0, theta); output position j holds u_{j + origin}.
struct CodingSpec {
  RealLike theta;
  RealLike x = Rational(0);
  int origin = 1;
};

class Word {
 public:
  Word() = default;
  Word(std::vector<AlgebraicNumber> alphabet, std::u32string symbols, std::string note = {})
      : alphabet_(std::move(alphabet)), symbols_(std::move(symbols)), note_(std::move(note)) {
    for (char32_t s : symbols_)
      if (s >= alphabet_.size()) fail(ErrorKind::ValidationError, "symbol index outside the alphabet");
  }

  /// Word over {0, 1} from a string of '0'/'1'.
  static Word binary(std::string_view bits, std::string note = {}) {
    std::u32string s;
    s.reserve(bits.size());
    for (char c : bits) {
      if (c != '0' && c != '1') fail(ErrorKind::ParseError, "binary word expects 0/1 characters");
      s.push_back(static_cast<char32_t>(c - '0'));
    }
    return Word(binary_alphabet(), std::move(s), std::move(note));
  }

  static const std::vector<AlgebraicNumber>& binary_alphabet() {
    static const std::vector<AlgebraicNumber> a = {AlgebraicNumber::from_integer(0), AlgebraicNumber::from_integer(1)};
    return a;
  }

  std::size_t size() const noexcept { return symbols_.size(); }
  bool empty() const noexcept { return symbols_.empty(); }
  char32_t operator[](std::size_t i) const { return symbols_[i]; }
  const AlgebraicNumber& value(std::size_t i) const { return alphabet_[symbols_.at(i)]; }
  const std::vector<AlgebraicNumber>& alphabet() const noexcept { return alphabet_; }
  const std::u32string& symbols() const noexcept { return symbols_; }
  const std::string& origin_note() const noexcept { return note_; }

  bool is_binary01() const {
    return alphabet_.size() <= 2 && (alphabet_.empty() || alphabet_[0] == binary_alphabet()[0]) &&
           (alphabet_.size() < 2 || alphabet_[1] == binary_alphabet()[1]);
  }

  /// '0'/'1' text for binary words.
  std::string to_string() const {
    if (!is_binary01()) fail(ErrorKind::ValidationError, "not a word over {0,1}");
    std::string s(symbols_.size(), '0');
    for (std::size_t i = 0; i < symbols_.size(); ++i) s[i] = static_cast<char>('0' + symbols_[i]);
    return s;
  }

  Word prefix(std::size_t n) const { return Word(alphabet_, symbols_.substr(0, n), note_); }

  friend bool operator==(const Word& a, const Word& b) { return a.symbols_ == b.symbols_ && a.alphabet_ == b.alphabet_; }

 private:
  std::vector<AlgebraicNumber> alphabet_;
  std::u32string symbols_;
  std::string note_;
};

namespace detail {

inline Integer floor_of(const Mpfr& v) {
  Integer z;
  mpfr_get_z(z.get_mpz_t(), v.get(), MPFR_RNDD);
  return z;
}

/// floor(x + n theta), certified.
class AffineFloor {
 public:
  AffineFloor(const RealLike& theta, const RealLike& x, long max_n) : theta_(theta), x_(x) {
    exact_ = is_exact(theta) && is_exact(x);
    long bits = 1;
    while ((1L << bits) < std::max(2L, std::labs(max_n) + 2) && bits < 62) ++bits;
    prec_ = 256 + bits;
    tb_ = to_ball(theta, prec_);
    xb_ = to_ball(x, prec_);
    if (!exact_) prec_ = std::max(tb_.prec(), xb_.prec());
  }

  Integer operator()(long n) const {
    Ball y = xb_ + Ball(n, prec_) * tb_;
    Integer lo = floor_of(y.lower()), hi = floor_of(y.upper());
    if (lo == hi) return lo;
    if (!exact_) fail(ErrorKind::Indeterminate, "coding boundary not certifiable from ball inputs");
    // decide x + n theta >= k exactly for each integer k in (lo, hi]
    Integer k = hi;
    while (k > lo) {
      if (sign_exact(to_expr(x_) + Expr(Rational(n)) * to_expr(theta_) - Expr(k)) >= 0) return k;
      --k;
    }
    return lo;
  }

 private:
  RealLike theta_, x_;
  bool exact_ = false;
  Bits prec_ = 256;
  Ball tb_, xb_;
};

}  // namespace detail

inline void validate_spec(const CodingSpec& spec) {
  if (spec.origin != 0 && spec.origin != 1) fail(ErrorKind::PreconditionViolated, "index origin must be 0 or 1");
  check_unit_interval(spec.theta);
  if (exact_rational(spec.theta)) fail(ErrorKind::RationalInput, "theta must be irrational");
  Integer fx = floor_exact(spec.x);
  if (fx != 0) fail(ErrorKind::PreconditionViolated, "x must lie in [0,1)");
}

/// Positions [begin, end) of the coding.
inline Word theta_coding_range(const CodingSpec& spec, std::size_t begin, std::size_t end) {
  validate_spec(spec);
  std::u32string s;
  if (end <= begin) return Word(Word::binary_alphabet(), s, "theta-coding");
  s.resize(end - begin);
  long n0 = static_cast<long>(begin) + spec.origin;
  detail::AffineFloor F(spec.theta, spec.x, static_cast<long>(end) + spec.origin);
  // u_n = floor(x + n theta) - floor(x + (n-1) theta), since 0 < theta < 1
  Integer prev = F(n0 - 1);
  for (std::size_t j = 0; j < s.size(); ++j) {
    Integer cur = F(n0 + static_cast<long>(j));
    s[j] = cur != prev ? 1 : 0;
    prev = cur;
  }
  return Word(Word::binary_alphabet(), std::move(s), "theta-coding");
}

inline Word theta_coding(const CodingSpec& spec, std::size_t N) { return theta_coding_range(spec, 0, N); }

/// Same word, generated in `chunks` independent ranges and concatenated in order.
inline Word theta_coding_parallel(const CodingSpec& spec, std::size_t N, std::size_t chunks) {
  chunks = std::max<std::size_t>(1, std::min(chunks, N == 0 ? std::size_t(1) : N));
  std::vector<std::future<Word>> parts;
  for (std::size_t c = 0; c < chunks; ++c) {
    std::size_t b = N * c / chunks, e = N * (c + 1) / chunks;
    parts.push_back(std::async(std::launch::async, [&spec, b, e] { return theta_coding_range(spec, b, e); }));
  }
  std::u32string s;
  for (auto& p : parts) s += p.get().symbols();
  return Word(Word::binary_alphabet(), std::move(s), "theta-coding");
}

/// Prefix of the limit of f_0 = 0, f_1 = 01, f_n = f_{n-1} f_{n-2}.
inline Word fibonacci_word(std::size_t N) {
  std::string a = "0", b = "01";
  while (b.size() < N) {
    std::string c = b + a;
    a = std::move(b);
    b = std::move(c);
  }
  return Word::binary(std::string_view(b).substr(0, N), "fibonacci");
}

struct ComplexityReport {
  std::size_t n = 0;
  std::size_t count = 0;
  std::size_t length = 0;
  bool censored = false;                    // count < n+1 may be an artefact of the short prefix
  bool ultimately_periodic_suspect = false;  // count <= n on a prefix long enough to exclude censoring
};

inline ComplexityReport subword_complexity(const Word& w, std::size_t n) {
  if (n > w.size()) fail(ErrorKind::WindowTooLong, "factor length exceeds the word length");
  ComplexityReport r;
  r.n = n;
  r.length = w.size();
  std::u32string_view v(w.symbols());
  std::unordered_set<std::u32string_view> seen;
  for (std::size_t i = 0; i + n <= v.size(); ++i) seen.insert(v.substr(i, n));
  r.count = seen.size();
  r.censored = r.count < n + 1 && r.length < 2 * n + 2;
  r.ultimately_periodic_suspect = r.count <= n && !r.censored;
  return r;
}

/// Number of positions holding `symbol`, divided by the length.
inline Rational letter_frequency(const Word& w, char32_t symbol) {
  if (w.empty()) fail(ErrorKind::PreconditionViolated, "empty word");
  auto c = std::count(w.symbols().begin(), w.symbols().end(), symbol);
  return Rational(static_cast<long>(c), static_cast<long>(w.size()));
}

struct DegeneracyCheck {
  bool certified = false;  // exact inputs, scanned to the bound
  long bound = 0;
  std::string status;  // "checked to bound" or "unverified"
};

/// Searches |a| <= bound for x_i - x_j = a theta + b with integer b.
inline DegeneracyCheck check_nondegenerate(const std::vector<CodingSpec>& specs, long bound = 1000000) {
  DegeneracyCheck out;
  out.bound = bound;
  bool exact = true;
  for (const auto& s : specs) exact = exact && is_exact(s.x) && is_exact(s.theta);
  if (!exact) {
    out.status = "unverified";
    return out;
  }
  if (specs.size() < 2) {
    out.certified = true;
    out.status = "checked to bound";
    return out;
  }
  const RealLike& theta = specs[0].theta;
  double td = to_ball(theta, 128).to_double();
  for (std::size_t i = 0; i < specs.size(); ++i)
    for (std::size_t j = i + 1; j < specs.size(); ++j) {
      Expr diff = to_expr(specs[i].x) - to_expr(specs[j].x);
      double dd = diff.enclose(128).re().to_double();
      for (long a = -bound; a <= bound; ++a) {
        double t = dd - static_cast<double>(a) * td;
        double err = (std::fabs(static_cast<double>(a)) + 4) * 0x1p-48;
        if (std::fabs(t - std::nearbyint(t)) > err) continue;
        Expr e = diff - Expr(Rational(a)) * to_expr(theta) - Expr(Integer(static_cast<long>(std::nearbyint(t))));
        if (sign_exact(e) == 0)
          fail(ErrorKind::DegenerateDifference,
               "x_" + std::to_string(i + 1) + " - x_" + std::to_string(j + 1) + " = " + std::to_string(a) + " theta + " +
                   std::to_string(static_cast<long>(std::nearbyint(t))));
      }
    }
  out.certified = true;
  out.status = "checked to bound";
  return out;
}

inline bool same_theta(const RealLike& a, const RealLike& b) {
  if (is_exact(a) && is_exact(b)) return to_algebraic(a).same_value(to_algebraic(b));
  if (std::holds_alternative<Ball>(a) && std::holds_alternative<Ball>(b)) {
    const Ball &x = std::get<Ball>(a), &y = std::get<Ball>(b);
    return mpfr_equal_p(x.mid().get(), y.mid().get()) && mpfr_equal_p(x.rad().get(), y.rad().get());
  }
  return false;
}

struct Combination {
  Word word;
  DegeneracyCheck degeneracy;
};

/// u_n = c_0 + sum_i c_i u_n^(i), over the alphabet of attained values sorted increasingly.
inline Combination linear_combination(const std::vector<CodingSpec>& specs, const std::vector<AlgebraicNumber>& c,
                                      std::size_t N, long search_bound = 1000000) {
  if (c.size() != specs.size() + 1) fail(ErrorKind::PreconditionViolated, "need one coefficient per coding plus c_0");
  for (std::size_t i = 1; i < specs.size(); ++i)
    if (!same_theta(specs[0].theta, specs[i].theta))
      fail(ErrorKind::SharedThetaViolation, "codings must share theta");
  Combination out;
  out.degeneracy = check_nondegenerate(specs, search_bound);

  std::vector<Word> codes;
  for (const auto& s : specs) codes.push_back(theta_coding(s, N));
  // value of each bit pattern
  std::size_t k = specs.size();
  std::vector<std::size_t> pattern(N, 0);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t n = 0; n < N; ++n)
      if (codes[i][n]) pattern[n] |= std::size_t(1) << i;
  std::vector<std::size_t> used;
  {
    std::vector<bool> seen(std::size_t(1) << std::min<std::size_t>(k, 20), false);
    for (auto p : pattern)
      if (!seen[p]) {
        seen[p] = true;
        used.push_back(p);
      }
  }
  if (N == 0 && k < 20) used.push_back(0);
  std::vector<std::pair<std::size_t, AlgebraicNumber>> values;
  for (auto p : used) {
    AlgebraicNumber v = c[0];
    for (std::size_t i = 0; i < k; ++i)
      if (p >> i & 1) v = v + c[i + 1];
    values.emplace_back(p, v);
  }
  // merge equal values, then sort real values increasingly
  std::vector<AlgebraicNumber> alphabet;
  std::vector<std::size_t> index_of_pattern(std::size_t(1) << std::min<std::size_t>(k, 20), 0);
  for (auto& [p, v] : values) {
    std::size_t idx = alphabet.size();
    for (std::size_t a = 0; a < alphabet.size(); ++a)
      if (alphabet[a].same_value(v)) idx = a;
    if (idx == alphabet.size()) alphabet.push_back(v);
    index_of_pattern[p] = idx;
  }
  std::vector<std::size_t> order(alphabet.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  bool all_real = std::all_of(alphabet.begin(), alphabet.end(), [](const AlgebraicNumber& a) { return a.is_real(); });
  if (all_real)
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return compare_exact(Expr(alphabet[a]), Expr(alphabet[b])) < 0;
    });
  std::vector<std::size_t> rank(order.size());
  std::vector<AlgebraicNumber> sorted;
  for (std::size_t r = 0; r < order.size(); ++r) {
    rank[order[r]] = r;
    sorted.push_back(alphabet[order[r]]);
  }
  std::u32string s(N, 0);
  for (std::size_t n = 0; n < N; ++n) s[n] = static_cast<char32_t>(rank[index_of_pattern[pattern[n]]]);
  out.word = Word(std::move(sorted), std::move(s), "linear combination of theta-codings");
  return out;
}

}  // namespace sturmian
