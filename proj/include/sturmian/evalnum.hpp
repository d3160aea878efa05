#pragma once

// Sturmian numbers sum_{n>=0} u_n beta^-n over an algebraic base, the partial
// sums and coefficients used to compare beta^r alpha with alpha, and the
// resulting inequality.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "words.hpp"

namespace sturmian {

/// A finite prefix plus an optional generator that produces longer prefixes.
class DigitSequence {
 public:
  using Generator = std::function<Word(std::size_t)>;

  DigitSequence() = default;
  explicit DigitSequence(Word w, Generator g = {}) : word_(std::move(w)), gen_(std::move(g)) {}

  static DigitSequence generated(Generator g, std::size_t initial = 64) {
    Word w = g(initial);
    return DigitSequence(std::move(w), std::move(g));
  }

  /// Linear combination of codings; non-degeneracy is checked once up front.
  static DigitSequence from_specs(std::vector<CodingSpec> specs, std::vector<AlgebraicNumber> c,
                                  long search_bound = 1000000) {
    check_nondegenerate(specs, search_bound);
    return generated([specs = std::move(specs), c = std::move(c)](std::size_t N) {
      return linear_combination(specs, c, N, 0).word;
    });
  }

  static DigitSequence fibonacci() { return generated([](std::size_t N) { return fibonacci_word(N); }); }

  static DigitSequence constant(const AlgebraicNumber& a) {
    return generated([a](std::size_t N) { return Word({a}, std::u32string(N, 0), "constant"); });
  }

  bool extensible() const { return static_cast<bool>(gen_); }
  const Word& word() const { return word_; }

  /// At least n digits when extensible, else whatever is stored.
  const Word& prefix(std::size_t n) {
    if (word_.size() < n && gen_) word_ = gen_(std::max(n, 2 * word_.size()));
    return word_;
  }

  /// u_k u_{k+1} ...
  DigitSequence shifted(std::size_t k) const {
    if (!gen_) {
      if (k > word_.size()) fail(ErrorKind::PrefixTooShort, "shift beyond the stored prefix");
      return DigitSequence(Word(word_.alphabet(), word_.symbols().substr(k), word_.origin_note()));
    }
    Generator g = gen_;
    return generated([g, k](std::size_t N) {
      Word w = g(N + k);
      return Word(w.alphabet(), w.symbols().substr(k), w.origin_note());
    });
  }

 private:
  Word word_;
  Generator gen_;
};

/// beta with a certified rational lower bound modulus_lower > 1 on |beta|.
struct Base {
  AlgebraicNumber beta;
  Rational modulus_lower;

  static Base make(const AlgebraicNumber& beta) {
    for (Bits p = 64; p <= 8192; p *= 2) {
      ComplexBall z = beta.refine_complex(p);
      Mpfr lo = z.mig(), hi = z.mag();
      if (mpfr_cmp_ui(lo.get(), 1) > 0) return {beta, lo.to_rational()};
      if (mpfr_cmp_ui(hi.get(), 1) <= 0) break;
    }
    fail(ErrorKind::PreconditionViolated, "|beta| > 1 could not be certified");
  }

  bool is_real() const { return beta.is_real(); }
};

namespace detail {

inline std::vector<ComplexBall> alphabet_balls(const Word& w, Bits prec) {
  std::vector<ComplexBall> out;
  for (const auto& a : w.alphabet()) out.push_back(a.refine_complex(prec));
  return out;
}

inline bool all_real(const Word& w) {
  return std::all_of(w.alphabet().begin(), w.alphabet().end(), [](const AlgebraicNumber& a) { return a.is_real(); });
}

/// sum_{j=0}^{last} u_j z^j by Horner.
inline ComplexBall horner(const Word& w, std::size_t last, const ComplexBall& z, const std::vector<ComplexBall>& vals) {
  ComplexBall acc = vals[w[last]];
  for (std::size_t j = last; j-- > 0;) acc = acc * z + vals[w[j]];
  return acc;
}

inline Mpfr alphabet_bound(const Word& w) {
  Mpfr a(RAD_BITS);
  for (const auto& v : w.alphabet()) {
    Mpfr m = v.refine_complex(64).mag();
    mpfr_max(a.get(), a.get(), m.get(), MPFR_RNDU);
  }
  return a;
}

/// A L^-(n) / (1 - 1/L), rounded up.
inline Mpfr tail_bound(const Mpfr& A, const Rational& L, std::size_t n) {
  Ball l(L, 128);
  Ball t = Ball::from_mid_rad(A, Mpfr(RAD_BITS), 128) / (pow(l, n) * (Ball(1L, 128) - Ball(1L, 128) / l));
  Mpfr up(RAD_BITS);
  mpfr_set(up.get(), t.upper().get(), MPFR_RNDU);
  return up;
}

}  // namespace detail

struct SturmianValue {
  ComplexBall value;
  std::size_t terms = 0;  // digits summed exactly
  Mpfr tail;              // bound folded into the radius
};

/// sum u_n beta^-n with the tail after `terms` digits folded into the radius.
inline SturmianValue sturmian_number_detail(DigitSequence& seq, const Base& base, Bits prec) {
  SturmianValue out;
  const Word& probe = seq.prefix(1);
  Mpfr A = detail::alphabet_bound(probe);
  bool real = base.is_real() && detail::all_real(probe);
  if (A.is_zero()) {
    out.value = ComplexBall(Rational(0), prec);
    return out;
  }
  double lg = std::log2(base.modulus_lower.get_d());
  double lgA = std::log2(A.to_double());
  double lgq = std::log2(1.0 - 1.0 / base.modulus_lower.get_d());
  std::size_t n = static_cast<std::size_t>(std::ceil((static_cast<double>(prec) + 4 + lgA - lgq) / lg)) + 1;
  const Word& w = seq.prefix(n);
  n = std::min(n, w.size());
  if (n == 0) fail(ErrorKind::PrefixTooShort, "no digits available");
  Bits wp = prec + 16 + static_cast<Bits>(std::log2(static_cast<double>(n) + 1));
  ComplexBall z = ComplexBall(Rational(1), wp) / base.beta.refine_complex(wp);
  out.value = detail::horner(w, n - 1, z, detail::alphabet_balls(w, wp));
  out.terms = n;
  out.tail = detail::tail_bound(detail::alphabet_bound(w), base.modulus_lower, n);
  out.value.re().add_error(out.tail);
  if (!real) out.value.im().add_error(out.tail);
  out.value = out.value.with_prec(prec + 8);
  return out;
}

inline ComplexBall sturmian_number(DigitSequence& seq, const Base& base, Bits prec) {
  return sturmian_number_detail(seq, base, prec).value;
}

/// sum_{j=0}^{r} u_j beta^{r-j}: exact when beta and the digits are rational.
struct PartialAlpha {
  std::optional<Rational> exact;
  ComplexBall ball;
};

inline PartialAlpha partial_alpha(const Word& w, const Base& base, std::size_t r, Bits prec = 256) {
  if (r >= w.size()) fail(ErrorKind::PrefixTooShort, "need r < length of the word");
  PartialAlpha out;
  bool rational = base.beta.is_rational() &&
                  std::all_of(w.alphabet().begin(), w.alphabet().end(), [](const AlgebraicNumber& a) { return a.is_rational(); });
  if (rational) {
    Rational b = base.beta.rational_value(), acc = 0;
    for (std::size_t j = 0; j <= r; ++j) acc = acc * b + w.value(j).rational_value();
    out.exact = acc;
    out.ball = ComplexBall(acc, prec);
    return out;
  }
  Bits wp = prec + 16 + static_cast<Bits>(r * std::max(1.0, std::log2(base.modulus_lower.get_d() + 1)));
  auto vals = detail::alphabet_balls(w, wp);
  ComplexBall b = base.beta.refine_complex(wp);
  ComplexBall acc = vals[w[0]];
  for (std::size_t j = 1; j <= r; ++j) acc = acc * b + vals[w[j]];
  out.ball = acc;
  return out;
}

struct CCoefficient {
  std::size_t leader = 0;
  AlgebraicNumber value;
  bool nonzero = false;
};

/// c_j = (u_{i+r} - u_i) + (u_{i+r+1} - u_{i+1}) / beta for each leader i.
inline std::vector<CCoefficient> c_coefficients(const Word& w, std::size_t r, const std::vector<std::size_t>& leaders,
                                                const Base& base) {
  std::vector<CCoefficient> out;
  AlgebraicNumber inv = inverse(base.beta);
  for (std::size_t i : leaders) {
    if (i + r + 1 >= w.size()) fail(ErrorKind::IndexOutOfRange, "leader " + std::to_string(i) + " runs past the word");
    AlgebraicNumber a = w.value(i + r) - w.value(i), b = w.value(i + r + 1) - w.value(i + 1);
    AlgebraicNumber c = a + b * inv;
    bool zero = c.is_rational() && c.rational_value() == 0;
    out.push_back({i, c, !zero});
  }
  return out;
}

struct KeyInequality {
  Ball lhs;  // |beta^r alpha - alpha - alpha_r - sum c_j beta^-i_j|, alpha_r summed over j = 0..r
  Ball rhs;  // |beta|^-s
  std::optional<bool> holds;
  Ball lhs_alt;  // same with alpha_r summed over j = 0..r-1
  std::optional<bool> holds_alt;
  Bits precision_used = 0;
};

namespace detail {

inline std::optional<bool> strictly_less(const Ball& a, const Ball& b) {
  if (a.certainly_less(b)) return true;
  if (mpfr_greaterequal_p(a.lower().get(), b.upper().get())) return false;
  return std::nullopt;
}

}  // namespace detail

/// Compares the form above against |beta|^-s, raising precision until both
/// readings separate or max_prec is reached.
inline KeyInequality check_key_inequality(DigitSequence& seq, const Base& base, std::size_t r, std::size_t s,
                                          const std::vector<std::size_t>& leaders, Bits prec = 256,
                                          Bits max_prec = default_policy().ceiling) {
  const Word& w = seq.prefix(r + s + 2);
  if (w.size() < r + s + 2) fail(ErrorKind::PrefixTooShort, "digits do not cover r + s + 1");
  for (std::size_t i : leaders)
    if (i + r + 1 >= w.size()) fail(ErrorKind::IndexOutOfRange, "leader past the available digits");
  double lb = std::log2(std::max(2.0, base.modulus_lower.get_d() * 2));
  Bits p = std::max<Bits>(prec, static_cast<Bits>(static_cast<double>(r + s) * lb) + 64);
  KeyInequality out;
  while (true) {
    Bits wp = p + 32;
    ComplexBall alpha = sturmian_number(seq, base, wp);
    const Word& u = seq.prefix(r + s + 2);
    auto vals = detail::alphabet_balls(u, wp);
    ComplexBall b = base.beta.refine_complex(wp);
    ComplexBall z = ComplexBall(Rational(1), wp) / b;
    // h = sum_{j<r} u_j beta^{r-1-j}; alpha_r = h beta + u_r, the variant drops u_r
    ComplexBall h(Rational(0), wp);
    for (std::size_t j = 0; j < r; ++j) h = h * b + vals[u[j]];
    ComplexBall ar = h * b, ar_full = ar + vals[u[r]];
    ComplexBall cs(Rational(0), wp);
    for (std::size_t i : leaders) {
      ComplexBall c = (vals[u[i + r]] - vals[u[i]]) + (vals[u[i + r + 1]] - vals[u[i + 1]]) * z;
      cs = cs + c * pow(z, i);
    }
    ComplexBall core = pow(b, r) * alpha - alpha - cs;
    out.lhs = abs(core - ar_full);
    out.lhs_alt = abs(core - ar);
    out.rhs = pow(abs(z), s);
    out.holds = detail::strictly_less(out.lhs, out.rhs);
    out.holds_alt = detail::strictly_less(out.lhs_alt, out.rhs);
    out.precision_used = p;
    if ((out.holds && out.holds_alt) || p * 2 > max_prec) break;
    p *= 2;
  }
  return out;
}

}  // namespace sturmian
