#pragma once

// Absolute Weil heights and the gap-splitting test for sparse polynomials.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "algebraic.hpp"

namespace sturmian {

class SparsePolynomial {
 public:
  struct Term {
    unsigned long exponent;
    Integer coeff;
  };

  SparsePolynomial() = default;
  /// Terms in any order; equal exponents are merged and zero terms dropped.
  explicit SparsePolynomial(const std::vector<Term>& terms) {
    std::map<unsigned long, Integer> m;
    for (const auto& t : terms) m[t.exponent] += t.coeff;
    for (auto& [e, c] : m)
      if (c != 0) terms_.push_back({e, c});
    if (terms_.empty()) fail(ErrorKind::ValidationError, "sparse polynomial needs a nonzero term");
  }
  static SparsePolynomial from_dense(const IntPoly& p) {
    std::vector<Term> t;
    for (int i = 0; i <= p.degree(); ++i)
      if (p[i] != 0) t.push_back({static_cast<unsigned long>(i), p[i]});
    return SparsePolynomial(t);
  }

  const std::vector<Term>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  unsigned long degree() const { return terms_.back().exponent; }

  /// Terms with exponent <= e (low) or >= e (high).
  SparsePolynomial low_part(unsigned long e) const {
    std::vector<Term> t;
    for (const auto& x : terms_)
      if (x.exponent <= e) t.push_back(x);
    return from_terms(std::move(t));
  }
  SparsePolynomial high_part(unsigned long e) const {
    std::vector<Term> t;
    for (const auto& x : terms_)
      if (x.exponent >= e) t.push_back(x);
    return from_terms(std::move(t));
  }

  std::string to_string() const {
    std::string s = "poly:";
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(terms_[i].exponent) + ":" + terms_[i].coeff.get_str();
    }
    return s;
  }

 private:
  static SparsePolynomial from_terms(std::vector<Term> t) {
    SparsePolynomial p;
    p.terms_ = std::move(t);
    return p;
  }
  std::vector<Term> terms_;
};

/// Parses "poly:e1:c1,e2:c2,...".
inline SparsePolynomial parse_sparse(const std::string& text) {
  std::string s = text.rfind("poly:", 0) == 0 ? text.substr(5) : text;
  std::vector<SparsePolynomial::Term> terms;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t comma = s.find(',', pos);
    std::string item = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    auto colon = item.find(':');
    if (colon == std::string::npos) fail(ErrorKind::ParseError, "bad sparse term '" + item + "'");
    try {
      unsigned long e = std::stoul(item.substr(0, colon));
      Integer c(item.substr(colon + 1), 10);
      terms.push_back({e, c});
    } catch (const std::invalid_argument&) {
      fail(ErrorKind::ParseError, "bad sparse term '" + item + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return SparsePolynomial(terms);
}

/// Projective height of an integer vector: max |v_i| / gcd.
inline Integer height_int_vector(const std::vector<Integer>& v) {
  Integer g = 0;
  for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  if (g == 0) fail(ErrorKind::ZeroVector, "height of the zero vector");
  Integer m = 0;
  for (const auto& x : v)
    if (abs(x) > m) m = abs(x);
  return m / g;
}

inline Integer poly_height(const SparsePolynomial& f) {
  if (f.degree() == 0) fail(ErrorKind::ConstantPolynomial, "height of a constant polynomial");
  std::vector<Integer> v;
  for (const auto& t : f.terms()) v.push_back(t.coeff);
  if (v.size() == 1) v.push_back(0);  // a monomial has coefficient vector (c, 0, ...)
  return height_int_vector(v);
}

/// Mahler measure |lc| * prod max(1, |root|) of an integer polynomial.
inline Ball mahler_measure(const IntPoly& p, Bits prec) {
  Ball m(Integer(abs(p.leading())), prec);
  if (p.degree() < 1) return m;
  for (const auto& r : certified_roots(squarefree_part(p), prec)) m *= max_one_abs(abs(r.value));
  return m;
}

/// Absolute Weil height: Mahler measure of the minimal polynomial to the power 1/d.
inline Ball weil_height_alg(const AlgebraicNumber& x, Bits prec = 256) {
  if (x.is_rational()) {
    Rational q = x.rational_value();
    return Ball(Integer(std::max(Integer(abs(q.get_num())), Integer(q.get_den()))), prec);
  }
  Ball m = mahler_measure(x.minpoly(), prec + 16);
  return root(m, static_cast<unsigned long>(x.degree())).with_prec(prec);
}

/// n with minpoly == Phi_n, if any.
inline std::optional<unsigned long> cyclotomic_index(const IntPoly& p) {
  unsigned long d = static_cast<unsigned long>(p.degree());
  if (d == 0 || p.leading() != 1 || abs(p[0]) != 1) return std::nullopt;
  // phi(n) >= sqrt(n / 2), so n <= 2 d^2 suffices.
  for (unsigned long n = 1; n <= 2 * d * d + 2; ++n)
    if (cyclotomic(n) == p) return n;
  return std::nullopt;
}

/// Remainder of f modulo the (irreducible) polynomial m, via X^e mod m.
inline RatPoly sparse_mod(const SparsePolynomial& f, const IntPoly& m) {
  RatPoly mm = monic(to_rat(m));
  auto reduce = [&](const RatPoly& a) { return divmod(a, mm).second; };
  RatPoly acc;
  RatPoly x = reduce(RatPoly::monomial(Rational(1), 1));
  RatPoly xp = reduce(RatPoly{Rational(1)});
  unsigned long cur = 0;
  for (const auto& t : f.terms()) {
    // advance xp from X^cur to X^t.exponent
    unsigned long k = t.exponent - cur;
    RatPoly base = x, step = RatPoly{Rational(1)};
    while (k) {
      if (k & 1) step = reduce(step * base);
      base = reduce(base * base);
      k >>= 1;
    }
    xp = reduce(xp * step);
    cur = t.exponent;
    acc = acc + scale(xp, Rational(t.coeff));
  }
  return reduce(acc);
}

inline bool is_root_of(const AlgebraicNumber& beta, const SparsePolynomial& f) {
  return sparse_mod(f, beta.minpoly()).is_zero();
}

struct GapCondition {
  bool holds = false;
  unsigned long gap = 0;
  unsigned long k = 0;  // term count minus one
  Integer height_f;
  Ball height_beta;
  std::optional<Ball> threshold;  // log(k H(f)) / log H(beta); none when k = 0
  std::string convention = "absolute Weil height (degree-normalized Mahler measure), natural logarithm";
};

/// d1 - d0 > log(k H(f)) / log H(beta), decided only from enclosures that
/// exclude equality (exactly when beta is rational).
inline GapCondition gap_condition(const SparsePolynomial& f, unsigned long d0, unsigned long d1,
                                  const AlgebraicNumber& beta, Bits prec = 256) {
  if (d1 <= d0) fail(ErrorKind::BadSplit, "need d0 < d1");
  if (cyclotomic_index(beta.minpoly())) fail(ErrorKind::RootOfUnity, "beta is a root of unity");
  if (beta.is_rational() && beta.rational_value() == 0) fail(ErrorKind::HeightOne, "H(0) = 1");

  GapCondition rep;
  rep.gap = d1 - d0;
  rep.k = f.size() - 1;
  rep.height_f = poly_height(f);
  rep.height_beta = weil_height_alg(beta, prec);
  if (rep.k == 0) {
    rep.holds = true;  // log 0 = -infinity
    return rep;
  }
  Integer kh = Integer(static_cast<long>(rep.k)) * rep.height_f;
  if (beta.is_rational()) {
    Integer hb = floor_q(rep.height_beta.mid().to_rational());
    if (hb == 1) fail(ErrorKind::HeightOne, "H(beta) = 1");
    rep.threshold = log(Ball(kh, prec)) / log(Ball(hb, prec));
    // H(beta)^gap > k H(f), in integers
    Integer lhs = 1;
    for (unsigned long i = 0; i < rep.gap && lhs <= kh; ++i) lhs *= hb;
    rep.holds = lhs > kh;
    return rep;
  }
  for (Bits p = prec;; p *= 2) {
    Ball hb = weil_height_alg(beta, p);
    Ball lb = log(hb);
    if (lb.contains_zero()) {
      if (p >= 8 * prec) fail(ErrorKind::HeightOne, "H(beta) not separated from 1");
      continue;
    }
    Ball thr = log(Ball(kh, p)) / lb;
    rep.threshold = thr;
    rep.height_beta = hb.with_prec(prec);
    Ball g(static_cast<long>(rep.gap), p);
    if (g.certainly_greater(thr)) {
      rep.holds = true;
      return rep;
    }
    if (g.certainly_less(thr)) return rep;
    if (p >= 16 * prec) fail(ErrorKind::Indeterminate, "gap equals the threshold within certified precision");
  }
}

struct GapSplitReport {
  bool gap_condition_holds = false;
  bool beta_is_root_of_f = false;
  bool beta_common_root_of_parts = false;
  GapCondition condition;
};

inline GapSplitReport gap_split_check(const SparsePolynomial& f, unsigned long d0, unsigned long d1,
                                      const AlgebraicNumber& beta, Bits prec = 256) {
  if (d1 <= d0) fail(ErrorKind::BadSplit, "need d0 < d1");
  for (const auto& t : f.terms())
    if (t.exponent > d0 && t.exponent < d1)
      fail(ErrorKind::BadSplit, "term of degree " + std::to_string(t.exponent) + " in the gap");
  GapSplitReport rep;
  rep.condition = gap_condition(f, d0, d1, beta, prec);
  rep.gap_condition_holds = rep.condition.holds;
  rep.beta_is_root_of_f = is_root_of(beta, f);
  rep.beta_common_root_of_parts = is_root_of(beta, f.low_part(d0)) && is_root_of(beta, f.high_part(d1));
  return rep;
}

}  // namespace sturmian
