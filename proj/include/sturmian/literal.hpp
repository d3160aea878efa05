#pragma once

// Text form of algebraic numbers.
//   alg:c0,c1,...,cd@[lo,hi]              real root in [lo, hi]
//   alg:c0,...,cd@[lo,hi]x[ilo,ihi]       complex root in the box
//   rat:p/q                               rational
//   quad:(a+b*sqrt(D))/c                  quadratic irrational
// Bare rationals and decimals ("3/4", "-0.25") are accepted as rat:.

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "algebraic.hpp"

namespace sturmian {

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] inline void bad_literal(std::string_view s, const std::string& why) {
  fail(ErrorKind::ParseError, "bad literal '" + std::string(s) + "': " + why);
}

inline Integer parse_integer(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  std::size_t i = (!s.empty() && s.front() == '-') ? 1 : 0;
  if (i == s.size()) bad_literal(s, "empty integer");
  for (std::size_t j = i; j < s.size(); ++j)
    if (!std::isdigit(static_cast<unsigned char>(s[j]))) bad_literal(s, "not an integer");
  return Integer(std::string(s), 10);
}

/// p, p/q or a finite decimal with optional exponent.
inline Rational parse_rational(std::string_view s) {
  s = trim(s);
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    Integer d = parse_integer(s.substr(slash + 1));
    if (d == 0) fail(ErrorKind::DivisionByZero, "zero denominator in '" + std::string(s) + "'");
    Rational q(parse_integer(s.substr(0, slash)), d);
    q.canonicalize();
    return q;
  }
  long exp10 = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    try {
      exp10 = std::stol(std::string(s.substr(e + 1)));
    } catch (...) {
      bad_literal(s, "bad exponent");
    }
    s = s.substr(0, e);
  }
  std::string digits(s);
  if (auto dot = digits.find('.'); dot != std::string::npos) {
    exp10 -= static_cast<long>(digits.size() - dot - 1);
    digits.erase(dot, 1);
  }
  Integer num = parse_integer(digits);
  Integer scale = pow_ui_int(Integer(10), static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
  Rational q = exp10 < 0 ? Rational(num, scale) : Rational(num * scale);
  q.canonicalize();
  return q;
}

inline std::pair<Rational, Rational> parse_interval(std::string_view s) {
  s = trim(s);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') bad_literal(s, "expected [lo,hi]");
  s = s.substr(1, s.size() - 2);
  auto comma = s.find(',');
  if (comma == std::string_view::npos) bad_literal(s, "expected lo,hi");
  return {parse_rational(s.substr(0, comma)), parse_rational(s.substr(comma + 1))};
}

inline std::string rational_text(const Rational& q) { return q.get_str(10); }

/// floor(sqrt(n * 4^k)) as bounds on sqrt(n) with denominator 2^k.
inline std::pair<Rational, Rational> sqrt_bounds(const Integer& n, unsigned k) {
  Integer scaled = n << (2 * k);
  Integer r;
  mpz_sqrt(r.get_mpz_t(), scaled.get_mpz_t());
  Integer den = Integer(1) << k;
  return {Rational(r, den), Rational(r + 1, den)};
}

inline AlgebraicNumber parse_quad(std::string_view full, std::string_view s) {
  // (a+b*sqrt(D))/c
  std::string t;
  for (char ch : s)
    if (!std::isspace(static_cast<unsigned char>(ch))) t.push_back(ch);
  Integer c = 1;
  if (auto close = t.rfind(')'); close != std::string::npos && close + 1 < t.size()) {
    if (t[close + 1] != '/') bad_literal(full, "expected /c");
    c = parse_integer(t.substr(close + 2));
    t = t.substr(0, close + 1);
  }
  if (t.size() < 2 || t.front() != '(' || t.back() != ')') bad_literal(full, "expected (a+b*sqrt(D))/c");
  t = t.substr(1, t.size() - 2);
  auto sq = t.find("sqrt(");
  if (sq == std::string::npos || t.back() != ')') bad_literal(full, "missing sqrt(D)");
  Integer D = parse_integer(t.substr(sq + 5, t.size() - sq - 6));
  std::string head = t.substr(0, sq);
  if (!head.empty() && head.back() == '*') head.pop_back();
  // head is "a+b", "a-b", "a+", "a-", "b" or "".
  std::size_t split = std::string::npos;
  for (std::size_t i = head.size(); i-- > 1;)
    if (head[i] == '+' || head[i] == '-') {
      split = i;
      break;
    }
  Integer a = 0, b = 1;
  std::string bs = head;
  if (split != std::string::npos) {
    a = parse_integer(head.substr(0, split));
    bs = head.substr(split);
  }
  if (bs.empty() || bs == "+") b = 1;
  else if (bs == "-") b = -1;
  else b = parse_integer(bs);
  if (c == 0) fail(ErrorKind::DivisionByZero, "zero denominator in quad literal");
  if (c < 0) {
    a = -a;
    b = -b;
    c = -c;
  }
  if (b == 0 || D == 0) return AlgebraicNumber::from_rational(Rational(a, c));
  Integer absD = abs(D);
  Integer r;
  mpz_sqrt(r.get_mpz_t(), absD.get_mpz_t());
  if (r * r == absD) {
    if (D > 0) return AlgebraicNumber::from_rational(Rational(Integer(a + b * r), c));
  }
  // (c x - a)^2 = b^2 D
  IntPoly p{Integer(a * a - b * b * D), Integer(-2 * a * c), Integer(c * c)};
  auto [slo, shi] = sqrt_bounds(absD, 64);
  Rational lo = Rational(a) + Rational(b) * (b > 0 ? slo : shi);
  Rational hi = Rational(a) + Rational(b) * (b > 0 ? shi : slo);
  if (D > 0) return AlgebraicNumber::real_root(p, Rational(lo / c), Rational(hi / c));
  Rational re(a, c), half(abs(b), 2 * c);
  // The conjugate root lies in the opposite half plane.
  Rational m = Rational(abs(b)) * slo / c;
  RationalBox box{re - half, re + half, m / 2, m * 2};
  if (b < 0) box = RationalBox{re - half, re + half, -m * 2, -m / 2};
  return AlgebraicNumber::complex_root(p, box);
}

}  // namespace detail

inline AlgebraicNumber parse_algebraic(std::string_view text) {
  std::string_view s = detail::trim(text);
  if (s.rfind("rat:", 0) == 0) return AlgebraicNumber::from_rational(detail::parse_rational(s.substr(4)));
  if (s.rfind("quad:", 0) == 0) return detail::parse_quad(text, s.substr(5));
  if (s.rfind("alg:", 0) == 0) {
    s.remove_prefix(4);
    auto at = s.find('@');
    if (at == std::string_view::npos) detail::bad_literal(text, "missing @[lo,hi]");
    std::vector<Integer> c;
    std::string_view cs = s.substr(0, at);
    while (true) {
      auto comma = cs.find(',');
      c.push_back(detail::parse_integer(cs.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      cs.remove_prefix(comma + 1);
    }
    IntPoly p(std::move(c));
    std::string_view boxes = s.substr(at + 1);
    auto x = boxes.find("]x[");
    auto [lo, hi] = detail::parse_interval(boxes.substr(0, x == std::string_view::npos ? boxes.size() : x + 1));
    if (x == std::string_view::npos) return AlgebraicNumber::real_root(p, lo, hi);
    auto [ilo, ihi] = detail::parse_interval(boxes.substr(x + 2));
    return AlgebraicNumber::complex_root(p, RationalBox{lo, hi, ilo, ihi});
  }
  if (!s.empty() && (std::isdigit(static_cast<unsigned char>(s.front())) || s.front() == '-' || s.front() == '+' ||
                     s.front() == '.'))
    return AlgebraicNumber::from_rational(detail::parse_rational(s));
  detail::bad_literal(text, "unknown prefix");
}

inline std::string print_algebraic(const AlgebraicNumber& a) {
  if (a.is_rational()) return "rat:" + detail::rational_text(a.rational_value());
  std::string s = "alg:";
  const auto& c = a.minpoly().coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) s += ',';
    s += c[i].get_str();
  }
  const auto& b = a.isolator();
  s += "@[" + detail::rational_text(b.re_lo) + "," + detail::rational_text(b.re_hi) + "]";
  if (!b.is_real()) s += "x[" + detail::rational_text(b.im_lo) + "," + detail::rational_text(b.im_hi) + "]";
  return s;
}

}  // namespace sturmian
