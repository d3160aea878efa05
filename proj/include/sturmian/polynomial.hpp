#pragma once

// Dense univariate polynomials over the integers and rationals, with the exact
// machinery needed by algebraic numbers: gcd, square-free part, Sturm counts,
// resultants and the annihilators of sums and products of roots.

#include <algorithm>
#include <cstddef>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ball.hpp"
#include "error.hpp"
#include "mpfr.hpp"

namespace sturmian {

template <class T>
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<T> coeffs) : c_(std::move(coeffs)) { normalize(); }
  Polynomial(std::initializer_list<T> coeffs) : c_(coeffs) { normalize(); }

  static Polynomial monomial(T coeff, std::size_t exponent) {
    std::vector<T> c(exponent + 1, T(0));
    c[exponent] = std::move(coeff);
    return Polynomial(std::move(c));
  }

  /// -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const noexcept { return c_.empty(); }
  const std::vector<T>& coeffs() const noexcept { return c_; }
  const T& leading() const { return c_.back(); }
  T coeff(std::size_t i) const { return i < c_.size() ? c_[i] : T(0); }
  const T& operator[](std::size_t i) const { return c_[i]; }

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

 private:
  void normalize() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<T> c_;
};

using IntPoly = Polynomial<Integer>;
using RatPoly = Polynomial<Rational>;

template <class T>
Polynomial<T> operator+(const Polynomial<T>& a, const Polynomial<T>& b) {
  std::vector<T> c(std::max(a.coeffs().size(), b.coeffs().size()), T(0));
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) c[i] += a[i];
  for (std::size_t i = 0; i < b.coeffs().size(); ++i) c[i] += b[i];
  return Polynomial<T>(std::move(c));
}

template <class T>
Polynomial<T> operator-(const Polynomial<T>& a) {
  std::vector<T> c = a.coeffs();
  for (auto& x : c) x = -x;
  return Polynomial<T>(std::move(c));
}

template <class T>
Polynomial<T> operator-(const Polynomial<T>& a, const Polynomial<T>& b) {
  return a + (-b);
}

template <class T>
Polynomial<T> operator*(const Polynomial<T>& a, const Polynomial<T>& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<T> c(a.coeffs().size() + b.coeffs().size() - 1, T(0));
  for (std::size_t i = 0; i < a.coeffs().size(); ++i)
    for (std::size_t j = 0; j < b.coeffs().size(); ++j) c[i + j] += a[i] * b[j];
  return Polynomial<T>(std::move(c));
}

template <class T>
Polynomial<T> scale(const Polynomial<T>& a, const T& s) {
  std::vector<T> c = a.coeffs();
  for (auto& x : c) x *= s;
  return Polynomial<T>(std::move(c));
}

template <class T>
Polynomial<T> derivative(const Polynomial<T>& a) {
  if (a.degree() <= 0) return {};
  std::vector<T> c(a.coeffs().size() - 1);
  for (std::size_t i = 1; i < a.coeffs().size(); ++i) c[i - 1] = a[i] * T(static_cast<long>(i));
  return Polynomial<T>(std::move(c));
}

/// Horner evaluation in any ring S that is constructible from T through conv.
template <class T, class S, class Conv>
S horner(const Polynomial<T>& p, const S& x, Conv conv) {
  if (p.is_zero()) return conv(T(0));
  S acc = conv(p.leading());
  for (int i = p.degree() - 1; i >= 0; --i) acc = acc * x + conv(p[static_cast<std::size_t>(i)]);
  return acc;
}

inline Rational eval(const IntPoly& p, const Rational& x) {
  return horner(p, x, [](const Integer& z) { return Rational(z); });
}
inline Rational eval(const RatPoly& p, const Rational& x) {
  return horner(p, x, [](const Rational& z) { return z; });
}
inline Ball eval(const IntPoly& p, const Ball& x) {
  Bits prec = x.prec();
  return horner(p, x, [prec](const Integer& z) { return Ball(z, prec); });
}
inline ComplexBall eval(const IntPoly& p, const ComplexBall& x) {
  Bits prec = x.prec();
  return horner(p, x, [prec](const Integer& z) { return ComplexBall(Rational(z), prec); });
}

inline RatPoly to_rat(const IntPoly& p) {
  std::vector<Rational> c;
  c.reserve(p.coeffs().size());
  for (const auto& z : p.coeffs()) c.emplace_back(z);
  return RatPoly(std::move(c));
}

inline Integer content(const IntPoly& p) {
  Integer g = 0;
  for (const auto& z : p.coeffs()) {
    Integer a = abs(z);
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), a.get_mpz_t());
  }
  return g;
}

/// Integer polynomial with content 1 and positive leading coefficient.
inline IntPoly primitive_part(const IntPoly& p) {
  if (p.is_zero()) return p;
  Integer g = content(p);
  if (p.leading() < 0) g = -g;
  std::vector<Integer> c = p.coeffs();
  for (auto& z : c) mpz_divexact(z.get_mpz_t(), z.get_mpz_t(), g.get_mpz_t());
  return IntPoly(std::move(c));
}

inline IntPoly primitive_part(const RatPoly& p) {
  if (p.is_zero()) return {};
  Integer l = 1;
  for (const auto& q : p.coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
  std::vector<Integer> c;
  c.reserve(p.coeffs().size());
  for (const auto& q : p.coeffs()) {
    Rational t = q * l;
    c.push_back(t.get_num());
  }
  return primitive_part(IntPoly(std::move(c)));
}

/// Quotient and remainder over Q.
inline std::pair<RatPoly, RatPoly> divmod(const RatPoly& a, const RatPoly& b) {
  if (b.is_zero()) fail(ErrorKind::DivisionByZero, "polynomial division by zero");
  std::vector<Rational> r = a.coeffs();
  int db = b.degree();
  if (a.degree() < db) return {RatPoly{}, a};
  std::vector<Rational> q(static_cast<std::size_t>(a.degree() - db + 1), Rational(0));
  const Rational& lb = b.leading();
  for (int i = a.degree(); i >= db; --i) {
    Rational f = r[static_cast<std::size_t>(i)] / lb;
    if (f == 0) continue;
    q[static_cast<std::size_t>(i - db)] = f;
    for (int j = 0; j <= db; ++j) r[static_cast<std::size_t>(i - db + j)] -= f * b[static_cast<std::size_t>(j)];
  }
  return {RatPoly(std::move(q)), RatPoly(std::move(r))};
}

inline RatPoly monic(const RatPoly& p) {
  if (p.is_zero()) return p;
  Rational l = p.leading();
  std::vector<Rational> c = p.coeffs();
  for (auto& x : c) x /= l;
  return RatPoly(std::move(c));
}

inline RatPoly gcd(RatPoly a, RatPoly b) {
  while (!b.is_zero()) {
    RatPoly r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a);
}

inline IntPoly gcd(const IntPoly& a, const IntPoly& b) { return primitive_part(gcd(to_rat(a), to_rat(b))); }

/// Exact division over Q; nullopt-free: throws if b does not divide a.
inline bool divides(const IntPoly& b, const IntPoly& a) { return divmod(to_rat(a), to_rat(b)).second.is_zero(); }

inline IntPoly exact_quotient(const IntPoly& a, const IntPoly& b) {
  auto [q, r] = divmod(to_rat(a), to_rat(b));
  if (!r.is_zero()) fail(ErrorKind::ValidationError, "polynomial does not divide");
  return primitive_part(q);
}

inline IntPoly squarefree_part(const IntPoly& p) {
  if (p.degree() <= 0) return primitive_part(p);
  IntPoly g = gcd(p, derivative(p));
  if (g.degree() <= 0) return primitive_part(p);
  return exact_quotient(p, g);
}

inline bool is_squarefree(const IntPoly& p) { return p.degree() <= 0 || gcd(p, derivative(p)).degree() == 0; }

/// p(-X), normalized to positive leading coefficient.
inline IntPoly reflect(const IntPoly& p) {
  std::vector<Integer> c = p.coeffs();
  for (std::size_t i = 1; i < c.size(); i += 2) c[i] = -c[i];
  return primitive_part(IntPoly(std::move(c)));
}

/// X^d p(1/X); annihilates 1/alpha when p(alpha) = 0, alpha != 0.
inline IntPoly reverse(const IntPoly& p) {
  std::vector<Integer> c = p.coeffs();
  std::reverse(c.begin(), c.end());
  return primitive_part(IntPoly(std::move(c)));
}

/// Primitive part of p(X + a); annihilates alpha - a.
inline IntPoly taylor_shift(const IntPoly& p, const Rational& a) {
  std::vector<Rational> c(p.coeffs().begin(), p.coeffs().end());
  int n = p.degree();
  for (int i = 0; i < n; ++i)
    for (int j = n - 1; j >= i; --j) c[static_cast<std::size_t>(j)] += a * c[static_cast<std::size_t>(j + 1)];
  return primitive_part(RatPoly(std::move(c)));
}

/// Primitive part of p(X / s); annihilates s * alpha.
inline IntPoly scale_root(const IntPoly& p, const Rational& s) {
  if (s == 0) fail(ErrorKind::DivisionByZero, "scale by zero");
  std::vector<Rational> c(p.coeffs().begin(), p.coeffs().end());
  Rational f = 1;
  for (auto& x : c) {
    x *= f;
    f /= s;
  }
  return primitive_part(RatPoly(std::move(c)));
}

/// Determinant by fraction-free Bareiss elimination.
inline Integer bareiss_det(std::vector<std::vector<Integer>> m) {
  std::size_t n = m.size();
  if (n == 0) return 1;
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t piv = k + 1;
      while (piv < n && m[piv][k] == 0) ++piv;
      if (piv == n) return 0;
      std::swap(m[k], m[piv]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer t = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  return sign > 0 ? m[n - 1][n - 1] : Integer(-m[n - 1][n - 1]);
}

/// Resultant of two integer polynomials via the Sylvester determinant.
inline Integer resultant(const IntPoly& p, const IntPoly& q) {
  int m = p.degree(), n = q.degree();
  if (m < 0 || n < 0) return 0;
  if (m == 0) return pow_ui_int(p[0], static_cast<unsigned long>(n));
  if (n == 0) return pow_ui_int(q[0], static_cast<unsigned long>(m));
  std::size_t size = static_cast<std::size_t>(m + n);
  std::vector<std::vector<Integer>> s(size, std::vector<Integer>(size, Integer(0)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= m; ++j) s[static_cast<std::size_t>(i)][static_cast<std::size_t>(i + j)] = p[static_cast<std::size_t>(m - j)];
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= n; ++j)
      s[static_cast<std::size_t>(n + i)][static_cast<std::size_t>(i + j)] = q[static_cast<std::size_t>(n - j)];
  return bareiss_det(std::move(s));
}

namespace detail {

/// Interpolates the integer polynomial of degree <= values.size()-1 through
/// (k, values[k]) for k = 0, 1, ...
inline IntPoly interpolate_at_naturals(const std::vector<Integer>& values) {
  std::size_t n = values.size();
  std::vector<Rational> dd(values.begin(), values.end());
  for (std::size_t j = 1; j < n; ++j)
    for (std::size_t i = n - 1; i >= j; --i) {
      dd[i] = (dd[i] - dd[i - 1]) / Rational(static_cast<long>(j));
      if (i == j) break;
    }
  // Newton form -> monomial form
  RatPoly acc;
  for (std::size_t k = n; k-- > 0;) {
    acc = acc * RatPoly{Rational(-static_cast<long>(k)), Rational(1)} + RatPoly{dd[k]};
  }
  std::vector<Integer> c;
  for (const auto& q : acc.coeffs()) {
    if (q.get_den() != 1) fail(ErrorKind::ValidationError, "non-integral interpolated resultant");
    c.push_back(q.get_num());
  }
  return IntPoly(std::move(c));
}

inline IntPoly poly_in_y_shifted(const IntPoly& q, const Integer& x) {
  // q(x - y) as a polynomial in y
  IntPoly lin{x, Integer(-1)};
  IntPoly acc;
  for (int j = q.degree(); j >= 0; --j) acc = acc * lin + IntPoly{q[static_cast<std::size_t>(j)]};
  return acc;
}

inline IntPoly poly_in_y_homog(const IntPoly& q, const Integer& x) {
  // y^n q(x / y) = sum_j b_j x^j y^(n-j)
  int n = q.degree();
  std::vector<Integer> c(static_cast<std::size_t>(n + 1), Integer(0));
  Integer xp = 1;
  for (int j = 0; j <= n; ++j) {
    c[static_cast<std::size_t>(n - j)] = q[static_cast<std::size_t>(j)] * xp;
    xp *= x;
  }
  return IntPoly(std::move(c));
}

}  // namespace detail

/// Polynomial vanishing at alpha + beta for all roots alpha of p, beta of q.
inline IntPoly sum_annihilator(const IntPoly& p, const IntPoly& q) {
  std::size_t deg = static_cast<std::size_t>(p.degree() * q.degree());
  std::vector<Integer> vals;
  vals.reserve(deg + 1);
  for (std::size_t k = 0; k <= deg; ++k)
    vals.push_back(resultant(p, detail::poly_in_y_shifted(q, Integer(static_cast<long>(k)))));
  return primitive_part(detail::interpolate_at_naturals(vals));
}

/// Polynomial vanishing at alpha * beta for all roots alpha of p, beta of q.
inline IntPoly product_annihilator(const IntPoly& p, const IntPoly& q) {
  std::size_t deg = static_cast<std::size_t>(p.degree() * q.degree());
  std::vector<Integer> vals;
  vals.reserve(deg + 1);
  for (std::size_t k = 0; k <= deg; ++k)
    vals.push_back(resultant(p, detail::poly_in_y_homog(q, Integer(static_cast<long>(k)))));
  return primitive_part(detail::interpolate_at_naturals(vals));
}

/// Annihilator of alpha^n given an annihilator of alpha (resultant with y^n - x).
inline IntPoly power_annihilator(const IntPoly& p, unsigned long n) {
  if (n == 0) return IntPoly{Integer(-1), Integer(1)};
  if (n == 1) return p;
  std::size_t deg = static_cast<std::size_t>(p.degree());
  std::vector<Integer> vals;
  for (std::size_t k = 0; k <= deg; ++k) {
    IntPoly yn = IntPoly::monomial(Integer(1), n) - IntPoly{Integer(static_cast<long>(k))};
    vals.push_back(resultant(p, yn));
  }
  IntPoly r = detail::interpolate_at_naturals(vals);
  return primitive_part(r);
}

/// Number of distinct real roots of p in the half-open interval (a, b].
inline int sturm_count(const IntPoly& p, const Rational& a, const Rational& b) {
  if (p.degree() <= 0) return 0;
  std::vector<RatPoly> seq;
  RatPoly sq = to_rat(squarefree_part(p));
  seq.push_back(sq);
  seq.push_back(derivative(sq));
  while (seq.back().degree() > 0) {
    RatPoly r = divmod(seq[seq.size() - 2], seq.back()).second;
    if (r.is_zero()) break;
    seq.push_back(-r);
  }
  auto variations = [&](const Rational& x) {
    int v = 0, last = 0;
    for (const auto& s : seq) {
      Rational y = eval(s, x);
      int sg = sgn(y);
      if (sg == 0) continue;
      if (last != 0 && sg != last) ++v;
      last = sg;
    }
    return v;
  };
  return variations(a) - variations(b);
}

/// Number of distinct real roots of p in the closed interval [a, b].
inline int real_roots_in_closed(const IntPoly& p, const Rational& a, const Rational& b) {
  int n = sturm_count(p, a, b);
  if (eval(p, a) == 0) ++n;
  return n;
}

/// Cauchy bound: every root z of p satisfies |z| < bound.
inline Rational cauchy_bound(const IntPoly& p) {
  Rational m = 0;
  Rational lc = abs(p.leading());
  for (int i = 0; i < p.degree(); ++i) {
    Rational t = Rational(abs(p[static_cast<std::size_t>(i)])) / lc;
    if (t > m) m = t;
  }
  return m + 1;
}

inline IntPoly cyclotomic(unsigned long n) {
  // Phi_n = (X^n - 1) / prod_{d | n, d < n} Phi_d
  IntPoly num = IntPoly::monomial(Integer(1), n) - IntPoly{Integer(1)};
  for (unsigned long d = 1; d < n; ++d)
    if (n % d == 0) num = exact_quotient(num, cyclotomic(d));
  return primitive_part(num);
}

inline std::string to_string(const IntPoly& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = p.degree(); i >= 0; --i) {
    const Integer& c = p[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    Integer a = abs(c);
    if (a != 1 || i == 0) os << a.get_str();
    if (i > 0) os << "X";
    if (i > 1) os << "^" << i;
    first = false;
  }
  return os.str();
}

}  // namespace sturmian
