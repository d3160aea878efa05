#pragma once

#include <variant>

#include "expr.hpp"

namespace sturmian {

/// Exact rational, exact real algebraic, or a ball enclosure.
using RealLike = std::variant<Rational, AlgebraicNumber, Ball>;

inline bool is_exact(const RealLike& x) { return !std::holds_alternative<Ball>(x); }

inline Ball to_ball(const RealLike& x, Bits prec) {
  if (auto q = std::get_if<Rational>(&x)) return Ball(*q, prec);
  if (auto a = std::get_if<AlgebraicNumber>(&x)) return a->refine(prec);
  return std::get<Ball>(x);
}

inline Expr to_expr(const RealLike& x) {
  if (auto q = std::get_if<Rational>(&x)) return Expr(*q);
  if (auto a = std::get_if<AlgebraicNumber>(&x)) return Expr(*a);
  fail(ErrorKind::ValidationError, "ball value has no exact expression");
}

inline AlgebraicNumber to_algebraic(const RealLike& x) {
  if (auto q = std::get_if<Rational>(&x)) return AlgebraicNumber::from_rational(*q);
  if (auto a = std::get_if<AlgebraicNumber>(&x)) return *a;
  fail(ErrorKind::ValidationError, "ball value is not exact");
}

/// Sign; balls containing 0 give Indeterminate.
inline int sign(const RealLike& x) {
  if (auto q = std::get_if<Rational>(&x)) return sgn(*q);
  if (auto a = std::get_if<AlgebraicNumber>(&x)) return sign_exact(Expr(*a));
  auto s = std::get<Ball>(x).sign();
  if (!s) fail(ErrorKind::Indeterminate, "ball contains zero");
  return *s;
}

inline Integer floor_exact(const RealLike& x) {
  if (auto q = std::get_if<Rational>(&x)) return floor_q(*q);
  if (auto a = std::get_if<AlgebraicNumber>(&x)) {
    if (!a->is_real()) fail(ErrorKind::ValidationError, "floor of a non-real number");
    auto [lo, hi] = a->refine_interval(64);
    if (floor_q(lo) == floor_q(hi)) return floor_q(lo);
    return floor_exact(Expr(*a));
  }
  const Ball& b = std::get<Ball>(x);
  Integer lo = floor_q(b.lower().to_rational()), hi = floor_q(b.upper().to_rational());
  if (lo != hi) fail(ErrorKind::Indeterminate, "ball straddles an integer");
  return lo;
}

/// x - floor(x), in [0, 1).
inline RealLike frac(const RealLike& x) {
  Integer n = floor_exact(x);
  if (auto q = std::get_if<Rational>(&x)) return Rational(*q - n);
  if (auto a = std::get_if<AlgebraicNumber>(&x)) {
    if (n == 0) return *a;
    return *a - AlgebraicNumber::from_rational(Rational(n));
  }
  const Ball& b = std::get<Ball>(x);
  return b - Ball(n, b.prec());
}

}  // namespace sturmian
