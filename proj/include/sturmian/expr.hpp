#pragma once

// Field arithmetic on algebraic numbers and exact sign determination for
// expression trees over them.

#include <memory>
#include <optional>
#include <utility>

#include "algebraic.hpp"

namespace sturmian {

/// Strips X^k from p; the result has a nonzero constant term.
inline IntPoly strip_zero_roots(const IntPoly& p) {
  const auto& c = p.coeffs();
  std::size_t k = 0;
  while (k < c.size() && c[k] == 0) ++k;
  if (k == c.size()) fail(ErrorKind::ValidationError, "zero polynomial");
  return IntPoly(std::vector<Integer>(c.begin() + static_cast<long>(k), c.end()));
}

/// Lower bound on |z| over nonzero roots z of p.
inline Rational nonzero_root_lower_bound(const IntPoly& p) {
  IntPoly q = strip_zero_roots(p);
  Integer q0 = abs(q[0]);
  Integer mx = 0;
  for (int i = 1; i <= q.degree(); ++i)
    if (abs(q[i]) > mx) mx = abs(q[i]);
  return Rational(q0, q0 + mx);
}

// ---- arithmetic on AlgebraicNumber ----------------------------------------

inline AlgebraicNumber operator-(const AlgebraicNumber& a) {
  if (a.is_rational()) return AlgebraicNumber::from_rational(-a.rational_value());
  return AlgebraicNumber::from_annihilator(reflect(a.minpoly()), [&](Bits b) {
    ComplexBall z = a.refine_complex(b);
    return ComplexBall(-z.re(), -z.im());
  });
}

inline AlgebraicNumber operator+(const AlgebraicNumber& a, const AlgebraicNumber& b) {
  if (a.is_rational() && b.is_rational()) return AlgebraicNumber::from_rational(a.rational_value() + b.rational_value());
  IntPoly ann;
  if (b.is_rational()) ann = taylor_shift(a.minpoly(), -b.rational_value());
  else if (a.is_rational()) ann = taylor_shift(b.minpoly(), -a.rational_value());
  else {
    if (a.degree() * b.degree() > DEGREE_CAP) fail(ErrorKind::DegreeCapExceeded, "sum degree above cap");
    ann = sum_annihilator(a.minpoly(), b.minpoly());
  }
  return AlgebraicNumber::from_annihilator(ann, [&](Bits p) { return a.refine_complex(p) + b.refine_complex(p); });
}

inline AlgebraicNumber operator*(const AlgebraicNumber& a, const AlgebraicNumber& b) {
  if (a.is_rational() && b.is_rational()) return AlgebraicNumber::from_rational(a.rational_value() * b.rational_value());
  if ((a.is_rational() && a.rational_value() == 0) || (b.is_rational() && b.rational_value() == 0))
    return AlgebraicNumber::from_rational(Rational(0));
  IntPoly ann;
  if (b.is_rational()) ann = scale_root(a.minpoly(), b.rational_value());
  else if (a.is_rational()) ann = scale_root(b.minpoly(), a.rational_value());
  else {
    if (a.degree() * b.degree() > DEGREE_CAP) fail(ErrorKind::DegreeCapExceeded, "product degree above cap");
    ann = product_annihilator(a.minpoly(), b.minpoly());
  }
  return AlgebraicNumber::from_annihilator(ann, [&](Bits p) { return a.refine_complex(p) * b.refine_complex(p); });
}

inline AlgebraicNumber inverse(const AlgebraicNumber& a) {
  if (a.is_rational()) {
    if (a.rational_value() == 0) fail(ErrorKind::DivisionByZero, "inverse of zero");
    return AlgebraicNumber::from_rational(1 / a.rational_value());
  }
  ComplexBall one(Rational(1), 64);
  return AlgebraicNumber::from_annihilator(reverse(a.minpoly()), [&](Bits p) {
    return ComplexBall(Rational(1), p) / a.refine_complex(p);
  });
}

inline AlgebraicNumber operator-(const AlgebraicNumber& a, const AlgebraicNumber& b) { return a + (-b); }
inline AlgebraicNumber operator/(const AlgebraicNumber& a, const AlgebraicNumber& b) { return a * inverse(b); }

inline AlgebraicNumber pow(const AlgebraicNumber& a, long n) {
  if (n < 0) return inverse(pow(a, -n));
  if (n == 0) return AlgebraicNumber::from_integer(1);
  if (a.is_rational()) {
    Rational q = a.rational_value();
    Rational r(pow_ui_int(q.get_num(), static_cast<unsigned long>(n)), pow_ui_int(q.get_den(), static_cast<unsigned long>(n)));
    return AlgebraicNumber::from_rational(r);
  }
  if (a.degree() > DEGREE_CAP) fail(ErrorKind::DegreeCapExceeded, "power degree above cap");
  return AlgebraicNumber::from_annihilator(power_annihilator(a.minpoly(), static_cast<unsigned long>(n)), [&](Bits p) {
    return pow(a.refine_complex(p), static_cast<unsigned long>(n));
  });
}

// ---- expression trees -------------------------------------------------------

enum class ExprOp { Leaf, Add, Sub, Mul, Div, Pow, Neg, Floor };

class Expr;
struct SignReport {
  int sign = 0;
  Bits precision_used = 0;
  bool zero_certified = false;  // sign 0 established by the root-bound test
  bool degraded = false;        // annihilator degree exceeded the cap
};
SignReport sign_report(const Expr& e, const PrecisionPolicy& pol = default_policy());
Integer floor_exact(const Expr& e, const PrecisionPolicy& pol = default_policy());

class Expr {
 public:
  Expr(const AlgebraicNumber& a) : node_(std::make_shared<Node>(ExprOp::Leaf, a)) {}
  Expr(const Rational& q) : Expr(AlgebraicNumber::from_rational(q)) {}
  Expr(const Integer& z) : Expr(Rational(z)) {}
  Expr(long v) : Expr(Rational(v)) {}
  Expr(int v) : Expr(Rational(v)) {}

  ExprOp op() const noexcept { return node_->op; }

  friend Expr operator+(const Expr& a, const Expr& b) { return Expr(ExprOp::Add, a, b); }
  friend Expr operator-(const Expr& a, const Expr& b) { return Expr(ExprOp::Sub, a, b); }
  friend Expr operator*(const Expr& a, const Expr& b) { return Expr(ExprOp::Mul, a, b); }
  friend Expr operator/(const Expr& a, const Expr& b) { return Expr(ExprOp::Div, a, b); }
  friend Expr operator-(const Expr& a) { return Expr(ExprOp::Neg, a, a); }
  friend Expr pow(const Expr& a, long n) {
    Expr e(ExprOp::Pow, a, a);
    std::const_pointer_cast<Node>(e.node_)->exponent = n;
    return e;
  }
  friend Expr floor(const Expr& a) { return Expr(ExprOp::Floor, a, a); }

  /// Rigorous enclosure at the given precision.  Throws Indeterminate when a
  /// divisor or floor argument cannot be resolved at this precision.
  ComplexBall enclose(Bits prec) const {
    const Node& n = *node_;
    switch (n.op) {
      case ExprOp::Leaf:
        return n.leaf.refine_complex(prec);
      case ExprOp::Add:
        return n.a->enclose(prec) + n.b->enclose(prec);
      case ExprOp::Sub:
        return n.a->enclose(prec) - n.b->enclose(prec);
      case ExprOp::Mul:
        return n.a->enclose(prec) * n.b->enclose(prec);
      case ExprOp::Neg: {
        ComplexBall z = n.a->enclose(prec);
        return ComplexBall(-z.re(), -z.im());
      }
      case ExprOp::Div: {
        ComplexBall d = n.b->enclose(prec);
        if (d.contains_zero()) {
          if (sign_report(*n.b).sign == 0 && n.b->is_real()) fail(ErrorKind::DivisionByZero, "division by zero");
          fail(ErrorKind::Indeterminate, "divisor not separated from zero");
        }
        return n.a->enclose(prec) / d;
      }
      case ExprOp::Pow: {
        ComplexBall z = n.a->enclose(prec);
        if (n.exponent >= 0) return pow(z, static_cast<unsigned long>(n.exponent));
        if (z.contains_zero()) fail(ErrorKind::Indeterminate, "base not separated from zero");
        return ComplexBall(Rational(1), prec) / pow(z, static_cast<unsigned long>(-n.exponent));
      }
      case ExprOp::Floor:
        return ComplexBall(Rational(floor_value()), prec);
    }
    fail(ErrorKind::ValidationError, "bad expression node");
  }

  /// Nonzero integer polynomial vanishing at the value, or nullopt when the
  /// degree would exceed `cap`.
  std::optional<IntPoly> annihilator(int cap = DEGREE_CAP) const {
    const Node& n = *node_;
    auto deg_ok = [cap](const IntPoly& p) { return p.degree() <= cap; };
    switch (n.op) {
      case ExprOp::Leaf:
        return n.leaf.minpoly();
      case ExprOp::Floor:
        return IntPoly{Integer(-floor_value()), Integer(1)};
      case ExprOp::Neg: {
        auto p = n.a->annihilator(cap);
        if (!p) return std::nullopt;
        return reflect(*p);
      }
      case ExprOp::Pow: {
        auto p = n.a->annihilator(cap);
        if (!p) return std::nullopt;
        if (n.exponent == 0) return IntPoly{Integer(-1), Integer(1)};
        long e = n.exponent < 0 ? -n.exponent : n.exponent;
        IntPoly base = n.exponent < 0 ? reverse(strip_zero_roots(*p)) : *p;
        if (base.degree() == 0) return std::nullopt;
        IntPoly r = power_annihilator(base, static_cast<unsigned long>(e));
        return deg_ok(r) ? std::optional<IntPoly>(r) : std::nullopt;
      }
      default:
        break;
    }
    auto pa = n.a->annihilator(cap);
    auto pb = n.b->annihilator(cap);
    if (!pa || !pb) return std::nullopt;
    if (pa->degree() * pb->degree() > cap) return std::nullopt;
    switch (n.op) {
      case ExprOp::Add:
        return sum_annihilator(*pa, *pb);
      case ExprOp::Sub:
        return sum_annihilator(*pa, reflect(*pb));
      case ExprOp::Mul:
        return product_annihilator(*pa, *pb);
      case ExprOp::Div: {
        IntPoly q = strip_zero_roots(*pb);
        if (q.degree() == 0) fail(ErrorKind::DivisionByZero, "division by zero");
        return product_annihilator(*pa, reverse(q));
      }
      default:
        break;
    }
    return std::nullopt;
  }

  /// True when every leaf is real (the value is then real).
  bool is_real() const {
    const Node& n = *node_;
    if (n.op == ExprOp::Leaf) return n.leaf.is_real();
    if (n.op == ExprOp::Floor) return true;
    return n.a->is_real() && n.b->is_real();
  }

 private:
  struct Node {
    Node(ExprOp o, AlgebraicNumber l) : op(o), leaf(std::move(l)) {}
    Node(ExprOp o, std::shared_ptr<const Expr> x, std::shared_ptr<const Expr> y)
        : op(o), a(std::move(x)), b(std::move(y)) {}
    ExprOp op;
    AlgebraicNumber leaf;
    std::shared_ptr<const Expr> a, b;
    long exponent = 1;
    mutable std::once_flag floor_once;
    mutable Integer floor_cache;
  };

  Expr(ExprOp op, const Expr& a, const Expr& b)
      : node_(std::make_shared<Node>(op, std::make_shared<const Expr>(a), std::make_shared<const Expr>(b))) {}

  Integer floor_value() const {
    const Node& n = *node_;
    std::call_once(n.floor_once, [&] { n.floor_cache = floor_exact(*n.a); });
    return n.floor_cache;
  }

  std::shared_ptr<const Node> node_;
};

/// Exact sign of a real expression together with how it was decided.
inline SignReport sign_report(const Expr& e, const PrecisionPolicy& pol) {
  if (!e.is_real()) fail(ErrorKind::ValidationError, "sign of a non-real expression");
  SignReport rep;
  std::optional<std::optional<IntPoly>> ann;
  std::optional<Rational> bound;
  for (Bits prec = pol.start; prec <= pol.ceiling; prec *= 2) {
    rep.precision_used = prec;
    std::optional<ComplexBall> z;
    try {
      z = e.enclose(prec);
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::Indeterminate) throw;
      continue;
    }
    const Ball& x = z->re();
    if (auto s = x.sign(); s && *s != 0) {
      rep.sign = *s;
      return rep;
    }
    if (x.is_exact() && x.mid().is_zero()) {
      rep.sign = 0;
      return rep;
    }
    if (!ann) ann = e.annihilator();
    if (!*ann) {
      rep.degraded = true;
      continue;
    }
    IntPoly q = strip_zero_roots(**ann);
    if (q.degree() == 0 && **ann != q) {
      rep.sign = 0;
      rep.zero_certified = true;
      return rep;
    }
    if ((**ann)[0] != 0) continue;  // 0 is not a root, so the value is nonzero: refine
    if (!bound) bound = nonzero_root_lower_bound(**ann);
    Mpfr m = x.mag();
    if (m.to_rational() < *bound) {
      rep.sign = 0;
      rep.zero_certified = true;
      return rep;
    }
  }
  if (rep.degraded) fail(ErrorKind::DegreeCapExceeded, "sign undecided and annihilator degree above cap");
  fail(ErrorKind::PrecisionExhausted, "sign undecided at the precision ceiling");
}

inline int sign_exact(const Expr& e, const PrecisionPolicy& pol = default_policy()) { return sign_report(e, pol).sign; }
inline bool is_zero_exact(const Expr& e, const PrecisionPolicy& pol = default_policy()) { return sign_exact(e, pol) == 0; }
/// Exact comparison of real expressions.
inline int compare_exact(const Expr& a, const Expr& b, const PrecisionPolicy& pol = default_policy()) {
  return sign_exact(a - b, pol);
}

inline Integer floor_exact(const Expr& e, const PrecisionPolicy& pol) {
  for (Bits prec = pol.start; prec <= pol.ceiling; prec *= 2) {
    std::optional<ComplexBall> z;
    try {
      z = e.enclose(prec);
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::Indeterminate) throw;
      continue;
    }
    Integer lo = floor_q(z->re().lower().to_rational());
    Integer hi = floor_q(z->re().upper().to_rational());
    if (lo == hi) return lo;
    // Straddles the integer hi: decide e >= hi exactly.
    if (hi - lo == 1) {
      int s = sign_exact(e - Expr(hi), pol);
      return s >= 0 ? hi : lo;
    }
  }
  fail(ErrorKind::PrecisionExhausted, "floor undecided at the precision ceiling");
}

}  // namespace sturmian
