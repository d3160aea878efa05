#pragma once

// Midpoint-radius interval arithmetic over MPFR.
//
// A Ball stores a dyadic midpoint at the working precision and a dyadic radius
// at RAD_BITS bits rounded upward.  Every operation returns a ball containing
// the exact result of the operation applied to any points of its operands.

#include <algorithm>
#include <optional>
#include <string>

#include "error.hpp"
#include "mpfr.hpp"

namespace sturmian {

inline constexpr Bits RAD_BITS = 64;

class Ball {
 public:
  explicit Ball(Bits prec = 128) : mid_(prec), rad_(RAD_BITS) {}

  Ball(const Rational& q, Bits prec) : mid_(prec), rad_(RAD_BITS) {
    int t = mpfr_set_q(mid_.get(), q.get_mpq_t(), MPFR_RNDN);
    if (t != 0) add_ulp();
  }
  Ball(const Integer& z, Bits prec) : Ball(Rational(z), prec) {}
  Ball(long v, Bits prec) : mid_(prec), rad_(RAD_BITS) {
    int t = mpfr_set_si(mid_.get(), v, MPFR_RNDN);
    if (t != 0) add_ulp();
  }

  /// Ball covering the closed interval [lo, hi].
  static Ball from_endpoints(const Mpfr& lo, const Mpfr& hi, Bits prec) {
    Ball b(prec);
    int t = mpfr_add(b.mid_.get(), lo.get(), hi.get(), MPFR_RNDN);
    (void)t;
    mpfr_div_2ui(b.mid_.get(), b.mid_.get(), 1, MPFR_RNDN);
    Mpfr a(RAD_BITS), c(RAD_BITS);
    mpfr_sub(a.get(), b.mid_.get(), lo.get(), MPFR_RNDU);
    mpfr_sub(c.get(), hi.get(), b.mid_.get(), MPFR_RNDU);
    mpfr_max(b.rad_.get(), a.get(), c.get(), MPFR_RNDU);
    if (mpfr_sgn(b.rad_.get()) < 0) mpfr_set_zero(b.rad_.get(), 1);
    return b;
  }
  static Ball from_rational_endpoints(const Rational& lo, const Rational& hi, Bits prec) {
    return from_endpoints(Mpfr::from_rational(lo, prec + 8, MPFR_RNDD), Mpfr::from_rational(hi, prec + 8, MPFR_RNDU),
                          prec);
  }
  static Ball from_mid_rad(const Mpfr& mid, const Mpfr& rad, Bits prec) {
    Ball b(prec);
    int t = mpfr_set(b.mid_.get(), mid.get(), MPFR_RNDN);
    mpfr_set(b.rad_.get(), rad.get(), MPFR_RNDU);
    if (t != 0) b.add_ulp();
    return b;
  }

  const Mpfr& mid() const noexcept { return mid_; }
  const Mpfr& rad() const noexcept { return rad_; }
  Bits prec() const noexcept { return mid_.prec(); }
  bool is_exact() const noexcept { return rad_.is_zero(); }

  Mpfr lower() const {
    Mpfr r(prec() + 2);
    mpfr_sub(r.get(), mid_.get(), rad_.get(), MPFR_RNDD);
    return r;
  }
  Mpfr upper() const {
    Mpfr r(prec() + 2);
    mpfr_add(r.get(), mid_.get(), rad_.get(), MPFR_RNDU);
    return r;
  }
  /// Upper bound for |x| over the ball.
  Mpfr mag() const {
    Mpfr r(RAD_BITS);
    mpfr_abs(r.get(), mid_.get(), MPFR_RNDU);
    mpfr_add(r.get(), r.get(), rad_.get(), MPFR_RNDU);
    return r;
  }
  /// Lower bound for |x| over the ball (0 if the ball contains 0).
  Mpfr mig() const {
    Mpfr r(RAD_BITS);
    mpfr_abs(r.get(), mid_.get(), MPFR_RNDD);
    mpfr_sub(r.get(), r.get(), rad_.get(), MPFR_RNDD);
    if (mpfr_sgn(r.get()) < 0) mpfr_set_zero(r.get(), 1);
    return r;
  }

  bool contains_zero() const { return mpfr_cmpabs(mid_.get(), rad_.get()) <= 0; }

  /// Certified sign, or nullopt when the ball contains 0 but is not exactly 0.
  std::optional<int> sign() const {
    if (mid_.is_zero() && rad_.is_zero()) return 0;
    if (contains_zero()) return std::nullopt;
    return mid_.sign();
  }

  bool contains(const Rational& q) const {
    return lower().to_rational() <= q && q <= upper().to_rational();
  }
  bool contains(const Ball& o) const {
    return mpfr_lessequal_p(lower().get(), o.lower().get()) && mpfr_lessequal_p(o.upper().get(), upper().get());
  }
  bool overlaps(const Ball& o) const {
    return mpfr_lessequal_p(lower().get(), o.upper().get()) && mpfr_lessequal_p(o.lower().get(), upper().get());
  }
  /// Certified strict comparisons; false when undecided.
  bool certainly_less(const Ball& o) const { return mpfr_less_p(upper().get(), o.lower().get()); }
  bool certainly_greater(const Ball& o) const { return o.certainly_less(*this); }

  Ball with_prec(Bits p) const {
    Ball b(p);
    int t = mpfr_set(b.mid_.get(), mid_.get(), MPFR_RNDN);
    mpfr_set(b.rad_.get(), rad_.get(), MPFR_RNDU);
    if (t != 0) b.add_ulp();
    return b;
  }

  /// Grows the radius by e (rounded up).
  void add_error(const Mpfr& e) { mpfr_add(rad_.get(), rad_.get(), e.get(), MPFR_RNDU); }
  void add_error_2exp(long e) {
    Mpfr t(RAD_BITS);
    mpfr_set_ui_2exp(t.get(), 1, e, MPFR_RNDU);
    add_error(t);
  }

  std::string mid_string() const { return mid_.to_string(static_cast<int>(decimal_digits_for(prec()))); }
  std::string rad_string() const { return rad_.to_string(6, 'U'); }
  double to_double() const { return mid_.to_double(); }

  mpfr_ptr mid_ptr() { return mid_.get(); }
  mpfr_ptr rad_ptr() { return rad_.get(); }

  /// Adds one ulp of the midpoint to the radius (covers one RNDN rounding).
  void add_ulp() {
    if (mid_.is_zero() || !mpfr_number_p(mid_.get())) return;
    Mpfr u(RAD_BITS);
    mpfr_set_ui_2exp(u.get(), 1, mpfr_get_exp(mid_.get()) - prec(), MPFR_RNDU);
    mpfr_add(rad_.get(), rad_.get(), u.get(), MPFR_RNDU);
  }

 private:
  Mpfr mid_;
  Mpfr rad_;
};

namespace detail {
inline Mpfr abs_up(const Mpfr& x) {
  Mpfr r(RAD_BITS);
  mpfr_abs(r.get(), x.get(), MPFR_RNDU);
  return r;
}
}  // namespace detail

inline Ball operator-(const Ball& a) {
  Ball r = a;
  mpfr_neg(r.mid_ptr(), r.mid_ptr(), MPFR_RNDN);
  return r;
}

inline Ball operator+(const Ball& a, const Ball& b) {
  Ball r(std::max(a.prec(), b.prec()));
  int t = mpfr_add(r.mid_ptr(), a.mid().get(), b.mid().get(), MPFR_RNDN);
  mpfr_add(r.rad_ptr(), a.rad().get(), b.rad().get(), MPFR_RNDU);
  if (t != 0) r.add_ulp();
  return r;
}

inline Ball operator-(const Ball& a, const Ball& b) {
  Ball r(std::max(a.prec(), b.prec()));
  int t = mpfr_sub(r.mid_ptr(), a.mid().get(), b.mid().get(), MPFR_RNDN);
  mpfr_add(r.rad_ptr(), a.rad().get(), b.rad().get(), MPFR_RNDU);
  if (t != 0) r.add_ulp();
  return r;
}

inline Ball operator*(const Ball& a, const Ball& b) {
  Ball r(std::max(a.prec(), b.prec()));
  int t = mpfr_mul(r.mid_ptr(), a.mid().get(), b.mid().get(), MPFR_RNDN);
  // |a|rb + |b|ra + ra rb
  Mpfr x(RAD_BITS), y(RAD_BITS);
  mpfr_mul(x.get(), detail::abs_up(a.mid()).get(), b.rad().get(), MPFR_RNDU);
  mpfr_mul(y.get(), detail::abs_up(b.mid()).get(), a.rad().get(), MPFR_RNDU);
  mpfr_add(x.get(), x.get(), y.get(), MPFR_RNDU);
  mpfr_mul(y.get(), a.rad().get(), b.rad().get(), MPFR_RNDU);
  mpfr_add(r.rad_ptr(), x.get(), y.get(), MPFR_RNDU);
  if (t != 0) r.add_ulp();
  return r;
}

inline Ball operator/(const Ball& a, const Ball& b) {
  if (b.mid().is_zero() && b.rad().is_zero()) fail(ErrorKind::DivisionByZero, "ball division by exact zero");
  if (b.contains_zero()) fail(ErrorKind::Indeterminate, "ball division by a ball containing zero");
  Ball r(std::max(a.prec(), b.prec()));
  int t = mpfr_div(r.mid_ptr(), a.mid().get(), b.mid().get(), MPFR_RNDN);
  // (ra + |q| rb) / (|bm| - rb), |q| bounded by |mid| + ulp
  Mpfr q = detail::abs_up(r.mid());
  if (!r.mid().is_zero()) {
    Mpfr u(RAD_BITS);
    mpfr_set_ui_2exp(u.get(), 1, mpfr_get_exp(r.mid().get()) - r.prec() + 1, MPFR_RNDU);
    mpfr_add(q.get(), q.get(), u.get(), MPFR_RNDU);
  }
  Mpfr num(RAD_BITS), den(RAD_BITS);
  mpfr_mul(num.get(), q.get(), b.rad().get(), MPFR_RNDU);
  mpfr_add(num.get(), num.get(), a.rad().get(), MPFR_RNDU);
  den = b.mig();
  mpfr_div(r.rad_ptr(), num.get(), den.get(), MPFR_RNDU);
  if (t != 0) r.add_ulp();
  return r;
}

inline Ball& operator+=(Ball& a, const Ball& b) { return a = a + b; }
inline Ball& operator-=(Ball& a, const Ball& b) { return a = a - b; }
inline Ball& operator*=(Ball& a, const Ball& b) { return a = a * b; }

inline Ball abs(const Ball& a) {
  Ball r = a;
  mpfr_abs(r.mid_ptr(), r.mid_ptr(), MPFR_RNDN);
  if (a.contains_zero()) {
    // hull of [0, mag]
    Mpfr zero(a.prec());
    return Ball::from_endpoints(zero, a.mag(), a.prec());
  }
  return r;
}

inline Ball pow(const Ball& a, unsigned long n) {
  Ball result(1L, a.prec());
  Ball base = a;
  while (n != 0) {
    if (n & 1UL) result = result * base;
    n >>= 1;
    if (n != 0) base = base * base;
  }
  return result;
}

/// Multiplies by 2^e exactly.
inline Ball mul_2exp(const Ball& a, long e) {
  Ball r = a;
  mpfr_mul_2si(r.mid_ptr(), r.mid_ptr(), e, MPFR_RNDN);
  mpfr_mul_2si(r.rad_ptr(), r.rad_ptr(), e, MPFR_RNDU);
  return r;
}

inline Ball sqrt(const Ball& a) {
  if (mpfr_sgn(a.upper().get()) < 0) fail(ErrorKind::PreconditionViolated, "sqrt of a negative ball");
  Bits p = a.prec();
  if (mpfr_sgn(a.lower().get()) <= 0) {
    Mpfr hi(p + 2);
    mpfr_sqrt(hi.get(), a.upper().get(), MPFR_RNDU);
    return Ball::from_endpoints(Mpfr(p), hi, p);
  }
  Ball r(p);
  int t = mpfr_sqrt(r.mid_ptr(), a.mid().get(), MPFR_RNDN);
  // |sqrt(x) - sqrt(m)| <= r / (sqrt(m - r) + sqrt(m)) <= r / sqrt(lower)
  Mpfr s(RAD_BITS);
  mpfr_sqrt(s.get(), a.lower().get(), MPFR_RNDD);
  mpfr_div(r.rad_ptr(), a.rad().get(), s.get(), MPFR_RNDU);
  if (t != 0) r.add_ulp();
  return r;
}

inline Ball log(const Ball& a) {
  Mpfr lo = a.lower();
  if (mpfr_sgn(lo.get()) <= 0) fail(ErrorKind::Indeterminate, "log of a ball not certified positive");
  Ball r(a.prec());
  int t = mpfr_log(r.mid_ptr(), a.mid().get(), MPFR_RNDN);
  // |log x - log m| <= r / (m - r)
  Mpfr l(RAD_BITS);
  mpfr_set(l.get(), lo.get(), MPFR_RNDD);
  mpfr_div(r.rad_ptr(), a.rad().get(), l.get(), MPFR_RNDU);
  if (t != 0) r.add_ulp();
  // mpfr_log is correctly rounded, so one ulp covers it; add one more for safety of exp boundaries
  r.add_ulp();
  return r;
}

inline Ball exp(const Ball& a) {
  Ball r(a.prec());
  int t = mpfr_exp(r.mid_ptr(), a.mid().get(), MPFR_RNDN);
  // |e^x - e^m| <= e^(m + r) * r
  Mpfr e(RAD_BITS);
  mpfr_exp(e.get(), a.upper().get(), MPFR_RNDU);
  mpfr_mul(r.rad_ptr(), e.get(), a.rad().get(), MPFR_RNDU);
  if (t != 0) r.add_ulp();
  r.add_ulp();
  return r;
}

/// Positive d-th root of a positive ball.
inline Ball root(const Ball& a, unsigned long d) {
  if (d == 1) return a;
  Ball dd(static_cast<long>(d), a.prec());
  return exp(log(a) / dd);
}

/// Convex hull of two balls.
inline Ball hull(const Ball& a, const Ball& b) {
  Bits p = std::max(a.prec(), b.prec());
  Mpfr lo(p + 2), hi(p + 2);
  mpfr_min(lo.get(), a.lower().get(), b.lower().get(), MPFR_RNDD);
  mpfr_max(hi.get(), a.upper().get(), b.upper().get(), MPFR_RNDU);
  return Ball::from_endpoints(lo, hi, p);
}

/// Ball enclosing max(1, |x|).
inline Ball max_one_abs(const Ball& a) {
  Ball m = abs(a);
  Ball one(1L, a.prec());
  if (!mpfr_greater_p(m.upper().get(), one.mid().get())) return one;
  if (mpfr_greaterequal_p(m.lower().get(), one.mid().get())) return m;
  return hull(one, m);
}

class ComplexBall {
 public:
  explicit ComplexBall(Bits prec = 128) : re_(prec), im_(prec) {}
  ComplexBall(Ball re, Ball im) : re_(std::move(re)), im_(std::move(im)) {}
  explicit ComplexBall(const Ball& re) : re_(re), im_(re.prec()) {}
  ComplexBall(const Rational& q, Bits prec) : re_(q, prec), im_(prec) {}

  const Ball& re() const noexcept { return re_; }
  const Ball& im() const noexcept { return im_; }
  Ball& re() noexcept { return re_; }
  Ball& im() noexcept { return im_; }
  Bits prec() const noexcept { return std::max(re_.prec(), im_.prec()); }

  bool is_real_exactly() const { return im_.mid().is_zero() && im_.rad().is_zero(); }
  bool contains_zero() const { return re_.contains_zero() && im_.contains_zero(); }
  bool overlaps(const ComplexBall& o) const { return re_.overlaps(o.re_) && im_.overlaps(o.im_); }

  /// Upper bound of the modulus.
  Mpfr mag() const {
    Mpfr a = re_.mag(), b = im_.mag();
    Mpfr r(RAD_BITS);
    mpfr_hypot(r.get(), a.get(), b.get(), MPFR_RNDU);
    return r;
  }
  /// Lower bound of the modulus.
  Mpfr mig() const {
    Mpfr a = re_.mig(), b = im_.mig();
    Mpfr r(RAD_BITS);
    mpfr_hypot(r.get(), a.get(), b.get(), MPFR_RNDD);
    return r;
  }
  ComplexBall with_prec(Bits p) const { return {re_.with_prec(p), im_.with_prec(p)}; }

 private:
  Ball re_;
  Ball im_;
};

inline ComplexBall operator-(const ComplexBall& a) { return {-a.re(), -a.im()}; }
inline ComplexBall operator+(const ComplexBall& a, const ComplexBall& b) { return {a.re() + b.re(), a.im() + b.im()}; }
inline ComplexBall operator-(const ComplexBall& a, const ComplexBall& b) { return {a.re() - b.re(), a.im() - b.im()}; }
inline ComplexBall operator*(const ComplexBall& a, const ComplexBall& b) {
  if (a.is_real_exactly() && b.is_real_exactly()) return ComplexBall(a.re() * b.re());
  return {a.re() * b.re() - a.im() * b.im(), a.re() * b.im() + a.im() * b.re()};
}
inline ComplexBall operator/(const ComplexBall& a, const ComplexBall& b) {
  if (b.is_real_exactly()) return {a.re() / b.re(), a.is_real_exactly() ? Ball(a.prec()) : a.im() / b.re()};
  Ball den = b.re() * b.re() + b.im() * b.im();
  ComplexBall num = a * ComplexBall(b.re(), -b.im());
  return {num.re() / den, num.im() / den};
}
inline ComplexBall& operator+=(ComplexBall& a, const ComplexBall& b) { return a = a + b; }
inline ComplexBall& operator*=(ComplexBall& a, const ComplexBall& b) { return a = a * b; }

inline ComplexBall pow(const ComplexBall& a, unsigned long n) {
  ComplexBall result(Rational(1), a.prec());
  ComplexBall base = a;
  while (n != 0) {
    if (n & 1UL) result = result * base;
    n >>= 1;
    if (n != 0) base = base * base;
  }
  return result;
}

/// Ball enclosing |z|.
inline Ball abs(const ComplexBall& z) {
  if (z.is_real_exactly()) return abs(z.re());
  return sqrt(z.re() * z.re() + z.im() * z.im());
}

}  // namespace sturmian
