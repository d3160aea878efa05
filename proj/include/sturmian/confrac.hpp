#pragma once

// Simple continued fractions of reals in (0,1), nearest-integer distances and
// best approximations.  Convention: p_0 = 0, q_0 = 1 (a_0 = 0).

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "real_like.hpp"

namespace sturmian {

/// Exact sign of u + v*theta.
inline int sign_linear(const Integer& u, const Integer& v, const RealLike& theta, Bits prec = 128) {
  if (v == 0) return sgn(u);
  if (auto q = std::get_if<Rational>(&theta)) return sgn(Rational(u + v * *q));
  if (auto a = std::get_if<AlgebraicNumber>(&theta)) {
    if (!a->is_rational()) {
      // A nonzero linear form in an irrational number never vanishes: refine.
      for (Bits p = prec; p <= default_policy().ceiling; p *= 2) {
        Ball x = Ball(u, p) + Ball(v, p) * a->refine(p);
        if (auto s = x.sign(); s && *s != 0) return *s;
      }
      fail(ErrorKind::PrecisionExhausted, "linear form sign undecided");
    }
    return sgn(Rational(u + v * a->rational_value()));
  }
  const Ball& t = std::get<Ball>(theta);
  auto s = (Ball(u, t.prec()) + Ball(v, t.prec()) * t).sign();
  if (!s || *s == 0) fail(ErrorKind::Indeterminate, "ball too wide for sign");
  return *s;
}

/// The value when theta is an exact rational (as Rational or degree-1 algebraic).
inline std::optional<Rational> exact_rational(const RealLike& theta) {
  if (auto q = std::get_if<Rational>(&theta)) return *q;
  if (auto a = std::get_if<AlgebraicNumber>(&theta); a && a->is_rational()) return a->rational_value();
  return std::nullopt;
}

struct Convergent {
  Integer p, q;
};

struct ContinuedFraction {
  std::vector<Integer> quotients;       // a_1..a_n
  std::vector<Convergent> convergents;  // (p_0,q_0) = (0,1), then one per quotient
  bool terminated = false;              // rational theta whose expansion ended
  bool truncated = false;               // ball theta too wide for further digits
  std::optional<ErrorKind> status;      // RationalInput / PrecisionExhausted when flagged
  std::string convention = "p_0 = 0, q_0 = 1, a_0 = 0";
};

inline void check_unit_interval(const RealLike& theta) {
  if (sign(theta) <= 0 || sign_linear(Integer(-1), Integer(1), theta) >= 0)
    fail(ErrorKind::PreconditionViolated, "theta must lie in (0,1)");
}

/// First n partial quotients, each certified.
inline ContinuedFraction cf_expand(const RealLike& theta, std::size_t n) {
  check_unit_interval(theta);
  ContinuedFraction cf;
  cf.convergents.push_back({0, 1});
  Integer pm2 = 1, qm2 = 0, pm1 = 0, qm1 = 1;
  auto push = [&](const Integer& a) {
    Integer p = a * pm1 + pm2, q = a * qm1 + qm2;
    cf.quotients.push_back(a);
    cf.convergents.push_back({p, q});
    pm2 = pm1;
    qm2 = qm1;
    pm1 = p;
    qm1 = q;
  };

  if (auto r = exact_rational(theta)) {
    Integer num = r->get_num(), den = r->get_den();
    // theta = num/den; complete quotient x_1 = den/num
    while (cf.quotients.size() < n) {
      if (num == 0) {
        cf.terminated = true;
        cf.status = ErrorKind::RationalInput;
        break;
      }
      Integer a = den / num, rem = den % num;
      push(a);
      den = num;
      num = rem;
    }
    return cf;
  }

  // Complete quotient x_k = (a + b theta) / (c + d theta), starting at 1/theta.
  Integer a = 1, b = 0, c = 0, d = 1;
  const Ball* tb = std::get_if<Ball>(&theta);
  Bits prec = 128;
  while (cf.quotients.size() < n) {
    Integer digit;
    if (tb) {
      Ball x = (Ball(a, tb->prec()) + Ball(b, tb->prec()) * *tb) / (Ball(c, tb->prec()) + Ball(d, tb->prec()) * *tb);
      Integer lo = floor_q(x.lower().to_rational()), hi = floor_q(x.upper().to_rational());
      if (lo != hi || lo < 1) {
        cf.truncated = true;
        cf.status = ErrorKind::PrecisionExhausted;
        break;
      }
      digit = lo;
    } else {
      const AlgebraicNumber& alg = std::get<AlgebraicNumber>(theta);
      // Guess from a ball, then certify floor with two exact sign tests.
      std::optional<Integer> guess;
      for (Bits p = prec; !guess; p *= 2) {
        Ball t = alg.refine(p);
        Ball den = Ball(c, p) + Ball(d, p) * t;
        if (den.contains_zero()) continue;
        Ball x = (Ball(a, p) + Ball(b, p) * t) / den;
        Integer lo = floor_q(x.lower().to_rational()), hi = floor_q(x.upper().to_rational());
        if (lo == hi) {
          guess = lo;
          prec = p;
        } else if (hi - lo == 1) {
          // x >= hi  <=>  (a - hi c) + (b - hi d) theta has the sign of the denominator
          int sd = sign_linear(c, d, theta, p);
          int sn = sign_linear(Integer(a - hi * c), Integer(b - hi * d), theta, p);
          guess = (sn == 0 || sn == sd) ? hi : lo;
        }
      }
      digit = *guess;
    }
    push(digit);
    Integer na = c, nb = d, nc = a - digit * c, nd = b - digit * d;
    a = na;
    b = nb;
    c = nc;
    d = nd;
  }
  return cf;
}

struct DistToInt {
  Ball value;     // ||q theta||
  Ball signed_;   // q theta - round(q theta)
  int sign = 0;   // exact sign of signed_
  Integer nearest;
};

/// ||q theta|| and q theta - round(q theta).  Half-integers round down.
inline DistToInt dist_to_int(const Integer& q, const RealLike& theta, Bits prec = 256) {
  if (q < 1) fail(ErrorKind::PreconditionViolated, "q must be positive");
  DistToInt r;
  if (auto e = exact_rational(theta)) {
    Rational x = q * *e;
    Integer n = floor_q(x);
    Rational f = x - n;
    if (f > Rational(1, 2)) ++n;
    Rational s = x - n;
    r.nearest = n;
    r.sign = sgn(s);
    r.signed_ = Ball(s, prec);
    r.value = Ball(Rational(abs(s)), prec);
    return r;
  }
  Ball t = std::holds_alternative<Ball>(theta) ? std::get<Ball>(theta) : to_ball(theta, prec + 64);
  Bits p = t.prec();
  Ball x = Ball(q, p) * t;
  // round(x) = floor(x + 1/2)
  Ball xh = x + Ball(Rational(1, 2), p);
  Integer lo = floor_q(xh.lower().to_rational()), hi = floor_q(xh.upper().to_rational());
  if (lo != hi) {
    if (std::holds_alternative<Ball>(theta)) fail(ErrorKind::Indeterminate, "q theta too close to a half-integer");
    // exact: x >= hi - 1/2  <=>  2q theta - (2hi - 1) >= 0
    int s = sign_linear(Integer(-(2 * hi - 1)), Integer(2 * q), theta);
    lo = s > 0 ? hi : Integer(hi - 1);
  }
  r.nearest = lo;
  r.signed_ = (x - Ball(lo, p)).with_prec(prec);
  r.value = abs(r.signed_);
  if (std::holds_alternative<Ball>(theta)) {
    auto s = r.signed_.sign();
    if (!s) fail(ErrorKind::Indeterminate, "sign of q theta - round(q theta) undecided");
    r.sign = *s;
  } else {
    r.sign = sign_linear(Integer(-lo), q, theta);
  }
  return r;
}

/// Convergent denominators q_n with q_n theta - p_n > 0, increasing.
inline std::vector<Integer> positive_side_denominators(const RealLike& theta, std::size_t count) {
  std::vector<Integer> out;
  std::size_t terms = 2 * count + 2;
  while (true) {
    ContinuedFraction cf = cf_expand(theta, terms);
    if (cf.terminated) fail(ErrorKind::RationalInput, "theta is rational");
    out.clear();
    for (const auto& c : cf.convergents) {
      if (sign_linear(Integer(-c.p), c.q, theta) > 0 && (out.empty() || c.q > out.back())) out.push_back(c.q);
      if (out.size() == count) return out;
    }
    if (cf.truncated) fail(ErrorKind::PrecisionExhausted, "ball theta too wide for the requested depth");
    terms *= 2;
  }
}

/// ||q theta|| < ||q' theta|| for every 1 <= q' < q, by direct scan.
inline bool is_best_approx(long q, const RealLike& theta) {
  if (q < 2) fail(ErrorKind::PreconditionViolated, "q must be at least 2");
  // Double fast path with an explicit error bound; exact fallback on overlap.
  double td = to_ball(theta, 128).to_double();
  auto dd = [td](long k) {
    double x = static_cast<double>(k) * td;
    return std::fabs(x - std::nearbyint(x));
  };
  auto err = [](long k) { return static_cast<double>(k + 1) * 0x1p-50; };
  double dq = dd(q), eq = err(q);
  std::optional<DistToInt> exact_q;
  for (long k = 1; k < q; ++k) {
    double dk = dd(k), ek = err(k);
    if (dq + eq < dk - ek) continue;
    if (dq - eq > dk + ek) return false;
    if (!exact_q) exact_q = dist_to_int(Integer(q), theta);
    DistToInt ek_exact = dist_to_int(Integer(k), theta);
    // compare |s_q| < |s_k| exactly: sign of |s_k| - |s_q| is linear in theta
    Integer uq = -exact_q->nearest, vq = q, uk = -ek_exact.nearest, vk = k;
    if (exact_q->sign < 0) {
      uq = -uq;
      vq = -vq;
    }
    if (ek_exact.sign < 0) {
      uk = -uk;
      vk = -vk;
    }
    if (sign_linear(Integer(uk - uq), Integer(vk - vq), theta) <= 0) return false;
  }
  return true;
}

}  // namespace sturmian
