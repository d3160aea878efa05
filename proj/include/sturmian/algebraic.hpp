#pragma once

// Exact algebraic numbers: a primitive irreducible integer polynomial together
// with a rational isolating box holding exactly one of its roots.

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>

#include "ball.hpp"
#include "polynomial.hpp"
#include "precision.hpp"
#include "roots.hpp"

namespace sturmian {

/// Closed rational rectangle [re_lo, re_hi] x [im_lo, im_hi].  Real numbers use
/// im_lo = im_hi = 0.
struct RationalBox {
  Rational re_lo, re_hi, im_lo, im_hi;

  bool is_real() const { return im_lo == 0 && im_hi == 0; }
  bool contains(const RationalBox& o) const {
    return re_lo <= o.re_lo && o.re_hi <= re_hi && im_lo <= o.im_lo && o.im_hi <= im_hi;
  }
  friend bool operator==(const RationalBox& a, const RationalBox& b) {
    return a.re_lo == b.re_lo && a.re_hi == b.re_hi && a.im_lo == b.im_lo && a.im_hi == b.im_hi;
  }

  static RationalBox real(Rational lo, Rational hi) { return {std::move(lo), std::move(hi), 0, 0}; }
  static RationalBox around(const ComplexBall& z) {
    RationalBox b{z.re().lower().to_rational(), z.re().upper().to_rational(), z.im().lower().to_rational(),
                  z.im().upper().to_rational()};
    if (z.is_real_exactly()) b.im_lo = b.im_hi = 0;
    return b;
  }
};

class AlgebraicNumber {
 public:
  /// Zero.
  AlgebraicNumber() : AlgebraicNumber(from_rational(Rational(0))) {}

  static AlgebraicNumber from_rational(Rational q) {
    q.canonicalize();
    IntPoly p = primitive_part(IntPoly{Integer(-q.get_num()), Integer(q.get_den())});
    return AlgebraicNumber(std::move(p), RationalBox::real(q, q), true);
  }
  static AlgebraicNumber from_integer(long v) { return from_rational(Rational(v)); }

  /// The unique real root of `poly` in [lo, hi].  The polynomial is reduced to
  /// the irreducible factor owning that root.
  static AlgebraicNumber real_root(const IntPoly& poly, Rational lo, Rational hi) {
    if (poly.degree() < 1) fail(ErrorKind::IsolatorInvalid, "constant polynomial has no roots");
    if (lo > hi) fail(ErrorKind::IsolatorInvalid, "empty isolating interval");
    IntPoly sq = squarefree_part(poly);
    if (real_roots_in_closed(sq, lo, hi) != 1)
      fail(ErrorKind::IsolatorInvalid, "interval does not isolate exactly one root of " + to_string(poly));
    auto fac = factor_squarefree(sq);
    for (const auto& g : fac.factors) {
      if (real_roots_in_closed(g, lo, hi) == 1) {
        if (g.degree() == 1) return from_rational(Rational(-g[0], g[1]));
        return AlgebraicNumber(g, RationalBox::real(std::move(lo), std::move(hi)), fac.complete);
      }
    }
    fail(ErrorKind::IsolatorInvalid, "no factor owns the isolated root");
  }

  /// The unique root of `poly` inside a non-degenerate complex box.
  static AlgebraicNumber complex_root(const IntPoly& poly, const RationalBox& box) {
    if (box.is_real()) return real_root(poly, box.re_lo, box.re_hi);
    if (poly.degree() < 1) fail(ErrorKind::IsolatorInvalid, "constant polynomial has no roots");
    IntPoly sq = squarefree_part(poly);
    auto fac = factor_squarefree(sq);
    // Count roots meeting the box; each must be certainly inside or outside.
    for (Bits bits = 128; bits <= 4096; bits *= 2) {
      int inside = 0, ambiguous = 0;
      const IntPoly* owner = nullptr;
      for (const auto& g : fac.factors) {
        for (const auto& r : certified_roots(g, bits)) {
          RationalBox rb = RationalBox::around(r.value);
          bool in = box.contains(rb);
          bool out = rb.re_hi < box.re_lo || rb.re_lo > box.re_hi || rb.im_hi < box.im_lo || rb.im_lo > box.im_hi;
          if (in) {
            ++inside;
            owner = &g;
          } else if (!out) {
            ++ambiguous;
          }
        }
      }
      if (ambiguous == 0) {
        if (inside != 1) fail(ErrorKind::IsolatorInvalid, "box does not isolate exactly one root");
        if (owner->degree() == 1) return from_rational(Rational(-(*owner)[0], (*owner)[1]));
        return AlgebraicNumber(*owner, box, fac.complete);
      }
    }
    fail(ErrorKind::IsolatorInvalid, "root on the boundary of the isolating box");
  }

  /// Builds the number identified by an annihilating polynomial and a function
  /// returning rigorous enclosures of it at a requested precision.
  static AlgebraicNumber from_annihilator(const IntPoly& ann, const std::function<ComplexBall(Bits)>& approx) {
    if (ann.degree() > DEGREE_CAP) fail(ErrorKind::DegreeCapExceeded, "annihilator degree above cap");
    if (ann.degree() < 1) fail(ErrorKind::ValidationError, "annihilator must be nonconstant");
    auto fac = factor_squarefree(squarefree_part(ann));
    for (Bits bits = 64; bits <= default_policy().ceiling; bits *= 2) {
      ComplexBall z = approx(bits);
      int hits = 0;
      const IntPoly* owner = nullptr;
      std::optional<RootEnclosure> hit;
      for (const auto& g : fac.factors) {
        for (auto& r : certified_roots(g, bits)) {
          bool overlap = z.re().overlaps(r.value.re()) &&
                         (r.real ? z.im().contains_zero() : z.im().overlaps(r.value.im()));
          if (overlap) {
            ++hits;
            owner = &g;
            hit = r;
          }
        }
      }
      if (hits == 0) fail(ErrorKind::ValidationError, "enclosure matches no root of the annihilator");
      if (hits == 1) {
        const IntPoly& g = *owner;
        if (g.degree() == 1) return from_rational(Rational(-g[0], g[1]));
        if (hit->real) {
          RationalBox b = RationalBox::around(ComplexBall(hit->value.re()));
          return AlgebraicNumber(g, b, fac.complete);
        }
        return AlgebraicNumber(g, RationalBox::around(hit->value), fac.complete);
      }
    }
    fail(ErrorKind::Indeterminate, "could not separate the roots of the annihilator");
  }

  const IntPoly& minpoly() const noexcept { return minpoly_; }
  const RationalBox& isolator() const noexcept { return box_; }
  int degree() const noexcept { return minpoly_.degree(); }
  bool is_real() const noexcept { return box_.is_real(); }
  bool is_rational() const noexcept { return degree() == 1; }
  /// True when irreducibility of the defining polynomial was verified by
  /// complete factorization (always for degree <= FACTOR_DEGREE_LIMIT).
  bool minpoly_certified() const noexcept { return certified_; }

  Rational rational_value() const {
    if (!is_rational()) fail(ErrorKind::ValidationError, "not a rational number");
    Rational q(-minpoly_[0], minpoly_[1]);
    q.canonicalize();
    return q;
  }

  /// Real enclosure with rad <= 2^(1-prec) max(1, |mid|).
  Ball refine(Bits prec) const {
    if (!is_real()) fail(ErrorKind::ValidationError, "refine(real) on a non-real number");
    if (is_rational()) return Ball(rational_value(), prec);
    auto [lo, hi] = refine_interval(prec);
    return Ball::from_rational_endpoints(lo, hi, prec);
  }

  /// Complex enclosure; for real numbers the imaginary part is exactly 0.
  ComplexBall refine_complex(Bits prec) const {
    if (is_real()) return ComplexBall(refine(prec));
    return refine_nonreal(prec);
  }

  /// Certified isolating interval of width <= 2^-prec max(1, |x|).
  std::pair<Rational, Rational> refine_interval(Bits prec) const;

  /// Structural identity: same defining polynomial and same isolator.
  friend bool operator==(const AlgebraicNumber& a, const AlgebraicNumber& b) {
    return a.minpoly_ == b.minpoly_ && a.box_ == b.box_;
  }

  /// Value equality (exact).
  bool same_value(const AlgebraicNumber& o) const;

 private:
  AlgebraicNumber(IntPoly p, RationalBox box, bool certified)
      : minpoly_(std::move(p)), box_(std::move(box)), certified_(certified), cache_(std::make_shared<Cache>()) {
    for (Rational* q : {&box_.re_lo, &box_.re_hi, &box_.im_lo, &box_.im_hi}) q->canonicalize();
    cache_->lo = box_.re_lo;
    cache_->hi = box_.re_hi;
  }

  ComplexBall refine_nonreal(Bits prec) const;

  struct Cache {
    std::mutex mu;
    Rational lo, hi;  // real: current isolating interval
    std::optional<ComplexBall> z;
    Bits z_prec = 0;
  };

  IntPoly minpoly_;
  RationalBox box_;
  bool certified_ = true;
  std::shared_ptr<Cache> cache_;
};

inline std::pair<Rational, Rational> AlgebraicNumber::refine_interval(Bits prec) const {
  std::lock_guard<std::mutex> lock(cache_->mu);
  Rational lo = cache_->lo, hi = cache_->hi;
  if (is_rational()) return {rational_value(), rational_value()};
  auto width_ok = [&](const Rational& a, const Rational& b) {
    Rational scale = std::max(Rational(1), Rational(abs(a) > abs(b) ? Rational(abs(a)) : Rational(abs(b))));
    Rational target = scale;
    mpq_div_2exp(target.get_mpq_t(), target.get_mpq_t(), static_cast<mp_bitcnt_t>(prec));
    return b - a <= target;
  };
  if (lo == hi || width_ok(lo, hi)) return {lo, hi};
  int s_lo = sgn(eval(minpoly_, lo));
  int s_hi = sgn(eval(minpoly_, hi));
  if (s_lo == 0) return {lo, lo};
  if (s_hi == 0) return {hi, hi};
  IntPoly dp = derivative(minpoly_);
  while (!width_ok(lo, hi)) {
    // Newton from the midpoint at working precision, then verify a tight bracket.
    Bits wp = prec + 32;
    Rational m = (lo + hi) / 2;
    Ball x(m, wp);
    bool bracketed = false;
    for (int it = 0; it < 64; ++it) {
      Ball xm = Ball::from_mid_rad(x.mid(), Mpfr(RAD_BITS), wp);
      Ball fx = eval(minpoly_, xm), dfx = eval(dp, xm);
      if (dfx.contains_zero()) break;
      Ball step = fx / dfx;
      x = xm - step;
      Rational c = Ball::from_mid_rad(x.mid(), Mpfr(RAD_BITS), wp).mid().to_rational();
      if (c < lo || c > hi) break;
      Mpfr sm = step.mag();
      Rational stepq = sm.to_rational();
      Rational scale = abs(c) > 1 ? Rational(abs(c)) : Rational(1);
      Rational eps = scale;
      mpq_div_2exp(eps.get_mpq_t(), eps.get_mpq_t(), static_cast<mp_bitcnt_t>(prec + 2));
      if (stepq * 4 < eps) {
        Rational a = c - eps, b = c + eps;
        if (a >= lo && b <= hi) {
          int sa = sgn(eval(minpoly_, a)), sb = sgn(eval(minpoly_, b));
          if (sa == 0) return {a, a};
          if (sb == 0) return {b, b};
          if (sa != sb) {
            lo = a;
            hi = b;
            s_lo = sa;
            bracketed = true;
          }
        }
        break;
      }
    }
    if (!bracketed) {
      for (int k = 0; k < 8 && !width_ok(lo, hi); ++k) {
        Rational m2 = (lo + hi) / 2;
        int sm2 = sgn(eval(minpoly_, m2));
        if (sm2 == 0) return {m2, m2};
        if (sm2 == s_lo) lo = m2;
        else hi = m2;
      }
    }
  }
  cache_->lo = lo;
  cache_->hi = hi;
  return {lo, hi};
}

inline ComplexBall AlgebraicNumber::refine_nonreal(Bits prec) const {
  std::lock_guard<std::mutex> lock(cache_->mu);
  if (cache_->z && cache_->z_prec >= prec) return cache_->z->with_prec(std::max(prec, cache_->z->prec()));
  int n = degree();
  IntPoly dp = derivative(minpoly_);
  Bits wp = prec + 32;
  ComplexBall z(Ball(Rational((box_.re_lo + box_.re_hi) / 2), wp), Ball(Rational((box_.im_lo + box_.im_hi) / 2), wp));
  if (cache_->z) z = cache_->z->with_prec(wp);
  auto center = [wp](const ComplexBall& b) {
    return ComplexBall(Ball::from_mid_rad(b.re().mid(), Mpfr(RAD_BITS), wp),
                       Ball::from_mid_rad(b.im().mid(), Mpfr(RAD_BITS), wp));
  };
  for (int attempt = 0; attempt < 200; ++attempt) {
    z = center(z);
    ComplexBall fz = eval(minpoly_, z), dfz = eval(dp, z);
    if (dfz.contains_zero()) fail(ErrorKind::Indeterminate, "derivative vanishes near the root");
    ComplexBall step = fz / dfz;
    // A root lies within n |p(z)/p'(z)| of z.
    Mpfr r = step.mag();
    mpfr_mul_ui(r.get(), r.get(), static_cast<unsigned long>(n), MPFR_RNDU);
    ComplexBall disk(Ball::from_mid_rad(z.re().mid(), r, wp), Ball::from_mid_rad(z.im().mid(), r, wp));
    RationalBox db = RationalBox::around(disk);
    Mpfr target(RAD_BITS);
    Mpfr zm = z.mag();
    mpfr_set_ui_2exp(target.get(), 1, 1 - prec, MPFR_RNDD);
    if (mpfr_cmp_ui(zm.get(), 1) > 0) mpfr_mul(target.get(), target.get(), zm.get(), MPFR_RNDD);
    if (box_.contains(db) && mpfr_lessequal_p(r.get(), target.get())) {
      cache_->z = disk;
      cache_->z_prec = prec;
      return disk;
    }
    z = z - step;
  }
  fail(ErrorKind::PrecisionExhausted, "complex refinement did not converge");
}

inline bool AlgebraicNumber::same_value(const AlgebraicNumber& o) const {
  if (minpoly_ != o.minpoly_) return false;
  if (box_ == o.box_) return true;
  if (is_real() != o.is_real()) return false;
  if (is_real()) {
    Rational lo = std::max(box_.re_lo, o.box_.re_lo), hi = std::min(box_.re_hi, o.box_.re_hi);
    if (lo > hi) return false;
    return real_roots_in_closed(minpoly_, lo, hi) == 1;
  }
  for (Bits bits = 64;; bits *= 2) {
    ComplexBall a = refine_complex(bits), b = o.refine_complex(bits);
    if (!a.overlaps(b)) return false;
    // Both lie in the intersection; separated roots differ by more than the
    // combined widths once precision exceeds the root separation.
    for (const auto& r : certified_roots(minpoly_, bits)) {
      RationalBox rb = RationalBox::around(r.value);
      if (box_.contains(rb) && o.box_.contains(rb)) return true;
    }
    if (bits > 8192) return false;
  }
}

}  // namespace sturmian
