#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <cstdlib>
#include <string>
#include <utility>

namespace sturmian {

using Integer = mpz_class;
using Rational = mpq_class;
using Bits = long;

/// Owning wrapper around an mpfr_t.
class Mpfr {
 public:
  explicit Mpfr(Bits prec = 64) {
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
  }
  Mpfr(Bits prec, long value) : Mpfr(prec) { mpfr_set_si(v_, value, MPFR_RNDN); }
  Mpfr(const Mpfr& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Mpfr(Mpfr&& o) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, o.v_);
  }
  Mpfr& operator=(const Mpfr& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Mpfr& operator=(Mpfr&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Mpfr() { mpfr_clear(v_); }

  mpfr_ptr get() noexcept { return v_; }
  mpfr_srcptr get() const noexcept { return v_; }
  Bits prec() const noexcept { return mpfr_get_prec(v_); }
  bool is_zero() const noexcept { return mpfr_zero_p(v_) != 0; }
  int sign() const noexcept { return mpfr_sgn(v_); }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  /// Exact value; every finite mpfr number is a dyadic rational.
  Rational to_rational() const {
    Rational q;
    mpfr_get_q(q.get_mpq_t(), v_);
    return q;
  }

  static Mpfr from_rational(const Rational& q, Bits prec, mpfr_rnd_t rnd) {
    Mpfr r(prec);
    mpfr_set_q(r.v_, q.get_mpq_t(), rnd);
    return r;
  }

  std::string to_string(int digits, char rnd = 'N') const {
    char* buf = nullptr;
    std::string fmt = std::string("%.*R") + rnd + "g";
    mpfr_asprintf(&buf, fmt.c_str(), digits, v_);
    std::string s(buf);
    mpfr_free_str(buf);
    return s;
  }

 private:
  mpfr_t v_;
};

inline Integer pow_ui_int(const Integer& b, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

/// Floor of a rational.
inline Integer floor_q(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline Integer ceil_q(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline Bits decimal_digits_for(Bits bits) { return static_cast<Bits>(static_cast<double>(bits) * 0.30103) + 2; }

}  // namespace sturmian
