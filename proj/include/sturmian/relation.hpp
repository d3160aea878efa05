#pragma once

// Integer relations among ball values by exact LLL reduction of
// [ e_i | round(C Re v_i) | round(C Im v_i) ], C = 2^prec.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "evalnum.hpp"

namespace sturmian {

using IntMatrix = std::vector<std::vector<Integer>>;

namespace detail {

inline Integer dot(const std::vector<Integer>& a, const std::vector<Integer>& b) {
  Integer s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Integer round_q(const Rational& q) { return floor_q(Rational(q + Rational(1, 2))); }

}  // namespace detail

struct LllResult {
  IntMatrix basis;
  std::vector<Rational> gs_norms_sq;  // |b_i*|^2
};

/// Rational LLL (delta = 3/4) on linearly independent integer rows.
inline LllResult lll_reduce(IntMatrix b) {
  const std::size_t n = b.size();
  const Rational delta(3, 4);
  std::vector<std::vector<Rational>> mu(n, std::vector<Rational>(n));
  std::vector<Rational> B(n);
  if (n == 0) return {};

  auto gs_row = [&](std::size_t k) {
    for (std::size_t j = 0; j < k; ++j) {
      Rational s = detail::dot(b[k], b[j]);
      for (std::size_t i = 0; i < j; ++i) s -= mu[j][i] * mu[k][i] * B[i];
      mu[k][j] = s / B[j];
    }
    Rational s = detail::dot(b[k], b[k]);
    for (std::size_t j = 0; j < k; ++j) s -= mu[k][j] * mu[k][j] * B[j];
    B[k] = s;
    if (B[k] == 0) fail(ErrorKind::ValidationError, "lattice rows are dependent");
  };
  auto red = [&](std::size_t k, std::size_t l) {
    if (abs(mu[k][l]) <= Rational(1, 2)) return;
    Integer q = detail::round_q(mu[k][l]);
    for (std::size_t c = 0; c < b[k].size(); ++c) b[k][c] -= q * b[l][c];
    mu[k][l] -= q;
    for (std::size_t i = 0; i < l; ++i) mu[k][i] -= q * mu[l][i];
  };
  auto swap = [&](std::size_t k, std::size_t kmax) {
    std::swap(b[k], b[k - 1]);
    for (std::size_t j = 0; j + 1 < k; ++j) std::swap(mu[k][j], mu[k - 1][j]);
    Rational m = mu[k][k - 1];
    Rational Bn = B[k] + m * m * B[k - 1];
    mu[k][k - 1] = m * B[k - 1] / Bn;
    B[k] = B[k - 1] * B[k] / Bn;
    B[k - 1] = Bn;
    for (std::size_t i = k + 1; i <= kmax; ++i) {
      Rational t = mu[i][k];
      mu[i][k] = mu[i][k - 1] - m * t;
      mu[i][k - 1] = t + mu[k][k - 1] * mu[i][k];
    }
  };

  gs_row(0);
  std::size_t k = 1, kmax = 0;
  while (k < n) {
    if (k > kmax) {
      kmax = k;
      gs_row(k);
    }
    red(k, k - 1);
    if (B[k] < (delta - mu[k][k - 1] * mu[k][k - 1]) * B[k - 1]) {
      swap(k, kmax);
      if (k > 1) --k;
      continue;
    }
    for (std::size_t l = k - 1; l-- > 0;) red(k, l);
    ++k;
  }
  return {std::move(b), std::move(B)};
}

struct RelationResult {
  bool found = false;
  std::vector<Integer> coeffs;
  std::optional<ComplexBall> residual;
  bool excluded = false;         // no relation with max |m_i| <= bound, at this precision
  std::string certificate_norm;  // min |b_i*| as a decimal
  std::string label;
};

namespace detail {

inline Integer scaled_round(const Ball& x, Bits prec) {
  Mpfr t(x.prec() + prec + 8);
  mpfr_mul_2ui(t.get(), x.mid().get(), prec, MPFR_RNDN);
  mpfr_round(t.get(), t.get());
  Integer z;
  mpfr_get_z(z.get_mpz_t(), t.get(), MPFR_RNDN);
  return z;
}

inline ComplexBall combine(const std::vector<ComplexBall>& v, const std::vector<Integer>& m) {
  ComplexBall s(Rational(0), v.front().prec());
  for (std::size_t i = 0; i < v.size(); ++i)
    if (m[i] != 0) s = s + ComplexBall(Rational(m[i]), v[i].prec()) * v[i];
  return s;
}

}  // namespace detail

/// Looks for m != 0 with max |m_i| <= bound and |sum m_i v_i| <= 2^(-prec/2).
inline RelationResult integer_relation(const std::vector<ComplexBall>& values, const Integer& bound, Bits prec) {
  const std::size_t n = values.size();
  if (n < 2) fail(ErrorKind::PreconditionViolated, "need at least two values");
  Mpfr limit(RAD_BITS);
  mpfr_set_ui_2exp(limit.get(), 1, -static_cast<long>(prec), MPFR_RNDN);
  bool complex = false;
  for (const auto& v : values) {
    if (mpfr_greater_p(v.re().rad().get(), limit.get()) || mpfr_greater_p(v.im().rad().get(), limit.get()))
      fail(ErrorKind::PrecisionTooLow, "value radius exceeds 2^-prec");
    complex = complex || !v.is_real_exactly();
  }

  IntMatrix rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    rows[i].assign(n, 0);
    rows[i][i] = 1;
    rows[i].push_back(detail::scaled_round(values[i].re(), prec));
    if (complex) rows[i].push_back(detail::scaled_round(values[i].im(), prec));
  }
  LllResult red = lll_reduce(rows);

  Mpfr eps(RAD_BITS);
  mpfr_set_ui_2exp(eps.get(), 1, -static_cast<long>(prec / 2), MPFR_RNDN);
  RelationResult out;
  std::optional<Integer> best_height;
  for (const auto& row : red.basis) {
    std::vector<Integer> m(row.begin(), row.begin() + static_cast<long>(n));
    Integer h = 0;
    for (const auto& c : m) h = std::max(h, Integer(abs(c)));
    if (h == 0 || h > bound) continue;
    ComplexBall r = detail::combine(values, m);
    if (mpfr_greater_p(r.mag().get(), eps.get())) continue;
    if (best_height && h >= *best_height) continue;
    auto first = std::find_if(m.begin(), m.end(), [](const Integer& c) { return c != 0; });
    if (*first < 0)
      for (auto& c : m) c = -c;
    best_height = h;
    out.found = true;
    out.coeffs = m;
    out.residual = r;
  }

  // An exact relation with |m_i| <= bound gives a lattice vector of squared norm
  // at most n bound^2 + cols (2 n bound)^2, since each rounded entry is off by at
  // most 1/2 + C rad <= 3/2.  Every nonzero lattice vector is at least min |b_i*|.
  Rational gs_min = *std::min_element(red.gs_norms_sq.begin(), red.gs_norms_sq.end());
  Integer nb = Integer(static_cast<unsigned long>(n)) * bound;
  Rational reach = Rational(nb * bound) + Rational(complex ? 2 : 1) * Rational(Integer(2 * nb) * Integer(2 * nb));
  Mpfr g = Mpfr::from_rational(gs_min, 64, MPFR_RNDD);
  mpfr_sqrt(g.get(), g.get(), MPFR_RNDD);
  out.certificate_norm = g.to_string(12, 'D');
  if (out.found) {
    out.label = "relation found";
    return out;
  }
  if (gs_min <= reach) fail(ErrorKind::PrecisionTooLow, "precision too low to exclude relations below the bound");
  out.excluded = true;
  out.label = "no relation found below bound at this precision";
  return out;
}

struct BaseRelation {
  RelationResult flat;
  std::vector<std::vector<Integer>> coeffs;  // coeffs[i][s]: a_s of value i
};

/// Coefficients sum_{s<t} a_s beta^s, flattened over {beta^s v_i}.  Needs
/// t <= deg beta so that the powers of beta stay independent over Q.
inline BaseRelation relation_over_base(const std::vector<ComplexBall>& values, const Base& base, int t,
                                       const Integer& bound, Bits prec) {
  if (t < 1) fail(ErrorKind::PreconditionViolated, "degree bound must be positive");
  if (t > base.beta.degree()) fail(ErrorKind::PreconditionViolated, "degree bound exceeds deg beta");
  Bits wp = prec + 16 + static_cast<Bits>(t) * 8;
  ComplexBall b = base.beta.refine_complex(wp);
  std::vector<ComplexBall> flat;
  for (const auto& v : values) {
    ComplexBall p(Rational(1), wp);
    for (int s = 0; s < t; ++s) {
      flat.push_back(p * v);
      p = p * b;
    }
  }
  BaseRelation out;
  out.flat = integer_relation(flat, bound, prec);
  if (out.flat.found) {
    out.coeffs.assign(values.size(), std::vector<Integer>(static_cast<std::size_t>(t)));
    for (std::size_t i = 0; i < values.size(); ++i)
      for (int s = 0; s < t; ++s) out.coeffs[i][static_cast<std::size_t>(s)] = out.flat.coeffs[i * t + s];
  }
  return out;
}

}  // namespace sturmian
