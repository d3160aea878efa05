#pragma once

// Certified complex root enclosures and small-degree factorization over Z.
//
// Roots are approximated by Aberth iteration and certified with Smith's
// inclusion theorem: with Weierstrass corrections W_i, the disks
// |z - z_i| <= n |W_i| contain all roots, and each connected component made
// of m disks contains exactly m roots.  We only accept configurations where
// the disks are pairwise disjoint, so each disk isolates one root.

#include <cmath>
#include <complex>
#include <numeric>
#include <optional>
#include <vector>

#include "ball.hpp"
#include "polynomial.hpp"

namespace sturmian {

inline constexpr int FACTOR_DEGREE_LIMIT = 16;

struct RootEnclosure {
  ComplexBall value;  ///< box around the disk; im is exactly 0 for certified real roots
  Mpfr radius;        ///< disk radius
  bool real = false;
};

namespace detail {

struct Cx {
  Mpfr re, im;
  explicit Cx(Bits p) : re(p), im(p) {}
};

inline Cx cx_from(const std::complex<double>& z, Bits p) {
  Cx r(p);
  mpfr_set_d(r.re.get(), z.real(), MPFR_RNDN);
  mpfr_set_d(r.im.get(), z.imag(), MPFR_RNDN);
  return r;
}

inline ComplexBall exact_ball(const Cx& z, Bits p) {
  Mpfr zero(RAD_BITS);
  return {Ball::from_mid_rad(z.re, zero, p), Ball::from_mid_rad(z.im, zero, p)};
}

inline Cx mid_of(const ComplexBall& b, Bits p) {
  Cx r(p);
  mpfr_set(r.re.get(), b.re().mid().get(), MPFR_RNDN);
  mpfr_set(r.im.get(), b.im().mid().get(), MPFR_RNDN);
  return r;
}

/// Initial approximations in double precision (Aberth).  Good enough as seeds.
inline std::vector<std::complex<double>> aberth_double(const IntPoly& p) {
  int n = p.degree();
  std::vector<std::complex<double>> a(static_cast<std::size_t>(n + 1));
  for (int i = 0; i <= n; ++i) a[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(i)].get_d();
  auto ev = [&](std::complex<double> z, std::complex<double>& dp) {
    std::complex<double> v = a[static_cast<std::size_t>(n)];
    dp = 0;
    for (int i = n - 1; i >= 0; --i) {
      dp = dp * z + v;
      v = v * z + a[static_cast<std::size_t>(i)];
    }
    return v;
  };
  double radius = cauchy_bound(p).get_d();
  radius = std::min(radius, 1e100);
  std::vector<std::complex<double>> z(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
    z[static_cast<std::size_t>(k)] = std::polar(radius * 0.5 + 0.1, 2.0 * M_PI * k / n + 0.4);
  for (int it = 0; it < 500; ++it) {
    double maxstep = 0;
    for (int i = 0; i < n; ++i) {
      std::complex<double> dp;
      std::complex<double> v = ev(z[static_cast<std::size_t>(i)], dp);
      if (dp == 0.0) dp = 1e-300;
      std::complex<double> ratio = v / dp;
      std::complex<double> s = 0;
      for (int j = 0; j < n; ++j)
        if (j != i) {
          std::complex<double> d = z[static_cast<std::size_t>(i)] - z[static_cast<std::size_t>(j)];
          if (d == 0.0) d = 1e-300;
          s += 1.0 / d;
        }
      std::complex<double> w = ratio / (1.0 - ratio * s);
      if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) w = 0;
      z[static_cast<std::size_t>(i)] -= w;
      maxstep = std::max(maxstep, std::abs(w) / std::max(1.0, std::abs(z[static_cast<std::size_t>(i)])));
    }
    if (maxstep < 1e-14) break;
  }
  return z;
}

/// Aberth iterations at MPFR precision via exact-center complex balls.
inline std::vector<ComplexBall> aberth_polish(const IntPoly& p, std::vector<ComplexBall> z, Bits prec, int iters) {
  int n = p.degree();
  IntPoly dp = derivative(p);
  for (auto& x : z) x = exact_ball(mid_of(x, prec), prec);
  for (int it = 0; it < iters; ++it) {
    bool small = true;
    for (int i = 0; i < n; ++i) {
      ComplexBall& zi = z[static_cast<std::size_t>(i)];
      ComplexBall v = eval(p, zi), d = eval(dp, zi);
      try {
        ComplexBall ratio = v / d;
        ComplexBall s(Rational(0), prec);
        for (int j = 0; j < n; ++j)
          if (j != i) s += ComplexBall(Rational(1), prec) / (zi - z[static_cast<std::size_t>(j)]);
        ComplexBall w = ratio / (ComplexBall(Rational(1), prec) - ratio * s);
        zi = exact_ball(mid_of(zi - w, prec), prec);
        // convergence: |w| tiny relative to precision
        Mpfr wm = w.mag();
        Mpfr zm = zi.mag();
        if (mpfr_cmp_ui(zm.get(), 1) < 0) mpfr_set_ui(zm.get(), 1, MPFR_RNDN);
        mpfr_mul_2si(zm.get(), zm.get(), -(prec - 16), MPFR_RNDN);
        if (mpfr_greater_p(wm.get(), zm.get())) small = false;
      } catch (const Error&) {
        small = false;  // derivative or difference not separated from 0 yet
        Cx c = mid_of(zi, prec);
        mpfr_nextabove(c.re.get());
        mpfr_nextabove(c.im.get());
        zi = exact_ball(c, prec);
      }
    }
    if (small) break;
  }
  return z;
}

}  // namespace detail

/// Certified enclosures of all roots of a square-free integer polynomial.
/// Each returned disk contains exactly one root.  Throws PrecisionExhausted if
/// certification fails up to max_prec.
inline std::vector<RootEnclosure> certified_roots(const IntPoly& p_in, Bits prec = 128, Bits max_prec = 1 << 14) {
  IntPoly p = primitive_part(p_in);
  int n = p.degree();
  if (n <= 0) return {};
  if (!is_squarefree(p)) fail(ErrorKind::PreconditionViolated, "certified_roots needs a square-free polynomial");
  if (n == 1) {
    Rational r = Rational(-p[0], p[1]);
    r.canonicalize();
    Ball b(r, prec);
    RootEnclosure e{ComplexBall(b), b.rad(), true};
    return {e};
  }
  std::vector<ComplexBall> z;
  for (const auto& s : detail::aberth_double(p)) z.push_back(detail::exact_ball(detail::cx_from(s, prec), prec));

  for (Bits bits = std::max<Bits>(prec, 64); bits <= max_prec; bits *= 2) {
    z = detail::aberth_polish(p, std::move(z), bits, 200);
    // Smith radii
    std::vector<Mpfr> rad;
    bool ok = true;
    ComplexBall lc(Rational(p.leading()), bits);
    for (int i = 0; i < n && ok; ++i) {
      ComplexBall prod = lc;
      for (int j = 0; j < n; ++j)
        if (j != i) prod = prod * (z[static_cast<std::size_t>(i)] - z[static_cast<std::size_t>(j)]);
      if (prod.contains_zero()) {
        ok = false;
        break;
      }
      ComplexBall w = eval(p, z[static_cast<std::size_t>(i)]) / prod;
      Mpfr r = w.mag();
      mpfr_mul_ui(r.get(), r.get(), static_cast<unsigned long>(n), MPFR_RNDU);
      rad.push_back(r);
    }
    if (ok) {
      for (int i = 0; i < n && ok; ++i)
        for (int j = i + 1; j < n && ok; ++j) {
          Mpfr sep = (z[static_cast<std::size_t>(i)] - z[static_cast<std::size_t>(j)]).mig();
          Mpfr s(RAD_BITS);
          mpfr_add(s.get(), rad[static_cast<std::size_t>(i)].get(), rad[static_cast<std::size_t>(j)].get(), MPFR_RNDU);
          if (!mpfr_greater_p(sep.get(), s.get())) ok = false;
        }
    }
    // Realness: a disk meeting the real axis whose mirror meets no other disk
    // holds a real root.  Disks away from the axis hold non-real roots.
    std::vector<RootEnclosure> out;
    if (ok) {
      for (int i = 0; i < n && ok; ++i) {
        const ComplexBall& zi = z[static_cast<std::size_t>(i)];
        const Mpfr& ri = rad[static_cast<std::size_t>(i)];
        bool meets_axis = mpfr_cmpabs(zi.im().mid().get(), ri.get()) <= 0;
        bool real = false;
        if (meets_axis) {
          real = true;
          ComplexBall mirror(zi.re(), -zi.im());
          for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            Mpfr sep = (mirror - z[static_cast<std::size_t>(j)]).mig();
            Mpfr s(RAD_BITS);
            mpfr_add(s.get(), ri.get(), rad[static_cast<std::size_t>(j)].get(), MPFR_RNDU);
            if (!mpfr_greater_p(sep.get(), s.get())) real = false;
          }
          if (!real) {
            ok = false;
            break;
          }
        }
        RootEnclosure e;
        e.radius = ri;
        e.real = real;
        Ball re = Ball::from_mid_rad(zi.re().mid(), ri, bits);
        Ball im = real ? Ball(bits) : Ball::from_mid_rad(zi.im().mid(), ri, bits);
        e.value = ComplexBall(re, im);
        out.push_back(std::move(e));
      }
    }
    if (ok) return out;
  }
  fail(ErrorKind::PrecisionExhausted, "root certification failed for " + to_string(p));
}

/// Irreducible factors over Z of a square-free primitive polynomial.  For
/// degree above FACTOR_DEGREE_LIMIT the polynomial is returned unsplit and
/// `complete` is set false.
struct Factorization {
  std::vector<IntPoly> factors;
  bool complete = true;
};

namespace detail {

inline std::optional<Integer> nearest_integer_if_certain(const Ball& b) {
  Mpfr lo = b.lower(), hi = b.upper();
  Mpfr width(RAD_BITS);
  mpfr_sub(width.get(), hi.get(), lo.get(), MPFR_RNDU);
  if (mpfr_cmp_d(width.get(), 0.5) >= 0) return std::nullopt;
  Mpfr r(b.prec());
  mpfr_round(r.get(), b.mid().get());
  Integer z;
  mpfr_get_z(z.get_mpz_t(), r.get(), MPFR_RNDN);
  return z;
}

}  // namespace detail

inline Factorization factor_squarefree(const IntPoly& p_in) {
  IntPoly p = squarefree_part(p_in);
  Factorization out;
  if (p.degree() <= 1) {
    if (p.degree() == 1) out.factors.push_back(p);
    return out;
  }
  if (p.degree() > FACTOR_DEGREE_LIMIT) {
    out.factors.push_back(p);
    out.complete = false;
    return out;
  }
  // Precision: enough to round lc * prod(x - r_i) coefficients.
  Bits bits = 128 + 4 * static_cast<Bits>(mpz_sizeinbase(content(p).get_mpz_t(), 2));
  for (const auto& c : p.coeffs()) bits = std::max<Bits>(bits, 96 + 3 * static_cast<Bits>(mpz_sizeinbase(c.get_mpz_t(), 2)) + 4 * p.degree());

  for (;; bits *= 2) {
    auto roots = certified_roots(p, bits);
    // group into conjugate-closed units
    std::vector<std::vector<std::size_t>> units;
    std::vector<bool> used(roots.size(), false);
    for (std::size_t i = 0; i < roots.size(); ++i) {
      if (used[i]) continue;
      used[i] = true;
      if (roots[i].real) {
        units.push_back({i});
        continue;
      }
      ComplexBall mirror(roots[i].value.re(), -roots[i].value.im());
      std::size_t partner = i;
      for (std::size_t j = 0; j < roots.size(); ++j)
        if (!used[j] && !roots[j].real && roots[j].value.overlaps(mirror)) {
          partner = j;
          break;
        }
      if (partner == i) fail(ErrorKind::PrecisionExhausted, "conjugate pairing failed");
      used[partner] = true;
      units.push_back({i, partner});
    }

    IntPoly rest = p;
    std::vector<bool> removed(units.size(), false);
    bool precision_short = false;
    std::size_t remaining_units = units.size();
    for (std::size_t size = 1; size <= remaining_units / 2 + 1 && rest.degree() > 1; ++size) {
      // enumerate subsets of `size` remaining units via index combinations
      std::vector<std::size_t> idx;
      for (std::size_t u = 0; u < units.size(); ++u)
        if (!removed[u]) idx.push_back(u);
      if (size >= idx.size()) break;
      std::vector<std::size_t> comb(size);
      std::iota(comb.begin(), comb.end(), 0);
      bool restart = false;
      while (true) {
        std::size_t deg = 0;
        for (auto k : comb) deg += units[idx[k]].size();
        if (2 * deg <= static_cast<std::size_t>(rest.degree())) {
          ComplexBall acc_lc(Rational(rest.leading()), bits);
          std::vector<ComplexBall> poly{acc_lc};  // coefficients low->high of lc * prod(x - r)
          for (auto k : comb)
            for (auto r : units[idx[k]]) {
              std::vector<ComplexBall> next(poly.size() + 1, ComplexBall(Rational(0), bits));
              for (std::size_t t = 0; t < poly.size(); ++t) {
                next[t + 1] += poly[t];
                next[t] += -(poly[t] * roots[r].value);
              }
              poly = std::move(next);
            }
          std::vector<Integer> cand;
          bool integral = true;
          for (const auto& c : poly) {
            if (!c.im().contains_zero()) {
              integral = false;
              break;
            }
            auto z = detail::nearest_integer_if_certain(c.re());
            if (!z) {
              precision_short = true;
              integral = false;
              break;
            }
            if (!c.re().contains(Rational(*z))) {
              integral = false;
              break;
            }
            cand.push_back(*z);
          }
          if (integral) {
            IntPoly g = primitive_part(IntPoly(cand));
            if (g.degree() >= 1 && divides(g, rest)) {
              out.factors.push_back(g);
              rest = exact_quotient(rest, g);
              for (auto k : comb) removed[idx[k]] = true;
              remaining_units -= size;
              restart = true;
              break;
            }
          }
        }
        // next combination
        std::size_t i = size;
        while (i > 0 && comb[i - 1] == idx.size() - size + i - 1) --i;
        if (i == 0) break;
        ++comb[i - 1];
        for (std::size_t j = i; j < size; ++j) comb[j] = comb[j - 1] + 1;
      }
      if (restart) size = 0;  // retry from singletons on the cofactor
    }
    if (precision_short && rest.degree() > 1 && bits < (1 << 14)) {
      out.factors.clear();
      continue;
    }
    if (rest.degree() >= 1) out.factors.push_back(primitive_part(rest));
    return out;
  }
}

/// True iff p is irreducible over Q (exact for degree <= FACTOR_DEGREE_LIMIT).
inline std::optional<bool> is_irreducible(const IntPoly& p) {
  if (p.degree() <= 0) return false;
  if (!is_squarefree(p)) return false;
  auto f = factor_squarefree(p);
  if (!f.complete) return std::nullopt;
  return f.factors.size() == 1;
}

}  // namespace sturmian
