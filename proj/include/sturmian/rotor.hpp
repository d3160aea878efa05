#pragma once

// Contracted rotations f(x) = {lambda x + delta} on [0,1): lifting, rotation
// number, inversion of the offset, attractor orbits, the xi / xi' series and
// the decomposition of limit points y = z + xi_0 - xi_{-x}.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "words.hpp"

namespace sturmian {

namespace detail {

inline bool is_rational_like(const RealLike& a) {
  return std::holds_alternative<Rational>(a) ||
         (std::holds_alternative<AlgebraicNumber>(a) && std::get<AlgebraicNumber>(a).is_rational());
}

inline Bits ball_prec(const RealLike& a, const RealLike& b, Bits fallback) {
  Bits p = fallback;
  if (auto x = std::get_if<Ball>(&a)) p = std::max(p, x->prec());
  if (auto x = std::get_if<Ball>(&b)) p = std::max(p, x->prec());
  return p;
}

inline RealLike rl_add(const RealLike& a, const RealLike& b, Bits prec = 256) {
  if (is_rational_like(a) && is_rational_like(b)) return Rational(*exact_rational(a) + *exact_rational(b));
  if (is_exact(a) && is_exact(b)) return to_algebraic(a) + to_algebraic(b);
  Bits p = ball_prec(a, b, prec);
  return to_ball(a, p) + to_ball(b, p);
}

inline RealLike rl_mul(const RealLike& a, const RealLike& b, Bits prec = 256) {
  if (is_rational_like(a) && is_rational_like(b)) return Rational(*exact_rational(a) * *exact_rational(b));
  if (is_exact(a) && is_exact(b)) return to_algebraic(a) * to_algebraic(b);
  Bits p = ball_prec(a, b, prec);
  return to_ball(a, p) * to_ball(b, p);
}

inline RealLike rl_neg(const RealLike& a) {
  if (auto q = std::get_if<Rational>(&a)) return Rational(-*q);
  if (auto x = std::get_if<AlgebraicNumber>(&a)) return -*x;
  return -std::get<Ball>(a);
}

inline RealLike rl_int(const Integer& z) { return Rational(z); }

/// Sign of a - b: exact for exact inputs, Indeterminate for overlapping balls.
inline int rl_compare(const RealLike& a, const RealLike& b) {
  if (is_exact(a) && is_exact(b)) return compare_exact(to_expr(a), to_expr(b));
  Bits p = ball_prec(a, b, 256);
  auto s = (to_ball(a, p) - to_ball(b, p)).sign();
  if (!s || *s == 0) fail(ErrorKind::Indeterminate, "comparison of overlapping balls");
  return *s;
}

}  // namespace detail

/// f(x) = {lambda x + delta} with 0 < lambda, delta < 1 and lambda + delta > 1.
struct ContractedRotation {
  RealLike lambda;
  RealLike delta;
  std::optional<RealLike> theta;  // rotation number, when known exactly

  static ContractedRotation make(const RealLike& lambda, const RealLike& delta) {
    const RealLike zero = Rational(0), one = Rational(1);
    if (detail::rl_compare(lambda, zero) <= 0 || detail::rl_compare(lambda, one) >= 0)
      fail(ErrorKind::PreconditionViolated, "lambda must lie in (0,1)");
    if (detail::rl_compare(delta, zero) <= 0 || detail::rl_compare(delta, one) >= 0)
      fail(ErrorKind::PreconditionViolated, "delta must lie in (0,1)");
    if (detail::rl_compare(detail::rl_add(lambda, delta), one) <= 0)
      fail(ErrorKind::PreconditionViolated, "lambda + delta must exceed 1");
    return {lambda, delta, std::nullopt};
  }

  /// (1 - delta) / lambda
  Ball breakpoint(Bits prec) const {
    return (Ball(1L, prec) - to_ball(delta, prec)) / to_ball(lambda, prec);
  }
};

struct Step {
  RealLike value;
  int branch = 0;  // 1 when lambda x + delta >= 1
};

inline Step apply_f(const ContractedRotation& cr, const RealLike& x) {
  if (detail::rl_compare(x, Rational(0)) < 0 || detail::rl_compare(x, Rational(1)) >= 0)
    fail(ErrorKind::PreconditionViolated, "x must lie in [0,1)");
  RealLike v = detail::rl_add(detail::rl_mul(cr.lambda, x), cr.delta);
  Integer fl = floor_exact(v);
  return {detail::rl_add(v, detail::rl_int(-fl)), fl == 1 ? 1 : 0};
}

/// F(x) = lambda {x} + delta + floor(x).
inline RealLike lift_F(const ContractedRotation& cr, const RealLike& x) {
  Integer fl = floor_exact(x);
  RealLike fr = detail::rl_add(x, detail::rl_int(-fl));
  return detail::rl_add(detail::rl_add(detail::rl_mul(cr.lambda, fr), cr.delta), detail::rl_int(fl));
}

namespace detail {

/// One orbit of F from 0 under directed rounding: F^n(0) = k + y with 0 <= y < 1.
struct DirectedOrbit {
  Mpfr lambda, delta, y, t;
  long k = 0;
  mpfr_rnd_t rnd;
  DirectedOrbit(const Mpfr& l, const Mpfr& d, Bits prec, mpfr_rnd_t r)
      : lambda(prec), delta(prec), y(prec), t(prec), rnd(r) {
    mpfr_set(lambda.get(), l.get(), r);
    mpfr_set(delta.get(), d.get(), r);
  }
  void step() {
    mpfr_mul(t.get(), lambda.get(), y.get(), rnd);
    mpfr_add(y.get(), t.get(), delta.get(), rnd);
    if (mpfr_cmp_ui(y.get(), 1) >= 0) {
      mpfr_sub_ui(y.get(), y.get(), 1, rnd);
      ++k;
    }
  }
};

inline std::pair<Mpfr, Mpfr> endpoints(const RealLike& v, Bits prec) {
  Ball b = to_ball(v, prec);
  return {b.lower(), b.upper()};
}

}  // namespace detail

/// Enclosure of theta from F^n(0) with |F^n(0) - n theta| <= 1.
inline Ball rotation_number(const ContractedRotation& cr, long n, Bits prec = 128) {
  if (n < 1) fail(ErrorKind::PreconditionViolated, "n must be at least 1");
  auto [llo, lhi] = detail::endpoints(cr.lambda, prec);
  auto [dlo, dhi] = detail::endpoints(cr.delta, prec);
  detail::DirectedOrbit lo(llo, dlo, prec, MPFR_RNDD), hi(lhi, dhi, prec, MPFR_RNDU);
  for (long i = 0; i < n; ++i) {
    lo.step();
    hi.step();
  }
  Mpfr a(prec + 64), b(prec + 64);
  mpfr_add_si(a.get(), lo.y.get(), lo.k - 1, MPFR_RNDD);
  mpfr_div_si(a.get(), a.get(), n, MPFR_RNDD);
  mpfr_add_si(b.get(), hi.y.get(), hi.k + 1, MPFR_RNDU);
  mpfr_div_si(b.get(), b.get(), n, MPFR_RNDU);
  return Ball::from_endpoints(a, b, prec);
}

namespace detail {

/// floor(n theta) for n = 0, 1, 2, ... computed on demand.
class FloorTable {
 public:
  explicit FloorTable(const RealLike& theta, long max_n) : F_(theta, Rational(0), max_n) { v_.push_back(0); }
  const Integer& operator()(long n) {
    while (static_cast<long>(v_.size()) <= n) v_.push_back(F_(static_cast<long>(v_.size())));
    return v_[static_cast<std::size_t>(n)];
  }

 private:
  AffineFloor F_;
  std::vector<Integer> v_;
};

}  // namespace detail

struct OffsetSearch {
  Ball delta;
  long steps = 0;       // bisection steps
  long max_orbit = 0;   // longest orbit needed to decide a step
};

/// The unique delta with lambda + delta > 1 and rotation number theta, to width tol.
/// Each bisection step compares floor(F^n(0)) with floor(n theta): they agree for
/// all n exactly at the target offset, and the first disagreement shows the side.
inline OffsetSearch delta_for_rotation_detail(const RealLike& lambda, const RealLike& theta, const Rational& tol,
                                              long max_iter = 10000000) {
  if (tol <= 0) fail(ErrorKind::PreconditionViolated, "tol must be positive");
  if (!is_exact(lambda) || !is_exact(theta)) fail(ErrorKind::PreconditionViolated, "lambda and theta must be exact");
  check_unit_interval(theta);
  if (exact_rational(theta)) fail(ErrorKind::PreconditionViolated, "rotation number must be irrational");
  check_unit_interval(lambda);

  // bits of 1/tol
  Bits wp = std::max<Bits>(64, static_cast<Bits>(mpz_sizeinbase(tol.get_den_mpz_t(), 2)) -
                                   static_cast<Bits>(mpz_sizeinbase(tol.get_num_mpz_t(), 2)) + 2) +
            64;
  OffsetSearch out;
  Ball one_minus = Ball(1L, wp) - to_ball(lambda, wp);
  Mpfr lo(wp), hi(wp);
  mpfr_set(lo.get(), one_minus.lower().get(), MPFR_RNDD);
  mpfr_set_ui(hi.get(), 1, MPFR_RNDN);
  Mpfr tol_m = Mpfr::from_rational(tol, 64, MPFR_RNDD);
  detail::FloorTable G(theta, max_iter + 1);

  auto width_ok = [&] {
    Mpfr w(wp);
    mpfr_sub(w.get(), hi.get(), lo.get(), MPFR_RNDU);
    return mpfr_lessequal_p(w.get(), tol_m.get());
  };
  while (!width_ok()) {
    Mpfr mid(wp + 1);
    mpfr_add(mid.get(), lo.get(), hi.get(), MPFR_RNDN);
    mpfr_div_2ui(mid.get(), mid.get(), 1, MPFR_RNDN);
    int side = 0;
    for (Bits p = wp + 64; side == 0; p *= 2) {
      if (p > default_policy().ceiling) fail(ErrorKind::PrecisionExhausted, "orbit floors undecided at the ceiling");
      auto [llo, lhi] = detail::endpoints(lambda, p);
      detail::DirectedOrbit a(llo, mid, p, MPFR_RNDD), b(lhi, mid, p, MPFR_RNDU);
      bool ambiguous = false;
      for (long n = 1; !ambiguous; ++n) {
        if (n > max_iter) fail(ErrorKind::TolUnreachable, "orbit length ceiling reached");
        a.step();
        b.step();
        const Integer& g = G(n);
        if (a.k > g) side = 1;
        else if (b.k < g) side = -1;
        else if (a.k != b.k) ambiguous = true;
        if (side != 0) {
          out.max_orbit = std::max(out.max_orbit, n);
          break;
        }
      }
    }
    // side > 0: rotation number above theta, so the target lies below mid
    if (side > 0) mpfr_set(hi.get(), mid.get(), MPFR_RNDN);
    else mpfr_set(lo.get(), mid.get(), MPFR_RNDN);
    ++out.steps;
  }
  out.delta = Ball::from_endpoints(lo, hi, wp);
  return out;
}

inline Ball delta_for_rotation(const RealLike& lambda, const RealLike& theta, const Rational& tol,
                               long max_iter = 10000000) {
  return delta_for_rotation_detail(lambda, theta, tol, max_iter).delta;
}

/// Contracted rotation with slope lambda and the offset for rotation number theta.
inline ContractedRotation for_rotation(const RealLike& lambda, const RealLike& theta, const Rational& tol) {
  ContractedRotation cr = ContractedRotation::make(lambda, RealLike(delta_for_rotation(lambda, theta, tol)));
  cr.theta = theta;
  return cr;
}

// ---- xi and xi' ----

/// d_n = ceil(x + (n+1) theta) - ceil(x + n theta), n = 1..N.
inline Word xi_digits(const RealLike& x, const RealLike& theta, std::size_t N) {
  // ceil(v) = -floor(-v)
  detail::AffineFloor F(detail::rl_neg(theta), detail::rl_neg(x), static_cast<long>(N) + 2);
  std::u32string s(N, 0);
  Integer prev = F(1);
  for (std::size_t j = 0; j < N; ++j) {
    Integer cur = F(static_cast<long>(j) + 2);
    s[j] = static_cast<char32_t>(Integer(prev - cur).get_si());
    prev = cur;
  }
  return Word(Word::binary_alphabet(), std::move(s), "xi ceiling digits");
}

/// d'_n = floor(x + (n+1) theta) - floor(x + n theta), n = 1..N.
inline Word xi_prime_digits(const RealLike& x, const RealLike& theta, std::size_t N) {
  detail::AffineFloor F(theta, x, static_cast<long>(N) + 2);
  std::u32string s(N, 0);
  Integer prev = F(1);
  for (std::size_t j = 0; j < N; ++j) {
    Integer cur = F(static_cast<long>(j) + 2);
    s[j] = static_cast<char32_t>(Integer(cur - prev).get_si());
    prev = cur;
  }
  return Word(Word::binary_alphabet(), std::move(s), "xi' floor digits");
}

namespace detail {

inline std::size_t xi_terms(const RealLike& lambda, Bits prec) {
  double l = to_ball(lambda, 64).upper().to_double();
  return static_cast<std::size_t>(std::ceil((static_cast<double>(prec) + 4) / -std::log2(l))) + 1;
}

/// sum_{n=1}^{N} d_n lambda^n plus the tail lambda^{N+1} / (1 - lambda).
inline Ball digit_series(const std::vector<int>& d, const RealLike& lambda, Bits prec) {
  Bits wp = prec + 32;
  Ball l = to_ball(lambda, wp);
  Ball acc(wp);
  for (std::size_t j = d.size(); j-- > 0;) acc = (acc + Ball(static_cast<long>(d[j]), wp)) * l;
  Ball tail = pow(l, d.size() + 1) / (Ball(1L, wp) - l);
  Mpfr t(RAD_BITS);
  mpfr_set(t.get(), tail.upper().get(), MPFR_RNDU);
  acc.add_error(t);
  return acc;
}

inline std::vector<int> to_ints(const Word& w) {
  std::vector<int> d(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) d[i] = static_cast<int>(w[i]);
  return d;
}

}  // namespace detail

inline Ball xi(const RealLike& x, const RealLike& lambda, const RealLike& theta, Bits prec = 128) {
  return detail::digit_series(detail::to_ints(xi_digits(x, theta, detail::xi_terms(lambda, prec))), lambda, prec);
}

inline Ball xi_prime(const RealLike& x, const RealLike& lambda, const RealLike& theta, Bits prec = 128) {
  return detail::digit_series(detail::to_ints(xi_prime_digits(x, theta, detail::xi_terms(lambda, prec))), lambda,
                              prec);
}

struct XiIdentities {
  bool ceiling_is_coding = false;      // xi digits == coding of -x-theta by 1-theta
  bool ceiling_is_complement = false;  // xi digits == 1 - that coding
  bool floor_is_coding = false;        // xi' digits == coding of x+theta by theta
  std::optional<std::size_t> first_ceiling_mismatch, first_floor_mismatch;
};

/// Digit n of each series against position n of the codings (index origin 1).
inline XiIdentities xi_digit_identities(const RealLike& x, const RealLike& theta, std::size_t N) {
  XiIdentities r;
  RealLike one_minus = detail::rl_add(Rational(1), detail::rl_neg(theta));
  RealLike xc = frac(detail::rl_add(detail::rl_neg(x), detail::rl_neg(theta)));
  RealLike xf = frac(detail::rl_add(x, theta));
  Word ceil_d = xi_digits(x, theta, N), floor_d = xi_prime_digits(x, theta, N);
  Word ceil_c = theta_coding({one_minus, xc, 1}, N), floor_c = theta_coding({theta, xf, 1}, N);
  r.ceiling_is_coding = r.ceiling_is_complement = r.floor_is_coding = true;
  for (std::size_t i = 0; i < N; ++i) {
    if (ceil_d[i] != ceil_c[i]) {
      r.ceiling_is_coding = false;
      if (!r.first_ceiling_mismatch) r.first_ceiling_mismatch = i + 1;
    }
    if (ceil_d[i] == ceil_c[i]) r.ceiling_is_complement = false;
    if (floor_d[i] != floor_c[i]) {
      r.floor_is_coding = false;
      if (!r.first_floor_mismatch) r.first_floor_mismatch = i + 1;
    }
  }
  return r;
}

// ---- attractor ----

struct AttractorSample {
  std::vector<Ball> points;
  long burn_in = 0;
  Ball depth_bound;  // lambda^burn_in
  Word itinerary;    // branch taken when f is applied to each point
  Bits precision_used = 0;
};

/// f^{burn_in}(0), ..., f^{burn_in+N-1}(0) with their branches.
inline AttractorSample attractor_sample(const ContractedRotation& cr, long burn_in, std::size_t N, Bits prec = 128) {
  if (burn_in < 1 || N < 1) fail(ErrorKind::PreconditionViolated, "burn_in and N must be positive");
  bool exact = is_exact(cr.lambda) && is_exact(cr.delta);
  Bits p = prec;
  if (auto d = std::get_if<Ball>(&cr.delta)) p = std::max(p, d->prec());
  if (auto l = std::get_if<Ball>(&cr.lambda)) p = std::max(p, l->prec());
  while (true) {
    Ball l = to_ball(cr.lambda, p), d = to_ball(cr.delta, p), one(1L, p);
    Ball y(0L, p);
    AttractorSample s;
    s.burn_in = burn_in;
    s.depth_bound = pow(l, static_cast<unsigned long>(burn_in));
    std::u32string its;
    bool ambiguous = false;
    long total = burn_in + static_cast<long>(N);
    for (long k = 0; k < total; ++k) {
      Ball v = l * y + d;
      int branch;
      if (mpfr_cmp_ui(v.lower().get(), 1) >= 0) branch = 1;
      else if (mpfr_cmp_ui(v.upper().get(), 1) < 0) branch = 0;
      else {
        ambiguous = true;
        break;
      }
      if (k >= burn_in) {
        s.points.push_back(y);
        its.push_back(static_cast<char32_t>(branch));
      }
      y = branch ? v - one : v;
    }
    if (!ambiguous) {
      s.itinerary = Word(Word::binary_alphabet(), std::move(its), "attractor itinerary");
      s.precision_used = p;
      return s;
    }
    if (!exact || p * 2 > default_policy().ceiling)
      fail(ErrorKind::ItineraryAmbiguous, "orbit point too close to the breakpoint");
    p *= 2;
  }
}

// ---- decomposition of limit points ----

struct Decomposition {
  bool second_form = false;
  Ball x_enclosure;                  // conjugacy parameter x
  std::optional<long> x_orbit_index;  // m when x = {m theta} exactly
  Integer z;
  Ball residual;  // |y - z - xi_0 + xi_{-x}|
  long m = 0;     // second form: the orbit index
  std::string gamma_note;
  Word itinerary;
};

namespace detail {

/// Rotation points {k theta}, k in [k0, k1], with exact cyclic order.
struct CirclePoint {
  long k;
  Integer shift;  // point = k theta + shift in [0,1)
  double approx;
};

inline std::vector<CirclePoint> sorted_points(const RealLike& theta, FloorTable& G, long k0, long k1) {
  std::vector<CirclePoint> pts;
  double td = to_ball(theta, 128).to_double();
  for (long k = k0; k <= k1; ++k) {
    Integer sh = k >= 0 ? Integer(-G(k)) : Integer(G(-k) + 1);  // {-j theta} = ceil(j theta) - j theta
    double a = static_cast<double>(k) * td + sh.get_d();
    pts.push_back({k, sh, a});
  }
  std::sort(pts.begin(), pts.end(), [](const CirclePoint& a, const CirclePoint& b) { return a.approx < b.approx; });
  for (std::size_t i = 1; i < pts.size(); ++i) {
    // (k_i - k_{i-1}) theta + (shift_i - shift_{i-1}) > 0, exactly
    Integer u = pts[i].shift - pts[i - 1].shift, v = pts[i].k - pts[i - 1].k;
    if (sign_linear(u, v, theta) <= 0) fail(ErrorKind::ValidationError, "rotation points out of order");
  }
  return pts;
}

}  // namespace detail

/// Writes y = z + xi_0 - xi_{-x}: the itinerary of y over N symbols pins x to a
/// cylinder arc; the arc is split at the points {m theta}, m <= depth + 1, and
/// the candidate with the smallest residual wins.  A winning left limit at a
/// point {m theta} is reported as the second form.
inline Decomposition decompose_limit_point(const ContractedRotation& cr, const Ball& y, std::size_t N,
                                           Bits prec = 128) {
  if (!cr.theta) fail(ErrorKind::PreconditionViolated, "the rotation number must be known exactly");
  const RealLike& theta = *cr.theta;
  Bits wp = prec + 32;
  Decomposition out;

  // itinerary of y
  {
    Ball l = to_ball(cr.lambda, std::max(wp, y.prec())), d = to_ball(cr.delta, std::max(wp, y.prec()));
    Ball v = y, one(1L, v.prec());
    std::u32string s;
    for (std::size_t k = 0; k < N; ++k) {
      Ball t = l * v + d;
      if (mpfr_cmp_ui(t.lower().get(), 1) >= 0) {
        s.push_back(1);
        v = t - one;
      } else if (mpfr_cmp_ui(t.upper().get(), 1) < 0) {
        s.push_back(0);
        v = t;
      } else {
        fail(ErrorKind::ItineraryAmbiguous, "symbol " + std::to_string(k) + " undecided");
      }
    }
    out.itinerary = Word(Word::binary_alphabet(), std::move(s), "itinerary");
  }

  long Nl = static_cast<long>(N);
  std::size_t depth = std::max(N, detail::xi_terms(cr.lambda, prec));
  long D = static_cast<long>(depth);
  detail::FloorTable G(theta, 2 * (Nl + D) + 8);

  // cylinder: u_n(t) = 1 iff t in [{-n theta}, {-(n-1) theta}), n = 1..N
  auto cyl = detail::sorted_points(theta, G, -Nl, 0);
  std::size_t M = cyl.size();
  std::vector<std::size_t> rank(M);
  for (std::size_t i = 0; i < M; ++i) rank[static_cast<std::size_t>(-cyl[i].k)] = i;
  auto cdist = [M](std::size_t a, std::size_t b) { return (b + M - a) % M; };
  std::optional<std::size_t> gap;
  for (std::size_t g = 0; g < M; ++g) {
    bool ok = true;
    for (long n = 1; n <= Nl && ok; ++n) {
      std::size_t a = rank[static_cast<std::size_t>(n)], b = rank[static_cast<std::size_t>(n - 1)];
      bool inside = cdist(a, g) < cdist(a, b);
      ok = inside == (out.itinerary[static_cast<std::size_t>(n - 1)] == 1);
    }
    if (ok) {
      if (gap) fail(ErrorKind::ValidationError, "two cylinder arcs match");
      gap = g;
    }
  }
  if (!gap) fail(ErrorKind::NotOnAttractor, "itinerary is not a rotation coding");
  const auto& A = cyl[*gap];
  const auto& B = cyl[(*gap + 1) % M];
  // arc [A, B) on the circle; B may wrap through 0
  auto pos = [&](long k, const Integer& sh) { return Expr(Rational(k)) * to_expr(theta) + Expr(Rational(sh)); };
  Expr a_e = pos(A.k, A.shift);
  Expr b_e = (*gap + 1 == M) ? Expr(Rational(1)) + pos(B.k, B.shift) : pos(B.k, B.shift);

  // split points {m theta} inside [A, B), unwrapped past 1 when the arc wraps
  struct Split {
    long m;
    Expr at;
    double approx;
  };
  std::vector<Split> splits;
  double td = to_ball(theta, 128).to_double();
  for (long m = 0; m <= D + 1; ++m) {
    Integer sh = -G(m);
    for (int lift = 0; lift <= 1; ++lift) {
      Expr e = pos(m, Integer(sh + lift));
      if (compare_exact(e, a_e) >= 0 && compare_exact(e, b_e) < 0)
        splits.push_back({m, e, static_cast<double>(m) * td + sh.get_d() + lift});
    }
  }
  std::sort(splits.begin(), splits.end(), [](const Split& a, const Split& b) { return a.approx < b.approx; });

  // xi_{-x} digits e_n = floor(x - n theta) - floor(x - (n+1) theta), n = 1..D
  auto series_at_point = [&](long m, bool left) {
    // x = m theta - G(m); floor(x - j theta) = G(m - j) - G(m), minus 1 from the left when m = j
    auto fl = [&](long j) {
      long k = m - j;
      Integer v = k >= 0 ? G(k) : Integer(-G(-k) - 1);
      v -= G(m);
      if (left && k == 0) v -= 1;
      return v;
    };
    std::vector<int> d(depth);
    for (long n = 1; n <= D; ++n) d[static_cast<std::size_t>(n - 1)] = static_cast<int>(Integer(fl(n) - fl(n + 1)).get_si());
    return detail::digit_series(d, cr.lambda, wp);
  };
  auto series_at_ball = [&](const Ball& x) {
    Ball t = to_ball(theta, wp);
    std::vector<int> d(depth);
    auto fl = [&](long j) {
      Ball v = x - Ball(j, wp) * t;
      Integer lo = floor_q(v.lower().to_rational()), hi = floor_q(v.upper().to_rational());
      if (lo != hi) fail(ErrorKind::ItineraryAmbiguous, "sub-arc digit undecided");
      return lo;
    };
    for (long n = 1; n <= D; ++n) d[static_cast<std::size_t>(n - 1)] = static_cast<int>(Integer(fl(n) - fl(n + 1)).get_si());
    return detail::digit_series(d, cr.lambda, wp);
  };

  Ball xi0 = series_at_point(0, false);
  struct Candidate {
    Ball x;
    std::optional<long> m;
    bool left;
    Ball xi_mx;
  };
  std::vector<Candidate> cands;
  Ball a_b = a_e.enclose(wp).re(), b_b = b_e.enclose(wp).re();
  std::vector<Ball> bounds{a_b};
  for (const auto& s : splits) {
    Ball xb = s.at.enclose(wp).re();
    Ball xr = xb - Ball(floor_exact(s.at), wp);
    cands.push_back({xr, s.m, false, series_at_point(s.m, false)});
    if (compare_exact(s.at, a_e) > 0) cands.push_back({xr, s.m, true, series_at_point(s.m, true)});
    bounds.push_back(xb);
  }
  bounds.push_back(b_b);
  for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
    if (!bounds[i].certainly_less(bounds[i + 1])) continue;  // empty sub-arc (split at A)
    Ball mid = mul_2exp(bounds[i] + bounds[i + 1], -1);
    Ball midr = mid;
    if (mpfr_cmp_ui(mid.mid().get(), 1) >= 0) midr = mid - Ball(1L, wp);
    Ball hull_x = hull(bounds[i], bounds[i + 1]);
    if (mpfr_cmp_ui(mid.mid().get(), 1) >= 0) hull_x = hull_x - Ball(1L, wp);
    cands.push_back({hull_x, std::nullopt, false, series_at_ball(midr)});
  }

  std::optional<std::size_t> best;
  std::vector<Ball> residuals;
  std::vector<Integer> zs;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    Ball base = y.with_prec(wp) - xi0 + cands[i].xi_mx;
    Integer z = floor_q(Rational(base.mid().to_rational() + Rational(1, 2)));
    Ball r = abs(base - Ball(z, wp));
    residuals.push_back(r);
    zs.push_back(z);
    if (!best || mpfr_less_p(r.upper().get(), residuals[*best].upper().get())) best = i;
  }
  if (!best) fail(ErrorKind::NotOnAttractor, "no candidate parameter");
  Mpfr tol(RAD_BITS);
  mpfr_set_ui_2exp(tol.get(), 1, -static_cast<long>(prec / 2), MPFR_RNDN);
  if (mpfr_greater_p(residuals[*best].lower().get(), tol.get()))
    fail(ErrorKind::NotOnAttractor, "residual above 2^-(prec/2)");
  const Candidate& c = cands[*best];
  out.x_enclosure = c.x;
  out.z = zs[*best];
  out.residual = residuals[*best];
  if (c.left) {
    out.second_form = true;
    out.m = *c.m;
    out.gamma_note = "y = gamma + (1 - beta^-m) xi'_0 with gamma unevaluated";
  } else {
    out.x_orbit_index = c.m;
  }
  return out;
}

}  // namespace sturmian
