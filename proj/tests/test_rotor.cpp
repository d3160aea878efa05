#include <catch_amalgamated.hpp>

#include <functional>
#include <random>

#include <sturmian/evalnum.hpp>
#include <sturmian/rotor.hpp>

using namespace sturmian;

namespace {

const RealLike golden = parse_algebraic("quad:(3-sqrt(5))/2");
const RealLike inv_phi = parse_algebraic("quad:(-1+sqrt(5))/2");
const RealLike sqrt2m1 = parse_algebraic("quad:(-1+sqrt(2))/1");

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::UnknownKind;
}

Rational pow2(long e) {
  Rational q(1);
  if (e >= 0) mpz_mul_2exp(q.get_num_mpz_t(), q.get_num_mpz_t(), static_cast<unsigned long>(e));
  else mpz_mul_2exp(q.get_den_mpz_t(), q.get_den_mpz_t(), static_cast<unsigned long>(-e));
  q.canonicalize();
  return q;
}

// (a + b sqrt(d)) / c in MPFR
Mpfr quad(long a, long b, long d, long c, Bits prec) {
  Mpfr r(prec);
  mpfr_sqrt_ui(r.get(), static_cast<unsigned long>(d), MPFR_RNDN);
  mpfr_mul_si(r.get(), r.get(), b, MPFR_RNDN);
  mpfr_add_si(r.get(), r.get(), a, MPFR_RNDN);
  mpfr_div_si(r.get(), r.get(), c, MPFR_RNDN);
  return r;
}

// ceil(x + n theta) and floor(x + n theta) straight from MPFR
long mpfr_round_at(const Mpfr& x, const Mpfr& t, long n, bool up) {
  Mpfr y(t.prec());
  mpfr_mul_si(y.get(), t.get(), n, MPFR_RNDN);
  mpfr_add(y.get(), y.get(), x.get(), MPFR_RNDN);
  if (up) mpfr_ceil(y.get(), y.get());
  else mpfr_floor(y.get(), y.get());
  return mpfr_get_si(y.get(), MPFR_RNDN);
}

// sum_{n=1}^{terms} (ceil(x+(n+1)t) - ceil(x+nt)) l^n
Mpfr mpfr_xi(const Mpfr& x, const Mpfr& t, const Mpfr& l, long terms) {
  Bits p = t.prec();
  Mpfr s(p), pw(p);
  mpfr_set(pw.get(), l.get(), MPFR_RNDN);
  for (long n = 1; n <= terms; ++n) {
    long d = mpfr_round_at(x, t, n + 1, true) - mpfr_round_at(x, t, n, true);
    if (d) mpfr_add(s.get(), s.get(), pw.get(), MPFR_RNDN);
    mpfr_mul(pw.get(), pw.get(), l.get(), MPFR_RNDN);
  }
  return s;
}

bool contains(const Ball& b, const Mpfr& x) {
  return mpfr_lessequal_p(b.lower().get(), x.get()) && mpfr_lessequal_p(x.get(), b.upper().get());
}

bool overlaps(const Ball& a, const Ball& b) {
  return mpfr_lessequal_p(a.lower().get(), b.upper().get()) && mpfr_lessequal_p(b.lower().get(), a.upper().get());
}

double width(const Ball& b) {
  Mpfr w(64);
  mpfr_sub(w.get(), b.upper().get(), b.lower().get(), MPFR_RNDU);
  return w.to_double();
}

RealLike frac_n_theta(long n, const RealLike& t) {
  return frac(RealLike(to_algebraic(t) * AlgebraicNumber::from_integer(n)));
}

// offset sharp enough to reproduce `len` steps of the orbit of 0
ContractedRotation sharp(const RealLike& lambda, const RealLike& t, long len) {
  return for_rotation(lambda, t, pow2(-(2 * len + 40)));
}

}  // namespace

TEST_CASE("lift commutes with the circle map and is monotone", "[rotor]") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> num(-5000, 5000), den(1, 997);
  ContractedRotation cr = ContractedRotation::make(Rational(3, 5), Rational(7, 10));
  Rational l(3, 5), d(7, 10);
  std::vector<Rational> xs;
  for (int i = 0; i < 1000; ++i) {
    Rational x(num(rng), den(rng));
    x.canonicalize();
    xs.push_back(x);
    Rational fl = floor_q(x), fr = x - fl;
    Rational expect = l * fr + d + fl;
    RealLike F = lift_F(cr, x);
    REQUIRE(std::get<Rational>(F) == expect);
    // F(x + 1) = F(x) + 1
    REQUIRE(std::get<Rational>(lift_F(cr, Rational(x + 1))) == expect + 1);
    // F mod 1 = f(x mod 1)
    Step s = apply_f(cr, fr);
    REQUIRE(std::get<Rational>(s.value) == expect - floor_q(expect));
    REQUIRE(s.branch == (l * fr + d >= 1 ? 1 : 0));
  }
  std::sort(xs.begin(), xs.end());
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (xs[i - 1] < xs[i])
      REQUIRE(std::get<Rational>(lift_F(cr, xs[i - 1])) < std::get<Rational>(lift_F(cr, xs[i])));
}

TEST_CASE("breakpoint wraps to zero on branch 1", "[rotor]") {
  ContractedRotation cr = ContractedRotation::make(Rational(1, 2), Rational(3, 4));
  Step s = apply_f(cr, Rational(1, 2));
  CHECK(s.branch == 1);
  CHECK(std::get<Rational>(s.value) == 0);
  CHECK(apply_f(cr, Rational(1, 2) - Rational(1, 1000)).branch == 0);
  CHECK(contains(cr.breakpoint(64), Mpfr::from_rational(Rational(1, 2), 64, MPFR_RNDN)));
}

TEST_CASE("construction checks", "[rotor]") {
  CHECK(kind_of([] { ContractedRotation::make(Rational(1, 2), Rational(1, 2)); }) == ErrorKind::PreconditionViolated);
  CHECK(kind_of([] { ContractedRotation::make(Rational(1), Rational(1, 2)); }) == ErrorKind::PreconditionViolated);
  CHECK(kind_of([] { ContractedRotation::make(Rational(1, 2), Rational(0)); }) == ErrorKind::PreconditionViolated);
  ContractedRotation ok = ContractedRotation::make(inv_phi, Rational(1, 2));
  CHECK(apply_f(ok, Rational(0)).branch == 0);
  CHECK(kind_of([&] { apply_f(ok, Rational(1)); }) == ErrorKind::PreconditionViolated);
  // irrational slope: f(1) is never hit, f(0.9) wraps
  Step s = apply_f(ok, Rational(9, 10));
  CHECK(s.branch == 1);
  CHECK(std::holds_alternative<AlgebraicNumber>(s.value));
}

TEST_CASE("period-2 orbit has rotation number 1/2", "[rotor]") {
  // x = lambda (lambda x + delta) + delta - 1 gives x = 4/15 for lambda = 1/2, delta = 4/5
  ContractedRotation cr = ContractedRotation::make(Rational(1, 2), Rational(4, 5));
  Step a = apply_f(cr, Rational(4, 15));
  Step b = apply_f(cr, a.value);
  CHECK(std::get<Rational>(a.value) == Rational(14, 15));
  CHECK(std::get<Rational>(b.value) == Rational(4, 15));
  CHECK(a.branch + b.branch == 1);
  for (long n : {10L, 1000L, 100000L}) {
    Ball r = rotation_number(cr, n);
    CHECK(contains(r, Mpfr::from_rational(Rational(1, 2), 64, MPFR_RNDN)));
    CHECK(width(r) <= 2.0 / static_cast<double>(n) * (1 + 1e-9));
  }
}

TEST_CASE("rotation number is monotone in delta", "[rotor]") {
  const long n = 4000;
  std::vector<Ball> rs;
  for (int i = 1; i < 40; ++i) rs.push_back(rotation_number(ContractedRotation::make(Rational(1, 2), Rational(40 + i, 80)), n));
  for (std::size_t i = 0; i < rs.size(); ++i)
    for (std::size_t j = i + 1; j < rs.size(); ++j) REQUIRE(mpfr_lessequal_p(rs[i].lower().get(), rs[j].upper().get()));
  CHECK(mpfr_less_p(rs.front().upper().get(), rs.back().lower().get()));
}

TEST_CASE("offset inversion matches the series for the offset", "[rotor]") {
  // delta = (1 - lambda)(1 + xi_0), summed in MPFR
  struct Case {
    RealLike lambda, theta;
    Mpfr l, t;
  };
  const Bits p = 400;
  Mpfr half(p), two3(p);
  mpfr_set_d(half.get(), 0.5, MPFR_RNDN);
  mpfr_set_ui(two3.get(), 2, MPFR_RNDN);
  mpfr_div_ui(two3.get(), two3.get(), 3, MPFR_RNDN);
  std::vector<Case> cases{{Rational(1, 2), golden, half, quad(3, -1, 5, 2, p)},
                          {Rational(2, 3), sqrt2m1, two3, quad(-1, 1, 2, 1, p)}};
  for (const auto& c : cases) {
    Mpfr xi0 = mpfr_xi(Mpfr(p), c.t, c.l, 1000);
    Mpfr expect(p), one_m(p);
    mpfr_ui_sub(one_m.get(), 1, c.l.get(), MPFR_RNDN);
    mpfr_add_ui(expect.get(), xi0.get(), 1, MPFR_RNDN);
    mpfr_mul(expect.get(), expect.get(), one_m.get(), MPFR_RNDN);
    OffsetSearch s = delta_for_rotation_detail(c.lambda, c.theta, pow2(-200));
    CHECK(width(s.delta) <= std::ldexp(1.0, -200));
    Ball grown = s.delta;
    Mpfr slack(RAD_BITS);
    mpfr_set_ui_2exp(slack.get(), 1, -300, MPFR_RNDN);
    grown.add_error(slack);
    CHECK(contains(grown, expect));
    // the library series gives the same number
    Ball lib = (Ball(1L, 256) + xi(Rational(0), c.lambda, c.theta, 256)) * (Ball(1L, 256) - to_ball(c.lambda, 256));
    CHECK(overlaps(lib, s.delta));
  }
}

TEST_CASE("offset inversion round trip", "[rotor]") {
  Ball d = delta_for_rotation(Rational(1, 2), golden, Rational(1, 100000000));
  CHECK(width(d) <= 1e-8);
  Ball r = rotation_number(ContractedRotation::make(Rational(1, 2), d), 100000);
  CHECK(contains(r, to_ball(golden, 128).mid()));
  Ball d2 = delta_for_rotation(Rational(2, 3), sqrt2m1, Rational(1, 1000000));
  CHECK(contains(rotation_number(ContractedRotation::make(Rational(2, 3), d2), 100000), to_ball(sqrt2m1, 128).mid()));
}

TEST_CASE("offset inversion edge cases", "[rotor]") {
  OffsetSearch s = delta_for_rotation_detail(Rational(1, 2), golden, Rational(1));
  CHECK(s.steps == 0);
  CHECK(contains(s.delta, Mpfr::from_rational(Rational(3, 4), 64, MPFR_RNDN)));
  CHECK(kind_of([] { delta_for_rotation(Rational(1, 2), Rational(2, 5), Rational(1, 1000)); }) ==
        ErrorKind::PreconditionViolated);
  CHECK(kind_of([] { delta_for_rotation(Rational(1, 2), golden, Rational(1, 100000000), 5); }) ==
        ErrorKind::TolUnreachable);
  CHECK(kind_of([] { delta_for_rotation(Rational(1, 2), golden, Rational(0)); }) == ErrorKind::PreconditionViolated);
}

TEST_CASE("xi digits against the codings", "[rotor]") {
  const std::size_t N = 3000;
  const Bits p = 256;
  struct Case {
    RealLike x, theta;
    Mpfr xm, tm;
  };
  std::vector<Case> cases{{Rational(1, 3), golden, Mpfr::from_rational(Rational(1, 3), p, MPFR_RNDN), quad(3, -1, 5, 2, p)},
                          {inv_phi, inv_phi, quad(-1, 1, 5, 2, p), quad(-1, 1, 5, 2, p)}};
  for (const auto& c : cases) {
    Word dc = xi_digits(c.x, c.theta, N), df = xi_prime_digits(c.x, c.theta, N);
    for (std::size_t n = 1; n <= N; ++n) {
      long n_ = static_cast<long>(n);
      REQUIRE(dc[n - 1] == static_cast<std::size_t>(mpfr_round_at(c.xm, c.tm, n_ + 1, true) - mpfr_round_at(c.xm, c.tm, n_, true)));
      REQUIRE(df[n - 1] == static_cast<std::size_t>(mpfr_round_at(c.xm, c.tm, n_ + 1, false) - mpfr_round_at(c.xm, c.tm, n_, false)));
    }
    XiIdentities id = xi_digit_identities(c.x, c.theta, N);
    CHECK(id.floor_is_coding);
    CHECK_FALSE(id.first_floor_mismatch);
    // the ceiling digits are the complement of the coding of -x - theta by 1 - theta
    CHECK_FALSE(id.ceiling_is_coding);
    CHECK(id.ceiling_is_complement);
    REQUIRE(id.first_ceiling_mismatch);
    CHECK(*id.first_ceiling_mismatch == 1);
    // both have frequency theta
    double t = to_ball(c.theta, 64).to_double();
    long ones_c = 0, ones_f = 0;
    for (std::size_t i = 0; i < N; ++i) {
      ones_c += dc[i] == 1;
      ones_f += df[i] == 1;
    }
    CHECK(std::abs(static_cast<double>(ones_c) - t * N) <= 2);
    CHECK(std::abs(static_cast<double>(ones_f) - t * N) <= 2);
  }
}

TEST_CASE("xi' agrees with the base-2 Sturmian number", "[rotor]") {
  // lambda = 1/2: xi'_x = sum_{j>=0} w_j 2^-(j+1) with w the coding of {x + theta}
  for (const RealLike& x : {RealLike(Rational(1, 3)), golden}) {
    RealLike start = frac(RealLike(to_algebraic(x) + to_algebraic(golden)));
    DigitSequence seq = DigitSequence::generated([start](std::size_t n) { return theta_coding({golden, start, 1}, n); });
    Ball s = sturmian_number(seq, Base::make(AlgebraicNumber::from_integer(2)), 200).re();
    Ball v = xi_prime(x, Rational(1, 2), golden, 200);
    CHECK(overlaps(mul_2exp(s, -1), v));
    CHECK(width(v) < std::ldexp(1.0, -190));
  }
  // independent MPFR sum of the ceiling series
  Mpfr xm = Mpfr::from_rational(Rational(1, 3), 300, MPFR_RNDN), tm = quad(3, -1, 5, 2, 300);
  Mpfr l(300);
  mpfr_set_d(l.get(), 0.5, MPFR_RNDN);
  Ball v = xi(Rational(1, 3), Rational(1, 2), golden, 200);
  Mpfr ref = mpfr_xi(xm, tm, l, 260);
  CHECK(contains(v, ref));
}

TEST_CASE("attractor itinerary is the coding of {B theta}", "[rotor]") {
  const long B = 40;
  const std::size_t N = 400;
  ContractedRotation cr = sharp(Rational(1, 2), golden, B + static_cast<long>(N));
  AttractorSample s = attractor_sample(cr, B, N);
  REQUIRE(s.points.size() == N);
  Word c = theta_coding({golden, frac_n_theta(B, golden), 1}, N);
  CHECK(c.symbols() == s.itinerary.symbols());
  CHECK(contains(s.depth_bound, Mpfr::from_rational(pow2(-B), 64, MPFR_RNDN)));
  long ones = 0;
  for (std::size_t i = 0; i < N; ++i) ones += s.itinerary[i] == 1;
  CHECK(std::abs(static_cast<double>(ones) - to_ball(golden, 64).to_double() * N) <= 2);
  // points avoid the gap (lambda + delta - 1, delta)
  Ball lo = to_ball(cr.lambda, 128) + to_ball(cr.delta, 128) - Ball(1L, 128), hi = to_ball(cr.delta, 128);
  for (const auto& y : s.points) CHECK((mpfr_lessequal_p(y.upper().get(), lo.lower().get()) || mpfr_greaterequal_p(y.lower().get(), hi.upper().get())));
  // an offset only good to 1e-8 lands on a rational plateau and the itinerary drifts
  ContractedRotation rough = for_rotation(Rational(1, 2), golden, Rational(1, 100000000));
  CHECK(kind_of([&] {
    AttractorSample r = attractor_sample(rough, B, N);
    if (r.itinerary.symbols() != c.symbols()) fail(ErrorKind::ValidationError, "drift");
  }) != ErrorKind::UnknownKind);
}

TEST_CASE("limit points of the orbit of 0 decompose with x = {m theta}", "[rotor]") {
  const long B = 40;
  const std::size_t N = 200;
  ContractedRotation cr = sharp(Rational(1, 2), golden, B + 2 * static_cast<long>(N) + 20);
  AttractorSample s = attractor_sample(cr, B, 20, 512);
  const Bits p = 512;
  Mpfr tm = quad(3, -1, 5, 2, p), l(p);
  mpfr_set_d(l.get(), 0.5, MPFR_RNDN);
  Mpfr xi0 = mpfr_xi(Mpfr(p), tm, l, 500);
  for (std::size_t k = 0; k < s.points.size(); ++k) {
    Decomposition d = decompose_limit_point(cr, s.points[k], N);
    REQUIRE_FALSE(d.second_form);
    REQUIRE(d.x_orbit_index);
    CHECK(*d.x_orbit_index == B + static_cast<long>(k));
    CHECK(mpfr_cmp_d(d.residual.upper().get(), std::ldexp(1.0, -60)) < 0);
    // y = z + xi_0 - xi_{-x}, x = {m theta}, all in MPFR
    long m = *d.x_orbit_index;
    Mpfr x(p), y(p);
    mpfr_mul_si(x.get(), tm.get(), m, MPFR_RNDN);
    mpfr_frac(x.get(), x.get(), MPFR_RNDN);
    mpfr_neg(x.get(), x.get(), MPFR_RNDN);
    Mpfr xim = mpfr_xi(x, tm, l, 500);
    mpfr_sub(y.get(), xi0.get(), xim.get(), MPFR_RNDN);
    mpfr_add_z(y.get(), y.get(), d.z.get_mpz_t(), MPFR_RNDN);
    Mpfr diff(p);
    mpfr_sub(diff.get(), y.get(), s.points[k].mid().get(), MPFR_RNDN);
    CHECK(std::abs(diff.to_double()) < std::ldexp(1.0, -100));
    CHECK(overlaps(d.x_enclosure, to_ball(frac_n_theta(m, golden), 256)));
  }
}

TEST_CASE("left limits give the second form", "[rotor]") {
  const std::size_t N = 200;
  ContractedRotation cr = sharp(Rational(1, 2), golden, 2 * static_cast<long>(N) + 60);
  Bits p = to_ball(cr.delta, 64).prec();
  Ball l = to_ball(cr.lambda, p), d = to_ball(cr.delta, p), one(1L, p);
  // f(1-) = lambda + delta - 1 sits at the left limit of {theta}
  Ball y = l + d - one;
  for (long k = 1; k <= 8; ++k) {
    Decomposition dec = decompose_limit_point(cr, y, N);
    CHECK(dec.second_form);
    CHECK(dec.m == k);
    CHECK(mpfr_cmp_d(dec.residual.upper().get(), std::ldexp(1.0, -60)) < 0);
    Ball v = l * y + d;
    y = mpfr_cmp_ui(v.lower().get(), 1) >= 0 ? v - one : v;
  }
}

TEST_CASE("decomposition failures", "[rotor]") {
  ContractedRotation cr = sharp(Rational(1, 2), golden, 300);
  // 1/2 lies in the gap (lambda + delta - 1, delta)
  CHECK(kind_of([&] { decompose_limit_point(cr, Ball(Rational(1, 2), 256), 100); }) == ErrorKind::NotOnAttractor);
  // a ball across the breakpoint
  Ball wide = Ball::from_endpoints(Mpfr::from_rational(Rational(7, 10), 64, MPFR_RNDN),
                                   Mpfr::from_rational(Rational(72, 100), 64, MPFR_RNDN), 64);
  CHECK(kind_of([&] { decompose_limit_point(cr, wide, 100); }) == ErrorKind::ItineraryAmbiguous);
  ContractedRotation bare = ContractedRotation::make(Rational(1, 2), Rational(3, 4));
  CHECK(kind_of([&] { decompose_limit_point(bare, Ball(Rational(1, 10), 64), 10); }) == ErrorKind::PreconditionViolated);
  // y = 0 is the image of the breakpoint: x = 0 exactly, z = 0
  Decomposition d0 = decompose_limit_point(cr, Ball(Rational(0), 256), 100);
  CHECK_FALSE(d0.second_form);
  REQUIRE(d0.x_orbit_index);
  CHECK(*d0.x_orbit_index == 0);
  CHECK(d0.z == 0);
}
