#include <catch_amalgamated.hpp>

#include <sturmian/words.hpp>

using namespace sturmian;

namespace {

// Fibonacci word via the morphism 0 -> 01, 1 -> 0.
std::string morphism_fibonacci(std::size_t n) {
  std::string w = "0";
  while (w.size() < n) {
    std::string next;
    for (char c : w) next += c == '0' ? "01" : "0";
    w = next;
  }
  return w.substr(0, n);
}

Mpfr theta_mpfr(Bits prec) {  // (3 - sqrt 5)/2
  Mpfr r(prec);
  mpfr_sqrt_ui(r.get(), 5, MPFR_RNDN);
  mpfr_ui_sub(r.get(), 3, r.get(), MPFR_RNDN);
  mpfr_div_2ui(r.get(), r.get(), 1, MPFR_RNDN);
  return r;
}

long mpfr_floor_mul(long n, const Mpfr& t, const Mpfr& shift) {
  Mpfr y(t.prec());
  mpfr_mul_si(y.get(), t.get(), n, MPFR_RNDN);
  mpfr_add(y.get(), y.get(), shift.get(), MPFR_RNDN);
  mpfr_floor(y.get(), y.get());
  return mpfr_get_si(y.get(), MPFR_RNDN);
}

const RealLike theta = parse_algebraic("quad:(3-sqrt(5))/2");

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::UnknownKind;
}

}  // namespace

TEST_CASE("fibonacci word prefixes", "[words][fibonacci]") {
  CHECK(fibonacci_word(2).to_string() == "01");
  CHECK(fibonacci_word(13).to_string() == "0100101001001");
  CHECK(fibonacci_word(0).empty());
  CHECK(fibonacci_word(5000).to_string() == morphism_fibonacci(5000));
}

TEST_CASE("theta-coding of x = theta is the Fibonacci word", "[words][coding]") {
  Word w = theta_coding({theta, theta, 1}, 13);
  CHECK(w.to_string() == "0100101001001");
  CHECK(theta_coding({theta, theta, 1}, 3000).to_string() == morphism_fibonacci(3000));
}

TEST_CASE("coding identity against floors for n <= 10^4", "[words][coding][property]") {
  const std::size_t N = 10000;
  Word w = theta_coding({theta, theta, 1}, N);
  Mpfr t = theta_mpfr(256), zero(256);
  for (std::size_t j = 0; j < N; ++j) {
    long n = static_cast<long>(j) + 1;
    long oracle = mpfr_floor_mul(n + 1, t, zero) - mpfr_floor_mul(n, t, zero);
    if (static_cast<long>(w[j]) != oracle) FAIL("mismatch at n = " << n);
  }
}

TEST_CASE("characteristic word from x = 0", "[words][coding]") {
  Word w = theta_coding({theta, Rational(0), 1}, 5);
  Mpfr t = theta_mpfr(256), zero(256);
  std::string oracle;
  for (long n = 1; n <= 5; ++n) oracle += static_cast<char>('0' + mpfr_floor_mul(n, t, zero) - mpfr_floor_mul(n - 1, t, zero));
  CHECK(w.to_string() == oracle);
  CHECK(oracle == "00100");
  CHECK(theta_coding({theta, Rational(0), 1}, 0).empty());
  // origin 0 prepends u_0
  CHECK(theta_coding({theta, Rational(0), 0}, 6).to_string() == "1" + oracle);
}

TEST_CASE("boundary points use the half-open convention exactly", "[words][coding]") {
  // x = 1 - theta: x + theta = 1, frac = 0, which lies in [0, theta)
  RealLike x = to_algebraic(RealLike(Rational(1))) - std::get<AlgebraicNumber>(theta);
  Word w = theta_coding({theta, x, 1}, 1);
  CHECK(w.to_string() == "1");
  // x = 0 at n = 0 (origin 0): frac(0) = 0 in [0, theta)
  CHECK(theta_coding({theta, Rational(0), 0}, 1).to_string() == "1");
}

TEST_CASE("ball inputs surface Indeterminate at boundaries", "[words][coding]") {
  Ball tb = std::get<AlgebraicNumber>(theta).refine(64);
  Ball xb = Ball::from_rational_endpoints(Rational(-1, 1000000), Rational(1, 1000000), 64);
  CHECK(kind_of([&] { theta_coding({tb, Ball(Rational(1, 3), 64), 1}, 20); }) == ErrorKind::UnknownKind);
  CHECK(kind_of([&] { theta_coding({tb, xb, 0}, 5); }) != ErrorKind::UnknownKind);
}

TEST_CASE("parallel generation concatenates deterministically", "[words][coding]") {
  CodingSpec s{theta, Rational(1, 2), 1};
  CHECK(theta_coding_parallel(s, 2001, 4) == theta_coding(s, 2001));
}

TEST_CASE("subword complexity", "[words][complexity]") {
  Word f = fibonacci_word(5000);
  CHECK(subword_complexity(f, 10).count == 11);
  std::string per;
  for (int i = 0; i < 50; ++i) per += "01";
  Word p = Word::binary(per);
  auto r = subword_complexity(p, 3);
  CHECK(r.count == 2);
  CHECK(r.ultimately_periodic_suspect);
  auto full = subword_complexity(f, f.size());
  CHECK(full.count == 1);
  CHECK(full.censored);
  CHECK_FALSE(full.ultimately_periodic_suspect);
  CHECK(kind_of([&] { subword_complexity(p, 101); }) == ErrorKind::WindowTooLong);
}

TEST_CASE("fibonacci word has n+1 factors for n <= 100", "[words][complexity][property]") {
  Word f = fibonacci_word(10000);
  for (std::size_t n = 0; n <= 100; ++n) {
    auto r = subword_complexity(f, n);
    CHECK(r.count == n + 1);
    CHECK_FALSE(r.ultimately_periodic_suspect);
  }
}

TEST_CASE("letter frequency tends to (3-sqrt5)/2", "[words][property]") {
  Mpfr t = theta_mpfr(128);
  double td = mpfr_get_d(t.get(), MPFR_RNDN);
  for (std::size_t N : {10u, 100u, 987u, 1000u, 4181u, 10000u, 50000u}) {
    Rational f = letter_frequency(fibonacci_word(N), 1);
    CHECK(std::fabs(f.get_d() - td) <= 2.0 / static_cast<double>(N));
  }
}

TEST_CASE("linear combinations of codings", "[words][combination]") {
  auto zero = AlgebraicNumber::from_integer(0), one = AlgebraicNumber::from_integer(1);
  CodingSpec s1{theta, theta, 1}, s2{theta, Rational(1, 2), 1};

  auto id = linear_combination({s1}, {zero, one}, 200, 1000);
  CHECK(id.word.symbols() == theta_coding(s1, 200).symbols());
  CHECK(id.degeneracy.certified);

  auto sum = linear_combination({s1, s2}, {zero, one, one}, 500, 1000);
  Word a = theta_coding(s1, 500), b = theta_coding(s2, 500);
  REQUIRE(sum.word.alphabet().size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(sum.word.alphabet()[i].same_value(AlgebraicNumber::from_integer(static_cast<long>(i))));
  for (std::size_t n = 0; n < 500; ++n) CHECK(sum.word[n] == a[n] + b[n]);

  auto constant = linear_combination({s1}, {AlgebraicNumber::from_integer(5), zero}, 50, 1000);
  CHECK(constant.word.alphabet().size() == 1);
  CHECK(constant.word.value(17).same_value(AlgebraicNumber::from_integer(5)));
}

TEST_CASE("linear combination preconditions", "[words][combination]") {
  auto zero = AlgebraicNumber::from_integer(0), one = AlgebraicNumber::from_integer(1);
  CodingSpec s1{theta, theta, 1};
  // x_2 = 2 theta, so x_1 - x_2 = -theta
  RealLike two_theta = std::get<AlgebraicNumber>(theta) * AlgebraicNumber::from_integer(2);
  CodingSpec s2{theta, two_theta, 1};
  CHECK(kind_of([&] { linear_combination({s1, s2}, {zero, one, one}, 10, 100); }) == ErrorKind::DegenerateDifference);
  CodingSpec s3{parse_algebraic("quad:(-1+sqrt(2))"), Rational(0), 1};
  CHECK(kind_of([&] { linear_combination({s1, s3}, {zero, one, one}, 10, 100); }) == ErrorKind::SharedThetaViolation);
  // default bound 10^6 is feasible
  CodingSpec s4{theta, Rational(1, 3), 1};
  auto ok = linear_combination({s1, s4}, {zero, one, one}, 10);
  CHECK(ok.degeneracy.bound == 1000000);
  CHECK(ok.degeneracy.status == "checked to bound");
}
