#include <catch_amalgamated.hpp>

#include <algorithm>

#include <sturmian/stutter.hpp>

using namespace sturmian;

namespace {

std::string morphism_fibonacci(std::size_t n) {
  std::string w = "0";
  while (w.size() < n) {
    std::string next;
    for (char c : w) next += c == '0' ? "01" : "0";
    w = next;
  }
  return w.substr(0, n);
}

// plain scan oracles on strings
std::vector<std::size_t> scan_mismatches(const std::string& u, std::size_t r, std::size_t s) {
  std::vector<std::size_t> out;
  for (std::size_t m = 0; m <= s; ++m)
    if (u[m] != u[m + r]) out.push_back(m);
  return out;
}

std::size_t scan_window(const std::string& u, std::size_t r, std::size_t budget) {
  std::size_t best = 0, count = 0;
  for (std::size_t s = 0; s + r < u.size(); ++s) {
    count += u[s] != u[s + r];
    if (count <= budget) best = s;
  }
  return best;
}

Mpfr mpfr_theta(Bits prec) {
  Mpfr r(prec);
  mpfr_sqrt_ui(r.get(), 5, MPFR_RNDN);
  mpfr_ui_sub(r.get(), 3, r.get(), MPFR_RNDN);
  mpfr_div_2ui(r.get(), r.get(), 1, MPFR_RNDN);
  return r;
}

// frac(x + n theta) in MPFR
double mpfr_orbit(const Mpfr& x, const Mpfr& t, long n) {
  Mpfr y(t.prec());
  mpfr_mul_si(y.get(), t.get(), n, MPFR_RNDN);
  mpfr_add(y.get(), y.get(), x.get(), MPFR_RNDN);
  mpfr_frac(y.get(), y.get(), MPFR_RNDN);
  if (mpfr_sgn(y.get()) < 0) mpfr_add_ui(y.get(), y.get(), 1, MPFR_RNDN);
  return mpfr_get_d(y.get(), MPFR_RNDN);
}

double mpfr_signed_dist(const Mpfr& t, long r) {
  Mpfr y(t.prec()), q(t.prec());
  mpfr_mul_si(y.get(), t.get(), r, MPFR_RNDN);
  mpfr_round(q.get(), y.get());
  mpfr_sub(y.get(), y.get(), q.get(), MPFR_RNDN);
  return mpfr_get_d(y.get(), MPFR_RNDN);
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

TEST_CASE("fibonacci alignment by 5", "[stutter]") {
  Word f = fibonacci_word(40);
  auto delta = mismatch_set(f, 5, 34);
  CHECK(delta == std::vector<std::size_t>{6, 7, 19, 20, 27, 28});
  CHECK(delta == scan_mismatches(morphism_fibonacci(40), 5, 34));
  auto leaders = pair_structure(delta);
  CHECK(leaders == std::vector<std::size_t>{6, 19, 27});
  CHECK(check_s4(f, 5, leaders) == std::vector<bool>{true, true, true});
}

TEST_CASE("mismatch_set edge cases", "[stutter]") {
  CHECK(mismatch_set(Word::binary("00"), 1, 0).empty());
  std::string per;
  for (int i = 0; i < 10; ++i) per += "01";
  CHECK(mismatch_set(Word::binary(per), 2, 10).empty());
  CHECK(kind_of([&] { mismatch_set(Word::binary("0101"), 2, 2); }) == ErrorKind::PrefixTooShort);
}

TEST_CASE("mismatch_set is order independent", "[stutter][property]") {
  std::string u = morphism_fibonacci(3000);
  Word f = Word::binary(u);
  for (std::size_t r : {1u, 2u, 3u, 5u, 8u, 13u, 100u, 377u}) {
    std::size_t s = u.size() - r - 1;
    auto fwd = mismatch_set(f, r, s);
    std::vector<std::size_t> rev;
    for (std::size_t k = s + 1; k-- > 0;)
      if (u[k] != u[k + r]) rev.push_back(k);
    std::reverse(rev.begin(), rev.end());
    CHECK(fwd == rev);
  }
}

TEST_CASE("max_window against a linear scan", "[stutter]") {
  std::string u = morphism_fibonacci(60);
  Word f = Word::binary(u);
  auto win = max_window(f, 5, 6);
  CHECK_FALSE(win.truncated);
  CHECK(win.s == scan_window(u, 5, 6));
  // the next mismatch pair starts right after s
  CHECK(mismatch_set(f, 5, win.s).size() == 6);
  CHECK(u[win.s + 1] != u[win.s + 6]);
  for (std::size_t r = 1; r < 30; ++r)
    for (std::size_t b = 0; b < 8; ++b) {
      if (u[0] != u[r] && b == 0) continue;
      auto mw = max_window(f, r, b);
      if (!mw.truncated) CHECK(mw.s == scan_window(u, r, b));
    }
  auto c = max_window(Word::binary(std::string(50, '0')), 7, 0);
  CHECK(c.truncated);
  CHECK(c.s == 42);
  CHECK(kind_of([&] { max_window(Word::binary("0100"), 1, 0); }) == ErrorKind::NoWindow);
}

TEST_CASE("pair_structure", "[stutter]") {
  CHECK(pair_structure({}).empty());
  auto bad = try_pair_structure({4, 6, 7});
  REQUIRE(bad.not_paired_at);
  CHECK(*bad.not_paired_at == 4);
  CHECK(kind_of([] { pair_structure({4, 6, 7}); }) == ErrorKind::NotPaired);
  CHECK(*try_pair_structure({1, 2, 3}).not_paired_at == 3);
}

TEST_CASE("check_s4 detects unequal sums", "[stutter]") {
  // 0011 shifted by 2: u_0 + u_1 = 0, u_2 + u_3 = 2
  CHECK(check_s4(Word::binary("0011"), 2, {0}) == std::vector<bool>{false});
  CHECK(kind_of([] { check_s4(Word::binary("0011"), 2, {1}); }) == ErrorKind::IndexOutOfRange);
}

TEST_CASE("classification of the Fibonacci alignment", "[stutter][classify]") {
  std::vector<CodingSpec> specs{{theta, theta, 1}};
  Mpfr t = mpfr_theta(256);
  double sigma = mpfr_signed_dist(t, 5);
  REQUIRE(sigma < 0);  // 5 is on the negative side for (3 - sqrt 5)/2
  double td = mpfr_get_d(t.get(), MPFR_RNDN);
  auto rep = classify_mismatches(specs, 5, {6, 7, 19, 20, 27, 28});
  CHECK(rep.unexplained == 0);
  for (const auto& e : rep.entries) {
    double y = mpfr_orbit(t, t, static_cast<long>(e.m) + 1);
    Condition oracle = Condition::Unexplained;
    if (y < -sigma) oracle = Condition::I;
    else if (y >= td && y < td - sigma) oracle = Condition::II;
    CHECK(e.condition == oracle);
  }
  CHECK(rep.entries[0].condition == Condition::I);
  CHECK(rep.entries[1].condition == Condition::II);

  auto odd = classify_mismatches(specs, 5, {5});
  CHECK(odd.unexplained == 1);
  CHECK(odd.entries[0].condition == Condition::Unexplained);
}

TEST_CASE("positive-side classification matches MPFR windows", "[stutter][classify][property]") {
  std::vector<CodingSpec> specs{{theta, theta, 1}, {theta, Rational(1, 2), 1}};
  Mpfr t = mpfr_theta(256), half(256);
  mpfr_set_d(half.get(), 0.5, MPFR_RNDN);
  double td = mpfr_get_d(t.get(), MPFR_RNDN);
  for (long r : {3L, 8L, 21L}) {
    double sigma = mpfr_signed_dist(t, r);
    REQUIRE(sigma > 0);
    std::vector<std::size_t> all(400);
    for (std::size_t m = 0; m < all.size(); ++m) all[m] = m;
    auto rep = classify_mismatches(specs, static_cast<std::size_t>(r), all);
    for (const auto& e : rep.entries) {
      Condition oracle = Condition::Unexplained;
      for (std::size_t l = 0; l < 2 && oracle == Condition::Unexplained; ++l) {
        double y = mpfr_orbit(l == 0 ? t : half, t, static_cast<long>(e.m) + 1);
        if (y >= 1 - sigma) oracle = Condition::I;
        else if (y >= td - sigma && y < td) oracle = Condition::II;
      }
      CHECK(e.condition == oracle);
    }
  }
}

TEST_CASE("classification rejects degenerate codings", "[stutter][classify]") {
  RealLike two_theta = std::get<AlgebraicNumber>(theta) * AlgebraicNumber::from_integer(2);
  std::vector<CodingSpec> specs{{theta, theta, 1}, {theta, two_theta, 1}};
  auto zero = AlgebraicNumber::from_integer(0), one = AlgebraicNumber::from_integer(1);
  CHECK(kind_of([&] { stutter_report(specs, {zero, one, one}, Rational(1), 1, 200, 100); }) ==
        ErrorKind::DegenerateDifference);
}

TEST_CASE("stutter report on the Fibonacci word", "[stutter][report]") {
  std::vector<CodingSpec> specs{{theta, theta, 1}};
  auto zero = AlgebraicNumber::from_integer(0), one = AlgebraicNumber::from_integer(1);
  auto wit = stutter_report(specs, {zero, one}, Rational(1), 4, 100000);
  CHECK(wit.d == 2);
  REQUIRE(wit.records.size() == 5);
  std::string u = morphism_fibonacci(100000);
  std::vector<long> rs;
  for (const auto& rec : wit.records) {
    rs.push_back(rec.r.get_si());
    std::size_t r = rec.r.get_ui();
    CHECK_FALSE(rec.truncated);
    CHECK(rec.s == scan_window(u, r, 4));
    CHECK(rec.delta == scan_mismatches(u, r, rec.s));
    REQUIRE(rec.s1_holds);
    CHECK(*rec.s1_holds == (rec.s >= r));
    CHECK(*rec.s1_holds);
    CHECK(rec.s2_pairs_ok);
    CHECK(rec.s4_holds);
    REQUIRE(rec.classification);
    CHECK(rec.classification->unexplained == 0);
    CHECK(rec.leaders_match_condition_i);
    for (std::size_t i : rec.pairs) CHECK(int(u[i]) + int(u[i + 1]) == int(u[i + r]) + int(u[i + r + 1]));
  }
  CHECK(rs == std::vector<long>{1, 3, 8, 21, 55});
  std::vector<std::size_t> ss;
  for (const auto& rec : wit.records) ss.push_back(rec.s);
  CHECK(ss == std::vector<std::size_t>{4, 15, 44, 120, 319});
  // spread grows with n on this family
  for (std::size_t n = 1; n < wit.diagnostics.size(); ++n)
    CHECK(*wit.diagnostics[n].spread > *wit.diagnostics[n - 1].spread);
}

TEST_CASE("raw word mode", "[stutter][report]") {
  std::string per;
  for (int i = 0; i < 100; ++i) per += "01";
  auto wit = stutter_report(Word::binary(per), {Integer(2), Integer(4)}, Rational(1));
  CHECK(wit.mode == "raw");
  for (const auto& rec : wit.records) {
    CHECK(rec.delta.empty());
    CHECK(rec.truncated);
    CHECK_FALSE(rec.s1_holds);
  }
  CHECK(wit.notes.size() == 1);

  // the Example's shifts 1, 1, 2, 3, 5 on the Fibonacci word
  Word f = fibonacci_word(5000);
  auto ex = stutter_report(f, {Integer(1), Integer(1), Integer(2), Integer(3), Integer(5)}, Rational(1), 3);
  for (const auto& rec : ex.records) CHECK(rec.delta == scan_mismatches(f.to_string(), rec.r.get_ui(), rec.s));
  CHECK(ex.records[4].delta == std::vector<std::size_t>{6, 7, 19, 20, 27, 28});
  CHECK(ex.records[4].s4_holds);
}

TEST_CASE("combination of two codings", "[stutter][report]") {
  std::vector<CodingSpec> specs{{theta, theta, 1}, {theta, Rational(1, 2), 1}};
  auto zero = AlgebraicNumber::from_integer(0), one = AlgebraicNumber::from_integer(1);
  auto wit = stutter_report(specs, {zero, one, one}, Rational(1), 3, 20000);
  CHECK(wit.d == 3);
  for (const auto& rec : wit.records) {
    REQUIRE(rec.classification);
    CHECK(rec.classification->unexplained == 0);
    REQUIRE(rec.s1_holds);
    CHECK(*rec.s1_holds);
    if (rec.n == 0) continue;
    CHECK(rec.leaders_match_condition_i);
    CHECK(rec.s2_pairs_ok);
    CHECK(rec.s4_holds);
    CHECK(rec.classification->warnings.empty());
  }
  // r = 1: both codings switch at positions 0 and 2, so delta = {0,1,2,4,5,6} is not paired
  const auto& first = wit.records[0];
  CHECK(first.delta == std::vector<std::size_t>{0, 1, 2, 4, 5, 6});
  CHECK(first.not_paired_at == std::optional<std::size_t>(2));
  CHECK_FALSE(first.s2_pairs_ok);
  CHECK(first.classification->warnings.size() == 4);
}
