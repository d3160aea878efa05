#pragma once

// Request dispatch and report emission shared by the command-line tool and
// the acceptance runner.  A request is
//   {"command": ..., "inputs": {...}, "precision": bits, "outputs": {"json": path, "csv": path}}
// and every report carries schema_version.

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "heights.hpp"
#include "relation.hpp"
#include "rotor.hpp"
#include "stutter.hpp"

namespace sturmian::cli {

using Json = nlohmann::ordered_json;

inline constexpr int SCHEMA_VERSION = 1;

/// 0 ok, 1 unexpected, 2 usage, 3 ParseError, 4 ValidationError, 5 UnknownKind,
/// 10 + position in ErrorKind for the rest.
inline int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::ParseError: return 3;
    case ErrorKind::ValidationError: return 4;
    case ErrorKind::UnknownKind: return 5;
    default: return 10 + static_cast<int>(k);
  }
}

inline Json error_json(ErrorKind k, const std::string& message) {
  Json j;
  j["schema_version"] = SCHEMA_VERSION;
  j["error"] = std::string(to_string(k));
  j["exit_code"] = exit_code(k);
  j["message"] = message;
  return j;
}

// ---- values ----

inline std::string decimal(const Mpfr& v, int digits, char rnd = 'N') { return v.to_string(digits, rnd); }

inline Json ball_json(const Ball& b) {
  int digits = static_cast<int>(static_cast<double>(b.prec()) * 0.30103) + 2;
  return Json{{"mid", decimal(b.mid(), digits)}, {"rad", decimal(b.rad(), 6, 'U')}, {"bits", b.prec()}};
}

inline Json cball_json(const ComplexBall& z) { return Json{{"re", ball_json(z.re())}, {"im", ball_json(z.im())}}; }

inline Json opt_bool(const std::optional<bool>& b) { return b ? Json(*b) : Json(nullptr); }

template <class T>
Json opt_num(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

inline std::string fixed(double v, int digits = 12) {
  std::ostringstream os;
  os.precision(digits);
  os << std::fixed << v;
  return os.str();
}

inline Json int_list(const std::vector<Integer>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(x.get_str());
  return a;
}

// ---- inputs ----

inline const Json& need(const Json& in, const char* key) {
  if (!in.is_object() || !in.contains(key)) fail(ErrorKind::ValidationError, std::string("missing input '") + key + "'");
  return in.at(key);
}

inline std::string need_str(const Json& in, const char* key) {
  const Json& v = need(in, key);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  fail(ErrorKind::ValidationError, std::string("input '") + key + "' must be a string");
}

inline long need_long(const Json& in, const char* key) {
  const Json& v = need(in, key);
  if (v.is_number_integer()) return v.get<long>();
  if (v.is_string()) {
    try {
      return std::stol(v.get<std::string>());
    } catch (...) {
    }
  }
  fail(ErrorKind::ValidationError, std::string("input '") + key + "' must be an integer");
}

inline long get_long(const Json& in, const char* key, long dflt) { return in.contains(key) ? need_long(in, key) : dflt; }

inline std::string get_str(const Json& in, const char* key, const std::string& dflt) {
  return in.contains(key) ? need_str(in, key) : dflt;
}

inline Rational rational_input(const std::string& text) {
  AlgebraicNumber a = parse_algebraic(text);
  if (!a.is_rational()) fail(ErrorKind::ValidationError, "expected a rational, got '" + text + "'");
  return a.rational_value();
}

inline Integer integer_input(const std::string& text) {
  Rational q = rational_input(text);
  if (q.get_den() != 1) fail(ErrorKind::ValidationError, "expected an integer, got '" + text + "'");
  return q.get_num();
}

/// Exact real literal; rationals stay rational.
inline RealLike real_input(const std::string& text) {
  AlgebraicNumber a = parse_algebraic(text);
  if (a.is_rational()) return a.rational_value();
  if (!a.is_real()) fail(ErrorKind::ValidationError, "expected a real number, got '" + text + "'");
  return a;
}

inline CodingSpec spec_input(const Json& j) {
  CodingSpec s{real_input(need_str(j, "theta")), real_input(need_str(j, "x")), static_cast<int>(get_long(j, "origin", 1))};
  validate_spec(s);
  return s;
}

inline const RealLike& golden_theta() {
  static const RealLike t = parse_algebraic("quad:(3-sqrt(5))/2");
  return t;
}

struct DigitSource {
  DigitSequence seq;
  std::vector<CodingSpec> specs;
  std::vector<AlgebraicNumber> coeffs;
};

/// "fibonacci", {"word": "0101..."} or {"specs": [...], "coefficients": [...]}.
inline DigitSource digits_input(const Json& j) {
  DigitSource d;
  if (j.is_string()) {
    if (j.get<std::string>() != "fibonacci") fail(ErrorKind::ValidationError, "unknown digit source");
    d.seq = DigitSequence::fibonacci();
    d.specs = {{golden_theta(), golden_theta(), 1}};
    d.coeffs = {AlgebraicNumber::from_integer(0), AlgebraicNumber::from_integer(1)};
    return d;
  }
  if (j.is_object() && j.contains("word")) {
    std::string w = need_str(j, "word");
    if (w.empty() || w.find_first_not_of("01") != std::string::npos)
      fail(ErrorKind::ValidationError, "word must be a nonempty 0/1 string");
    d.seq = DigitSequence(Word::binary(w));
    return d;
  }
  const Json& sp = need(j, "specs");
  if (!sp.is_array() || sp.empty()) fail(ErrorKind::ValidationError, "specs must be a nonempty array");
  for (const auto& s : sp) d.specs.push_back(spec_input(s));
  if (j.contains("coefficients")) {
    for (const auto& c : j.at("coefficients")) d.coeffs.push_back(parse_algebraic(c.get<std::string>()));
  } else {
    d.coeffs.assign(d.specs.size() + 1, AlgebraicNumber::from_integer(1));
    d.coeffs[0] = AlgebraicNumber::from_integer(0);
  }
  d.seq = DigitSequence::from_specs(d.specs, d.coeffs, get_long(j, "search_bound", 1000000));
  return d;
}

// ---- reports ----

struct Outcome {
  Json report;
  std::optional<std::string> csv;
};

inline Json stutter_json(const StutterWitness& w) {
  Json r;
  r["kind"] = "stutter";
  r["mode"] = w.mode;
  r["w"] = w.w.get_str();
  r["d"] = w.d;
  r["k"] = w.k;
  r["notes"] = w.notes;
  Json recs = Json::array();
  for (std::size_t i = 0; i < w.records.size(); ++i) {
    const auto& x = w.records[i];
    const auto& g = w.diagnostics[i];
    Json j;
    j["n"] = x.n;
    j["r"] = x.r.get_str();
    j["s"] = x.s;
    j["delta"] = x.delta;
    j["pairs"] = x.pairs;
    j["not_paired_at"] = opt_num(x.not_paired_at);
    j["truncated"] = x.truncated;
    j["s1"] = opt_bool(x.s1_holds);
    j["s2"] = x.s2_pairs_ok;
    j["s4"] = x.s4_holds;
    if (x.classification) {
      Json c;
      c["unexplained"] = x.classification->unexplained;
      c["warnings"] = x.classification->warnings;
      Json e = Json::array();
      for (const auto& m : x.classification->entries)
        e.push_back(Json{{"m", m.m}, {"condition", to_string(m.condition)}, {"ell", opt_num(m.ell)}});
      c["entries"] = e;
      j["classification"] = c;
      j["leaders_match_condition_i"] = x.leaders_match_condition_i;
    }
    j["diagnostics"] = Json{{"gap_min", opt_num(g.gap_min)},
                            {"spread", opt_num(g.spread)},
                            {"log_r", fixed(g.log_r)},
                            {"first_margin", opt_num(g.first_margin)},
                            {"last_margin", opt_num(g.last_margin)}};
    recs.push_back(j);
  }
  r["records"] = recs;
  return r;
}

inline std::string stutter_csv(const Json& result) {
  std::string out = "n,r_n,s_n,spread,log_r_n\n";
  for (const auto& x : result.at("records")) {
    const Json& g = x.at("diagnostics");
    out += std::to_string(x.at("n").get<long>()) + "," + x.at("r").get<std::string>() + "," +
           std::to_string(x.at("s").get<long>()) + "," +
           (g.at("spread").is_null() ? std::string() : std::to_string(g.at("spread").get<long>())) + "," +
           g.at("log_r").get<std::string>() + "\n";
  }
  return out;
}

inline std::string attractor_csv(const Json& result) {
  std::string out = "index,point\n";
  long i = 0;
  for (const auto& p : result.at("points")) out += std::to_string(i++) + "," + p.at("mid").get<std::string>() + "\n";
  return out;
}

inline std::string staircase_csv(const Json& result) {
  std::string out = "delta,rotation_number,radius\n";
  for (const auto& p : result.at("points"))
    out += p.at("delta").get<std::string>() + "," + p.at("rotation_number").at("mid").get<std::string>() + "," +
           p.at("rotation_number").at("rad").get<std::string>() + "\n";
  return out;
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ValidationError, "cannot read '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::ParseError, std::string("invalid JSON in '") + path + "': " + e.what());
  }
}

namespace commands {

inline Json cf(const Json& in, Bits) {
  RealLike theta = real_input(need_str(in, "theta"));
  ContinuedFraction c = cf_expand(theta, static_cast<std::size_t>(get_long(in, "n", 20)));
  Json r;
  r["quotients"] = int_list(c.quotients);
  Json cv = Json::array();
  for (const auto& x : c.convergents) cv.push_back(Json{{"p", x.p.get_str()}, {"q", x.q.get_str()}});
  r["convergents"] = cv;
  r["terminated"] = c.terminated;
  r["truncated"] = c.truncated;
  r["convention"] = c.convention;
  if (long k = get_long(in, "denominators", 0); k > 0)
    r["positive_side_denominators"] = int_list(positive_side_denominators(theta, static_cast<std::size_t>(k)));
  return r;
}

inline Json code(const Json& in, Bits) {
  std::size_t n = static_cast<std::size_t>(need_long(in, "n"));
  Word w;
  if (get_str(in, "word", "") == "fibonacci") {
    w = fibonacci_word(n);
  } else {
    CodingSpec s{real_input(need_str(in, "theta")), real_input(need_str(in, "x")),
                 static_cast<int>(get_long(in, "origin", 1))};
    w = theta_coding(s, n);
  }
  Json r;
  r["word"] = w.to_string();
  r["length"] = w.size();
  r["frequency_of_1"] = letter_frequency(w, 1).get_str();
  if (long m = get_long(in, "complexity_max", 0); m > 0) {
    Json c = Json::array();
    for (long k = 1; k <= m; ++k) c.push_back(subword_complexity(w, static_cast<std::size_t>(k)).count);
    r["complexity"] = c;
  }
  return r;
}

inline Json stutter(const Json& in, Bits) {
  Rational w = rational_input(get_str(in, "w", "1"));
  if (in.contains("shifts")) {
    DigitSource d = digits_input(need(in, "digits"));
    std::vector<Integer> shifts;
    for (const auto& s : in.at("shifts")) shifts.push_back(integer_input(s.is_string() ? s.get<std::string>() : std::to_string(s.get<long>())));
    std::optional<long> dd;
    if (in.contains("d")) dd = need_long(in, "d");
    std::size_t len = static_cast<std::size_t>(get_long(in, "prefix", static_cast<long>(d.seq.word().size())));
    return stutter_json(stutter_report(d.seq.prefix(len), shifts, w, dd, d.specs));
  }
  DigitSource d = digits_input(in.contains("digits") ? in.at("digits") : Json("fibonacci"));
  if (d.specs.empty()) fail(ErrorKind::ValidationError, "coding mode needs specs; give shifts for a raw word");
  return stutter_json(stutter_report(d.specs, d.coeffs, w, static_cast<std::size_t>(get_long(in, "n_max", 4)),
                                     static_cast<std::size_t>(get_long(in, "prefix", 100000)),
                                     get_long(in, "search_bound", 1000000)));
}

inline Json eval(const Json& in, Bits prec) {
  DigitSource d = digits_input(need(in, "digits"));
  Base b = Base::make(parse_algebraic(need_str(in, "beta")));
  SturmianValue v = sturmian_number_detail(d.seq, b, prec);
  Json r;
  r["value"] = cball_json(v.value);
  r["terms"] = v.terms;
  r["tail_bound"] = decimal(v.tail, 6, 'U');
  return r;
}

inline Json keyineq(const Json& in, Bits prec) {
  DigitSource d = digits_input(in.contains("digits") ? in.at("digits") : Json("fibonacci"));
  Base b = Base::make(parse_algebraic(need_str(in, "beta")));
  Bits max_prec = get_long(in, "max_prec", 1024);
  Json recs;
  if (in.contains("stutter_report")) {
    Json rep = read_json_file(need_str(in, "stutter_report"));
    if (!rep.contains("result") || rep["result"].value("kind", "") != "stutter")
      fail(ErrorKind::ValidationError, "not a stutter report");
    recs = rep["result"]["records"];
  } else if (in.contains("records")) {
    recs = in.at("records");
  } else {
    recs = stutter(in, prec)["records"];
  }
  Json out = Json::array();
  long holds = 0, holds_alt = 0;
  for (const auto& x : recs) {
    std::size_t r = integer_input(x.at("r").is_string() ? x.at("r").get<std::string>() : std::to_string(x.at("r").get<long>())).get_ui();
    std::size_t s = x.at("s").get<std::size_t>();
    std::vector<std::size_t> pairs = x.at("pairs").get<std::vector<std::size_t>>();
    KeyInequality k = check_key_inequality(d.seq, b, r, s, pairs, prec, max_prec);
    holds += k.holds.value_or(false);
    holds_alt += k.holds_alt.value_or(false);
    Json j;
    if (x.contains("n")) j["n"] = x.at("n");
    j["r"] = std::to_string(r);
    j["s"] = s;
    j["pairs"] = pairs;
    j["lhs"] = ball_json(k.lhs.with_prec(64));
    j["rhs"] = ball_json(k.rhs.with_prec(64));
    j["holds"] = opt_bool(k.holds);
    j["lhs_alt"] = ball_json(k.lhs_alt.with_prec(64));
    j["holds_alt"] = opt_bool(k.holds_alt);
    j["precision_used"] = k.precision_used;
    out.push_back(j);
  }
  Json r;
  r["records"] = out;
  r["holds_count"] = holds;
  r["holds_alt_count"] = holds_alt;
  r["forms"] = Json{{"holds", "alpha_r summed over j = 0..r"}, {"holds_alt", "alpha_r summed over j = 0..r-1"}};
  return r;
}

inline ComplexBall relation_value(const Json& v, Bits wp) {
  if (v.is_string()) return parse_algebraic(v.get<std::string>()).refine_complex(wp);
  const Json& s = need(v, "sturmian");
  DigitSource d = digits_input(need(s, "digits"));
  Base b = Base::make(parse_algebraic(need_str(s, "beta")));
  return sturmian_number(d.seq, b, wp);
}

inline Json relation(const Json& in, Bits prec) {
  const Json& vals = need(in, "values");
  if (!vals.is_array()) fail(ErrorKind::ValidationError, "values must be an array");
  Integer bound = integer_input(get_str(in, "bound", "100000000"));
  std::vector<ComplexBall> v;
  for (const auto& x : vals) v.push_back(relation_value(x, prec + 32));
  RelationResult res;
  Json r;
  if (in.contains("over_base")) {
    const Json& ob = in.at("over_base");
    Base b = Base::make(parse_algebraic(need_str(ob, "beta")));
    BaseRelation br = relation_over_base(v, b, static_cast<int>(need_long(ob, "t")), bound, prec);
    res = br.flat;
    Json c = Json::array();
    for (const auto& row : br.coeffs) c.push_back(int_list(row));
    r["base_coefficients"] = c;
  } else {
    res = integer_relation(v, bound, prec);
  }
  r["found"] = res.found;
  r["coefficients"] = int_list(res.coeffs);
  r["residual"] = res.residual ? cball_json(res.residual->with_prec(64)) : Json(nullptr);
  r["excluded"] = res.excluded;
  r["certificate_norm"] = res.certificate_norm;
  r["label"] = res.label;
  return r;
}

inline Json heights(const Json& in, Bits prec) {
  Json r;
  if (in.contains("alg")) {
    AlgebraicNumber a = parse_algebraic(need_str(in, "alg"));
    r["weil_height"] = ball_json(weil_height_alg(a, prec));
    r["degree"] = a.degree();
  }
  if (in.contains("poly")) {
    SparsePolynomial f = parse_sparse(need_str(in, "poly"));
    AlgebraicNumber beta = parse_algebraic(need_str(in, "beta"));
    GapSplitReport g = gap_split_check(f, static_cast<unsigned long>(need_long(in, "d0")),
                                       static_cast<unsigned long>(need_long(in, "d1")), beta, prec);
    r["gap_split"] = Json{{"holds", g.gap_condition_holds},
                          {"root_of_f", g.beta_is_root_of_f},
                          {"common_root", g.beta_common_root_of_parts},
                          {"gap", g.condition.gap},
                          {"height_f", g.condition.height_f.get_str()},
                          {"height_beta", ball_json(g.condition.height_beta)},
                          {"threshold", g.condition.threshold ? ball_json(*g.condition.threshold) : Json(nullptr)},
                          {"convention", g.condition.convention}};
  }
  if (r.empty()) fail(ErrorKind::ValidationError, "heights needs 'alg' or 'poly'");
  return r;
}

inline ContractedRotation rotor_input(const Json& in, long orbit_len) {
  RealLike lambda = real_input(need_str(in, "lambda"));
  if (in.contains("delta")) {
    ContractedRotation cr = ContractedRotation::make(lambda, real_input(need_str(in, "delta")));
    if (in.contains("theta")) cr.theta = real_input(need_str(in, "theta"));
    return cr;
  }
  RealLike theta = real_input(need_str(in, "theta"));
  Rational tol = in.contains("tol") ? rational_input(need_str(in, "tol")) : Rational(1);
  if (!in.contains("tol")) mpz_mul_2exp(tol.get_den_mpz_t(), tol.get_den_mpz_t(), static_cast<unsigned long>(2 * orbit_len + 40));
  tol.canonicalize();
  return for_rotation(lambda, theta, tol);
}

inline Json rotnum(const Json& in, Bits prec) {
  long n = get_long(in, "n", 100000);
  RealLike lambda = real_input(need_str(in, "lambda"));
  Json r;
  if (in.contains("delta_min")) {
    Rational lo = rational_input(need_str(in, "delta_min")), hi = rational_input(need_str(in, "delta_max"));
    long steps = get_long(in, "steps", 50);
    if (steps < 1) fail(ErrorKind::ValidationError, "steps must be positive");
    r["kind"] = "staircase";
    Json pts = Json::array();
    for (long i = 0; i <= steps; ++i) {
      Rational dl = lo + (hi - lo) * Rational(i, steps);
      Ball rho = rotation_number(ContractedRotation::make(lambda, dl), n, prec);
      pts.push_back(Json{{"delta", dl.get_str()}, {"rotation_number", ball_json(rho)}});
    }
    r["points"] = pts;
    return r;
  }
  ContractedRotation cr = ContractedRotation::make(lambda, real_input(need_str(in, "delta")));
  r["rotation_number"] = ball_json(rotation_number(cr, n, prec));
  r["n"] = n;
  return r;
}

inline Json invert(const Json& in, Bits) {
  OffsetSearch s = delta_for_rotation_detail(real_input(need_str(in, "lambda")), real_input(need_str(in, "theta")),
                                             rational_input(need_str(in, "tol")), get_long(in, "max_iter", 10000000));
  return Json{{"delta", ball_json(s.delta)}, {"bisection_steps", s.steps}, {"longest_orbit", s.max_orbit}};
}

inline Json attractor(const Json& in, Bits prec) {
  long burn_in = get_long(in, "burn_in", 80), n = get_long(in, "n", 2000);
  ContractedRotation cr = rotor_input(in, burn_in + n);
  AttractorSample s = attractor_sample(cr, burn_in, static_cast<std::size_t>(n), prec);
  Json r;
  r["kind"] = "attractor";
  r["delta"] = ball_json(to_ball(cr.delta, 64).with_prec(prec));
  r["burn_in"] = burn_in;
  r["depth_bound"] = ball_json(s.depth_bound.with_prec(64));
  r["itinerary"] = s.itinerary.to_string();
  if (cr.theta) {
    // intercept from the cylinder of the first point
    std::size_t sym = static_cast<std::size_t>(std::min<long>(n, get_long(in, "symbols", 200)));
    Decomposition d = decompose_limit_point(cr, s.points.front(), sym, prec);
    r["intercept"] = ball_json(d.x_enclosure.with_prec(prec));
    r["intercept_orbit_index"] = opt_num(d.x_orbit_index);
    bool match = false;
    if (d.x_orbit_index) {
      RealLike x = frac(RealLike(to_algebraic(*cr.theta) * AlgebraicNumber::from_integer(*d.x_orbit_index)));
      match = theta_coding({*cr.theta, x, 1}, static_cast<std::size_t>(n)).symbols() == s.itinerary.symbols();
    }
    r["itinerary_is_intercept_coding"] = match;
  }
  Json pts = Json::array();
  for (const auto& p : s.points) pts.push_back(ball_json(p.with_prec(prec)));
  r["points"] = pts;
  return r;
}

inline Json decompose(const Json& in, Bits prec) {
  long burn_in = get_long(in, "burn_in", 80), count = get_long(in, "count", 10);
  std::size_t sym = static_cast<std::size_t>(get_long(in, "symbols", 200));
  ContractedRotation cr = rotor_input(in, burn_in + count + 2 * static_cast<long>(sym));
  Json out = Json::array();
  auto one = [&](const Ball& y, Json j) {
    Decomposition d = decompose_limit_point(cr, y, sym, prec);
    j["second_form"] = d.second_form;
    j["x"] = ball_json(d.x_enclosure.with_prec(prec));
    j["x_orbit_index"] = opt_num(d.x_orbit_index);
    j["z"] = d.z.get_str();
    j["residual"] = ball_json(d.residual.with_prec(64));
    if (d.second_form) {
      j["m"] = d.m;
      j["gamma"] = d.gamma_note;
    }
    out.push_back(j);
  };
  if (in.contains("points")) {
    for (const auto& p : in.at("points")) one(Ball(rational_input(p.get<std::string>()), prec), Json{{"y", p}});
  } else {
    AttractorSample s = attractor_sample(cr, burn_in, static_cast<std::size_t>(count), prec);
    for (std::size_t i = 0; i < s.points.size(); ++i)
      one(s.points[i], Json{{"orbit_index", burn_in + static_cast<long>(i)}});
  }
  return Json{{"entries", out}};
}

}  // namespace commands

inline Outcome export_plot_data(const Json& report, const std::string& kind) {
  if (!report.contains("schema_version") || !report.contains("result"))
    fail(ErrorKind::ValidationError, "input is not a report");
  const Json& res = report.at("result");
  std::string have = res.value("kind", "");
  Outcome o;
  if (kind == "stutter_trend" && have == "stutter") o.csv = stutter_csv(res);
  else if (kind == "attractor" && have == "attractor") o.csv = attractor_csv(res);
  else if (kind == "staircase" && have == "staircase") o.csv = staircase_csv(res);
  else if (kind == "stutter_trend" || kind == "attractor" || kind == "staircase")
    fail(ErrorKind::ValidationError, "report of kind '" + have + "' cannot give " + kind);
  else
    fail(ErrorKind::UnknownKind, "unknown export kind '" + kind + "'");
  long rows = static_cast<long>(std::count(o.csv->begin(), o.csv->end(), '\n')) - 1;
  o.report = Json{{"kind", kind}, {"rows", rows}};
  return o;
}

/// Runs one request; the report echoes command, inputs and precision.
inline Outcome run(const Json& request) {
  if (!request.is_object() || request.empty()) fail(ErrorKind::ValidationError, "empty manifest");
  std::string command = need_str(request, "command");
  const Json inputs = request.contains("inputs") ? request.at("inputs") : Json::object();
  if (!inputs.is_object()) fail(ErrorKind::ValidationError, "inputs must be an object");
  if (request.contains("deterministic") && !request.at("deterministic").get<bool>())
    fail(ErrorKind::ValidationError, "only deterministic runs are supported");
  Bits prec = request.contains("precision") ? need_long(request, "precision") : 256;
  if (prec < 16 || prec > default_policy().ceiling) fail(ErrorKind::ValidationError, "precision out of range");

  Outcome o;
  Json result;
  if (command == "cf") result = commands::cf(inputs, prec);
  else if (command == "code") result = commands::code(inputs, prec);
  else if (command == "stutter") {
    result = commands::stutter(inputs, prec);
    o.csv = stutter_csv(result);
  } else if (command == "eval") result = commands::eval(inputs, prec);
  else if (command == "keyineq") result = commands::keyineq(inputs, prec);
  else if (command == "relation") result = commands::relation(inputs, prec);
  else if (command == "heights") result = commands::heights(inputs, prec);
  else if (command == "rotor rotnum") {
    result = commands::rotnum(inputs, prec);
    if (result.contains("points")) o.csv = staircase_csv(result);
  } else if (command == "rotor invert") result = commands::invert(inputs, prec);
  else if (command == "rotor attractor") {
    result = commands::attractor(inputs, prec);
    o.csv = attractor_csv(result);
  } else if (command == "rotor decompose") result = commands::decompose(inputs, prec);
  else if (command == "export") {
    Outcome e = export_plot_data(read_json_file(need_str(inputs, "report")), need_str(inputs, "kind"));
    result = e.report;
    o.csv = e.csv;
  } else fail(ErrorKind::ValidationError, "unknown command '" + command + "'");

  o.report["schema_version"] = SCHEMA_VERSION;
  o.report["command"] = command;
  o.report["precision"] = prec;
  o.report["inputs"] = inputs;
  o.report["result"] = result;
  return o;
}

inline Json parse_manifest(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::ParseError, std::string("manifest: ") + e.what());
  }
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace sturmian::cli
