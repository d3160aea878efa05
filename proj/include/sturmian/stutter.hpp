#pragma once

// Finite-scale checks of the stuttering conditions S1-S4 for words given either
// as linear combinations of theta-codings or as raw words with user shifts.

#include <cmath>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include "words.hpp"

namespace sturmian {

/// { m in [0, s] : u_m != u_{m+r} }.
inline std::vector<std::size_t> mismatch_set(const Word& w, std::size_t r, std::size_t s) {
  if (r < 1) fail(ErrorKind::PreconditionViolated, "shift r must be positive");
  if (r + s >= w.size()) fail(ErrorKind::PrefixTooShort, "need r + s < length of the word");
  std::vector<std::size_t> out;
  const auto& u = w.symbols();
  for (std::size_t m = 0; m <= s; ++m)
    if (u[m] != u[m + r]) out.push_back(m);
  return out;
}

struct Window {
  std::size_t s = 0;
  bool truncated = false;  // the prefix ran out before the budget did
};

/// Greatest s with |mismatch_set(w, r, s)| <= budget.
inline Window max_window(const Word& w, std::size_t r, std::size_t budget) {
  if (r < 1) fail(ErrorKind::PreconditionViolated, "shift r must be positive");
  if (r >= w.size()) fail(ErrorKind::PrefixTooShort, "prefix shorter than the shift");
  const auto& u = w.symbols();
  std::size_t count = 0, last = w.size() - r - 1;
  for (std::size_t m = 0; m <= last; ++m) {
    if (u[m] == u[m + r]) continue;
    if (count == budget) {
      if (m == 0) fail(ErrorKind::NoWindow, "mismatch at position 0 with an empty budget");
      return {m - 1, false};
    }
    ++count;
  }
  return {last, true};
}

struct PairStructure {
  std::vector<std::size_t> leaders;
  std::optional<std::size_t> not_paired_at;
  bool ok() const { return !not_paired_at; }
};

/// Splits sorted positions into {i, i+1} blocks; reports the first position that does not fit.
inline PairStructure try_pair_structure(const std::vector<std::size_t>& delta) {
  PairStructure p;
  std::size_t j = 0;
  while (j < delta.size()) {
    if (j + 1 >= delta.size() || delta[j + 1] != delta[j] + 1) {
      p.not_paired_at = delta[j];
      p.leaders.clear();
      return p;
    }
    p.leaders.push_back(delta[j]);
    j += 2;
  }
  return p;
}

inline std::vector<std::size_t> pair_structure(const std::vector<std::size_t>& delta) {
  PairStructure p = try_pair_structure(delta);
  if (!p.ok()) fail(ErrorKind::NotPaired, "position " + std::to_string(*p.not_paired_at) + " is not in a pair");
  return p.leaders;
}

namespace detail {

/// Exact equality of u_a + u_b and u_c + u_d.
class SymbolSums {
 public:
  explicit SymbolSums(const Word& w) : w_(w) {
    for (const auto& a : w.alphabet()) {
      if (!a.is_rational()) {
        rational_ = false;
        break;
      }
      q_.push_back(a.rational_value());
    }
  }

  bool equal(std::size_t a, std::size_t b, std::size_t c, std::size_t d) const {
    const auto& u = w_.symbols();
    if (rational_) return q_[u[a]] + q_[u[b]] == q_[u[c]] + q_[u[d]];
    const auto& al = w_.alphabet();
    return (al[u[a]] + al[u[b]]).same_value(al[u[c]] + al[u[d]]);
  }

 private:
  const Word& w_;
  bool rational_ = true;
  std::vector<Rational> q_;
};

}  // namespace detail

/// u_i + u_{i+1} == u_{i+r} + u_{i+r+1} for each leader i.
inline std::vector<bool> check_s4(const Word& w, std::size_t r, const std::vector<std::size_t>& leaders) {
  detail::SymbolSums sums(w);
  std::vector<bool> out;
  for (std::size_t i : leaders) {
    if (i + r + 1 >= w.size()) fail(ErrorKind::IndexOutOfRange, "leader " + std::to_string(i) + " runs past the word");
    out.push_back(sums.equal(i, i + 1, i + r, i + r + 1));
  }
  return out;
}

enum class Condition { I, II, Unexplained };

inline std::string to_string(Condition c) {
  switch (c) {
    case Condition::I: return "(i)";
    case Condition::II: return "(ii)";
    default: return "unexplained";
  }
}

struct Classification {
  std::size_t m = 0;
  Condition condition = Condition::Unexplained;
  std::optional<std::size_t> ell;  // 0-based index into specs
  std::size_t matches = 0;         // number of codings meeting a condition
};

struct ClassificationReport {
  std::vector<Classification> entries;
  std::size_t unexplained = 0;
  std::vector<std::string> warnings;
};

/// With sigma = r theta - round(r theta) and y = T^{m+origin}(x_l):
///   sigma > 0: (i) y in [1 - sigma, 1), (ii) y in [theta - sigma, theta);
///   sigma < 0: (i) y in [0, -sigma),    (ii) y in [theta, theta - sigma).
/// Membership is decided through certified floors F(n) = floor(x + n theta).
inline ClassificationReport classify_mismatches(const std::vector<CodingSpec>& specs, std::size_t r,
                                                const std::vector<std::size_t>& delta) {
  ClassificationReport rep;
  if (specs.empty()) fail(ErrorKind::PreconditionViolated, "no codings to classify against");
  for (const auto& s : specs) validate_spec(s);
  for (std::size_t i = 1; i < specs.size(); ++i)
    if (!same_theta(specs[0].theta, specs[i].theta)) fail(ErrorKind::SharedThetaViolation, "codings must share theta");
  DistToInt dr = dist_to_int(Integer(static_cast<unsigned long>(r)), specs[0].theta);
  const Integer& p = dr.nearest;
  bool positive = dr.sign > 0;
  long max_n = 2;
  for (std::size_t m : delta) max_n = std::max(max_n, static_cast<long>(m + r) + 2);

  std::vector<detail::AffineFloor> floors;
  for (const auto& s : specs) floors.emplace_back(s.theta, s.x, max_n);

  for (std::size_t m : delta) {
    Classification c;
    c.m = m;
    for (std::size_t l = 0; l < specs.size(); ++l) {
      const auto& F = floors[l];
      long n = static_cast<long>(m) + specs[l].origin;
      long rn = static_cast<long>(r);
      Integer f0 = F(n), fm = F(n - 1);
      bool cond_i, cond_ii;
      if (positive) {
        // y >= 1 - sigma  <=>  x + (n+r) theta >= F(n) + p + 1
        cond_i = F(n + rn) >= f0 + p + 1;
        // y < theta  <=>  F(n-1) < F(n);  y + sigma >= theta  <=>  F(n-1+r) >= F(n) + p
        cond_ii = fm < f0 && F(n - 1 + rn) >= f0 + p;
      } else {
        // y + sigma < 0  <=>  F(n+r) < F(n) + p
        cond_i = F(n + rn) < f0 + p;
        // y >= theta  <=>  F(n-1) == F(n);  y + sigma < theta  <=>  F(n-1+r) < F(n) + p
        cond_ii = fm == f0 && F(n - 1 + rn) < f0 + p;
      }
      if (!cond_i && !cond_ii) continue;
      ++c.matches;
      if (!c.ell) {
        c.ell = l;
        c.condition = cond_i ? Condition::I : Condition::II;
      }
    }
    if (c.condition == Condition::Unexplained) {
      ++rep.unexplained;
      rep.warnings.push_back("position " + std::to_string(m) + " meets neither window");
    } else if (c.matches > 1) {
      rep.warnings.push_back("position " + std::to_string(m) + " is explained by " + std::to_string(c.matches) +
                             " codings");
    }
    rep.entries.push_back(c);
  }
  return rep;
}

struct StutterRecord {
  std::size_t n = 0;
  Integer r;
  std::size_t s = 0;
  std::vector<std::size_t> delta;
  std::vector<std::size_t> pairs;  // leaders i_1 < ... < i_d'
  std::optional<std::size_t> not_paired_at;
  std::optional<bool> s1_holds;    // empty when the prefix capped s
  bool s2_pairs_ok = false;
  bool s4_holds = false;
  bool truncated = false;
  std::optional<ClassificationReport> classification;
  bool leaders_match_condition_i = false;
};

struct StutterDiagnostics {
  std::optional<std::size_t> gap_min;  // smallest i_{j+1} - i_j
  std::optional<std::size_t> spread;   // i_last - i_first
  double log_r = 0;
  std::optional<std::size_t> first_margin;  // i_1 - 0
  std::optional<std::size_t> last_margin;   // s - i_last
};

struct StutterWitness {
  Rational w;
  long d = 0;
  std::size_t k = 0;  // number of codings, 0 for raw words
  std::string mode;   // "codings" or "raw"
  std::vector<StutterRecord> records;
  std::vector<StutterDiagnostics> diagnostics;
  std::vector<std::string> notes;
};

namespace detail {

inline Integer ceil_positive(const Rational& w) {
  if (w <= 0) fail(ErrorKind::PreconditionViolated, "w must be positive");
  return ceil_q(w);
}

inline StutterRecord stutter_record(const Word& word, std::size_t n, const Integer& r, long d, const Rational& w,
                                    const std::vector<CodingSpec>* specs) {
  if (!r.fits_ulong_p() || r < 1) fail(ErrorKind::PreconditionViolated, "shift must be a positive machine integer");
  StutterRecord rec;
  rec.n = n;
  rec.r = r;
  std::size_t rr = r.get_ui();
  Window win = max_window(word, rr, static_cast<std::size_t>(2 * d));
  rec.s = win.s;
  rec.truncated = win.truncated;
  rec.delta = mismatch_set(word, rr, rec.s);
  PairStructure ps = try_pair_structure(rec.delta);
  rec.pairs = ps.leaders;
  rec.not_paired_at = ps.not_paired_at;
  rec.s2_pairs_ok = ps.ok() && (rec.truncated ? rec.pairs.size() <= static_cast<std::size_t>(d)
                                              : rec.pairs.size() == static_cast<std::size_t>(d));
  if (!rec.truncated) rec.s1_holds = Rational(rec.s) >= w * Rational(r);
  if (ps.ok()) {
    auto s4 = check_s4(word, rr, rec.pairs);
    rec.s4_holds = std::all_of(s4.begin(), s4.end(), [](bool b) { return b; });
  }
  if (specs) {
    rec.classification = classify_mismatches(*specs, rr, rec.delta);
    std::vector<std::size_t> cond_i;
    bool successors_ii = true;
    const auto& e = rec.classification->entries;
    for (std::size_t j = 0; j < e.size(); ++j) {
      if (e[j].condition != Condition::I) continue;
      cond_i.push_back(e[j].m);
      if (j + 1 >= e.size() || e[j + 1].m != e[j].m + 1 || e[j + 1].condition != Condition::II) successors_ii = false;
    }
    rec.leaders_match_condition_i = ps.ok() && cond_i == rec.pairs && successors_ii;
  }
  return rec;
}

inline StutterDiagnostics diagnostics_of(const StutterRecord& rec) {
  StutterDiagnostics g;
  g.log_r = std::log(rec.r.get_d());
  const auto& p = rec.pairs;
  if (p.empty()) return g;
  g.spread = p.back() - p.front();
  g.first_margin = p.front();
  g.last_margin = rec.s - p.back();
  for (std::size_t j = 1; j < p.size(); ++j) {
    std::size_t gap = p[j] - p[j - 1];
    if (!g.gap_min || gap < *g.gap_min) g.gap_min = gap;
  }
  return g;
}

inline StutterWitness assemble(const Word& word, const std::vector<Integer>& shifts, long d, const Rational& w,
                               const std::vector<CodingSpec>* specs, StutterWitness out) {
  std::vector<std::future<StutterRecord>> jobs;
  for (std::size_t n = 0; n < shifts.size(); ++n)
    jobs.push_back(std::async(std::launch::deferred,
                              [&, n] { return stutter_record(word, n, shifts[n], d, w, specs); }));
  for (auto& j : jobs) {
    out.records.push_back(j.get());
    out.diagnostics.push_back(diagnostics_of(out.records.back()));
  }
  bool any_mismatch = false;
  for (const auto& r : out.records) any_mismatch = any_mismatch || !r.delta.empty();
  if (!any_mismatch) out.notes.push_back("degenerate: no mismatches in any window, observed d = 0");
  return out;
}

}  // namespace detail

/// Word u_n = c_0 + sum c_i u_n^(i) of length prefix_len, shifts r_0..r_{n_max}
/// from the positive side of theta and d = (k+1) ceil(w).
inline StutterWitness stutter_report(const std::vector<CodingSpec>& specs, const std::vector<AlgebraicNumber>& c,
                                     const Rational& w, std::size_t n_max, std::size_t prefix_len,
                                     long search_bound = 1000000) {
  if (specs.empty()) fail(ErrorKind::PreconditionViolated, "need at least one coding");
  Integer cw = detail::ceil_positive(w);
  Combination comb = linear_combination(specs, c, prefix_len, search_bound);
  std::vector<Integer> shifts = positive_side_denominators(specs[0].theta, n_max + 1);
  StutterWitness out;
  out.w = w;
  out.k = specs.size();
  out.d = static_cast<long>(out.k + 1) * cw.get_si();
  out.mode = "codings";
  if (!comb.degeneracy.certified) out.notes.push_back("non-degeneracy " + comb.degeneracy.status);
  return detail::assemble(comb.word, shifts, out.d, w, &specs, std::move(out));
}

/// Raw word with caller-supplied shifts.  d defaults to 2 ceil(w); codings, if
/// given, are used to classify mismatches.
inline StutterWitness stutter_report(const Word& word, const std::vector<Integer>& shifts, const Rational& w,
                                     std::optional<long> d = std::nullopt,
                                     const std::vector<CodingSpec>& specs = {}) {
  Integer cw = detail::ceil_positive(w);
  StutterWitness out;
  out.w = w;
  out.d = d ? *d : 2 * cw.get_si();
  if (out.d < 0) fail(ErrorKind::PreconditionViolated, "d must be nonnegative");
  out.k = specs.size();
  out.mode = "raw";
  return detail::assemble(word, shifts, out.d, w, specs.empty() ? nullptr : &specs, std::move(out));
}

}  // namespace sturmian
