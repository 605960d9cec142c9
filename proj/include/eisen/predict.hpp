#pragma once

// Closed-form structure predictions for Eisenstein Hecke algebras and good-prime criteria.

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "eisen/arith.hpp"
#include "eisen/kfield.hpp"

namespace eisen {

// v_p of (1/24) prod (eps_i l_i + 1); p > 3 so the 24 does not matter.
inline int constant_term_valuation(const EpsilonSetting& s) {
  s.validate();
  int v = 0;
  for (size_t i = 0; i < s.primes.size(); ++i) {
    i64 t = s.eps[i] * s.primes[i] + 1;
    v += vp(t < 0 ? -t : t, s.p);
  }
  return v;
}

enum class PredictionCase {
  NoCongruence,        // constant term is a p-adic unit: T = Z_p
  MazurBaseline,       // r = 0
  SingleMinus,         // eps = (-1, 1, ..., 1), r > 0
  TwoMinusOld,         // r = 1, eps = (-1,-1), l0 = 1 mod p, l1 not a p-th power mod l0
  TwoMinusNew,         // r = 1, eps = (-1,-1), both = 1 mod p, neither a p-th power mod the other
  OutsideHypotheses,
};

inline std::string case_name(PredictionCase c) {
  switch (c) {
    case PredictionCase::NoCongruence: return "no_congruence";
    case PredictionCase::MazurBaseline: return "mazur_baseline";
    case PredictionCase::SingleMinus: return "single_minus_sign";
    case PredictionCase::TwoMinusOld: return "two_primes_no_newforms";
    case PredictionCase::TwoMinusNew: return "two_primes_newforms";
    case PredictionCase::OutsideHypotheses: return "outside_hypotheses";
  }
  return "unknown";
}

struct PredictionReport {
  EpsilonSetting setting;    // reordered: l0 first, then the remaining primes ascending
  std::vector<size_t> order;  // order[i] = index in the ascending input of setting.primes[i]
  PredictionCase which = PredictionCase::OutsideHypotheses;
  int constant_term_valuation = 0;
  std::optional<int> s, delta, generators, multiplicity_one_dim;
  std::optional<bool> complete_intersection, cuspidal_gorenstein, newforms_exist;
  // Exponent of the order of (I/I^2) tensor Z_p, and of the cuspidal version.
  std::optional<int> cotangent_order_exponent;
  std::optional<std::vector<int>> cuspidal_cotangent;
  std::vector<std::string> notes;
};

namespace detail {

// Puts the sign -1 prime first; with two -1 signs the one that is 1 mod p goes first.
inline std::pair<EpsilonSetting, std::vector<size_t>> reorder(const EpsilonSetting& in) {
  EpsilonSetting s = in.sorted();
  std::vector<size_t> idx(s.primes.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  auto key = [&](size_t i) {
    int minus = s.eps[i] == -1 ? 0 : 1;
    int one = mod_floor(s.primes[i] - 1, s.p) == 0 ? 0 : 1;
    return std::make_tuple(minus, one, s.primes[i]);
  };
  std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return key(a) < key(b); });
  EpsilonSetting out{s.p, {}, {}};
  for (size_t i : idx) {
    out.primes.push_back(s.primes[i]);
    out.eps.push_back(s.eps[i]);
  }
  return {out, idx};
}

inline bool is_minus_one_mod(i64 l, i64 p) { return mod_floor(l + 1, p) == 0; }
inline bool is_one_mod(i64 l, i64 p) { return mod_floor(l - 1, p) == 0; }

}  // namespace detail

// Indices i > 0 (in the reordered setting) with l_i = -1 mod p.
inline std::vector<size_t> interesting_indices(const EpsilonSetting& s) {
  std::vector<size_t> out;
  for (size_t i = 1; i < s.primes.size(); ++i)
    if (detail::is_minus_one_mod(s.primes[i], s.p)) out.push_back(i);
  return out;
}

// delta: 1 iff l0 splits completely in K_i for all interesting i (needs l0 = 1 mod p).
// nullopt when a needed field is missing from the oracle.
inline std::optional<int> delta_value(const EpsilonSetting& s, const KFieldOracle* oracle) {
  const i64 p = s.p, l0 = s.primes[0];
  if (!detail::is_one_mod(l0, p)) return 0;
  for (size_t i : interesting_indices(s)) {
    if (!oracle) return std::nullopt;
    auto sp = oracle->splits(p, s.primes[i], l0);
    if (!sp) return std::nullopt;
    if (!*sp) return 0;
  }
  return 1;
}

inline PredictionReport predict_structure(const EpsilonSetting& input, const KFieldOracle* oracle) {
  input.validate();
  PredictionReport rep;
  auto [s, order] = detail::reorder(input);
  rep.setting = s;
  rep.order = order;
  rep.constant_term_valuation = constant_term_valuation(s);
  const i64 p = s.p;
  const int r = s.r();
  int minus = 0;
  for (int e : s.eps) minus += e == -1;

  if (rep.constant_term_valuation == 0) {
    rep.which = PredictionCase::NoCongruence;
    rep.generators = 0;
    rep.multiplicity_one_dim = 0;
    rep.complete_intersection = true;
    rep.newforms_exist = false;
    rep.cotangent_order_exponent = 0;
    rep.cuspidal_cotangent = std::vector<int>{};
    rep.notes.push_back("constant term is a p-adic unit: the Hecke algebra is Z_p and has no cuspidal part");
    if (minus == 1) {
      rep.s = 0;
      rep.delta = 0;
    }
    return rep;
  }

  if (minus == 1) {
    rep.which = r == 0 ? PredictionCase::MazurBaseline : PredictionCase::SingleMinus;
    auto S = interesting_indices(s);
    rep.s = (int)S.size();
    rep.delta = delta_value(s, oracle);
    rep.complete_intersection = true;
    int cot = vp(s.primes[0] - 1, p);
    for (int i = 1; i <= r; ++i) cot += vp(s.primes[i] + 1, p);
    rep.cotangent_order_exponent = cot;
    if (r == 0) rep.newforms_exist = true;
    else rep.newforms_exist = (int)S.size() == r;
    if (rep.delta) {
      int g = *rep.s + *rep.delta;
      rep.generators = g;
      rep.multiplicity_one_dim = 1 + g;
      rep.cuspidal_gorenstein = g == 1;
    } else {
      rep.notes.push_back("delta unknown: no splitting data for a needed field K_l");
    }
    if (S.empty()) rep.notes.push_back("no prime l_i = -1 mod p: the algebra reduces to level l0 (Mazur baseline)");
    return rep;
  }

  if (r == 1 && minus == 2) {
    const i64 l0 = s.primes[0], l1 = s.primes[1];
    const bool one0 = detail::is_one_mod(l0, p), one1 = detail::is_one_mod(l1, p);
    if (one0 && !one1) {
      if (!is_pth_power_mod(l1, l0, p).value) {
        rep.which = PredictionCase::TwoMinusOld;
        rep.generators = 1;
        rep.newforms_exist = false;
        rep.complete_intersection = true;
        rep.cuspidal_gorenstein = true;
        rep.multiplicity_one_dim = 2;
        rep.cotangent_order_exponent = vp(l0 - 1, p);
        rep.notes.push_back("the algebra is isomorphic to the one at level l0");
        return rep;
      }
      rep.notes.push_back("l1 is a p-th power modulo l0");
    } else if (one0 && one1) {
      bool a = is_pth_power_mod(l0, l1, p).value, b = is_pth_power_mod(l1, l0, p).value;
      if (!a && !b) {
        rep.which = PredictionCase::TwoMinusNew;
        rep.generators = 2;
        rep.newforms_exist = true;
        rep.complete_intersection = true;
        rep.cuspidal_gorenstein = false;
        rep.multiplicity_one_dim = 3;
        std::vector<int> c{vp(l0 - 1, p), vp(l1 - 1, p)};
        std::sort(c.begin(), c.end());
        rep.cuspidal_cotangent = c;
        return rep;
      }
      rep.notes.push_back(a ? "l0 is a p-th power modulo l1" : "l1 is a p-th power modulo l0");
    }
  }
  rep.which = PredictionCase::OutsideHypotheses;
  rep.notes.push_back("setting is outside every closed-form case; fields left unknown");
  return rep;
}

// Generation of the ideal by T_q0 - (q0+1), T_q1 - (q1+1) when eps = (-1,-1), l0 = l1 = 1 mod p.
inline bool good_pair_test(i64 p, i64 l0, i64 l1, i64 q0, i64 q1) {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::HypothesisFailure, what); };
  if (!is_prime((u64)p) || p <= 3) fail("p must be a prime greater than 3");
  if (!is_prime((u64)l0) || !is_prime((u64)l1) || l0 == l1) fail("l0 and l1 must be distinct primes");
  if (!detail::is_one_mod(l0, p)) fail("l0 = 1 mod p fails");
  if (!detail::is_one_mod(l1, p)) fail("l1 = 1 mod p fails");
  if (is_pth_power_mod(l0, l1, p).value) fail("l0 is a p-th power modulo l1");
  if (is_pth_power_mod(l1, l0, p).value) fail("l1 is a p-th power modulo l0");
  for (i64 q : {q0, q1}) {
    if (!is_prime((u64)q)) fail(std::to_string(q) + " is not prime");
    if (q == l0 || q == l1) fail(std::to_string(q) + " divides the level");
  }
  LogCharacter a(l0, p), b(l1, p);
  i64 det = a.evaluate(q0) * b.evaluate(q1) - a.evaluate(q1) * b.evaluate(q0);
  i64 v = mod_floor((q0 - 1) % p, p) * mod_floor((q1 - 1) % p, p) % p * mod_floor(det, p) % p;
  return v != 0;
}

struct GoodSetResult {
  bool good = false;
  std::vector<std::string> diagnostics;  // failed conditions, empty when good
  std::optional<size_t> excluded;        // index j (1-based within the interesting primes) left out
  int expected_size = 0;
};

// Checks that Q is a good set of primes for an eps = (-1,1,...,1) setting. Q lists q0 first
// (when it is used) and then q_i for the interesting primes in ascending order, skipping the
// excluded index. The verdict is sufficient for generation, not necessary.
inline GoodSetResult good_set_check(const EpsilonSetting& input, const std::vector<i64>& Q, const KFieldOracle* oracle,
                                    std::optional<size_t> excluded = std::nullopt) {
  input.validate();
  int minus = 0;
  for (int e : input.eps) minus += e == -1;
  if (minus != 1) throw Error(ErrorKind::BadInput, "good sets need exactly one sign -1");
  auto [s, order] = detail::reorder(input);
  const i64 p = s.p, l0 = s.primes[0];
  for (i64 q : Q) {
    if (!is_prime((u64)q)) throw Error(ErrorKind::BadInput, std::to_string(q) + " is not prime");
    if (s.level() % q == 0) throw Error(ErrorKind::BadInput, std::to_string(q) + " divides the level");
  }
  std::vector<i64> ells;
  for (size_t i : interesting_indices(s)) ells.push_back(s.primes[i]);
  const size_t n = ells.size();
  auto splits = [&](i64 ell, i64 q) -> bool {
    if (!oracle) throw Error(ErrorKind::OracleMissing, "no field data supplied");
    auto v = oracle->splits(p, ell, q);
    if (!v) throw Error(ErrorKind::OracleMissing, "no polynomial for K_" + std::to_string(ell));
    return *v;
  };
  auto d = delta_value(s, oracle);
  if (!d) throw Error(ErrorKind::OracleMissing, "splitting of l0 in the fields K_i is unknown");
  const bool l0_one = detail::is_one_mod(l0, p);
  const bool use_q0 = l0_one;
  const bool drop_one = !(*d == 1) && l0_one;  // delta = 0 with l0 = 1 mod p
  GoodSetResult res;
  res.expected_size = (int)n + *d;
  if ((int)Q.size() != res.expected_size)
    throw Error(ErrorKind::WrongCardinality, "expected " + std::to_string(res.expected_size) + " primes, got " +
                                                 std::to_string(Q.size()));

  auto check_with = [&](std::optional<size_t> j) {
    std::vector<std::string> diag;
    size_t pos = 0;
    if (use_q0) {
      i64 q0 = Q[pos++];
      if (detail::is_one_mod(q0, p)) diag.push_back("condition (1): q0=" + std::to_string(q0) + " is 1 mod p");
      if (is_pth_power_mod(q0, l0, p).value)
        diag.push_back("condition (2): q0=" + std::to_string(q0) + " is a p-th power mod " + std::to_string(l0));
    }
    for (size_t i = 1; i <= n; ++i) {
      if (j && *j == i) continue;
      i64 q = Q[pos++];
      std::string qs = "q" + std::to_string(i) + "=" + std::to_string(q);
      if (!detail::is_one_mod(q, p)) diag.push_back("condition (3): " + qs + " is not 1 mod p");
      if (is_pth_power_mod(l0, q, p).value) diag.push_back("condition (4): l0 is a p-th power mod " + qs);
      if (splits(ells[i - 1], q)) diag.push_back("condition (5): " + qs + " splits in K_" + std::to_string(ells[i - 1]));
      for (size_t jj = 1; jj <= n; ++jj)
        if (jj != i && !splits(ells[jj - 1], q))
          diag.push_back("condition (6): " + qs + " does not split in K_" + std::to_string(ells[jj - 1]));
    }
    return diag;
  };

  if (!drop_one) {
    res.diagnostics = check_with(std::nullopt);
    res.good = res.diagnostics.empty();
    return res;
  }
  // candidates for the excluded index: l0 does not split completely in K_j
  std::vector<size_t> cands;
  for (size_t jj = 1; jj <= n; ++jj)
    if (excluded ? *excluded == jj : !splits(ells[jj - 1], l0)) cands.push_back(jj);
  if (excluded && cands.empty()) throw Error(ErrorKind::BadInput, "excluded index out of range");
  for (size_t jj : cands) {
    auto diag = check_with(jj);
    if (diag.empty()) {
      res.good = true;
      res.excluded = jj;
      res.diagnostics.clear();
      return res;
    }
    for (auto& m : diag) res.diagnostics.push_back("j=" + std::to_string(jj) + ": " + m);
  }
  res.good = false;
  return res;
}

struct GoodPrimeScan {
  std::string criterion;  // "pairs", "sets", "mazur" or "none"
  std::vector<std::vector<i64>> found;
  std::vector<std::pair<std::vector<i64>, std::vector<std::string>>> rejected;  // with diagnostics
  std::vector<std::string> notes;
  bool truncated = false;
};

// Exhaustive scan of primes q <= bound, q not dividing N, for the criterion that applies.
inline GoodPrimeScan scan_good_primes(const EpsilonSetting& input, i64 bound, const KFieldOracle* oracle,
                                      size_t max_results = 2000) {
  if (bound < 2) throw Error(ErrorKind::BadInput, "bound must be at least 2");
  input.validate();
  auto [s, order] = detail::reorder(input);
  const i64 p = s.p, N = s.level();
  std::vector<i64> qs;
  for (i64 q : primes_up_to(bound))
    if (N % q != 0) qs.push_back(q);
  GoodPrimeScan out;
  int minus = 0;
  for (int e : s.eps) minus += e == -1;
  auto push = [&](std::vector<i64> Q) {
    if (out.found.size() >= max_results) {
      out.truncated = true;
      return false;
    }
    out.found.push_back(std::move(Q));
    return true;
  };

  if (constant_term_valuation(s) == 0) {
    out.criterion = "none";
    out.notes.push_back("constant term is a p-adic unit: the Eisenstein ideal is the unit ideal locally");
    return out;
  }
  if (s.r() == 1 && minus == 2 && detail::is_one_mod(s.primes[0], p) && detail::is_one_mod(s.primes[1], p) &&
      !is_pth_power_mod(s.primes[0], s.primes[1], p).value && !is_pth_power_mod(s.primes[1], s.primes[0], p).value) {
    out.criterion = "pairs";
    for (size_t a = 0; a < qs.size(); ++a)
      for (size_t b = a + 1; b < qs.size(); ++b) {
        if (good_pair_test(p, s.primes[0], s.primes[1], qs[a], qs[b])) {
          if (!push({qs[a], qs[b]})) return out;
        } else {
          out.rejected.push_back({{qs[a], qs[b]}, {"determinant criterion fails"}});
        }
      }
    return out;
  }
  auto mazur_good = [&](i64 q) { return !detail::is_one_mod(q, p) && !is_pth_power_mod(q, s.primes[0], p).value; };
  if (minus == 1 && s.r() >= 1) {
    out.criterion = "sets";
    out.notes.push_back("the criterion is sufficient, not necessary");
    auto d = delta_value(s, oracle);
    if (!d) throw Error(ErrorKind::OracleMissing, "splitting of l0 in the fields K_i is unknown");
    const size_t n = interesting_indices(s).size();
    const size_t size = n + (size_t)*d;
    if (size == 0) {
      out.notes.push_back("the Eisenstein ideal is principal only through primes outside this criterion");
      return out;
    }
    // brute force over increasing tuples of distinct primes, each ordering tried
    std::vector<i64> Q(size);
    std::vector<bool> used(qs.size(), false);
    std::function<bool(size_t)> rec = [&](size_t pos) {
      if (pos == size) {
        auto res = good_set_check(input, Q, oracle);
        if (res.good) return push(Q);
        if (out.rejected.size() < max_results) out.rejected.push_back({Q, res.diagnostics});
        return true;
      }
      for (size_t i = 0; i < qs.size(); ++i) {
        if (used[i]) continue;
        // cheap per-position filter: q0 slot needs q != 1 mod p, the others q = 1 mod p
        bool q0_slot = detail::is_one_mod(s.primes[0], p) && pos == 0;
        if (q0_slot == detail::is_one_mod(qs[i], p)) continue;
        used[i] = true;
        Q[pos] = qs[i];
        bool go = rec(pos + 1);
        used[i] = false;
        if (!go) return false;
      }
      return true;
    };
    rec(0);
    return out;
  }
  if (s.r() == 1 && minus == 2 && detail::is_one_mod(s.primes[0], p) && !detail::is_one_mod(s.primes[1], p) &&
      !is_pth_power_mod(s.primes[1], s.primes[0], p).value) {
    out.criterion = "mazur";
    out.notes.push_back("the algebra equals the one at level l0; T_q - (q+1) generates for q a good prime for (l0, p)");
    for (i64 q : qs)
      if (mazur_good(q)) {
        if (!push({q})) return out;
      }
    return out;
  }
  if (s.r() == 0) {
    out.criterion = "mazur";
    for (i64 q : qs)
      if (mazur_good(q)) {
        if (!push({q})) return out;
      }
    return out;
  }
  out.criterion = "none";
  out.notes.push_back("no good-prime criterion applies to this setting");
  return out;
}

}  // namespace eisen
