#pragma once

// Published worked examples as fixtures, and the harness that measures, predicts and diffs them.

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "eisen/analysis.hpp"
#include "eisen/predict.hpp"

namespace eisen {

struct ReferenceCase {
  std::string name;
  i64 p;
  std::vector<i64> primes;  // ascending
  std::vector<int> eps;
  std::vector<std::string> generators;  // images of x, y
  std::vector<std::string> relations;   // in x, y; empty when none is stated
  std::optional<size_t> dim, socle_dim, embedding_dim;
  std::optional<bool> gorenstein;
  std::optional<bool> newforms;
  std::optional<std::vector<size_t>> power_dims;  // dims of m, m^2, ...
  std::vector<std::vector<std::string>> also_generate;
  std::vector<i64> good_set;
  std::vector<std::pair<std::pair<i64, i64>, bool>> good_pairs;
};

inline const std::vector<ReferenceCase>& reference_cases() {
  static const std::vector<ReferenceCase> cases = [] {
    std::vector<ReferenceCase> v;
    {
      ReferenceCase c{"19x41", 5, {19, 41}, {1, -1}, {"T2-3", "T11-12"}, {"y^2-2x^2", "xy"}};
      c.embedding_dim = 2;
      c.gorenstein = true;
      c.good_set = {2, 11};
      v.push_back(c);
    }
    {
      ReferenceCase c{"11x19x29", 5, {11, 19, 29}, {-1, 1, 1}, {"T2-3", "T181-182"}, {"x^3+2x^2", "y^3", "xy+y^2"}};
      c.embedding_dim = 2;
      c.also_generate = {{"T2-3", "T7-8"}};
      c.good_set = {2, 181};
      v.push_back(c);
    }
    {
      ReferenceCase c{"11x23", 5, {11, 23}, {-1, -1}, {"T2-3", "T3-4"}, {"x^2", "xy", "y^2"}};
      c.dim = 3;
      c.socle_dim = 2;
      c.gorenstein = false;
      c.newforms = true;
      v.push_back(c);
    }
    {
      ReferenceCase c{"5x31", 5, {5, 31}, {-1, -1}, {"T2-3", "2*T2+T3"}, {"x^3", "xy", "y^2"}};
      c.dim = 4;
      c.socle_dim = 2;
      c.gorenstein = false;
      c.newforms = true;
      v.push_back(c);
    }
    {
      ReferenceCase c{"5x191", 5, {5, 191}, {-1, -1}, {}, {}};
      c.gorenstein = false;
      v.push_back(c);
    }
    {
      ReferenceCase c{"11x61", 5, {11, 61}, {-1, -1}, {"T3-T2-1", "T2-3"}, {"x^2", "xy", "y^3"}};
      c.socle_dim = 2;
      c.gorenstein = false;
      v.push_back(c);
    }
    {
      ReferenceCase c{"31x191", 5, {31, 191}, {-1, -1}, {"T2-3", "T7-8"},
                      {"x^4", "x^3y", "x^2y^2", "xy^3", "y^4", "2x^3+xy^2+3y^3", "x^3-x^2y+2y^3"}};
      c.gorenstein = false;
      c.power_dims = std::vector<size_t>{};  // computed from the stated presentation
      v.push_back(c);
    }
    {
      ReferenceCase c{"11x41", 5, {11, 41}, {-1, -1}, {}, {}};
      c.good_pairs = {{{3, 2}, true}, {{3, 7}, true}, {{3, 13}, true}, {{2, 7}, true}, {{2, 13}, false}};
      v.push_back(c);
    }
    return v;
  }();
  return cases;
}

inline const ReferenceCase* find_reference_case(const std::string& name) {
  for (auto& c : reference_cases())
    if (c.name == name) return &c;
  return nullptr;
}

struct CheckResult {
  std::string what, expected, measured;
  bool pass = false;
};

struct CaseReport {
  std::string name;
  std::vector<CheckResult> checks;
  double seconds = 0;
  bool pass() const {
    for (auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

namespace detail {

inline std::string str(bool b) { return b ? "true" : "false"; }

inline std::vector<Polynomial> parse_relations(const std::vector<std::string>& rels, u64 p) {
  std::vector<Polynomial> out;
  for (auto& r : rels) out.push_back(parse_polynomial(r, p, {"x", "y"}));
  return out;
}

inline std::string join_dims(const std::vector<size_t>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

}  // namespace detail

// Dimensions of m, m^2, ... (ending with 0) of F_p[[x,y]]/I.
inline std::vector<size_t> presentation_power_dims(u64 p, const std::vector<Polynomial>& rels) {
  size_t total = power_series_quotient_dim(p, 2, rels);
  std::vector<size_t> out;
  for (int k = 1;; ++k) {
    auto r = rels;
    for (int a = 0; a <= k; ++a) {
      Polynomial m;
      m.terms.push_back({1, {a, k - a}});
      r.push_back(m);
    }
    // r presents A / m^k
    size_t dk = total - power_series_quotient_dim(p, 2, r);
    out.push_back(dk);
    if (dk == 0) break;
  }
  return out;
}

inline CaseReport verify_case(const ReferenceCase& c, Analyzer& an, const KFieldOracle* oracle) {
  auto t0 = std::chrono::steady_clock::now();
  CaseReport rep;
  rep.name = c.name;
  const u64 p = (u64)c.p;
  EpsilonSetting s{c.p, c.primes, c.eps};
  EisensteinLocalizer& E = an.localizer(s);
  const LocalAlgebra& A = E.full_algebra();
  const LocalAlgebra& A0 = E.cusp_algebra();
  auto add = [&](std::string what, std::string exp, std::string got) {
    rep.checks.push_back({std::move(what), exp, got, exp == got});
  };
  auto inv = A.invariants();
  add("cap doubling changes nothing", "true", detail::str(E.stable()));

  if (!c.generators.empty()) {
    E.ensure_operators(c.generators);
    add("generators span m/m^2", "true", detail::str(A.check_generates(c.generators)));
  }
  if (!c.relations.empty()) {
    auto stated = detail::parse_relations(c.relations, p);
    bool all_zero = true;
    for (auto& f : stated)
      for (u64 x : A.evaluate(f, c.generators)) all_zero &= x == 0;
    add("stated relations vanish on the operators", "true", detail::str(all_zero));
    auto measured = A.presentation(c.generators).relations;
    std::string mtext;
    for (auto& f : measured) mtext += (mtext.empty() ? "" : ", ") + format_polynomial(f, p);
    std::string stext;
    for (auto& r : c.relations) stext += (stext.empty() ? "" : ", ") + r;
    CheckResult cr{"presentation ideal in F_p[[x,y]]", stext, mtext, same_ideal(p, 2, stated, measured)};
    rep.checks.push_back(cr);
    add("dim from stated presentation", std::to_string(power_series_quotient_dim(p, 2, stated)), std::to_string(inv.dim));
  }
  if (c.dim) add("dim", std::to_string(*c.dim), std::to_string(inv.dim));
  if (c.embedding_dim) add("embedding dim", std::to_string(*c.embedding_dim), std::to_string(inv.embedding_dim));
  if (c.socle_dim) add("socle dim", std::to_string(*c.socle_dim), std::to_string(inv.socle_dim));
  if (c.gorenstein) add("full algebra Gorenstein", detail::str(*c.gorenstein), detail::str(inv.socle_dim == 1));
  if (c.power_dims) {
    auto want = presentation_power_dims(p, detail::parse_relations(c.relations, p));
    add("dims of m, m^2, ...", detail::join_dims(want), detail::join_dims(A.power_dims()));
  }
  for (auto& g : c.also_generate) {
    E.ensure_operators(g);
    add("{" + g[0] + ", " + g[1] + "} generates", "true", detail::str(A.check_generates(g)));
  }
  if (c.newforms) {
    size_t nr = an.new_rank(s);
    add("newforms at level N (new rank > 0)", detail::str(*c.newforms), detail::str(nr > 0));
  }
  if (!c.good_set.empty()) {
    auto g = good_set_check(s, c.good_set, oracle);
    add("good set criterion", "true", detail::str(g.good));
    std::vector<std::string> exprs;
    for (i64 q : c.good_set) exprs.push_back("T" + std::to_string(q) + "-" + std::to_string(q + 1));
    E.ensure_operators(exprs);
    add("good set generates", "true", detail::str(A.check_generates(exprs)));
  }
  for (auto& [qq, want] : c.good_pairs) {
    auto [q0, q1] = qq;
    std::vector<std::string> exprs = {"T" + std::to_string(q0) + "-" + std::to_string(q0 + 1),
                                      "T" + std::to_string(q1) + "-" + std::to_string(q1 + 1)};
    E.ensure_operators(exprs);
    std::string tag = "{" + std::to_string(q0) + "," + std::to_string(q1) + "}";
    add("pair " + tag + " criterion", detail::str(want), detail::str(good_pair_test(c.p, c.primes[0], c.primes[1], q0, q1)));
    add("pair " + tag + " generates", detail::str(want), detail::str(A.check_generates(exprs)));
  }

  // closed-form predictions, where the theorems apply
  auto pr = predict_structure(s, oracle);
  auto inv0 = A0.invariants();
  if (pr.generators) add("predicted generators = embedding dim", std::to_string(*pr.generators), std::to_string(inv.embedding_dim));
  if (pr.complete_intersection && *pr.complete_intersection)
    add("predicted complete intersection => Gorenstein", "true", detail::str(inv.socle_dim == 1));
  if (pr.cuspidal_gorenstein)
    add("predicted cuspidal Gorenstein", detail::str(*pr.cuspidal_gorenstein), detail::str(inv0.dim > 0 && inv0.socle_dim == 1));
  if (pr.multiplicity_one_dim)
    add("predicted multiplicity-one dim", std::to_string(*pr.multiplicity_one_dim),
        std::to_string(inv0.dim ? 1 + inv0.socle_dim : 0));
  if (pr.newforms_exist) add("predicted newforms", detail::str(*pr.newforms_exist), detail::str(an.new_rank(s) > 0));
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace eisen
