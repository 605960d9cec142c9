// Acceptance run: one PASS/FAIL line per criterion, details indented below it.
//
// Exit status is nonzero when a criterion fails that is not listed in kKnownFailures. The
// listed ones fail because the expected value itself is inconsistent (see README); they are
// still computed in full and still printed as FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "eisen/analysis.hpp"
#include "eisen/predict.hpp"

using namespace eisen;

namespace {

const std::set<int> kKnownFailures = {1, 2};

struct Outcome {
  bool pass = true;
  std::vector<std::string> lines;
  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    lines.push_back(std::string(ok ? "ok    " : "FAIL  ") + what);
  }
  void note(const std::string& what) { lines.push_back("      " + what); }
};

template <class T>
std::string s(const T& v) {
  std::ostringstream o;
  o << v;
  return o.str();
}

std::string join(const std::vector<int>& v) {
  std::string out = "[";
  for (size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out + "]";
}

std::vector<Polynomial> polys(u64 p, std::vector<std::string> texts) {
  std::vector<Polynomial> out;
  for (auto& t : texts) out.push_back(parse_polynomial(t, p, {"x", "y"}));
  return out;
}

std::string format_all(const std::vector<Polynomial>& rels, u64 p) {
  std::string out;
  for (auto& f : rels) out += (out.empty() ? "" : ", ") + format_polynomial(f, p);
  return "(" + out + ")";
}

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Context {
  Analyzer an;
  KFieldOracle oracle = KFieldOracle::bundled();
  std::vector<std::pair<std::string, bool>> stability;  // setting, cap doubling stable

  Context() : an([] {
    AnalysisOptions o;
    o.compare_uw = false;
    return o;
  }()) {}

  EisensteinLocalizer& loc(const EpsilonSetting& st) {
    auto t0 = std::chrono::steady_clock::now();
    auto& E = an.localizer(st);
    std::string name = "p=" + s(st.p) + " N=" + s(st.level());
    bool seen = false;
    for (auto& [n, b] : stability) seen |= n == name;
    if (!seen) {
      stability.push_back({name, E.stable()});
      std::fprintf(stderr, "  localized %s in %.1f s\n", name.c_str(), since(t0));
    }
    return E;
  }
};

// Presentation check: the stated relations vanish on the operators and generate the same
// ideal of F_p[[x,y]] as the measured relations.
void check_presentation(Outcome& out, EisensteinLocalizer& E, const std::vector<std::string>& gens,
                        const std::vector<std::string>& stated) {
  const u64 p = E.full_algebra().p();
  E.ensure_operators(gens);
  const auto& A = E.full_algebra();
  out.check(A.check_generates(gens), gens[0] + ", " + gens[1] + " generate m");
  auto want = polys(p, stated);
  auto got = A.presentation(gens).relations;
  for (auto& f : want) {
    bool zero = true;
    for (u64 x : A.evaluate(f, gens)) zero &= x == 0;
    out.check(zero, format_polynomial(f, p) + " vanishes on the operators");
  }
  out.check(same_ideal(p, 2, want, got),
            "presentation " + format_all(want, p) + " equals measured " + format_all(got, p));
}

Outcome criterion1(Context& C) {
  Outcome out;
  auto t0 = std::chrono::steady_clock::now();
  EpsilonSetting st{5, {19, 41}, {1, -1}};
  auto& E = C.loc(st);
  auto inv = E.full_algebra().invariants();
  out.check(inv.dim == 3, "dim 3 (measured " + s(inv.dim) + ")");
  check_presentation(out, E, {"T2-3", "T11-12"}, {"y^2-2x^2", "xy"});
  out.check(inv.embedding_dim == 2, "embedding dim 2 (measured " + s(inv.embedding_dim) + ")");
  out.check(inv.gorenstein_defect == 0, "Gorenstein defect 0 (measured " + s(inv.gorenstein_defect) + ")");
  out.note("F_5[[x,y]]/(y^2-2x^2, xy) has dim " +
           s(power_series_quotient_dim(5, 2, polys(5, {"y^2-2x^2", "xy"}))) + ", basis 1, x, y, x^2");
  double t = since(t0);
  out.check(t < 60, "runtime " + s(t) + " s < 60 s");
  return out;
}

Outcome criterion2(Context& C) {
  Outcome out;
  auto t0 = std::chrono::steady_clock::now();
  EpsilonSetting st{5, {11, 19, 29}, {-1, 1, 1}};
  auto& E = C.loc(st);
  check_presentation(out, E, {"T2-3", "T181-182"}, {"x^3+2x^2", "y^3", "xy+y^2"});
  E.ensure_operators({"T2-3", "T7-8"});
  out.check(E.full_algebra().check_generates({"T2-3", "T7-8"}), "{T2-3, T7-8} also generates");
  auto inv = E.full_algebra().invariants();
  out.note("measured dim " + s(inv.dim) + ", embedding dim " + s(inv.embedding_dim) + ", socle dim " +
           s(inv.socle_dim));
  out.note("stated ideal has colength " + s(power_series_quotient_dim(5, 2, polys(5, {"x^3+2x^2", "y^3", "xy+y^2"}))) +
           " in F_5[[x,y]]");
  double t = since(t0);
  out.check(t < 900, "runtime " + s(t) + " s < 900 s");
  return out;
}

// Old contribution with the given signs: 1 (Eisenstein) plus one stabilization of each
// Eisenstein-congruent cusp form at each prime level l | N with sign -1.
Outcome criterion3(Context& C) {
  Outcome out;
  struct Case {
    EpsilonSetting st;
    size_t dim, socle;
    i64 l0;
    size_t old_cusp_rank;  // rank of the cuspidal algebra at level l0, as stated
  };
  for (auto c : {Case{{5, {11, 23}, {-1, -1}}, 3, 2, 11, 1}, Case{{5, {5, 31}, {-1, -1}}, 4, 2, 31, 2}}) {
    const std::string tag = "N=" + s(c.st.level()) + ": ";
    auto& E = C.loc(c.st);
    auto inv = E.full_algebra().invariants();
    out.check(inv.dim == c.dim, tag + "dim " + s(c.dim) + " (measured " + s(inv.dim) + ")");
    out.check(inv.socle_dim == c.socle, tag + "socle dim " + s(c.socle) + " (measured " + s(inv.socle_dim) + ")");
    out.check(inv.socle_dim != 1, tag + "full algebra not Gorenstein");
    auto& E0 = C.loc({c.st.p, {c.l0}, {-1}});
    size_t r0 = E0.result().cusp_inv.rank();
    out.check(r0 == c.old_cusp_rank, tag + "cuspidal rank at level " + s(c.l0) + " is " + s(c.old_cusp_rank) +
                                         " (measured " + s(r0) + ")");
    size_t old = 1;
    for (size_t i = 0; i < c.st.primes.size(); ++i)
      if (c.st.eps[i] == -1) old += C.loc({c.st.p, {c.st.primes[i]}, {-1}}).result().cusp_inv.rank();
    size_t full = E.result().full_inv.rank();
    out.check(full > old, tag + "rank " + s(full) + " exceeds oldform rank " + s(old) + ": newforms present");
    out.check(C.an.new_rank(c.st) == full - old, tag + "new rank " + s(C.an.new_rank(c.st)));
  }
  return out;
}

Outcome criterion4(Context& C) {
  Outcome out;
  {
    auto& E = C.loc({5, {11, 61}, {-1, -1}});
    check_presentation(out, E, {"T3-T2-1", "T2-3"}, {"x^2", "xy", "y^3"});
    auto inv = E.full_algebra().invariants();
    out.check(inv.socle_dim == 2, "N=671: socle dim 2 (measured " + s(inv.socle_dim) + ")");
  }
  {
    auto t0 = std::chrono::steady_clock::now();
    const std::vector<std::string> stated = {"x^4", "x^3y", "x^2y^2", "xy^3", "y^4", "2x^3+xy^2+3y^3",
                                             "x^3-x^2y+2y^3"};
    // monomial count: (x,y)^4 lies in the ideal, so the quotient is spanned by the ten
    // monomials of degree <= 3 modulo the span of the two cubic relations
    Zpk F(5, 1);
    Mat cubic(4, 2);  // coefficients of x^3, x^2y, xy^2, y^3
    const u64 c0[4] = {2, 0, 1, 3}, c1[4] = {1, 4, 0, 2};
    for (int i = 0; i < 4; ++i) {
      cubic(i, 0) = c0[i];
      cubic(i, 1) = c1[i];
    }
    const size_t rk = fp::rank(F, cubic);
    const size_t derived_dim = 10 - rk, derived_m3 = 4 - rk;
    out.check(derived_dim == power_series_quotient_dim(5, 2, polys(5, stated)),
              "N=5921: monomial count " + s(derived_dim) + " agrees with the power series colength");
    auto& E = C.loc({5, {31, 191}, {-1, -1}});
    E.ensure_operators({"T2-3", "T7-8"});
    const auto& A = E.full_algebra();
    auto inv = A.invariants();
    auto pd = A.power_dims();
    out.check(inv.dim == derived_dim, "N=5921: dim " + s(derived_dim) + " (measured " + s(inv.dim) + ")");
    out.check(inv.socle_dim >= 2, "N=5921: socle dim >= 2 (measured " + s(inv.socle_dim) + ")");
    out.check(pd.size() >= 4 && pd[2] == derived_m3, "N=5921: dim m^3 = " + s(derived_m3) +
                                                          " (measured " + (pd.size() > 2 ? s(pd[2]) : "-") + ")");
    out.check(pd.size() >= 4 && pd[3] == 0, "N=5921: m^4 = 0");
    check_presentation(out, E, {"T2-3", "T7-8"}, stated);
    double t = since(t0);
    out.check(t < 900, "N=5921: runtime " + s(t) + " s < 900 s");
  }
  return out;
}

Outcome criterion5(Context& C) {
  Outcome out;
  auto& E = C.loc({5, {11, 41}, {-1, -1}});
  const std::vector<std::pair<std::pair<i64, i64>, bool>> pairs = {
      {{3, 2}, true}, {{3, 7}, true}, {{3, 13}, true}, {{2, 7}, true}, {{2, 13}, false}};
  // l0 is the -1 prime that is 1 mod p; both are here, so take them in the stated order
  for (auto [qq, stated] : pairs) {
    auto [q0, q1] = qq;
    bool predicted = good_pair_test(5, 11, 41, q0, q1);
    std::vector<std::string> g = {"T" + s(q0) + "-" + s(q0 + 1), "T" + s(q1) + "-" + s(q1 + 1)};
    E.ensure_operators(g);
    bool measured = E.full_algebra().check_generates(g);
    out.check(predicted == measured && predicted == stated,
              "{" + s(q0) + "," + s(q1) + "}: stated " + s(stated) + ", predicted " + s(predicted) + ", measured " +
                  s(measured));
  }
  return out;
}

Outcome criterion6(Context& C) {
  Outcome out;
  for (EpsilonSetting st : std::vector<EpsilonSetting>{
           {5, {11}, {-1}}, {5, {19, 41}, {1, -1}}, {5, {11, 41}, {-1, -1}}, {7, {11}, {-1}}}) {
    // independent: v_p of prod(eps_i l_i + 1) / 24 from the integers directly
    long num = 1;
    for (size_t i = 0; i < st.primes.size(); ++i) num *= st.eps[i] * st.primes[i] + 1;
    int v = 0;
    for (long n = num < 0 ? -num : num; n % st.p == 0; n /= st.p) ++v;
    auto& E = C.loc(st);
    int measured = E.result().cusp_inv.index_exponent;
    out.check(measured == v && constant_term_valuation(st) == v,
              "p=" + s(st.p) + " N=" + s(st.level()) + ": congruence number " + s(st.p) + "^" + s(measured) +
                  ", constant term valuation " + s(v));
  }
  return out;
}

Outcome criterion7(Context& C) {
  Outcome out;
  for (EpsilonSetting st : std::vector<EpsilonSetting>{
           {5, {11}, {-1}}, {5, {41, 19}, {-1, 1}}, {5, {11, 19, 29}, {-1, 1, 1}}, {5, {31}, {-1}}, {7, {29}, {-1}}}) {
    int want = vp(st.primes[0] - 1, st.p);
    for (size_t i = 1; i < st.primes.size(); ++i) want += vp(st.primes[i] + 1, st.p);
    auto& E = C.loc(st);
    auto cot = E.result().full_inv.cotangent;
    int got = 0;
    for (int e : cot) got += e;
    auto pr = predict_structure(st, &C.oracle);
    out.check(got == want && pr.cotangent_order_exponent == want,
              "p=" + s(st.p) + " N=" + s(st.level()) + ": |I/I^2| = p^" + s(got) + " " + join(cot) + ", expected p^" +
                  s(want));
  }
  auto& E = C.loc({5, {11, 41}, {-1, -1}});
  auto cot0 = E.result().cusp_inv.cotangent;
  out.check(cot0 == std::vector<int>{1, 1}, "N=451: I0/I0^2 = (Z/5)^2 (measured " + join(cot0) + ")");
  return out;
}

Outcome criterion8(Context& C) {
  Outcome out;
  const std::vector<EpsilonSetting> settings = {{5, {19, 41}, {1, -1}}, {5, {11, 19, 29}, {-1, 1, 1}},
                                                {5, {11, 23}, {-1, -1}}, {5, {5, 31}, {-1, -1}},
                                                {5, {11, 61}, {-1, -1}}, {5, {31, 191}, {-1, -1}}};
  for (auto& st : settings) {
    const std::string tag = "N=" + s(st.level()) + ": ";
    auto pr = predict_structure(st, &C.oracle);
    auto& E = C.loc(st);
    auto inv = E.full_algebra().invariants();
    auto inv0 = E.cusp_algebra().invariants();
    const size_t mult_measured = inv0.dim ? 2 + (inv0.socle_dim - 1) : 0;
    int compared = 0;
    if (pr.generators) {
      ++compared;
      out.check(*pr.generators == (int)inv.embedding_dim,
                tag + "generators " + s(*pr.generators) + " vs embedding dim " + s(inv.embedding_dim));
    }
    if (pr.complete_intersection && *pr.complete_intersection) {
      ++compared;
      out.check(inv.socle_dim == 1, tag + "complete intersection predicted, full algebra Gorenstein");
    }
    if (pr.cuspidal_gorenstein) {
      ++compared;
      bool g0 = inv0.dim > 0 && inv0.socle_dim == 1;
      out.check(*pr.cuspidal_gorenstein == g0,
                tag + "cuspidal Gorenstein predicted " + s(*pr.cuspidal_gorenstein) + ", measured " + s(g0));
    }
    if (pr.multiplicity_one_dim) {
      ++compared;
      out.check(*pr.multiplicity_one_dim == (int)mult_measured,
                tag + "multiplicity-one dim " + s(*pr.multiplicity_one_dim) + ", measured 2 + defect = " +
                    s(mult_measured));
    }
    if (pr.newforms_exist) {
      ++compared;
      bool nf = C.an.new_rank(st) > 0;
      out.check(*pr.newforms_exist == nf, tag + "newforms predicted " + s(*pr.newforms_exist) + ", measured " + s(nf));
    }
    if (!compared) out.note(tag + "outside every closed-form theorem (" + case_name(pr.which) + "), skipped");
  }
  return out;
}

Outcome criterion9(Context& C) {
  Outcome out;
  auto t0 = std::chrono::steady_clock::now();
  // modular symbols: commutativity, involutions, rank formulas
  int levels = 0, bad = 0;
  for (i64 N = 2; N <= 100; ++N) {
    bool sqfree = true;
    for (i64 d = 2; d * d <= N; ++d) sqfree &= N % (d * d) != 0;
    if (!sqfree) continue;
    ++levels;
    auto S = build_space(N);
    auto I = IntMatrix::identity(S.rank());
    std::vector<IntMatrix> ops;
    for (i64 q : {2, 3, 5, 7, 11})
      if (N % q) ops.push_back(S.hecke_matrix(q));
    size_t k = 0;
    for (i64 l : factor_squarefree(N)) {
      auto W = S.atkin_lehner_matrix(l);
      bad += W * W != I;
      ops.push_back(W);
      ++k;
    }
    auto star = S.star_matrix();
    bad += star * star != I;
    ops.push_back(star);
    for (size_t i = 0; i < ops.size(); ++i)
      for (size_t j = i + 1; j < ops.size(); ++j) bad += ops[i] * ops[j] != ops[j] * ops[i];
    const i64 g = genus_x0(N), cusps = i64(1) << k;
    bad += (i64)S.rank() != 2 * g + cusps - 1;
    bad += (i64)S.cuspidal_rank() != 2 * g;
  }
  out.check(bad == 0, "commutativity, w^2 = id, star^2 = id, rank 2g + 2^k - 1 and cuspidal rank 2g on " + s(levels) +
                          " squarefree levels <= 100 (" + s(bad) + " violations)");

  // log character: multiplicative, and the pair test does not depend on the primitive roots
  int log_bad = 0, inv_bad = 0, pairs = 0;
  for (i64 ell : primes_up_to(200)) {
    if ((ell - 1) % 5) continue;
    LogCharacter L(ell, 5);
    for (i64 a = 1; a < ell; ++a)
      for (i64 b = 1; b < ell; b += 7) log_bad += mod_floor(L.evaluate(a * b) - L.evaluate(a) - L.evaluate(b), 5) != 0;
  }
  for (auto [l0, l1] : std::vector<std::pair<i64, i64>>{{11, 41}, {11, 61}, {31, 191}, {41, 61}}) {
    if (is_pth_power_mod(l0, l1, 5).value || is_pth_power_mod(l1, l0, 5).value) continue;
    for (i64 q0 : primes_up_to(40))
      for (i64 q1 : primes_up_to(40)) {
        if (q0 >= q1 || q0 == l0 || q1 == l0 || q0 == l1 || q1 == l1) continue;
        ++pairs;
        bool base = good_pair_test(5, l0, l1, q0, q1);
        inv_bad += base != good_pair_test(5, l1, l0, q1, q0);
        // determinant with every choice of primitive roots
        for (i64 g0 = 2; g0 < l0; ++g0) {
          if (!is_primitive_root(g0, l0)) continue;
          LogCharacter a(l0, 5, g0);
          for (i64 g1 = 2; g1 < l1; g1 += 5) {
            if (!is_primitive_root(g1, l1)) continue;
            LogCharacter b(l1, 5, g1);
            i64 det = a.evaluate(q0) * b.evaluate(q1) - a.evaluate(q1) * b.evaluate(q0);
            bool v = mod_floor((q0 - 1) * (q1 - 1) * det, 5) != 0;
            inv_bad += v != base;
          }
        }
      }
  }
  out.check(log_bad == 0, "log character multiplicative for all l <= 200, l = 1 mod 5");
  out.check(inv_bad == 0, "good_pair_test independent of primitive roots and order on " + s(pairs) + " pairs");

  // Sturm cap stability on every setting used above
  for (auto& [name, stable] : C.stability) out.check(stable, "cap x2 changes nothing: " + name);
  double t = since(t0);
  out.note("property suites took " + s(t) + " s");
  return out;
}

}  // namespace

int main() {
  auto t0 = std::chrono::steady_clock::now();
  Context C;
  std::vector<std::pair<int, std::function<Outcome(Context&)>>> crits = {
      {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4}, {5, criterion5},
      {6, criterion6}, {7, criterion7}, {8, criterion8}, {9, criterion9}};
  int unexpected = 0;
  std::vector<std::string> summary;
  for (auto& [n, fn] : crits) {
    auto c0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn(C);
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    std::string line = "criterion " + std::to_string(n) + ": " + (o.pass ? "PASS" : "FAIL");
    if (!o.pass && kKnownFailures.count(n)) line += " (expected value inconsistent, see README)";
    char buf[32];
    std::snprintf(buf, sizeof buf, "  [%.1f s]", since(c0));
    std::cout << line << buf << "\n";
    for (auto& l : o.lines) std::cout << "    " << l << "\n";
    std::cout.flush();
    if (!o.pass && !kKnownFailures.count(n)) ++unexpected;
    summary.push_back(line);
  }
  std::cout << "\nsummary (" << (int)since(t0) << " s)\n";
  for (auto& l : summary) std::cout << "  " << l << "\n";
  return unexpected ? 1 : 0;
}
