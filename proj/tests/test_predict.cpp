#include <gtest/gtest.h>
#include <gmpxx.h>

#include <random>

#include "eisen/predict.hpp"

using namespace eisen;

namespace {

const KFieldOracle& oracle() {
  static KFieldOracle k = KFieldOracle::bundled();
  return k;
}

// v_p of prod(eps*l + 1) / 24 as an exact rational.
int rational_valuation(const EpsilonSetting& s) {
  mpq_class a0(1, 24);
  for (size_t i = 0; i < s.primes.size(); ++i) a0 *= mpz_class(s.eps[i] * s.primes[i] + 1);
  a0.canonicalize();
  mpz_class num = abs(a0.get_num()), den = a0.get_den();
  int v = 0;
  while (num != 0 && num % s.p == 0) { num /= s.p; ++v; }
  while (den % s.p == 0) { den /= s.p; --v; }
  return v;
}

i64 brute_log(i64 a, i64 ell, i64 g) {
  i64 cur = 1, x = (i64)mod_floor(a, ell);
  for (i64 k = 0; k < ell - 1; ++k) {
    if (cur == x) return k;
    cur = cur * g % ell;
  }
  return -1;
}

std::vector<i64> primitive_roots(i64 ell) {
  std::vector<i64> out;
  for (i64 g = 2; g < ell; ++g) {
    std::set<i64> seen;
    i64 cur = 1;
    for (i64 k = 0; k < ell - 1; ++k) {
      seen.insert(cur);
      cur = cur * g % ell;
    }
    if ((i64)seen.size() == ell - 1) out.push_back(g);
  }
  return out;
}

}  // namespace

TEST(ConstantTerm, Examples) {
  EXPECT_EQ(constant_term_valuation({5, {11}, {-1}}), 1);
  EXPECT_EQ(constant_term_valuation({5, {19, 41}, {1, -1}}), 2);
  EXPECT_EQ(constant_term_valuation({7, {11}, {-1}}), 0);
}

TEST(ConstantTerm, AgreesWithExactRational) {
  std::mt19937_64 rng(7);
  std::vector<i64> primes = {2, 3, 5, 7, 11, 13, 19, 29, 31, 41, 61, 71, 101, 131, 149, 151};
  for (int t = 0; t < 300; ++t) {
    i64 p = std::vector<i64>{5, 7, 11, 13}[rng() % 4];
    std::set<i64> chosen;
    size_t k = 1 + rng() % 3;
    while (chosen.size() < k) chosen.insert(primes[rng() % primes.size()]);
    EpsilonSetting s{p, {chosen.begin(), chosen.end()}, {}};
    for (size_t i = 0; i < k; ++i) s.eps.push_back(rng() % 2 ? 1 : -1);
    s.eps[rng() % k] = -1;
    EXPECT_EQ(constant_term_valuation(s), rational_valuation(s)) << s.level();
  }
}

TEST(Predict, Level779) {
  auto r = predict_structure({5, {19, 41}, {1, -1}}, &oracle());
  EXPECT_EQ(r.which, PredictionCase::SingleMinus);
  EXPECT_EQ(r.setting.primes, (std::vector<i64>{41, 19}));
  EXPECT_EQ(r.s, 1);
  EXPECT_EQ(r.delta, 1);
  EXPECT_EQ(r.generators, 2);
  EXPECT_EQ(r.multiplicity_one_dim, 3);
  EXPECT_EQ(r.complete_intersection, true);
  EXPECT_EQ(r.cuspidal_gorenstein, false);
  EXPECT_EQ(r.cotangent_order_exponent, 2);
}

TEST(Predict, Level6061) {
  auto r = predict_structure({5, {11, 19, 29}, {-1, 1, 1}}, &oracle());
  EXPECT_EQ(r.s, 2);
  EXPECT_EQ(r.delta, 0);
  EXPECT_EQ(r.generators, 2);
  EXPECT_EQ(r.multiplicity_one_dim, 3);
  EXPECT_EQ(r.newforms_exist, true);
  EXPECT_EQ(r.cotangent_order_exponent, 3);
}

TEST(Predict, Level451) {
  auto r = predict_structure({5, {11, 41}, {-1, -1}}, nullptr);
  EXPECT_EQ(r.which, PredictionCase::TwoMinusNew);
  EXPECT_EQ(r.generators, 2);
  EXPECT_EQ(r.complete_intersection, true);
  EXPECT_EQ(r.cuspidal_gorenstein, false);
  EXPECT_EQ(r.multiplicity_one_dim, 3);
  EXPECT_EQ(r.newforms_exist, true);
  EXPECT_EQ(r.cuspidal_cotangent, (std::vector<int>{1, 1}));
}

TEST(Predict, Level22IsOldAtEleven) {
  // fifth powers mod 11 are {1, 10}
  std::set<i64> fifth;
  for (i64 x = 1; x < 11; ++x) fifth.insert(x * x % 11 * x % 11 * x % 11 * x % 11);
  ASSERT_EQ(fifth, (std::set<i64>{1, 10}));
  auto r = predict_structure({5, {2, 11}, {-1, -1}}, nullptr);
  EXPECT_EQ(r.which, PredictionCase::TwoMinusOld);
  EXPECT_EQ(r.setting.primes[0], 11);
  EXPECT_EQ(r.generators, 1);
  EXPECT_EQ(r.newforms_exist, false);
}

TEST(Predict, OutsideHypothesesLeavesUnknown) {
  // 23 = 1 mod 11 is a fifth power mod 11
  auto r = predict_structure({5, {11, 23}, {-1, -1}}, nullptr);
  EXPECT_EQ(r.which, PredictionCase::OutsideHypotheses);
  EXPECT_FALSE(r.generators);
  EXPECT_FALSE(r.cuspidal_gorenstein);
  EXPECT_FALSE(r.multiplicity_one_dim);
  auto q = predict_structure({5, {2, 3, 11}, {-1, -1, -1}}, nullptr);
  EXPECT_EQ(q.which, PredictionCase::OutsideHypotheses);
}

TEST(Predict, MissingOracleGivesUnknownDelta) {
  auto r = predict_structure({5, {19, 41}, {1, -1}}, nullptr);
  EXPECT_FALSE(r.delta);
  EXPECT_FALSE(r.generators);
  EXPECT_EQ(r.s, 1);
  EXPECT_EQ(r.complete_intersection, true);
}

TEST(Predict, MazurBaseline) {
  auto r = predict_structure({5, {11}, {-1}}, nullptr);
  EXPECT_EQ(r.which, PredictionCase::MazurBaseline);
  EXPECT_EQ(r.generators, 1);
  auto z = predict_structure({5, {13}, {-1}}, nullptr);
  EXPECT_EQ(z.which, PredictionCase::NoCongruence);
  EXPECT_EQ(z.generators, 0);
}

// Dropping primes l_i != -1 mod p (i > 0) leaves the closed-form fields unchanged.
// newforms_exist is a statement about level N itself and is excluded.
TEST(Predict, ReductionInvariance) {
  std::vector<i64> pool = {2, 3, 7, 11, 13, 17, 23, 31, 37, 41, 43, 61, 71};
  std::mt19937_64 rng(11);
  int checked = 0;
  for (int t = 0; t < 400; ++t) {
    std::set<i64> chosen;
    size_t k = 1 + rng() % 4;
    while (chosen.size() < k) chosen.insert(pool[rng() % pool.size()]);
    std::vector<i64> ls(chosen.begin(), chosen.end());
    size_t minus = rng() % k;
    EpsilonSetting s{5, ls, std::vector<int>(k, 1)};
    s.eps[minus] = -1;
    EpsilonSetting red{5, {}, {}};
    for (size_t i = 0; i < k; ++i)
      if (i == minus || mod_floor(ls[i] + 1, 5) == 0) {
        red.primes.push_back(ls[i]);
        red.eps.push_back(s.eps[i]);
      }
    // the bundled oracle only covers K_19 and K_29
    bool covered = true;
    for (size_t i = 0; i < red.primes.size(); ++i)
      if (red.eps[i] == 1 && red.primes[i] != 19 && red.primes[i] != 29) covered = false;
    if (!covered) continue;
    auto a = predict_structure(s, &oracle()), b = predict_structure(red, &oracle());
    EXPECT_EQ(a.constant_term_valuation, b.constant_term_valuation);
    EXPECT_EQ(a.s, b.s);
    EXPECT_EQ(a.delta, b.delta);
    EXPECT_EQ(a.generators, b.generators);
    EXPECT_EQ(a.multiplicity_one_dim, b.multiplicity_one_dim);
    EXPECT_EQ(a.complete_intersection, b.complete_intersection);
    EXPECT_EQ(a.cuspidal_gorenstein, b.cuspidal_gorenstein);
    EXPECT_EQ(a.cotangent_order_exponent, b.cotangent_order_exponent);
    ++checked;
  }
  EXPECT_GT(checked, 50);
}

TEST(GoodPair, Level451Table) {
  // only 3 is a fifth power, and only modulo 41
  for (i64 q : {2, 3, 7, 13}) {
    EXPECT_FALSE(is_pth_power_mod(q, 11, 5).value) << q;
    EXPECT_EQ(is_pth_power_mod(q, 41, 5).value, q == 3) << q;
  }
  EXPECT_TRUE(good_pair_test(5, 11, 41, 3, 2));
  EXPECT_TRUE(good_pair_test(5, 11, 41, 3, 7));
  EXPECT_TRUE(good_pair_test(5, 11, 41, 3, 13));
  EXPECT_TRUE(good_pair_test(5, 11, 41, 2, 7));
  EXPECT_FALSE(good_pair_test(5, 11, 41, 2, 13));
  EXPECT_FALSE(good_pair_test(5, 11, 41, 7, 7));
}

TEST(GoodPair, HypothesisFailures) {
  auto kind = [](auto f) {
    try {
      f();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Internal;
  };
  EXPECT_EQ(kind([] { good_pair_test(5, 11, 23, 2, 3); }), ErrorKind::HypothesisFailure);
  EXPECT_EQ(kind([] { good_pair_test(5, 11, 41, 11, 3); }), ErrorKind::HypothesisFailure);
  EXPECT_EQ(kind([] { good_pair_test(5, 11, 41, 4, 3); }), ErrorKind::HypothesisFailure);
}

// Symmetry and independence of the primitive roots, checked against brute-force logs.
TEST(GoodPair, SymmetricAndGeneratorInvariant) {
  const i64 p = 5;
  std::vector<i64> ells;
  for (i64 l = 7; l <= 100; ++l)
    if (is_prime((u64)l) && l % p == 1) ells.push_back(l);
  std::vector<i64> qs = {2, 3, 7, 13, 17, 19, 23, 29};
  int pairs = 0;
  for (i64 l0 : ells)
    for (i64 l1 : ells) {
      if (l0 >= l1) continue;
      if (is_pth_power_mod(l0, l1, p).value || is_pth_power_mod(l1, l0, p).value) continue;
      auto g0s = primitive_roots(l0), g1s = primitive_roots(l1);
      ++pairs;
      for (i64 q0 : qs)
        for (i64 q1 : qs) {
          if (q0 == l0 || q0 == l1 || q1 == l0 || q1 == l1) continue;
          bool got = good_pair_test(p, l0, l1, q0, q1);
          EXPECT_EQ(got, good_pair_test(p, l0, l1, q1, q0));
          EXPECT_EQ(got, good_pair_test(p, l1, l0, q0, q1));
          for (i64 g0 : g0s)
            for (i64 g1 : g1s) {
              i64 a0 = brute_log(q0, l0, g0) % p, a1 = brute_log(q1, l0, g0) % p;
              i64 b0 = brute_log(q0, l1, g1) % p, b1 = brute_log(q1, l1, g1) % p;
              i64 det = ((a0 * b1 - a1 * b0) % p + p) % p;
              bool want = (q0 - 1) % p != 0 && (q1 - 1) % p != 0 && det != 0;
              ASSERT_EQ(got, want) << l0 << " " << l1 << " " << q0 << " " << q1 << " g=" << g0 << "," << g1;
            }
        }
    }
  EXPECT_GT(pairs, 0);
}

TEST(LogCharacter, MultiplicativeForEveryGenerator) {
  for (i64 ell : {11, 31, 41, 61, 71}) {
    for (i64 g : primitive_roots(ell)) {
      LogCharacter chi(ell, 5, g);
      for (i64 a = 1; a < ell; ++a)
        for (i64 b = 1; b < ell; b += 3)
          ASSERT_EQ(chi.evaluate(a * b % ell), (chi.evaluate(a) + chi.evaluate(b)) % 5);
      EXPECT_EQ(chi.evaluate(g), 1);
    }
  }
}

TEST(GoodSet, Level779) {
  auto r = good_set_check({5, {19, 41}, {1, -1}}, {2, 11}, &oracle());
  EXPECT_TRUE(r.good);
  EXPECT_TRUE(r.diagnostics.empty());
  EXPECT_EQ(r.expected_size, 2);
}

TEST(GoodSet, Level6061) {
  auto r = good_set_check({5, {11, 19, 29}, {-1, 1, 1}}, {2, 181}, &oracle());
  EXPECT_TRUE(r.good);
  ASSERT_TRUE(r.excluded);
  EXPECT_EQ(*r.excluded, 2u);  // K_29 is left out; 181 splits there and not in K_19
  EXPECT_FALSE(oracle().splits(5, 19, 181).value());
  EXPECT_TRUE(oracle().splits(5, 29, 181).value());
  auto forced = good_set_check({5, {11, 19, 29}, {-1, 1, 1}}, {2, 181}, &oracle(), 1);
  EXPECT_FALSE(forced.good);
}

TEST(GoodSet, ConditionOneDiagnostic) {
  auto r = good_set_check({5, {19, 41}, {1, -1}}, {31, 11}, &oracle());
  EXPECT_FALSE(r.good);
  ASSERT_FALSE(r.diagnostics.empty());
  EXPECT_NE(r.diagnostics[0].find("condition (1)"), std::string::npos);
}

TEST(GoodSet, Errors) {
  auto kind = [](auto f) {
    try {
      f();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Internal;
  };
  EXPECT_EQ(kind([] { good_set_check({5, {19, 41}, {1, -1}}, {2}, &oracle()); }), ErrorKind::WrongCardinality);
  EXPECT_EQ(kind([] { good_set_check({5, {19, 41}, {1, -1}}, {2, 11}, nullptr); }), ErrorKind::OracleMissing);
  KFieldOracle empty;
  EXPECT_EQ(kind([&] { good_set_check({5, {19, 41}, {1, -1}}, {2, 11}, &empty); }), ErrorKind::OracleMissing);
  EXPECT_EQ(kind([] { good_set_check({5, {19, 41}, {-1, -1}}, {2, 11}, &oracle()); }), ErrorKind::BadInput);
}
