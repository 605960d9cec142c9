#include <gtest/gtest.h>

#include "eisen/localize.hpp"
#include "eisen/zalgebra.hpp"

using namespace eisen;

namespace {

struct ExactRoute {
  ZAlgebra full, cusp;
  LocalAlgebra local_full, local_cusp;
};

ExactRoute exact(const ModularSymbolSpace& S, const EpsilonSetting& s) {
  auto labels = default_generator_labels(s.level());
  ExactRoute r{ZAlgebra::generate(hecke_operators(S, labels, false)),
               ZAlgebra::generate(hecke_operators(S, labels, true)), {}, {}};
  r.local_full = eisenstein_local_algebra(r.full, s);
  r.local_cusp = eisenstein_local_algebra(r.cusp, s);
  return r;
}

// The two routes share only the modular symbol space: one works with integral structure
// constants and localizes the reduction, the other localizes the operators over Z/p^k first.
void compare_routes(const EpsilonSetting& s, const std::vector<std::string>& gens) {
  SCOPED_TRACE("N=" + std::to_string(s.level()) + " p=" + std::to_string(s.p));
  auto S = build_space(s.level());
  auto X = exact(S, s);
  EisensteinLocalizer E(S, s);
  auto a = X.local_full.invariants(), b = E.full_algebra().invariants();
  EXPECT_EQ(a.dim, b.dim);
  EXPECT_EQ(a.embedding_dim, b.embedding_dim);
  EXPECT_EQ(a.socle_dim, b.socle_dim);
  EXPECT_EQ(a.nilpotency_degree, b.nilpotency_degree);
  auto a0 = X.local_cusp.invariants(), b0 = E.cusp_algebra().invariants();
  EXPECT_EQ(a0.dim, b0.dim);
  EXPECT_EQ(a0.socle_dim, b0.socle_dim);
  EXPECT_EQ(congruence_number(X.cusp, s).exponent, E.result().cusp_inv.index_exponent);
  EXPECT_EQ(cotangent_orders(X.full, s), E.result().full_inv.cotangent);
  EXPECT_EQ(cotangent_orders(X.cusp, s), E.result().cusp_inv.cotangent);
  if (!gens.empty() && a.dim > 0) {
    E.ensure_operators(gens);
    auto P1 = X.local_full.presentation(gens).relations;
    auto P2 = E.full_algebra().presentation(gens).relations;
    EXPECT_TRUE(same_ideal((u64)s.p, gens.size(), P1, P2));
  }
}

}  // namespace

TEST(ZAlgebra, Level11) {
  auto S = build_space(11);
  EpsilonSetting s{5, {11}, {-1}};
  auto X = exact(S, s);
  EXPECT_EQ(X.full.rank(), 2u);
  EXPECT_EQ(X.cusp.rank(), 1u);
  // T2 acts on the cusp form by -2, and -2 = 3 = 2 + 1 mod 5
  auto inv = X.local_full.invariants();
  EXPECT_EQ(inv.dim, 2u);
  EXPECT_EQ(inv.embedding_dim, 1u);
  EXPECT_EQ(congruence_number(X.cusp, s).exponent, 1);
  EXPECT_EQ(congruence_number(X.cusp, s).value(), 5);
  // at p = 7 the constant term (11 - 1)/12 is prime to 7
  EpsilonSetting s7{7, {11}, {-1}};
  EXPECT_EQ(eisenstein_local_algebra(X.cusp, s7).dim(), 0u);
  EXPECT_EQ(eisenstein_local_algebra(X.full, s7).dim(), 1u);
}

TEST(ZAlgebra, RejectsNonCommutingOperators) {
  IntMatrix A(2, 2), B(2, 2);
  A(0, 1) = 1;
  B(1, 0) = 1;
  EXPECT_THROW(ZAlgebra::generate({{{'T', 2}, A}, {{'T', 3}, B}}), Error);
  EXPECT_THROW(ZAlgebra::generate({}), Error);
}

TEST(ZAlgebra, StructureConstantsAreAssociativeAndUnital) {
  auto S = build_space(35);
  auto A = ZAlgebra::generate(hecke_operators(S, default_generator_labels(35), false));
  const size_t d = A.rank();
  ASSERT_GT(d, 0u);
  auto e = [&](size_t i) {
    ZVec v(d, 0);
    v[i] = 1;
    return v;
  };
  for (size_t i = 0; i < d; ++i) {
    EXPECT_EQ(A.mul(A.identity_coords(), e(i)), e(i));
    for (size_t j = 0; j < d; ++j) {
      EXPECT_EQ(A.mul(e(i), e(j)), A.mul(e(j), e(i)));
      for (size_t k = 0; k < d; ++k) EXPECT_EQ(A.mul(A.mul(e(i), e(j)), e(k)), A.mul(e(i), A.mul(e(j), e(k))));
    }
  }
}

TEST(ZAlgebra, AgreesWithPLocalRoute) {
  compare_routes({5, {11}, {-1}}, {"T2-3"});
  compare_routes({7, {11}, {-1}}, {});
  compare_routes({5, {5, 31}, {-1, -1}}, {"T2-3", "T3-4"});
  compare_routes({5, {11, 23}, {-1, -1}}, {"T2-3", "T3-4"});
  compare_routes({5, {11, 23}, {-1, 1}}, {});
  compare_routes({7, {2, 29}, {1, -1}}, {});
}
