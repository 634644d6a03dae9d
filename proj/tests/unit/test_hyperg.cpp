#include "doctest.h"
#include "kzp/hyperg.hpp"
#include "oracle.hpp"

using namespace kzp;

namespace {

ZPolynomial z(const FieldRef& F, int n, int i) { return ZPolynomial::variable(F, n, i); }

}  // namespace

TEST_CASE("q expansion for n = 2, h = 1") {
  auto ctx = KZContext::make(2, 5, 1);
  auto F = ctx.prime_field();
  auto Q = q_expansion(ctx);
  REQUIRE(Q.size() == 2);
  CHECK(Q[0][0] == -z(F, 2, 1));
  CHECK(Q[0][1] == -z(F, 2, 0));
  CHECK(Q[1][0] == ZPolynomial::constant(F, 2, 1));
  CHECK(Q[1][1] == ZPolynomial::constant(F, 2, 1));
}

TEST_CASE("q expansion matches direct expansion of the reduced products") {
  for (auto [n, p, e] : {std::tuple{2, 5, 3}, std::tuple{3, 5, 3}, std::tuple{3, 7, 4}, std::tuple{4, 5, 2}}) {
    auto ctx = KZContext::make(n, uint64_t(p), e);
    auto Q = q_expansion(ctx);
    REQUIRE(int(Q.size()) == n * e);
    for (int j = 0; j < n; ++j) {
      auto ref = oracle::q_component(n, p, e, j);
      for (int i = 0; i < n * e; ++i) CHECK(oracle::from_lib(Q[i][j]) == ref[i]);
    }
    for (auto& c : Q.back()) CHECK(c == ZPolynomial::constant(ctx.prime_field(), n, 1));
  }
}

TEST_CASE("single solution for n = 2, p = 5, h = 3") {
  auto ctx = KZContext::make(2, 5, 3);
  auto F = ctx.prime_field();
  auto fam = p_solutions(ctx, Sign::Plus);
  REQUIRE(fam.size() == 1);
  CHECK(fam.vectors[0][0] == z(F, 2, 0).scale(3) + z(F, 2, 1).scale(2));
  CHECK(fam.vectors[0][1] == z(F, 2, 0).scale(2) + z(F, 2, 1).scale(3));
  CHECK(p_solutions(ctx, Sign::Minus).size() == 0);

  EvalPoint a{F, {0, 1}};
  auto rows = family_at_point(2, 5, 3, a);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0] == std::vector<Elt>{2, 3});
}

TEST_CASE("family counts") {
  CHECK(p_solutions(KZContext::make(3, 5, 1), Sign::Plus).size() == 0);
  auto ctx = KZContext::make(3, 5, 3);
  CHECK(p_solutions(ctx, Sign::Plus).size() == 1);
  CHECK(p_solutions(ctx, Sign::Minus).size() == 1);
  CHECK(counting_check(ctx).status == Status::Pass);
  CHECK(counting_check(KZContext::make(5, 5, 2)).status == Status::NotApplicable);
  CHECK_THROWS_AS(q_expansion(KZContext::make(3, 5, 0)), Error);
}

TEST_CASE("structural invariants over a small grid") {
  for (int p : {3, 5, 7})
    for (int n = 2; n <= 4; ++n) {
      if (n % p == 0) continue;
      for (int ht = 1; ht < p; ++ht) {
        auto ctx = KZContext::make(n, uint64_t(p), ht);
        CHECK(counting_check(ctx).passed());
        for (Sign s : {Sign::Plus, Sign::Minus}) {
          auto fam = p_solutions(ctx, s);
          CHECK(homogeneity_check(fam).status == Status::Pass);
          CHECK(degree_bounds_check(fam).status == Status::Pass);
          CHECK(family_flatness_check(fam).status == Status::Pass);
        }
        CHECK(orthogonality_check(ctx).status == Status::Pass);
        CHECK(derivative_identity_check(ctx, 0).status == Status::Pass);
        CHECK(point_independence_check(ctx, 3, 1).passed());
        CHECK(lagrangian_check(ctx, 3, 2).status == Status::Pass);
      }
    }
}

TEST_CASE("evaluation at points agrees with polynomial evaluation") {
  Rng rng(41);
  for (auto F : {Field::prime(7), Field::extension(7, 2)}) {
    auto fam = family_for_exponent(4, 7, 5);
    for (int t = 0; t < 5; ++t) {
      auto a = random_point(F, 4, rng);
      auto rows = family_at_point(4, 7, 5, a);
      REQUIRE(rows.size() == fam.size());
      for (size_t l = 0; l < rows.size(); ++l)
        for (int j = 0; j < 4; ++j) CHECK(rows[l][j] == fam.vectors[l][j].evaluate(a.coords, *F));
    }
  }
}

TEST_CASE("mutated families fail") {
  auto fam = p_solutions(KZContext::make(3, 5, 3), Sign::Plus);
  mutate_family(fam);
  CHECK(family_flatness_check(fam).status == Status::Fail);
  CHECK(homogeneity_check(fam).status == Status::Pass);
}

TEST_CASE("pairing through the transform route agrees with direct expansion") {
  // Large enough to exceed the direct-product budget.
  auto ctx = KZContext::make(5, 7, 5);
  auto plus = p_solutions(ctx, Sign::Plus), minus = p_solutions(ctx, Sign::Minus);
  REQUIRE(plus.size() == 3);
  REQUIRE(minus.size() == 1);
  CHECK(orthogonality_check(ctx, plus, minus).status == Status::Pass);
  // A pair that does not vanish: the +h family against itself.
  std::vector<int> w;
  CHECK(!pairing_vanishes(plus.vectors[0], plus.vectors[0], &w));
  ZPolynomial direct = shapovalov(plus.vectors[0], plus.vectors[0]);
  CHECK(!direct.is_zero());
  CHECK(int(w.size()) == 5);
  CHECK(direct.coeff(w) != 0);
}

TEST_CASE("derivative identity on a single component") {
  auto ctx = KZContext::make(2, 5, 3);
  CHECK(derivative_identity_check(ctx, 1).status == Status::Pass);
  CHECK(derivative_identity_check(KZContext::make(3, 5, 1), 2).status == Status::Pass);
}
