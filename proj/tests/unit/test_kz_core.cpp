#include "doctest.h"
#include "kzp/kz_core.hpp"
#include "oracle.hpp"

using namespace kzp;

namespace {

ZPolynomial z(const FieldRef& F, int n, int i) { return ZPolynomial::variable(F, n, i); }

PolyVector random_vector(const FieldRef& F, int n, Rng& rng) {
  PolyVector v;
  for (int j = 0; j < n; ++j) {
    std::vector<ZPolynomial::Term> t;
    for (int k = 0; k < 4; ++k) {
      std::vector<int> e(n);
      for (auto& x : e) x = int(rng.below(3));
      t.push_back({mono_key(e), rng.below(F->order())});
    }
    v.push_back(ZPolynomial::from_terms(F, n, t));
  }
  return v;
}

}  // namespace

TEST_CASE("omega matrices") {
  auto F = Field::prime(7);
  FMatrix o = omega(F, 1, 2, 2);
  CHECK(o(0, 0) == F->from_int(-1));
  CHECK(o(0, 1) == 1);
  CHECK(o(1, 0) == 1);
  CHECK(o(1, 1) == F->from_int(-1));
  for (int i = 1; i <= 4; ++i)
    for (int j = 1; j <= 4; ++j) {
      if (i == j) {
        CHECK_THROWS_AS(omega(F, i, j, 4), Error);
        continue;
      }
      CHECK(omega(F, i, j, 4) == omega(F, j, i, 4));
      CHECK(omega(F, i, j, 4).apply({1, 1, 1, 1}) == std::vector<Elt>{0, 0, 0, 0});
    }
}

TEST_CASE("shapovalov form") {
  auto F = Field::prime(7);
  CHECK(shapovalov(*F, {1, F->from_int(-1)}, {1, F->from_int(-1)}) == 2);
  CHECK(shapovalov(*F, {1, F->from_int(-1), 0}, {0, 1, F->from_int(-1)}) == F->from_int(-1));
  CHECK_THROWS_AS(shapovalov(*F, {1, 2}, {1}), Error);
}

TEST_CASE("gaudin hamiltonians are symmetric and preserve V") {
  Rng rng(17);
  for (auto F : {Field::prime(7), Field::extension(5, 2)}) {
    for (int t = 0; t < 10; ++t) {
      EvalPoint a = random_point(F, 4, rng);
      CHECK(a.in_S());
      FMatrix sum(F, 4, 4);
      for (int k = 1; k <= 4; ++k) {
        FMatrix H = gaudin_at(4, k, a);
        CHECK(H == H.transpose());
        // Oracle: sum_{j != k} Omega_kj / (a_k - a_j).
        FMatrix ref(F, 4, 4);
        for (int j = 1; j <= 4; ++j)
          if (j != k) ref = ref + omega(F, k, j, 4).scale(F->inv(F->sub(a.coords[k - 1], a.coords[j - 1])));
        CHECK(H == ref);
        sum = sum + H;
      }
      std::vector<Elt> v{1, 2, 3, F->from_int(-6)};
      Elt s = 0;
      for (Elt x : sum.apply(v)) s = F->add(s, x);
      CHECK(s == 0);
    }
  }
}

TEST_CASE("nabla annihilates the n = 2 power solution") {
  for (int ht = 1; ht < 7; ++ht) {
    auto ctx = KZContext::make(2, 7, ht);
    auto F = ctx.prime_field();
    ZPolynomial d = z(F, 2, 0) - z(F, 2, 1), pw = ZPolynomial::constant(F, 2, 1);
    for (int i = 0; i < 2 * ht; ++i) pw = pw * d;
    // h = ht, and I = (d^{2 ht}, -d^{2 ht}) has exponent 2h matching the -2h/(z1-z2) action.
    PolyVector I{pw, -pw};
    for (int k = 1; k <= 2; ++k)
      for (auto& c : nabla_apply(ctx, k, I)) CHECK(c.is_zero());
    CHECK(flatness_check(ctx, I).passed());
  }
}

TEST_CASE("nabla of constants") {
  auto ctx = KZContext::make(3, 7, 2);
  auto F = ctx.prime_field();
  PolyVector zero(3, ZPolynomial(F, 3));
  for (auto& c : nabla_apply(ctx, 1, zero)) CHECK(c.is_zero());
  CHECK(flatness_check(ctx, zero).status == Status::Pass);

  PolyVector I{ZPolynomial::constant(F, 3, 1), ZPolynomial::constant(F, 3, 6), ZPolynomial(F, 3)};
  auto r = nabla_apply(ctx, 1, I);
  // D_1 h H_1 I: component 2 is h (z_1 - z_3)(I_1 - I_2) = 2h(z_1 - z_3).
  CHECK(r[1] == (z(F, 3, 0) - z(F, 3, 2)).scale(4));
  bool nonzero = false;
  for (auto& c : r) nonzero |= !c.is_zero();
  CHECK(nonzero);

  auto ctx2 = KZContext::make(2, 7, 3);
  PolyVector J{ZPolynomial::constant(F, 2, 1), ZPolynomial::constant(F, 2, 6)};
  auto cert = flatness_check(ctx2, J);
  CHECK(cert.status == Status::Fail);
  CHECK(!cert.witness.is_null());
}

TEST_CASE("pairwise flatness agrees with the full operator") {
  Rng rng(23);
  auto F = Field::prime(5);
  for (int t = 0; t < 20; ++t) {
    auto ctx = KZContext::make(3, 5, int64_t(1 + rng.below(4)));
    PolyVector I = random_vector(F, 3, rng);
    // Force the component sum to vanish.
    I[2] = -(I[0] + I[1]);
    bool full = true;
    for (int k = 1; k <= 3; ++k)
      for (auto& c : nabla_apply(ctx, k, I)) full &= c.is_zero();
    CHECK(full == flatness_check(ctx, I).passed());
  }
}

TEST_CASE("duality of nabla under the shapovalov form") {
  Rng rng(29);
  for (int t = 0; t < 5; ++t) {
    auto ctx = KZContext::make(3, 7, int64_t(1 + rng.below(6)));
    auto F = ctx.prime_field();
    PolyVector x = random_vector(F, 3, rng), y = random_vector(F, 3, rng);
    for (int k = 1; k <= 3; ++k) {
      ZPolynomial D = gaudin_denominator(F, 3, k);
      ZPolynomial lhs = D * partial(shapovalov(x, y), k);
      ZPolynomial rhs = shapovalov(nabla_apply(ctx, k, x), y) + shapovalov(x, nabla_apply(ctx.negated(), k, y));
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("context counts") {
  auto c = KZContext::make(3, 5, 3);
  CHECK(c.dplus == 1);
  CHECK(c.dminus == 1);
  auto g = KZContext::make(5, 5, 2);
  CHECK(g.p_divides_n);
  CHECK_THROWS_AS(g.require_p_coprime_n(), Error);
  auto L = Field::extension(5, 2);
  auto e = KZContext::make(3, L, L->generator());
  CHECK(!e.ht);
  CHECK_THROWS_AS(e.require_rational_nonzero_h(), Error);
}

TEST_CASE("random points are distinct and optionally etale") {
  Rng rng(31);
  auto F = Field::extension(3, 2);
  for (int t = 0; t < 10; ++t) {
    auto a = random_point(F, 4, rng, true);
    CHECK(a.in_S());
    CHECK(a.is_etale());
  }
}
