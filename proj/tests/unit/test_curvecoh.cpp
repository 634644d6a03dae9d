#include "doctest.h"
#include "kzp/curvecoh.hpp"

using namespace kzp;

TEST_CASE("genus equals the sum of Hodge ranks") {
  CHECK(genus_check({2, 3, 4, 5, 6}, {3, 5, 7, 11}).status == Status::Pass);
  CHECK(genus_by_hodge_ranks(3, 5) == 4);
  CHECK(CurveContext::make(3, 5, 1, Field::prime(7)).genus() == 4);
  CHECK_THROWS_AS(CurveContext::make(3, 6, 1, Field::prime(7)), Error);
  CHECK_THROWS_AS(CurveContext::make(3, 7, 1, Field::prime(7)), Error);
}

TEST_CASE("Gauss-Manin on holomorphic classes") {
  auto F = Field::prime(11);
  auto c = CurveContext::make(3, 4, 3, F);  // hodge rank floor(9/4) = 2
  EvalPoint a{F, {2, 5, 7}};
  Elt rq = F->div(3, 4);
  auto g1 = gm_on_mu(c, a, 2, 1);
  CHECK(g1.omega == std::vector<Elt>{0, rq, 0});
  CHECK(g1.mu == std::vector<Elt>{0, 0});
  auto g2 = gm_on_mu(c, a, 3, 2);
  CHECK(g2.mu == std::vector<Elt>{rq, 0});
  CHECK(g2.omega == std::vector<Elt>{0, 0, F->mul(rq, 7)});
  CHECK_THROWS_AS(gm_on_mu(c, a, 1, 0), Error);
  CHECK_THROWS_AS(gm_on_mu(c, a, 1, 3), Error);
  // Kodaira-Spencer is the omega part of the same derivative.
  for (int k = 1; k <= 2; ++k) {
    auto ks = kodaira_spencer(c, a, k);
    for (int i = 1; i <= 3; ++i) CHECK(ks[i - 1] == gm_on_mu(c, a, i, k).omega[i - 1]);
  }
  // n = 3, q = 5, r = 4: top index floor(12/5) = 2, coefficients (4/5) z_i.
  auto c5 = CurveContext::make(3, 5, 4, F);
  auto ks = kodaira_spencer(c5, a, 2);
  for (int i = 0; i < 3; ++i) CHECK(ks[i] == F->mul(F->div(4, 5), a.coords[i]));
}

TEST_CASE("Poincare pairings") {
  auto F = Field::prime(7);
  // n = 2, q = 3, r = 1 at (0, 1): C_1 = -1 and the pairing is 3.
  auto c = CurveContext::make(2, 3, 1, F);
  EvalPoint a{F, {0, 1}};
  CHECK(pair_omega_mu(c, 1, 1, a) == 3);
  CHECK_THROWS_AS(pair_omega_mu(c, 1, 2, a), Error);
  CHECK_THROWS_AS(pair_omega_mu(c, 1, 1, EvalPoint{F, {1, 1}}), Error);
  // n = 2, h = 2 in F_5 (q = 7, r = 1: -1/7 = 2): diagonal value 1.
  auto F5 = Field::prime(5);
  auto c5 = CurveContext::make(2, 7, 1, F5);
  CHECK(c5.level() == 2);
  CHECK(pair_omega_omega(c5, 1, 1) == 1);
  auto c4 = CurveContext::make(4, 7, 3, F5);
  for (int i = 1; i <= 4; ++i) {
    Elt row = 0;
    for (int j = 1; j <= 4; ++j) {
      row = F5->add(row, pair_omega_omega(c4, i, j));
      CHECK(pair_omega_omega(c4, i, j) == pair_omega_omega(c4, j, i));
    }
    CHECK(row == 0);
  }
}

TEST_CASE("linkage search and Cartier images") {
  // n = 3, p = 5, h~ = 3: q = 3 mod 5, q > 3, gcd(q, 3) = 1. q = 8 gives a = 5,
  // a multiple of p, so the scan moves on to q = 13, a = 8.
  auto l = find_linkage(3, 5, 3);
  REQUIRE(l);
  CHECK(l->q == 13);
  CHECK(l->a == 8);
  CHECK(!find_linkage(3, 5, 0));
  // Cartier coefficients are the hypergeometric family at the point.
  auto F = Field::prime(5);
  EvalPoint a{F, {0, 1, 3}};
  auto fam = family_at_point(3, 5, 3, a);
  Elt sum = 0;
  for (int i = 1; i <= 3; ++i) {
    auto ci = cartier_on_omega(3, 5, 3, a, i);
    REQUIRE(ci.mu.size() == 1);
    CHECK(ci.mu[0] == fam[0][i - 1]);
    sum = F->add(sum, ci.mu[0]);
  }
  CHECK(sum == 0);
  // dPlus = 0 gives the zero class.
  CHECK(cartier_on_omega(3, 5, 1, a, 1).mu.empty());
}

TEST_CASE("Katz assembly reproduces the p-curvature") {
  for (auto [n, p, h] : {std::tuple{3, 5, 3}, std::tuple{4, 7, 3}, std::tuple{5, 7, 5}, std::tuple{4, 5, 2}}) {
    CAPTURE(n);
    CAPTURE(p);
    CAPTURE(h);
    auto ctx = KZContext::make(n, uint64_t(p), h);
    auto pts = seeded_points(sample_field(ctx), n, 5, 17);
    auto cert = katz_composition_check(ctx, pts);
    CHECK(cert.status == Status::Pass);
    // Negative control: without the minus sign in Katz's formula.
    CHECK(katz_composition_check(ctx, pts, +1).status == Status::Fail);
  }
  // Degenerate counts: every leg vanishes.
  auto ctx = KZContext::make(3, 5, 1);
  auto pts = seeded_points(Field::prime(5), 3, 3, 2);
  CHECK(katz_composition_check(ctx, pts).status == Status::Pass);
  auto l = find_linkage(3, 5, 1);
  REQUIRE(l);
  CHECK(katz_psi(ctx, *l, 1, pts[0]).is_zero());
}
