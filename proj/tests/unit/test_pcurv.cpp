#include "doctest.h"
#include "kzp/pcurv.hpp"
#include "kzp/upoly.hpp"

using namespace kzp;

TEST_CASE("p-curvature vanishes at level zero and in the full-rank case") {
  auto pts = seeded_points(Field::prime(7), 3, 3, 1);
  CHECK(zero_curvature_check(KZContext::make(3, 7, 0), pts).status == Status::Pass);
  // n = 2, p = 5, h = 3: dPlus = 1 = n - 1.
  auto ctx = KZContext::make(2, 5, 3);
  for (auto& a : seeded_points(Field::prime(5), 2, 5, 2))
    for (int k = 1; k <= 2; ++k) CHECK(psi_at_point(ctx, k, a).full.is_zero());
}

TEST_CASE("two-point oracle for h outside F_p") {
  // Psi = f^p + f^{(p-1)} on the line V with f = -2h/(z_1 - z_2), i.e.
  // Psi = -2(h^p - h)/(z_1 - z_2)^p.
  auto K = Field::extension(5, 2);
  Rng rng(3);
  for (int t = 0; t < 5; ++t) {
    Elt h = 0;
    while (K->frobenius(h) == h) h = rng.below(25);
    auto ctx = KZContext::make(2, K, h);
    auto a = random_point(K, 2, rng);
    Elt d = K->pow(K->sub(a.coords[0], a.coords[1]), 5);
    Elt expect = K->div(K->mul(K->from_int(-2), K->sub(K->frobenius(h), h)), d);
    CHECK(psi_at_point(ctx, 1, a).on_V()(0, 0) == expect);
    // Direction 2 sees the opposite sign of z_1 - z_2, raised to an odd power.
    CHECK(psi_at_point(ctx, 2, a).on_V()(0, 0) == K->neg(expect));
  }
  auto ctx = KZContext::make(2, K, K->generator());
  EvalPoint a{K, {0, 1}};
  Elt hh = K->sub(K->frobenius(K->generator()), K->generator());
  CHECK(psi_at_point(ctx, 1, a).on_V()(0, 0) == K->mul(2, hh));
}

TEST_CASE("descent sign is pinned by the two-point case") {
  CHECK(pinned_descent_sign() == kSteepestDescentSign);
  auto K = Field::extension(5, 2);
  EvalPoint a{K, {0, 1}};
  auto crit = critical_points(a, K);
  REQUIRE(crit.size() == 1);
  CHECK(crit[0] == K->inv(2));
}

TEST_CASE("nilpotency, rank one and closed form") {
  auto ctx = KZContext::make(3, 5, 3);
  auto pts = seeded_points(Field::prime(5), 3, 10, 7);
  CHECK(nilpotency_check(ctx, pts).status == Status::Pass);
  CHECK(rank_structure_check(ctx, pts).status == Status::Pass);
  CHECK(closed_form_check(ctx, pts).status == Status::Pass);
  CHECK(closed_form_check(ctx.negated(), pts).status == Status::Pass);
  auto bad = closed_form_check(ctx, pts, true);
  CHECK(bad.status == Status::Fail);
  CHECK(!bad.witness.is_null());
  CHECK_THROWS_AS(rank_structure_check(KZContext::make(2, 5, 3), pts), Error);
  // The printed sign is off by -1 everywhere.
  CHECK(closed_form_check(ctx, pts, false, +1).status == Status::Fail);

  auto ctx4 = KZContext::make(4, 5, 2);
  auto pts4 = seeded_points(Field::extension(5, 2), 4, 5, 9);
  CHECK(curvature_structure_check(ctx4, pts4).status == Status::Pass);
  CHECK(closed_form_check(ctx4, pts4).status == Status::Pass);
}

TEST_CASE("closed form kernel is respected by the jets") {
  auto ctx = KZContext::make(3, 5, 3);
  for (auto& a : seeded_points(Field::prime(5), 3, 5, 13)) {
    const Field& F = *a.field;
    for (int k = 1; k <= 3; ++k) {
      auto T = weighted_family_sum(3, 5, 2, k, a);
      // v = (T_2 - T_3, T_3 - T_1, T_1 - T_2) lies in V and has T . v = 0.
      std::vector<Elt> v{F.sub(T[1], T[2]), F.sub(T[2], T[0]), F.sub(T[0], T[1])};
      for (Elt x : psi_at_point(ctx, k, a).full.apply(v)) CHECK(x == 0);
    }
  }
}

TEST_CASE("p-curvature is linear over functions") {
  auto ctx = KZContext::make(3, 7, 4);
  CHECK(linearity_check(ctx, seeded_points(Field::prime(7), 3, 3, 5), 5).status == Status::Pass);
  auto K = Field::extension(5, 2);
  auto ctx2 = KZContext::make(3, K, K->generator());
  CHECK(linearity_check(ctx2, seeded_points(K, 3, 3, 6), 6).status == Status::Pass);
}

TEST_CASE("nilpotency is not applicable off F_p") {
  auto K = Field::extension(5, 2);
  auto ctx = KZContext::make(3, K, K->generator());
  CHECK(nilpotency_check(ctx, seeded_points(K, 3, 2, 1)).status == Status::NotApplicable);
}

TEST_CASE("steepest descent spectrum") {
  for (auto [n, p] : {std::pair{2, 5}, std::pair{3, 7}, std::pair{4, 5}}) {
    auto K = Field::extension(uint64_t(p), 2);
    auto ctx = KZContext::make(n, K, K->generator());
    auto pts = seeded_points(K, n, 3, 17, true);
    auto c = steepest_descent_spectrum_check(ctx, pts);
    CHECK(c.status == Status::Pass);
    if (n > 2) {
      // The wrong sign breaks the match.
      CHECK(steepest_descent_spectrum_check(ctx, pts, -kSteepestDescentSign).status == Status::Fail);
    }
  }
  CHECK(steepest_descent_spectrum_check(KZContext::make(3, 5, 2), {}).status == Status::NotApplicable);
}

TEST_CASE("invertibility follows the eigenvalue formula") {
  auto K = Field::extension(7, 2);
  auto ctx = KZContext::make(3, K, K->from_digits({1, 3}));
  for (auto& a : seeded_points(K, 3, 4, 21, true))
    for (int k = 1; k <= 3; ++k) CHECK(psi_at_point(ctx, k, a).on_V().det() != 0);
}

namespace {

// (d/dt + h H_k(a + t e_k))^p applied to e_s, using exact rational functions
// N(t) / D(t)^m with D = prod_{j != k} (a_k - a_j + t); no truncation.
std::vector<Elt> rational_psi_column(const KZContext& ctx, int k, const EvalPoint& a, int s) {
  const FieldRef& L = a.field;
  const Field& F = *L;
  int n = ctx.n, kk = k - 1;
  UPoly D = UPoly::constant(L, 1);
  std::vector<UPoly> cof(static_cast<size_t>(n), UPoly{L});  // D / (d_j + t)
  for (int j = 0; j < n; ++j)
    if (j != kk) D = D * UPoly(L, {F.sub(a.coords[kk], a.coords[j]), 1});
  for (int j = 0; j < n; ++j) {
    if (j == kk) continue;
    cof[j] = divmod(D, UPoly(L, {F.sub(a.coords[kk], a.coords[j]), 1})).first;
  }
  std::vector<UPoly> N(static_cast<size_t>(n), UPoly{L});
  N[size_t(s)] = UPoly::constant(L, 1);
  UPoly dD = D.derivative();
  for (int m = 0; m < int(ctx.p()); ++m) {
    std::vector<UPoly> next(static_cast<size_t>(n), UPoly{L});
    for (int i = 0; i < n; ++i) next[i] = N[i].derivative() * D - dD * N[i].scale(F.from_int(m));
    // D * h H_k N = h sum_j cof_j Omega_kj N
    for (int j = 0; j < n; ++j) {
      if (j == kk) continue;
      UPoly diff = (N[j] - N[kk]) * cof[j];
      next[kk] = next[kk] + diff.scale(ctx.h);
      next[j] = next[j] - diff.scale(ctx.h);
    }
    N = std::move(next);
  }
  Elt Dp = F.pow(D.eval(0), ctx.p());
  std::vector<Elt> col;
  for (auto& x : N) col.push_back(F.div(x.eval(0), Dp));
  return col;
}

}  // namespace

TEST_CASE("jets agree with exact rational-function differentiation") {
  for (auto [n, p, h] : {std::tuple{3, 5, 3}, std::tuple{4, 7, 2}, std::tuple{5, 7, 4}}) {
    auto ctx = KZContext::make(n, uint64_t(p), h);
    for (auto& a : seeded_points(Field::prime(uint64_t(p)), n, 2, 31))
      for (int k = 1; k <= n; ++k) {
        auto psi = psi_at_point(ctx, k, a).full;
        for (int s = 0; s < n; ++s) {
          auto col = rational_psi_column(ctx, k, a, s);
          for (int i = 0; i < n; ++i) CHECK(psi(size_t(i), size_t(s)) == col[size_t(i)]);
        }
      }
  }
}
