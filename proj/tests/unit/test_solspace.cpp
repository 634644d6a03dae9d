#include "doctest.h"
#include "kzp/pcurv.hpp"
#include "kzp/solspace.hpp"

#include <map>

using namespace kzp;

namespace {

// Brute force: every coefficient of I in z - a up to degree D + p - 1 is an
// unknown, every equation coefficient through degree D + p - 2 is a row.
// Returns the dimension of the truncations at degree < D of the solutions.
int brute_force_dimension(const KZContext& ctx, const EvalPoint& a, int D) {
  const Field& F = *a.field;
  int n = ctx.n, top = D + int(ctx.p()) - 1;
  std::vector<std::vector<int>> monos;
  std::map<std::vector<int>, size_t> idx;
  std::vector<int> e(size_t(n), 0);
  auto rec = [&](auto&& self, int i, int left) -> void {
    if (i == n) {
      idx[e] = monos.size();
      monos.push_back(e);
      return;
    }
    for (int x = 0; x <= left; ++x) {
      e[i] = x;
      self(self, i + 1, left - x);
    }
    e[i] = 0;
  };
  rec(rec, 0, top);
  auto deg = [](const std::vector<int>& m) {
    int d = 0;
    for (int x : m) d += x;
    return d;
  };
  size_t N = monos.size(), cols = N * size_t(n);
  auto col = [&](int c, size_t m) { return size_t(c) * N + m; };
  std::vector<std::vector<Elt>> rows;
  for (size_t m = 0; m < N; ++m) {
    std::vector<Elt> r(cols, 0);
    for (int c = 0; c < n; ++c) r[col(c, m)] = 1;
    rows.push_back(r);
  }
  // Coefficient of s_k^u s_j^v in 1/(b + s_k - s_j).
  auto inv_coef = [&](int k, int j, int u, int v) {
    Elt b = F.sub(a.coords[k], a.coords[j]);
    Elt c = F.inv(F.pow(b, uint64_t(u + v + 1)));
    // binomial(u+v, u) mod p
    int64_t bin = 1;
    for (int t = 1; t <= u; ++t) bin = bin * (v + t) / t;
    c = F.mul(c, F.from_int(bin));
    return u % 2 ? F.neg(c) : c;
  };
  for (int k = 0; k < n; ++k)
    for (size_t mi = 0; mi < N; ++mi) {
      const auto& mu = monos[mi];
      if (deg(mu) > top - 1) continue;
      for (int c = 0; c < n; ++c) {
        std::vector<Elt> r(cols, 0);
        auto up = mu;
        up[k] += 1;
        r[col(c, idx.at(up))] = F.add(r[col(c, idx.at(up))], F.from_int(mu[k] + 1));
        // h (H_k I)_c: c != k uses (I_k - I_c)/(z_k - z_c); c == k sums the negatives.
        for (int j = 0; j < n; ++j) {
          if (j == k || (c != k && c != j)) continue;
          Elt sgn = c == k ? F.neg(ctx.h) : ctx.h;
          for (int u = 0; u <= mu[k]; ++u)
            for (int v = 0; v <= mu[j]; ++v) {
              auto g = mu;
              g[k] -= u;
              g[j] -= v;
              Elt w = F.mul(sgn, inv_coef(k, j, u, v));
              size_t gi = idx.at(g);
              r[col(k, gi)] = F.add(r[col(k, gi)], w);
              r[col(j, gi)] = F.sub(r[col(j, gi)], w);
            }
        }
        rows.push_back(r);
      }
    }
  FMatrix M(a.field, rows.size(), cols);
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < cols; ++j) M(i, j) = rows[i][j];
  auto ker = M.kernel();
  std::vector<size_t> low;
  for (int c = 0; c < n; ++c)
    for (size_t m = 0; m < N; ++m)
      if (deg(monos[m]) < D) low.push_back(col(c, m));
  if (ker.empty()) return 0;
  FMatrix P(a.field, ker.size(), low.size());
  for (size_t i = 0; i < ker.size(); ++i)
    for (size_t j = 0; j < low.size(); ++j) P(i, j) = ker[i][low[j]];
  return int(P.rank());
}

}  // namespace

TEST_CASE("power monomial count and expected rank") {
  CHECK(power_monomial_count(3, 5, 5) == 1);
  CHECK(power_monomial_count(3, 5, 10) == 4);
  CHECK(power_monomial_count(4, 7, 15) == 15);
  CHECK(expected_module_rank(KZContext::make(3, 5, 3)) == 1);
  CHECK(expected_module_rank(KZContext::make(3, 5, 0)) == 2);
  CHECK(expected_module_rank(KZContext::make(2, 5, 1)) == 1);
  // dPlus = 0: floor(3 * 1 / 5) = 0 gives the full rank.
  CHECK(expected_module_rank(KZContext::make(3, 5, 1)) == 2);
}

TEST_CASE("reduced solver matches the brute-force linear system") {
  struct Case {
    int n;
    uint64_t p;
    int64_t h;
    int D;
  };
  for (auto c : {Case{2, 3, 1, 3}, Case{2, 3, 2, 6}, Case{2, 5, 3, 7}, Case{3, 3, 1, 3}, Case{3, 3, 2, 3},
                 Case{3, 3, 2, 6}, Case{3, 3, 0, 4}, Case{3, 5, 3, 5}, Case{3, 5, 1, 5}, Case{3, 3, 1, 5}}) {
    CAPTURE(c.n);
    CAPTURE(c.p);
    CAPTURE(c.h);
    CAPTURE(c.D);
    auto ctx = KZContext::make(c.n, c.p, c.h);
    auto K = sample_field(ctx);
    for (auto& a : seeded_points(K, c.n, 2, 100 + c.D)) CHECK(formal_dimension(ctx, a, c.D) == brute_force_dimension(ctx, a, c.D));
  }
}

TEST_CASE("formal solution counts") {
  auto ctx = KZContext::make(3, 5, 3);
  auto pts = seeded_points(Field::prime(5), 3, 3, 5);
  for (auto& a : pts) {
    CHECK(formal_dimension(ctx, a, 5) == 1);
    CHECK(formal_dimension(ctx, a, 10) == 4);
  }
  CHECK(module_rank_check(ctx, pts, 10).status == Status::Pass);
  CHECK(module_rank_check(KZContext::make(3, 5, 0), pts, 10).status == Status::Pass);
  CHECK(module_rank_check(KZContext::make(3, 5, 1), pts, 5).status == Status::Pass);
  auto ctx4 = KZContext::make(4, 7, 3);
  CHECK(module_rank_check(ctx4, seeded_points(Field::prime(7), 4, 2, 6), 14).status == Status::Pass);
}

TEST_CASE("no formal solutions off the prime field") {
  auto K = Field::extension(5, 2);
  auto ctx = KZContext::make(3, K, K->generator());
  auto pts = seeded_points(K, 3, 2, 8);
  CHECK(no_solutions_check(ctx, pts, 10).status == Status::Pass);
  CHECK(formal_solve(ctx, pts[0], 5).params.empty());
  CHECK(no_solutions_check(KZContext::make(3, 5, 2), seeded_points(Field::prime(5), 3, 1, 1), 5).status ==
        Status::NotApplicable);
}

TEST_CASE("hypergeometric solutions span the formal ones") {
  for (auto [n, p, h] : {std::tuple{3, 5, 3}, std::tuple{4, 7, 5}, std::tuple{3, 7, 4}}) {
    auto ctx = KZContext::make(n, uint64_t(p), h);
    auto pts = seeded_points(sample_field(ctx), n, 2, 21);
    CHECK(hyperg_span_check(ctx, pts, p).status == Status::Pass);
    CHECK(hyperg_span_check(ctx, pts, 2 * p).status == Status::Pass);
  }
  // The hypergeometric parameters are themselves solutions with one coefficient.
  auto ctx = KZContext::make(3, 5, 3);
  auto a = seeded_points(Field::prime(5), 3, 1, 2)[0];
  auto q = hyperg_params(ctx, a);
  REQUIRE(q.size() == 1);
  auto ex = express_in_hyperg_basis(ctx, a, q[0], 10);
  CHECK(ex.zero_remainder);
  CHECK(ex.coefficients[0].size() == 1);
  CHECK(ex.coefficients[0].begin()->second == 1);
  // A parameter outside the span leaves a remainder.
  auto bad = q[0];
  bad[PowerIndex{0, 0, 0}][0] = Field::prime(5)->add(bad[PowerIndex{0, 0, 0}][0], 1);
  bad[PowerIndex{0, 0, 0}][2] = Field::prime(5)->sub(bad[PowerIndex{0, 0, 0}][2], 1);
  CHECK(!express_in_hyperg_basis(ctx, a, bad, 10).zero_remainder);
}

TEST_CASE("materialized formal solutions satisfy the truncated system") {
  auto ctx = KZContext::make(3, 5, 3);
  auto pts = seeded_points(Field::prime(5), 3, 2, 4);
  CHECK(formal_flatness_check(ctx, pts, 10).status == Status::Pass);
  auto basis = formal_solve(ctx, pts[0], 10, true);
  REQUIRE(basis.basis.size() == 4);
  // Breaking one coefficient breaks the system.
  auto I = basis.basis[0];
  I[0] = I[0] + ZPolynomial::variable(pts[0].field, 3, 1);
  I[1] = I[1] - ZPolynomial::variable(pts[0].field, 3, 1);
  CHECK(!truncated_flatness(ctx, pts[0], I, 10));
  CHECK(formal_flatness_check(KZContext::make(3, 3, 0), seeded_points(Field::extension(3, 2), 3, 1, 3), 6).status ==
        Status::Pass);
}
