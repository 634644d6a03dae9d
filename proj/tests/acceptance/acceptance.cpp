// Acceptance run: one PASS/FAIL line per criterion, exact comparisons only.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "kzp/suite.hpp"

using namespace kzp;

namespace {

constexpr uint64_t kSeed = 20240611;

struct Outcome {
  bool ok = true;
  std::string note;
  long long cases = 0;

  void expect(const Certificate& c, Status want = Status::Pass) {
    ++cases;
    if (c.status == want || (want == Status::Pass && c.status == Status::NotApplicable && allow_na)) return;
    if (ok) note = c.check + " " + c.params.dump() + " -> " + to_string(c.status) + " " + c.witness.dump();
    ok = false;
  }
  void expect(bool cond, const std::string& what) {
    ++cases;
    if (cond) return;
    if (ok) note = what;
    ok = false;
  }
  bool allow_na = false;
};

std::vector<KZContext> rational_cells() {
  std::vector<KZContext> out;
  for (auto& c : suite_grid("grid"))
    if (c.h_in_prime_field()) out.push_back(c);
  return out;
}

std::vector<KZContext> irrational_cells() {
  std::vector<KZContext> out;
  for (auto& c : suite_grid("grid"))
    if (!c.h_in_prime_field()) out.push_back(c);
  return out;
}

std::vector<EvalPoint> pts(const KZContext& ctx, const std::string& label, int count, bool etale = false) {
  return seeded_points(sample_field(ctx), ctx.n, count, derive_seed(kSeed, label, ctx), etale);
}

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.ok = false;
    o.note = std::string("exception: ") + e.what();
  }
  double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.ok) ++failures;
  std::printf("[%s] %2d %s: %lld cases, %.1fs%s%s\n", o.ok ? "PASS" : "FAIL", id, title.c_str(), o.cases, s,
              o.note.empty() ? "" : " | ", o.note.c_str());
  std::fflush(stdout);
}

}  // namespace

int main() {
  const auto rational = rational_cells();
  const auto irrational = irrational_cells();

  report(1, "flatness of every p-hypergeometric vector, both signs", [&] {
    Outcome o;
    for (auto& ctx : rational)
      for (auto s : {Sign::Plus, Sign::Minus}) o.expect(family_flatness_check(p_solutions(ctx, s)));
    return o;
  });

  report(2, "dPlus + dMinus = n - 1", [&] {
    Outcome o;
    for (auto& ctx : rational) {
      o.expect(counting_check(ctx));
      o.expect(ctx.dplus + ctx.dminus == ctx.n - 1, "count identity");
    }
    return o;
  });

  report(3, "homogeneity and degree bounds", [&] {
    Outcome o;
    for (auto& ctx : rational)
      for (auto s : {Sign::Plus, Sign::Minus}) {
        auto fam = p_solutions(ctx, s);
        o.expect(homogeneity_check(fam));
        o.expect(degree_bounds_check(fam));
      }
    return o;
  });

  report(4, "orthogonality of the two families", [&] {
    Outcome o;
    for (auto& ctx : rational) o.expect(orthogonality_check(ctx));
    return o;
  });

  report(5, "point independence, rank dPlus at 20 points", [&] {
    Outcome o;
    for (auto& ctx : rational) o.expect(point_independence_check(ctx, 20, derive_seed(kSeed, "independence", ctx)));
    return o;
  });

  report(6, "p-curvature structure at 10 points (closed form with overall sign -1)", [&] {
    Outcome o;
    for (auto& ctx : rational) {
      auto p = pts(ctx, "curvature", 10);
      o.expect(nilpotency_check(ctx, p));
      o.expect(curvature_structure_check(ctx, p));
      bool rank_one = ctx.dplus > 0 && ctx.dplus < ctx.n - 1;
      if (rank_one) o.expect(closed_form_check(ctx, p, false, kClosedFormSign));
    }
    return o;
  });

  report(7, "formal solutions at D = p and 2p, hypergeometric reduction", [&] {
    Outcome o;
    for (auto& ctx : rational) {
      if (ctx.dplus < 1) continue;
      auto p = pts(ctx, "formal", 3);
      for (int D : {int(ctx.p()), 2 * int(ctx.p())}) o.expect(formal_rank_check(ctx, p, D));
    }
    return o;
  });

  report(8, "no formal solutions for h outside F_p at D = 3p", [&] {
    Outcome o;
    for (auto& ctx : irrational) {
      auto p = pts(ctx, "irrational", 3);
      o.expect(no_solutions_check(ctx, p, 3 * int(ctx.p())));
      o.expect(formal_solve(ctx, p[0], 3 * int(ctx.p())).params.empty(), "empty basis");
    }
    return o;
  });

  report(9, "p-curvature spectrum against critical points at 5 etale points", [&] {
    Outcome o;
    int sigma = pinned_descent_sign();
    o.expect(sigma == kSteepestDescentSign, "pinned sign");
    for (auto& ctx : irrational) o.expect(steepest_descent_spectrum_check(ctx, pts(ctx, "spectrum", 5, true), sigma));
    return o;
  });

  report(10, "genus identity and Katz factorization at 5 points", [&] {
    Outcome o;
    o.expect(genus_check({2, 3, 4, 5, 6}, {3, 5, 7, 11}));
    for (auto& ctx : rational) {
      // Levels with no admissible cover must be reported as such, never passed.
      bool linked = find_linkage(ctx.n, ctx.p(), *ctx.ht).has_value();
      o.expect(katz_composition_check(ctx, pts(ctx, "katz", 5)), linked ? Status::Pass : Status::NotApplicable);
    }
    return o;
  });

  report(11, "determinism of repeated suite runs", [&] {
    Outcome o;
    SuiteOptions opt;
    opt.seed = kSeed;
    opt.trials = 3;
    opt.katz = true;
    auto run = [&] {
      std::string s;
      for (auto& ctx : suite_grid("quick"))
        for (auto& c : run_suite(ctx, opt)) s += c.to_json().dump() + "\n";
      return s;
    };
    std::string a = run(), b = run();
    o.expect(!a.empty() && a == b, "suite output differs between runs");
    o.cases = 2;
    return o;
  });

  report(12, "negative controls fail with witnesses", [&] {
    Outcome o;
    for (auto& ctx : rational) {
      if (ctx.dplus < 1) continue;
      auto plus = p_solutions(ctx, Sign::Plus);
      mutate_family(plus);
      auto flat = family_flatness_check(plus);
      o.expect(flat, Status::Fail);
      o.expect(!flat.witness.is_null(), "flatness witness");
      if (ctx.dminus >= 1) {
        auto orth = orthogonality_check(ctx, plus, p_solutions(ctx, Sign::Minus));
        o.expect(orth, Status::Fail);
        o.expect(!orth.witness.is_null(), "orthogonality witness");
        auto cf = closed_form_check(ctx, pts(ctx, "curvature", 10), true);
        o.expect(cf, Status::Fail);
        o.expect(!cf.witness.is_null(), "closed-form witness");
        if (find_linkage(ctx.n, ctx.p(), *ctx.ht))
          o.expect(katz_composition_check(ctx, pts(ctx, "katz", 5), +1), Status::Fail);
      }
    }
    return o;
  });

  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
