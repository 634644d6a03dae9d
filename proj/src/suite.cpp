#include "kzp/suite.hpp"

#include <chrono>
#include <functional>
#include <map>

namespace kzp {

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names{
      "counting",     "flatness",      "homogeneity",  "degree-bounds",  "derivative-identity",
      "point-independence", "orthogonality", "lagrangian", "nilpotency", "curvature-structure",
      "closed-form",  "linearity",     "formal-rank",  "formal-flatness", "no-solutions",
      "spectrum",     "katz",          "genus"};
  return names;
}

uint64_t derive_seed(uint64_t base, const std::string& label, const KZContext& ctx) {
  // FNV-1a over the label and context, then a splitmix finalizer.
  uint64_t x = 1469598103934665603ULL;
  auto mix = [&](uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      x ^= (v >> (8 * i)) & 0xff;
      x *= 1099511628211ULL;
    }
  };
  for (char ch : label) mix(uint64_t(uint8_t(ch)));
  mix(base);
  mix(uint64_t(ctx.n));
  mix(ctx.p());
  mix(uint64_t(ctx.field->degree()));
  mix(ctx.h);
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Elt irrational_level(const FieldRef& quadratic, uint64_t seed) {
  Rng rng(seed);
  for (;;) {
    Elt h = rng.below(quadratic->order());
    if (quadratic->frobenius(h) != h) return h;
  }
}

int exit_status(const std::vector<Certificate>& certs) {
  int code = 0;
  for (auto& c : certs) {
    if (c.status == Status::Error) return 2;
    if (c.status == Status::Fail) code = 1;
  }
  return code;
}

namespace {

int points_for(const SuiteOptions& opt, int fallback) { return opt.trials ? *opt.trials : fallback; }

std::vector<int> depths_for(const KZContext& ctx, const SuiteOptions& opt) {
  if (!opt.depths.empty()) return opt.depths;
  int p = int(ctx.p());
  if (!ctx.h_in_prime_field()) return {3 * p};
  return {p, 2 * p};
}

bool precondition(ErrorKind k) {
  return k == ErrorKind::NotApplicable || k == ErrorKind::RationalH || k == ErrorKind::PDividesN ||
         k == ErrorKind::DegenerateCase;
}

Certificate from_error(const std::string& name, const KZContext& ctx, const Error& e) {
  Certificate c = make_certificate(name);
  c.params = context_params(ctx);
  if (precondition(e.kind())) {
    c.status = Status::NotApplicable;
    c.detail["reason"] = e.what();
  } else {
    c.status = Status::Error;
    c.witness = {{"error", e.what()}};
  }
  return c;
}

std::vector<EvalPoint> points(const KZContext& ctx, const std::string& label, const SuiteOptions& opt, int count,
                              bool etale = false) {
  return seeded_points(sample_field(ctx), ctx.n, count, derive_seed(opt.seed, label, ctx), etale);
}

std::vector<QFamily> families(const KZContext& ctx, const SuiteOptions& opt, bool allow_mutation) {
  auto plus = p_solutions(ctx, Sign::Plus);
  if (allow_mutation && opt.mutate && plus.size() > 0) mutate_family(plus);
  return {plus, p_solutions(ctx, Sign::Minus)};
}

std::vector<Certificate> dispatch(const KZContext& ctx, const std::string& name, const SuiteOptions& opt) {
  uint64_t seed = derive_seed(opt.seed, name, ctx);
  std::vector<Certificate> out;
  if (name == "counting") {
    out.push_back(counting_check(ctx));
  } else if (name == "flatness") {
    for (auto& f : families(ctx, opt, true)) out.push_back(family_flatness_check(f));
  } else if (name == "homogeneity") {
    for (auto& f : families(ctx, opt, false)) out.push_back(homogeneity_check(f));
  } else if (name == "degree-bounds") {
    for (auto& f : families(ctx, opt, false)) out.push_back(degree_bounds_check(f));
  } else if (name == "derivative-identity") {
    out.push_back(derivative_identity_check(ctx, 0));
  } else if (name == "point-independence") {
    out.push_back(point_independence_check(ctx, points_for(opt, opt.independence_points), seed));
  } else if (name == "orthogonality") {
    auto fam = families(ctx, opt, true);
    out.push_back(orthogonality_check(ctx, fam[0], fam[1]));
  } else if (name == "lagrangian") {
    out.push_back(lagrangian_check(ctx, points_for(opt, opt.independence_points), seed));
  } else if (name == "nilpotency") {
    out.push_back(nilpotency_check(ctx, points(ctx, name, opt, points_for(opt, opt.curvature_points))));
  } else if (name == "curvature-structure") {
    out.push_back(curvature_structure_check(ctx, points(ctx, name, opt, points_for(opt, opt.curvature_points))));
  } else if (name == "closed-form") {
    out.push_back(closed_form_check(ctx, points(ctx, name, opt, points_for(opt, opt.curvature_points)), opt.mutate));
  } else if (name == "linearity") {
    out.push_back(linearity_check(ctx, points(ctx, name, opt, points_for(opt, opt.curvature_points)), seed));
  } else if (name == "formal-rank") {
    ctx.require_p_coprime_n();
    if (!ctx.h_in_prime_field()) fail(ErrorKind::NotApplicable, "formal rank is checked for h in F_p");
    auto pts = points(ctx, name, opt, points_for(opt, opt.formal_points));
    for (int D : depths_for(ctx, opt)) out.push_back(formal_rank_check(ctx, pts, D));
  } else if (name == "formal-flatness") {
    auto pts = points(ctx, name, opt, 1);
    out.push_back(formal_flatness_check(ctx, pts, int(ctx.p())));
  } else if (name == "no-solutions") {
    auto pts = points(ctx, name, opt, points_for(opt, opt.formal_points));
    for (int D : depths_for(ctx, opt)) out.push_back(no_solutions_check(ctx, pts, D));
  } else if (name == "spectrum") {
    if (ctx.h_in_prime_field()) fail(ErrorKind::NotApplicable, "spectrum is checked for h outside F_p");
    out.push_back(steepest_descent_spectrum_check(ctx, points(ctx, name, opt, points_for(opt, opt.spectrum_points), true)));
  } else if (name == "katz") {
    std::optional<KatzLinkage> link;
    if (opt.katz_q) {
      ctx.require_rational_nonzero_h();
      link = linkage_for(ctx.n, ctx.p(), *ctx.ht, *opt.katz_q);
    }
    out.push_back(katz_composition_check(ctx, points(ctx, name, opt, points_for(opt, opt.katz_points)), -1, link));
  } else if (name == "genus") {
    out.push_back(genus_check({ctx.n}, {3, 5, 7, 11}));
  } else {
    fail(ErrorKind::Config, "unknown check '" + name + "'");
  }
  for (auto& c : out)
    if (c.seed == 0) c.seed = seed;
  return out;
}

}  // namespace

std::vector<Certificate> run_check(const KZContext& ctx, const std::string& name, const SuiteOptions& opt) {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<Certificate> out;
  try {
    out = dispatch(ctx, name, opt);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Config) throw;
    out = {from_error(name, ctx, e)};
  }
  if (opt.timing) {
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    for (auto& c : out) c.timing_ms = ms / double(out.size());
  }
  return out;
}

std::vector<Certificate> run_suite(const KZContext& ctx, const SuiteOptions& opt) {
  std::vector<std::string> order;
  bool rational = ctx.h_in_prime_field();
  if (rational) {
    order = {"counting",    "flatness",   "homogeneity", "degree-bounds",      "point-independence",
             "orthogonality", "lagrangian", "nilpotency", "curvature-structure", "closed-form",
             "formal-rank"};
  } else {
    order = {"nilpotency", "curvature-structure", "no-solutions", "spectrum"};
  }
  if (opt.katz) order.push_back("katz");
  std::vector<Certificate> out;
  for (auto& name : order)
    for (auto& c : run_check(ctx, name, opt)) out.push_back(std::move(c));
  return out;
}

std::vector<KZContext> suite_grid(const std::string& name) {
  std::vector<int> ns;
  std::vector<uint64_t> ps;
  if (name == "grid") {
    ns = {2, 3, 4, 5, 6};
    ps = {5, 7, 11, 13};
  } else if (name == "quick") {
    ns = {2, 3, 4};
    ps = {5, 7};
  } else {
    fail(ErrorKind::Config, "unknown suite '" + name + "' (expected grid or quick)");
  }
  std::vector<KZContext> out;
  for (int n : ns)
    for (uint64_t p : ps) {
      if (uint64_t(n) % p == 0) continue;
      for (uint64_t ht = 1; ht < p; ++ht) out.push_back(KZContext::make(n, p, int64_t(ht)));
      auto K = Field::extension(p, 2);
      out.push_back(KZContext::make(n, K, irrational_level(K, p * 1000 + uint64_t(n))));
    }
  return out;
}

}  // namespace kzp
