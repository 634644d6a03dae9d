#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kzp/curvecoh.hpp"
#include "kzp/solspace.hpp"

namespace kzp {

struct SuiteOptions {
  uint64_t seed = 1;
  // Point counts per pointwise check; `trials` overrides all of them when set.
  std::optional<int> trials;
  int independence_points = 20;
  int curvature_points = 10;
  int formal_points = 3;
  int spectrum_points = 5;
  int katz_points = 5;
  // Formal truncations; empty means {p, 2p} (and 3p for h outside F_p).
  std::vector<int> depths;
  // Katz composition: off, the smallest admissible q, or a fixed q.
  bool katz = false;
  std::optional<int> katz_q;
  bool mutate = false;
  bool timing = false;
};

// Check names in suite order.
const std::vector<std::string>& check_names();

// One named check; a check that splits by family sign yields two certificates.
// Library errors become certificates: theorem preconditions give
// not-applicable, anything else gives status error.
std::vector<Certificate> run_check(const KZContext& ctx, const std::string& name, const SuiteOptions& opt);

// Every check in order for one context.
std::vector<Certificate> run_suite(const KZContext& ctx, const SuiteOptions& opt);

// Named context grids: "grid" (n in 2..6, p in {5, 7, 11, 13}, p not dividing
// n, all h~, plus one level of F_{p^2} outside F_p per (n, p)) and "quick".
std::vector<KZContext> suite_grid(const std::string& name);

// A level in F_{p^2} \ F_p chosen from the seed.
Elt irrational_level(const FieldRef& quadratic, uint64_t seed);

// Stable per-check seed.
uint64_t derive_seed(uint64_t base, const std::string& label, const KZContext& ctx);

// 0 all pass, 1 any failure, 2 any error (errors win).
int exit_status(const std::vector<Certificate>& certs);

}  // namespace kzp
