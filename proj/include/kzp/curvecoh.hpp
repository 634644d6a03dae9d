#pragma once

#include <optional>
#include <vector>

#include "kzp/pcurv.hpp"

namespace kzp {

// Cyclic cover y^q = prod (x - z_i) and one isotypic component r of its first
// de Rham cohomology. Classes omega_i^(r) = dx / (y^r (x - z_i)) span it with
// the single relation sum_i omega_i = 0; mu_k^(r) = x^{k-1} dx / y^r span the
// holomorphic part.
struct CurveContext {
  int n = 0;
  int q = 0;
  int r = 0;
  FieldRef field;

  // Requires gcd(q, n) = gcd(q, p) = 1 and 0 < r < q.
  static CurveContext make(int n, int q, int r, FieldRef field);

  int genus() const { return (q * n - q - n + 1) / 2; }
  int hodge_rank() const { return n * r / q; }
  int dual_hodge_rank() const { return n * (q - r) / q; }
  // The level -r/q the component corresponds to.
  Elt level() const;
};

int genus_by_hodge_ranks(int n, int q);

// Coefficients on [omega_1..omega_n] and [mu_1..mu_m].
struct CohClass {
  std::vector<Elt> omega;
  std::vector<Elt> mu;

  // Representative with zero omega_n coefficient.
  CohClass canonical(const Field& f) const;
};

// nabla_{d/dz_i} [mu_k] = (r/q)([mu_{k-1}] + z_i [mu_{k-2}] + ... + z_i^{k-1} [omega_i]) at a point.
CohClass gm_on_mu(const CurveContext& c, const EvalPoint& a, int i, int k);

// ([omega_k^(r)], [mu_j^(q-r)]) = -q / (r C_k(a)) a_k^{j-1}.
Elt pair_omega_mu(const CurveContext& c, int k, int j, const EvalPoint& a);

// ([omega_i^(r)], [omega_j^(-r)]) = -h^{-1} (delta_ij - 1/n) with h = -r/q.
Elt pair_omega_omega(const CurveContext& c, int i, int j);

// Kodaira-Spencer image of mu_k: coefficient (r/q) a_i^{k-1} on the class of
// omega_i (times dz_i), per direction i.
std::vector<Elt> kodaira_spencer(const CurveContext& c, const EvalPoint& a, int k);

// Auxiliary cover attached to a level: q > n coprime to n and p with
// q h~ + 1 = a p, and the formulas on component a defined mod p (p does not
// divide a or N_{a,n,q}); the smallest such q.
struct KatzLinkage {
  int q = 0;
  int a = 0;
};
std::optional<KatzLinkage> find_linkage(int n, uint64_t p, int ht, int bound = 10000);
// The linkage for a given q; throws LinkageError when q is not admissible.
KatzLinkage linkage_for(int n, uint64_t p, int ht, int q);

// Cartier image of [omega_i^(r)] for r = p a - q e (0 < e <= p): coefficients
// Q_i^{(lp-1)}(a, e) on mu_l^(a), l = 1..floor(n e / p).
CohClass cartier_on_omega(int n, uint64_t p, int e, const EvalPoint& a, int i);

// Psi_k on V_{-h} assembled as F* o (katz_sign F* KS) o C. Column i is the
// image of e_i - (1/n)(1, ..., 1); the printed Katz formula has katz_sign = -1.
FMatrix katz_psi(const KZContext& ctx, const KatzLinkage& link, int k, const EvalPoint& a, int katz_sign = -1);

// Genus identity sum_r floor(nr/q) = (q-1)(n-1)/2 for coprime (n, q).
Certificate genus_check(const std::vector<int>& ns, const std::vector<int>& qs);

// Katz assembly against the printed closed form on V_{-h} and against direct
// p-curvature of the -h system. The closed form and the assembly are expected
// to agree exactly; the jets are compared up to kClosedFormSign.
// Without an explicit linkage the smallest admissible q is used.
Certificate katz_composition_check(const KZContext& ctx, const std::vector<EvalPoint>& points, int katz_sign = -1,
                                   std::optional<KatzLinkage> link = std::nullopt);

}  // namespace kzp
