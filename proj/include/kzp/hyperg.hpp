#pragma once

#include <vector>

#include "kzp/kz_core.hpp"

namespace kzp {

enum class Sign { Plus, Minus };

// The p-hypergeometric solutions for level +h or -h: vectors[l-1] is the
// coefficient of x^{lp-1} in P^e (1/(x - z_j))_j, with e = h~ or p - h~.
struct QFamily {
  KZContext ctx;  // context of the family's own level (+h or -h)
  Sign sign = Sign::Plus;
  int exponent = 0;
  std::vector<PolyVector> vectors;

  size_t size() const { return vectors.size(); }
  // Homogeneous degree of vectors[l-1].
  int degree(int l) const { return ctx.n * exponent - l * int(ctx.p()); }
};

// All slices i = 0..n h~ - 1 of P^h~ (1/(x - z_j))_j.
std::vector<PolyVector> q_expansion(const KZContext& ctx);
QFamily p_solutions(const KZContext& ctx, Sign sign);
// Family for an explicit exponent e in [1, p-1] (level e as an element of F_p).
QFamily family_for_exponent(int n, uint64_t p, int e);

// Evaluate a family at a point via one-variable arithmetic in x:
// rows l = 1..count, each an n-vector over the point's field.
std::vector<std::vector<Elt>> family_at_point(int n, uint64_t p, int e, const EvalPoint& a);

Certificate counting_check(const KZContext& ctx);
Certificate homogeneity_check(const QFamily& fam);
Certificate degree_bounds_check(const QFamily& fam);
Certificate family_flatness_check(const QFamily& fam);
Certificate derivative_identity_check(const KZContext& ctx, int j);
Certificate point_independence_check(const KZContext& ctx, int trials, uint64_t seed);
Certificate orthogonality_check(const KZContext& ctx);
Certificate orthogonality_check(const KZContext& ctx, const QFamily& plus, const QFamily& minus);
Certificate lagrangian_check(const KZContext& ctx, int trials, uint64_t seed);

// Exact test that sum_j A_j B_j is the zero polynomial; on failure returns a
// nonzero monomial exponent of the (dehomogenized) product.
bool pairing_vanishes(const PolyVector& A, const PolyVector& B, std::vector<int>* witness = nullptr);

// Self-test corruption: shifts z_2^d between the first two components of the
// first vector, preserving the component sum but breaking flatness.
void mutate_family(QFamily& fam);

// Coordinates of a sum-zero vector in the basis e_s - e_n (s = 1..n-1).
std::vector<Elt> v_coords(const std::vector<Elt>& v);

}  // namespace kzp
