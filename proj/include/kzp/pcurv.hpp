#pragma once

#include <vector>

#include "kzp/hyperg.hpp"

namespace kzp {

// Sign relating p-curvature eigenvalues to critical points:
// eigenvalues of Psi_k(a) are sigma (h^p - h) / (a_k - c)^p. Pinned by the
// two-point case, see pinned_descent_sign().
constexpr int kSteepestDescentSign = -1;

// Overall sign of the rank-one closed form. The printed formula has +h/C_k^p;
// direct p-fold differentiation (jets, and exact rational functions in the
// tests) gives the opposite sign at every point tried.
constexpr int kClosedFormSign = -1;

struct PCurvatureMatrix {
  int k = 0;  // 1-based direction
  EvalPoint point;
  FMatrix full;  // n x n on K^n; preserves V and kills (1, ..., 1)

  // (n-1) x (n-1) matrix in the basis e_s - e_n of V.
  FMatrix on_V() const;
};

// Psi_k(a) = (d_k + h H_k)^p at a, from p-jets along z = a + t e_k. The point's
// field must contain h.
PCurvatureMatrix psi_at_point(const KZContext& ctx, int k, const EvalPoint& a);

// Same operator applied to a polynomial section I; returns ((nabla_k)^p I)(a).
std::vector<Elt> psi_on_section(const KZContext& ctx, int k, const EvalPoint& a, const PolyVector& I);

// sum_l a_k^{p(l-1)} Q^{(lp-1)}(a) for the family of exponent e.
std::vector<Elt> weighted_family_sum(int n, uint64_t p, int e, int k, const EvalPoint& a);

// sign * (h / C_k(a)^p) (T . v) S with S, T the weighted sums of the +h and
// -h families; n x n on K^n. Requires h in F_p \ {0}.
FMatrix closed_form_psi(const KZContext& ctx, int k, const EvalPoint& a, int sign = kClosedFormSign);

// Seeded points of S over sample_field(ctx) (or an explicit field).
std::vector<EvalPoint> seeded_points(const FieldRef& f, int n, int count, uint64_t seed, bool etale = false);

Certificate nilpotency_check(const KZContext& ctx, const std::vector<EvalPoint>& points);
// Psi_k = 0 for all k; expected when h = 0 or dPlus is 0 or n-1.
Certificate zero_curvature_check(const KZContext& ctx, const std::vector<EvalPoint>& points);
// Rank one with the predicted kernel and image. Throws DegenerateCase when
// dPlus is 0 or n-1.
Certificate rank_structure_check(const KZContext& ctx, const std::vector<EvalPoint>& points);
// Routes to zero_curvature_check or rank_structure_check.
Certificate curvature_structure_check(const KZContext& ctx, const std::vector<EvalPoint>& points);
// Jets against the closed form, entrywise. `mutate` corrupts the +h family
// the same way mutate_family does (self-test).
Certificate closed_form_check(const KZContext& ctx, const std::vector<EvalPoint>& points, bool mutate = false,
                              int sign = kClosedFormSign);
// Psi from constant sections against (nabla_k)^p of random polynomial sections.
Certificate linearity_check(const KZContext& ctx, const std::vector<EvalPoint>& points, uint64_t seed);

// Critical points of P(., a): roots of dP/dx in `into` (with multiplicity).
std::vector<Elt> critical_points(const EvalPoint& a, const FieldRef& into);

// For h outside F_p at etale points: eigenvalues of Psi_k(a) on V against
// {sigma (h^p - h)/(a_k - c)^p}, computed in a splitting extension.
Certificate steepest_descent_spectrum_check(const KZContext& ctx, const std::vector<EvalPoint>& points,
                                            int sigma = kSteepestDescentSign);

// Recomputes sigma from n = 2, p = 5, h = t in F_25, a = (0, 1).
int pinned_descent_sign();

}  // namespace kzp
