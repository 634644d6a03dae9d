#pragma once

#include <map>
#include <vector>

#include "kzp/hyperg.hpp"

namespace kzp {

// Exponent of a p-th-power monomial in the coordinates y_i = z_i - z_n
// (i < n) and w = z_n - a_n, centered at the point: (b_1, ..., b_{n-1}, k)
// stands for y^{p b} w^{p k}.
using PowerIndex = std::vector<int>;

// A formal solution is determined by its values on p-th-power monomials; this
// is that parameter vector, restricted to p |beta| < truncation.
using SolutionParams = std::map<PowerIndex, std::vector<Elt>>;

struct FormalSolutionBasis {
  EvalPoint point;
  int truncation = 0;  // D: total degree < D in z - a
  int dimension = 0;
  std::vector<SolutionParams> params;
  // Series in z - a (variables are the shifts), filled only by materialize.
  std::vector<PolyVector> basis;
};

// Dimension of the space of truncations at total degree < D of formal
// solutions that extend to degree < D + p.
int formal_dimension(const KZContext& ctx, const EvalPoint& a, int D);

// Basis in parameter form; with `materialize`, also as explicit series
// (small cases only, guarded).
FormalSolutionBasis formal_solve(const KZContext& ctx, const EvalPoint& a, int D, bool materialize = false);

// Equations d_k I + h H_k I = 0 in every coefficient of degree <= D - 2 and a
// zero component sum, for a series I in z - a truncated at degree < D.
bool truncated_flatness(const KZContext& ctx, const EvalPoint& a, const PolyVector& I, int D);

struct HypergExpression {
  bool zero_remainder = true;
  // coefficients[l][beta]: the coefficient of y^{p b} w^{p k} multiplying Q^{(lp-1)}.
  std::vector<std::map<PowerIndex, Elt>> coefficients;
  nlohmann::json remainder;  // first obstruction, when any
};

// Parameters of Q^{(lp-1)}(z, h) expanded at a, for p |beta| <= p.
std::vector<SolutionParams> hyperg_params(const KZContext& ctx, const EvalPoint& a);

// Writes a solution as sum_l f_l(y^p, w^p) Q^{(lp-1)} (requires D <= 2p).
HypergExpression express_in_hyperg_basis(const KZContext& ctx, const EvalPoint& a, const SolutionParams& solution, int D);

// Number of monomials y^{p b} w^{p k} with p (|b| + k) < D.
long long power_monomial_count(int n, uint64_t p, int D);

// Rank of the solution module over p-th powers: dPlus when positive,
// otherwise n - 1 (h in F_p), and n - 1 at h = 0.
int expected_module_rank(const KZContext& ctx);

Certificate module_rank_check(const KZContext& ctx, const std::vector<EvalPoint>& points, int D);
Certificate no_solutions_check(const KZContext& ctx, const std::vector<EvalPoint>& points, int D);
Certificate hyperg_span_check(const KZContext& ctx, const std::vector<EvalPoint>& points, int D);
// One solve per point: dimension against the module rank and, for D <= 2p
// and dPlus >= 1, zero remainder against the hypergeometric basis.
Certificate formal_rank_check(const KZContext& ctx, const std::vector<EvalPoint>& points, int D);
Certificate formal_flatness_check(const KZContext& ctx, const std::vector<EvalPoint>& points, int D);

}  // namespace kzp
