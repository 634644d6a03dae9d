#pragma once

#include <optional>
#include <vector>

#include "kzp/certificate.hpp"
#include "kzp/fields.hpp"
#include "kzp/matrix.hpp"
#include "kzp/multipoly.hpp"
#include "kzp/rng.hpp"

namespace kzp {

// Parameters of the KZ system: n, the field K, the level h and derived counts.
struct KZContext {
  int n = 0;
  FieldRef field;
  Elt h = 0;
  std::optional<int> ht;  // integer lift of h in [1, p-1] when h is in F_p \ {0}
  int dplus = 0;
  int dminus = 0;
  bool p_divides_n = false;

  static KZContext make(int n, FieldRef field, Elt h);
  static KZContext make(int n, uint64_t p, int64_t h) { return make(n, Field::prime(p), Field::prime(p)->from_int(h)); }

  uint64_t p() const { return field->characteristic(); }
  bool h_in_prime_field() const { return field->frobenius(h) == h; }
  KZContext negated() const { return make(n, field, field->neg(h)); }
  FieldRef prime_field() const { return Field::prime(p()); }
  // Throws PDividesN for theorem-gated operations.
  void require_p_coprime_n() const;
  // Throws RationalH unless h is in F_p \ {0}.
  void require_rational_nonzero_h() const;
};

using PolyVector = std::vector<ZPolynomial>;

struct EvalPoint {
  FieldRef field;
  std::vector<Elt> coords;

  size_t size() const { return coords.size(); }
  bool in_S() const;
  // Roots of dP/dx(., a) are distinct.
  bool is_etale() const;
  nlohmann::json to_json() const;
};

// Rejection-samples a point with pairwise distinct coordinates (and, if asked,
// with distinct critical points).
EvalPoint random_point(const FieldRef& f, int n, Rng& rng, bool etale = false);

// Field for random points: the context field when it has more than n elements,
// otherwise the smallest extension of F_p that does (h must then lie in F_p).
FieldRef sample_field(const KZContext& ctx);

FMatrix omega(const FieldRef& f, int i, int j, int n);  // 1-based indices
Elt shapovalov(const Field& f, const std::vector<Elt>& x, const std::vector<Elt>& y);
ZPolynomial shapovalov(const PolyVector& x, const PolyVector& y);

// H_k = N_k / D_k with D_k = prod_{j != k} (z_k - z_j); k is 1-based.
struct GaudinMatrix {
  int k = 0;
  std::vector<ZPolynomial> numerator;  // n x n, row-major
  ZPolynomial denominator;
};
GaudinMatrix gaudin(const FieldRef& f, int n, int k);
// H_k(a) as an n x n matrix over the point's field.
FMatrix gaudin_at(int n, int k, const EvalPoint& a);
// D_k(z), the product of (z_k - z_j) over j != k.
ZPolynomial gaudin_denominator(const FieldRef& f, int n, int k);

// D_k (d_k I + h H_k I), an exact polynomial vector. k is 1-based.
PolyVector nabla_apply(const KZContext& ctx, int k, const PolyVector& I);

// Passes iff every nabla_apply(ctx, k, I) vanishes and the components sum to 0.
Certificate flatness_check(const KZContext& ctx, const PolyVector& I);

nlohmann::json context_params(const KZContext& ctx);
nlohmann::json poly_vector_json(const PolyVector& v);

// Polynomial field used for I: must contain h.
FieldRef poly_field_for(const KZContext& ctx);

}  // namespace kzp
