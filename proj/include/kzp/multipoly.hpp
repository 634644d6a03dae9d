#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "kzp/fields.hpp"

namespace kzp {

// Exponent vectors are packed into one word: total degree in the top byte,
// then one byte per variable with z_1 most significant. Ascending key order is
// therefore graded-lex order.
constexpr int kMaxVars = 7;
using MonoKey = uint64_t;

MonoKey mono_key(const std::vector<int>& e);
std::vector<int> mono_exps(MonoKey k, int n);
inline int mono_degree(MonoKey k) { return int(k >> 56); }
inline int mono_exp(MonoKey k, int i) { return int((k >> (8 * (kMaxVars - 1 - i))) & 0xff); }
// Multiply by z_i (0-based); throws DegreeGuard on overflow.
MonoKey mono_times_var(MonoKey k, int i);

class ZPolynomial {
 public:
  using Term = std::pair<MonoKey, Elt>;

  ZPolynomial() = default;
  ZPolynomial(FieldRef f, int n);
  static ZPolynomial constant(FieldRef f, int n, Elt c);
  static ZPolynomial variable(FieldRef f, int n, int i);  // z_{i+1}
  // Terms may be unsorted and repeated; they are combined.
  static ZPolynomial from_terms(FieldRef f, int n, std::vector<Term> terms);

  const FieldRef& field() const { return f_; }
  int nvars() const { return n_; }
  const std::vector<Term>& terms() const { return t_; }
  size_t size() const { return t_.size(); }
  bool is_zero() const { return t_.empty(); }
  Elt coeff(const std::vector<int>& e) const;

  ZPolynomial operator+(const ZPolynomial& o) const;
  ZPolynomial operator-(const ZPolynomial& o) const;
  ZPolynomial operator-() const;
  ZPolynomial operator*(const ZPolynomial& o) const;
  bool operator==(const ZPolynomial& o) const { return f_ == o.f_ && n_ == o.n_ && t_ == o.t_; }
  bool operator!=(const ZPolynomial& o) const { return !(*this == o); }

  ZPolynomial scale(Elt s) const;
  ZPolynomial times_var(int i) const;  // multiply by z_{i+1}
  // this + s * o, in one merge pass.
  ZPolynomial axpy(Elt s, const ZPolynomial& o) const;
  ZPolynomial partial(int i) const;  // 0-based variable index

  // Evaluation at a point whose coordinates live in `pf`. Coefficients must be
  // in the same field or in the prime field of the same characteristic.
  Elt evaluate(const std::vector<Elt>& point, const Field& pf) const;

  int total_degree() const { return t_.empty() ? -1 : mono_degree(t_.back().first); }
  bool is_homogeneous(int d) const;
  int degree_in(int i) const;

  nlohmann::json to_json() const;
  static ZPolynomial from_json(const nlohmann::json& j, FieldRef f);

 private:
  void check_compatible(const ZPolynomial& o) const;
  FieldRef f_;
  int n_ = 0;
  std::vector<Term> t_;
};

inline ZPolynomial pmul(const ZPolynomial& f, const ZPolynomial& g) { return f * g; }
inline ZPolynomial partial(const ZPolynomial& f, int i) {
  if (i < 1 || i > f.nvars()) fail(ErrorKind::IndexOutOfRange, "variable index out of range");
  return f.partial(i - 1);
}

// Parse a canonical field string ("3", "4t+4", "t^2+1") into f.
Elt parse_field_string(const Field& f, const std::string& s);

// Polynomial in a distinguished variable x with ZPolynomial coefficients.
class XSeries {
 public:
  XSeries() = default;
  XSeries(FieldRef f, int n) : f_(std::move(f)), n_(n), zero_(f_, n_) {}
  XSeries(FieldRef f, int n, std::vector<ZPolynomial> c, std::optional<size_t> precision = std::nullopt);

  const std::vector<ZPolynomial>& coeffs() const { return c_; }
  int degree() const { return int(c_.size()) - 1; }
  std::optional<size_t> precision() const { return prec_; }
  const ZPolynomial& coeff(size_t i) const;
  int nvars() const { return n_; }
  const FieldRef& field() const { return f_; }

  // Multiply by (x - z_{i+1}).
  XSeries times_linear(int i) const;
  XSeries operator*(const XSeries& o) const;
  XSeries operator-() const;
  bool operator==(const XSeries& o) const;
  // Exact quotient by (x - z_{i+1}); throws if the remainder is nonzero.
  XSeries divide_linear(int i) const;
  // k-th derivative in x.
  XSeries derivative(int k) const;

 private:
  void trim();
  FieldRef f_;
  int n_ = 0;
  std::vector<ZPolynomial> c_;
  std::optional<size_t> prec_;
  ZPolynomial zero_;
};

constexpr int kMaxMasterDegree = 20000;
// P(x,z)^ht with P = prod_s (x - z_s).
XSeries master_power(FieldRef f, int n, int ht);

// Truncated one-variable jets over a field. Precision N means coefficients of
// t^0..t^{N-1} are known. When p divides N the ideal (t^N) is stable under
// d/dt, so differentiation loses no precision.
class Jet {
 public:
  Jet() = default;
  Jet(FieldRef f, size_t precision) : f_(std::move(f)), c_(precision, 0) {}
  Jet(FieldRef f, std::vector<Elt> c) : f_(std::move(f)), c_(std::move(c)) {}
  static Jet constant(FieldRef f, size_t precision, Elt c);

  const FieldRef& field() const { return f_; }
  size_t precision() const { return c_.size(); }
  const std::vector<Elt>& coeffs() const { return c_; }
  Elt operator[](size_t i) const { return c_[i]; }
  Elt& operator[](size_t i) { return c_[i]; }

  Jet operator+(const Jet& o) const;
  Jet operator*(const Jet& o) const;
  Jet derivative() const;
  bool operator==(const Jet& o) const { return f_ == o.f_ && c_ == o.c_; }

 private:
  FieldRef f_;
  std::vector<Elt> c_;
};

// The operator v -> dv/dt + M(t) v on vectors of jets; M is dim x dim, row-major.
struct JetOperator {
  size_t dim = 1;
  std::vector<Jet> matrix;
};

std::vector<Jet> jet_compose(std::vector<Jet> series, const JetOperator& op, int iterations);

}  // namespace kzp
