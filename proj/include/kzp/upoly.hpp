#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "kzp/fields.hpp"

namespace kzp {

// Dense univariate polynomial over a finite field, coefficients low-to-high,
// trailing zeros trimmed (the zero polynomial has no coefficients).
class UPoly {
 public:
  UPoly() = default;
  explicit UPoly(FieldRef f) : f_(std::move(f)) {}
  UPoly(FieldRef f, std::vector<Elt> c) : f_(std::move(f)), c_(std::move(c)) { trim(); }
  static UPoly monomial(FieldRef f, size_t d, Elt c = 1);
  static UPoly x(FieldRef f) { return monomial(std::move(f), 1); }
  static UPoly constant(FieldRef f, Elt c) { return UPoly(std::move(f), {c}); }

  const FieldRef& field() const { return f_; }
  const std::vector<Elt>& coeffs() const { return c_; }
  int degree() const { return int(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  Elt coeff(size_t i) const { return i < c_.size() ? c_[i] : 0; }
  Elt lead() const { return c_.empty() ? 0 : c_.back(); }

  UPoly operator+(const UPoly& o) const;
  UPoly operator-(const UPoly& o) const;
  UPoly operator*(const UPoly& o) const;
  UPoly scale(Elt s) const;
  bool operator==(const UPoly& o) const { return f_ == o.f_ && c_ == o.c_; }

  Elt eval(Elt x) const;
  UPoly derivative() const;
  UPoly monic() const;
  // Maps coefficients through `map` into field `to`.
  template <class Map>
  UPoly mapped(FieldRef to, Map&& map) const {
    std::vector<Elt> c(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) c[i] = map(c_[i]);
    return UPoly(std::move(to), std::move(c));
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  FieldRef f_;
  std::vector<Elt> c_;
};

std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b);
UPoly mod(const UPoly& a, const UPoly& b);
UPoly gcd(UPoly a, UPoly b);  // monic, or zero
UPoly powmod(const UPoly& base, uint64_t e, const UPoly& m);

// Monic irreducibility over the coefficient field (Rabin's test).
bool is_irreducible(const UPoly& f);
// Degrees of the irreducible factors (each listed once per distinct factor).
std::vector<int> factor_degrees(const UPoly& f);
// Distinct roots in the coefficient field, sorted by packed value, with multiplicity.
std::vector<std::pair<Elt, int>> roots_with_multiplicity(const UPoly& f);

// Field embedding F_{p^k} -> L, determined by the image of the generator.
class Embedding {
 public:
  Embedding() = default;
  // Picks the smallest root (by packed value) of from's modulus in `to`.
  Embedding(FieldRef from, FieldRef to);
  Elt operator()(Elt a) const;
  const FieldRef& from() const { return from_; }
  const FieldRef& to() const { return to_; }

 private:
  FieldRef from_, to_;
  std::vector<Elt> gen_pows_;
};

}  // namespace kzp
