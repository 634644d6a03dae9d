#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "kzp/error.hpp"

namespace kzp {

// Field elements are packed integers: the coefficient vector (c_0, ..., c_{k-1})
// of the residue class modulo the defining polynomial is stored as
// c_0 + c_1 p + ... + c_{k-1} p^{k-1}. Prime-subfield elements are therefore
// exactly the values below p, in every extension.
using Elt = uint64_t;

class Field;
using FieldRef = std::shared_ptr<const Field>;

bool is_prime(uint64_t n);

class Field {
 public:
  // Fields are interned: equal (p, modulus) yields the same object, so pointer
  // comparison is field equality.
  static FieldRef prime(uint64_t p);
  // Lexicographically smallest monic irreducible of degree k, comparing the
  // coefficient list from the constant term upwards.
  static FieldRef extension(uint64_t p, int k);
  // modulus: monic, low-to-high, length k+1. Irreducibility is verified.
  static FieldRef with_modulus(uint64_t p, std::vector<uint64_t> modulus);

  uint64_t characteristic() const { return p_; }
  int degree() const { return k_; }
  uint64_t order() const { return q_; }
  bool is_prime_field() const { return k_ == 1; }
  // Low-to-high, monic, length k+1 (for k = 1 this is x).
  const std::vector<uint64_t>& modulus() const { return mod_; }

  Elt from_int(int64_t v) const;
  Elt from_digits(const std::vector<uint64_t>& d) const;
  std::vector<uint64_t> digits(Elt a) const;
  // The class of t (for k = 1, the element 0 since the modulus is x).
  Elt generator() const { return k_ == 1 ? 0 : p_; }
  bool in_prime_subfield(Elt a) const { return a < p_; }
  bool valid(Elt a) const { return a < q_; }

  Elt add(Elt a, Elt b) const {
    if (mode_ == Mode::Prime) {
      Elt s = a + b;
      return s >= p_ ? s - p_ : s;
    }
    if (mode_ == Mode::Table) return add_tab_[a * q_ + b];
    return add_slow(a, b);
  }
  Elt neg(Elt a) const {
    if (mode_ == Mode::Prime) return a == 0 ? 0 : p_ - a;
    if (mode_ == Mode::Table) return neg_tab_[a];
    return neg_slow(a);
  }
  Elt sub(Elt a, Elt b) const { return add(a, neg(b)); }
  Elt mul(Elt a, Elt b) const {
    if (mode_ == Mode::Prime) return reduce(a * b);
    if (mode_ == Mode::Table) return mul_tab_[a * q_ + b];
    if (mode_ == Mode::Log) {
      if (a == 0 || b == 0) return 0;
      uint64_t e = uint64_t(log_[a]) + log_[b];
      if (e >= q_ - 1) e -= q_ - 1;
      return exp_[e];
    }
    return mul_slow(a, b);
  }
  Elt inv(Elt a) const;
  Elt div(Elt a, Elt b) const { return mul(a, inv(b)); }
  Elt pow(Elt a, uint64_t e) const;
  Elt frobenius(Elt a) const { return pow(a, p_); }

  // Canonical string: decimal for the prime field, polynomial in t otherwise
  // ("4t+4", "t^2+3"), highest power first.
  std::string format(Elt a) const;

 private:
  enum class Mode { Prime, Table, Log, Slow };
  Field(uint64_t p, std::vector<uint64_t> modulus);

  Elt add_slow(Elt a, Elt b) const;
  Elt neg_slow(Elt a) const;
  Elt mul_slow(Elt a, Elt b) const;
  Elt add_log(Elt a, Elt b) const;
  void build_tables();

  // Barrett reduction of x < p^2 < 2^62.
  Elt reduce(uint64_t x) const {
    uint64_t q = uint64_t((unsigned __int128)x * barrett_ >> 64);
    uint64_t r = x - q * p_;
    return r >= p_ ? r - p_ : r;
  }

  uint64_t p_;
  uint64_t barrett_ = 0;  // floor(2^64 / p)
  int k_;
  uint64_t q_;
  std::vector<uint64_t> mod_;
  std::vector<uint64_t> ppow_;
  Mode mode_ = Mode::Slow;
  std::vector<uint16_t> add_tab_, mul_tab_, neg_tab_, inv_tab_;
  std::vector<uint32_t> log_, exp_, zech_;
};

// Value type pairing a packed element with its field.
class FieldElement {
 public:
  FieldElement() = default;
  FieldElement(FieldRef f, Elt v) : f_(std::move(f)), v_(v) {}
  static FieldElement of_int(const FieldRef& f, int64_t v) { return {f, f->from_int(v)}; }

  const FieldRef& field() const { return f_; }
  Elt value() const { return v_; }
  bool is_zero() const { return v_ == 0; }
  std::string str() const { return f_->format(v_); }

  FieldElement operator+(const FieldElement& o) const { return {f_, f_->add(v_, check(o))}; }
  FieldElement operator-(const FieldElement& o) const { return {f_, f_->sub(v_, check(o))}; }
  FieldElement operator*(const FieldElement& o) const { return {f_, f_->mul(v_, check(o))}; }
  FieldElement operator/(const FieldElement& o) const { return {f_, f_->div(v_, check(o))}; }
  FieldElement operator-() const { return {f_, f_->neg(v_)}; }
  bool operator==(const FieldElement& o) const { return f_ == o.f_ && v_ == o.v_; }
  bool operator!=(const FieldElement& o) const { return !(*this == o); }

  FieldElement pow(uint64_t e) const { return {f_, f_->pow(v_, e)}; }
  FieldElement inv() const { return {f_, f_->inv(v_)}; }
  FieldElement frobenius() const { return {f_, f_->frobenius(v_)}; }

 private:
  Elt check(const FieldElement& o) const {
    if (o.f_ != f_) fail(ErrorKind::FieldMismatch, "operands live in different fields");
    return o.v_;
  }
  FieldRef f_;
  Elt v_ = 0;
};

inline FieldElement inv(const FieldElement& a) { return a.inv(); }
inline FieldElement frobenius(const FieldElement& a) { return a.frobenius(); }
inline FieldRef build_extension(uint64_t p, int k) { return Field::extension(p, k); }

}  // namespace kzp
