#pragma once

#include <cstddef>
#include <vector>

#include "kzp/fields.hpp"
#include "kzp/upoly.hpp"

namespace kzp {

// Dense row-major matrix over a finite field.
class FMatrix {
 public:
  FMatrix() = default;
  FMatrix(FieldRef f, size_t rows, size_t cols) : f_(std::move(f)), r_(rows), c_(cols), a_(rows * cols, 0) {}
  static FMatrix identity(FieldRef f, size_t n);

  const FieldRef& field() const { return f_; }
  size_t rows() const { return r_; }
  size_t cols() const { return c_; }
  Elt& operator()(size_t i, size_t j) { return a_[i * c_ + j]; }
  Elt operator()(size_t i, size_t j) const { return a_[i * c_ + j]; }
  bool operator==(const FMatrix& o) const { return f_ == o.f_ && r_ == o.r_ && c_ == o.c_ && a_ == o.a_; }
  bool is_zero() const;

  FMatrix operator*(const FMatrix& o) const;
  FMatrix operator+(const FMatrix& o) const;
  FMatrix operator-(const FMatrix& o) const;
  FMatrix scale(Elt s) const;
  FMatrix transpose() const;
  std::vector<Elt> apply(const std::vector<Elt>& v) const;

  // In-place reduced row echelon form; returns the pivot columns.
  std::vector<size_t> rref();
  size_t rank() const;
  // Basis of the right null space, one vector per free column.
  std::vector<std::vector<Elt>> kernel() const;
  Elt det() const;
  UPoly charpoly() const;

 private:
  FieldRef f_;
  size_t r_ = 0, c_ = 0;
  std::vector<Elt> a_;
};

}  // namespace kzp
