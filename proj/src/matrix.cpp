#include "kzp/matrix.hpp"

namespace kzp {

FMatrix FMatrix::identity(FieldRef f, size_t n) {
  FMatrix m(std::move(f), n, n);
  for (size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

bool FMatrix::is_zero() const {
  for (auto v : a_)
    if (v) return false;
  return true;
}

FMatrix FMatrix::operator*(const FMatrix& o) const {
  if (c_ != o.r_) fail(ErrorKind::LengthMismatch, "matrix product shape mismatch");
  const auto& F = *f_;
  FMatrix m(f_, r_, o.c_);
  for (size_t i = 0; i < r_; ++i)
    for (size_t k = 0; k < c_; ++k) {
      Elt x = (*this)(i, k);
      if (!x) continue;
      for (size_t j = 0; j < o.c_; ++j) m(i, j) = F.add(m(i, j), F.mul(x, o(k, j)));
    }
  return m;
}

FMatrix FMatrix::operator+(const FMatrix& o) const {
  FMatrix m = *this;
  for (size_t i = 0; i < a_.size(); ++i) m.a_[i] = f_->add(a_[i], o.a_[i]);
  return m;
}

FMatrix FMatrix::operator-(const FMatrix& o) const {
  FMatrix m = *this;
  for (size_t i = 0; i < a_.size(); ++i) m.a_[i] = f_->sub(a_[i], o.a_[i]);
  return m;
}

FMatrix FMatrix::scale(Elt s) const {
  FMatrix m = *this;
  for (auto& v : m.a_) v = f_->mul(v, s);
  return m;
}

FMatrix FMatrix::transpose() const {
  FMatrix m(f_, c_, r_);
  for (size_t i = 0; i < r_; ++i)
    for (size_t j = 0; j < c_; ++j) m(j, i) = (*this)(i, j);
  return m;
}

std::vector<Elt> FMatrix::apply(const std::vector<Elt>& v) const {
  if (v.size() != c_) fail(ErrorKind::LengthMismatch, "matrix-vector shape mismatch");
  std::vector<Elt> out(r_, 0);
  for (size_t i = 0; i < r_; ++i)
    for (size_t j = 0; j < c_; ++j) out[i] = f_->add(out[i], f_->mul((*this)(i, j), v[j]));
  return out;
}

std::vector<size_t> FMatrix::rref() {
  const auto& F = *f_;
  std::vector<size_t> piv;
  size_t row = 0;
  for (size_t col = 0; col < c_ && row < r_; ++col) {
    size_t sel = r_;
    for (size_t i = row; i < r_; ++i)
      if ((*this)(i, col)) {
        sel = i;
        break;
      }
    if (sel == r_) continue;
    if (sel != row)
      for (size_t j = 0; j < c_; ++j) std::swap((*this)(sel, j), (*this)(row, j));
    Elt il = F.inv((*this)(row, col));
    for (size_t j = col; j < c_; ++j) (*this)(row, j) = F.mul((*this)(row, j), il);
    for (size_t i = 0; i < r_; ++i) {
      if (i == row) continue;
      Elt c = (*this)(i, col);
      if (!c) continue;
      for (size_t j = col; j < c_; ++j) (*this)(i, j) = F.sub((*this)(i, j), F.mul(c, (*this)(row, j)));
    }
    piv.push_back(col);
    ++row;
  }
  return piv;
}

size_t FMatrix::rank() const {
  FMatrix m = *this;
  return m.rref().size();
}

std::vector<std::vector<Elt>> FMatrix::kernel() const {
  FMatrix m = *this;
  auto piv = m.rref();
  std::vector<bool> is_piv(c_, false);
  for (auto p : piv) is_piv[p] = true;
  std::vector<std::vector<Elt>> out;
  for (size_t free = 0; free < c_; ++free) {
    if (is_piv[free]) continue;
    std::vector<Elt> v(c_, 0);
    v[free] = 1;
    for (size_t i = 0; i < piv.size(); ++i) v[piv[i]] = f_->neg(m(i, free));
    out.push_back(std::move(v));
  }
  return out;
}

Elt FMatrix::det() const {
  if (r_ != c_) fail(ErrorKind::LengthMismatch, "determinant of non-square matrix");
  const auto& F = *f_;
  FMatrix m = *this;
  Elt d = 1;
  for (size_t col = 0; col < c_; ++col) {
    size_t sel = r_;
    for (size_t i = col; i < r_; ++i)
      if (m(i, col)) {
        sel = i;
        break;
      }
    if (sel == r_) return 0;
    if (sel != col) {
      for (size_t j = 0; j < c_; ++j) std::swap(m(sel, j), m(col, j));
      d = F.neg(d);
    }
    d = F.mul(d, m(col, col));
    Elt il = F.inv(m(col, col));
    for (size_t i = col + 1; i < r_; ++i) {
      Elt c = F.mul(m(i, col), il);
      if (!c) continue;
      for (size_t j = col; j < c_; ++j) m(i, j) = F.sub(m(i, j), F.mul(c, m(col, j)));
    }
  }
  return d;
}

// Reduce to upper Hessenberg form by similarity, then run the standard
// three-term recurrence on leading principal submatrices.
UPoly FMatrix::charpoly() const {
  if (r_ != c_) fail(ErrorKind::LengthMismatch, "characteristic polynomial of non-square matrix");
  const auto& F = *f_;
  size_t n = r_;
  FMatrix h = *this;
  for (size_t m = 1; m + 1 < n + 1 && m < n; ++m) {
    size_t sel = n;
    for (size_t i = m; i < n; ++i)
      if (h(i, m - 1)) {
        sel = i;
        break;
      }
    if (sel == n) continue;
    if (sel != m) {
      for (size_t j = 0; j < n; ++j) std::swap(h(sel, j), h(m, j));
      for (size_t i = 0; i < n; ++i) std::swap(h(i, sel), h(i, m));
    }
    Elt il = F.inv(h(m, m - 1));
    for (size_t i = m + 1; i < n; ++i) {
      Elt u = F.mul(h(i, m - 1), il);
      if (!u) continue;
      for (size_t j = 0; j < n; ++j) h(i, j) = F.sub(h(i, j), F.mul(u, h(m, j)));
      for (size_t j = 0; j < n; ++j) h(j, m) = F.add(h(j, m), F.mul(u, h(j, i)));
    }
  }
  std::vector<UPoly> p(n + 1, UPoly(f_));
  p[0] = UPoly::constant(f_, 1);
  UPoly X = UPoly::x(f_);
  for (size_t m = 1; m <= n; ++m) {
    p[m] = (X - UPoly::constant(f_, h(m - 1, m - 1))) * p[m - 1];
    Elt t = 1;
    for (size_t i = 1; i < m; ++i) {
      t = F.mul(t, h(m - i, m - i - 1));
      Elt c = F.mul(t, h(m - i - 1, m - 1));
      p[m] = p[m] - p[m - i - 1].scale(c);
    }
  }
  return p[n];
}

}  // namespace kzp
