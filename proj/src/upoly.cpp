#include "kzp/upoly.hpp"

#include <algorithm>
#include <numeric>

#include "kzp/rng.hpp"

namespace kzp {

UPoly UPoly::monomial(FieldRef f, size_t d, Elt c) {
  std::vector<Elt> v(d + 1, 0);
  v[d] = c;
  return UPoly(std::move(f), std::move(v));
}

UPoly UPoly::operator+(const UPoly& o) const {
  const auto& F = *f_;
  std::vector<Elt> r(std::max(c_.size(), o.c_.size()), 0);
  for (size_t i = 0; i < r.size(); ++i) r[i] = F.add(coeff(i), o.coeff(i));
  return UPoly(f_, std::move(r));
}

UPoly UPoly::operator-(const UPoly& o) const {
  const auto& F = *f_;
  std::vector<Elt> r(std::max(c_.size(), o.c_.size()), 0);
  for (size_t i = 0; i < r.size(); ++i) r[i] = F.sub(coeff(i), o.coeff(i));
  return UPoly(f_, std::move(r));
}

UPoly UPoly::operator*(const UPoly& o) const {
  if (is_zero() || o.is_zero()) return UPoly(f_);
  const auto& F = *f_;
  std::vector<Elt> r(c_.size() + o.c_.size() - 1, 0);
  for (size_t i = 0; i < c_.size(); ++i) {
    if (!c_[i]) continue;
    for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(c_[i], o.c_[j]));
  }
  return UPoly(f_, std::move(r));
}

UPoly UPoly::scale(Elt s) const {
  std::vector<Elt> r(c_.size());
  for (size_t i = 0; i < c_.size(); ++i) r[i] = f_->mul(c_[i], s);
  return UPoly(f_, std::move(r));
}

Elt UPoly::eval(Elt x) const {
  Elt r = 0;
  for (size_t i = c_.size(); i-- > 0;) r = f_->add(f_->mul(r, x), c_[i]);
  return r;
}

UPoly UPoly::derivative() const {
  if (c_.size() <= 1) return UPoly(f_);
  std::vector<Elt> r(c_.size() - 1);
  for (size_t i = 1; i < c_.size(); ++i) r[i - 1] = f_->mul(c_[i], f_->from_int(int64_t(i % f_->characteristic())));
  return UPoly(f_, std::move(r));
}

UPoly UPoly::monic() const {
  if (is_zero()) return *this;
  return scale(f_->inv(lead()));
}

std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b) {
  if (b.is_zero()) fail(ErrorKind::ZeroInverse, "polynomial division by zero");
  const auto& F = *a.field();
  if (a.degree() < b.degree()) return {UPoly(a.field()), a};
  std::vector<Elt> r = a.coeffs();
  const auto& bc = b.coeffs();
  size_t db = bc.size() - 1;
  std::vector<Elt> q(r.size() - db, 0);
  Elt il = F.inv(bc.back());
  for (size_t i = r.size(); i-- > db;) {
    Elt c = F.mul(r[i], il);
    q[i - db] = c;
    if (!c) continue;
    for (size_t j = 0; j <= db; ++j) r[i - db + j] = F.sub(r[i - db + j], F.mul(c, bc[j]));
  }
  r.resize(db);
  return {UPoly(a.field(), std::move(q)), UPoly(a.field(), std::move(r))};
}

UPoly mod(const UPoly& a, const UPoly& b) { return divmod(a, b).second; }

UPoly gcd(UPoly a, UPoly b) {
  while (!b.is_zero()) {
    UPoly r = mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

UPoly powmod(const UPoly& base, uint64_t e, const UPoly& m) {
  UPoly r = mod(UPoly::constant(m.field(), 1), m);
  UPoly b = mod(base, m);
  while (e) {
    if (e & 1) r = mod(r * b, m);
    e >>= 1;
    if (e) b = mod(b * b, m);
  }
  return r;
}

namespace {

std::vector<uint64_t> prime_divisors(uint64_t n) {
  std::vector<uint64_t> out;
  for (uint64_t d = 2; d * d <= n; ++d) {
    if (n % d) continue;
    out.push_back(d);
    while (n % d == 0) n /= d;
  }
  if (n > 1) out.push_back(n);
  return out;
}

// x^(q^d) mod f by repeated q-th powering.
UPoly frob_iterate(const UPoly& xq, int d, const UPoly& f, uint64_t q) {
  UPoly r = mod(UPoly::x(f.field()), f);
  for (int i = 0; i < d; ++i) r = powmod(r, q, f);
  (void)xq;
  return r;
}

}  // namespace

bool is_irreducible(const UPoly& f) {
  int n = f.degree();
  if (n <= 0) return false;
  if (n == 1) return true;
  uint64_t q = f.field()->order();
  UPoly X = UPoly::x(f.field());
  UPoly fm = f.monic();
  if (!(frob_iterate(X, n, fm, q) == mod(X, fm))) return false;
  for (auto r : prime_divisors(uint64_t(n))) {
    UPoly g = gcd(fm, frob_iterate(X, n / int(r), fm, q) - X);
    if (g.degree() != 0) return false;
  }
  return true;
}

std::vector<int> factor_degrees(const UPoly& f) {
  std::vector<int> out;
  if (f.degree() <= 0) return out;
  uint64_t q = f.field()->order();
  UPoly X = UPoly::x(f.field());
  UPoly rest = f.monic();
  UPoly h = mod(X, rest);
  for (int d = 1; rest.degree() > 0; ++d) {
    if (2 * d > rest.degree()) {
      out.push_back(rest.degree());
      break;
    }
    h = powmod(h, q, rest);
    UPoly g = gcd(rest, h - X);
    while (g.degree() > 0) {
      for (int i = 0; i < g.degree() / d; ++i) out.push_back(d);
      rest = divmod(rest, g).first;
      g = gcd(rest, g);
    }
    if (rest.degree() > 0) h = mod(h, rest);
  }
  // Multiplicities inflate the list; keep only the degree values that occur.
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

void split_linear(const UPoly& g, Rng& rng, std::vector<Elt>& roots) {
  if (g.degree() <= 0) return;
  const auto& F = *g.field();
  if (g.degree() == 1) {
    roots.push_back(F.neg(F.div(g.coeff(0), g.coeff(1))));
    return;
  }
  uint64_t q = F.order();
  if (F.characteristic() == 2) {
    // Brute force suffices for the small binary fields this library meets.
    if (q > (uint64_t(1) << 20)) fail(ErrorKind::InvalidArgument, "root finding in large binary field");
    for (Elt x = 0; x < q; ++x)
      if (g.eval(x) == 0) roots.push_back(x);
    return;
  }
  for (;;) {
    UPoly t = UPoly(g.field(), {rng.below(q), 1});
    UPoly w = powmod(t, (q - 1) / 2, g) - UPoly::constant(g.field(), 1);
    UPoly d = gcd(g, w);
    if (d.degree() > 0 && d.degree() < g.degree()) {
      split_linear(d, rng, roots);
      split_linear(divmod(g, d).first, rng, roots);
      return;
    }
  }
}

}  // namespace

std::vector<std::pair<Elt, int>> roots_with_multiplicity(const UPoly& f) {
  std::vector<std::pair<Elt, int>> out;
  if (f.degree() <= 0) return out;
  UPoly fm = f.monic();
  UPoly X = UPoly::x(f.field());
  UPoly lin = gcd(fm, powmod(X, f.field()->order(), fm) - X);
  std::vector<Elt> roots;
  Rng rng(0x5eed0000 + uint64_t(f.degree()));
  split_linear(lin, rng, roots);
  std::sort(roots.begin(), roots.end());
  const auto& F = *f.field();
  for (Elt r : roots) {
    int m = 0;
    UPoly cur = fm;
    UPoly lf(f.field(), {F.neg(r), 1});
    for (;;) {
      auto [qq, rr] = divmod(cur, lf);
      if (!rr.is_zero()) break;
      ++m;
      cur = qq;
    }
    out.emplace_back(r, m);
  }
  return out;
}

Embedding::Embedding(FieldRef from, FieldRef to) : from_(std::move(from)), to_(std::move(to)) {
  if (from_->characteristic() != to_->characteristic() || to_->degree() % from_->degree() != 0)
    fail(ErrorKind::FieldMismatch, "no embedding between these fields");
  Elt gen = 0;
  if (from_->degree() > 1) {
    std::vector<Elt> c(from_->modulus().begin(), from_->modulus().end());
    auto rs = roots_with_multiplicity(UPoly(to_, c));
    if (rs.empty()) fail(ErrorKind::FieldMismatch, "modulus has no root in target field");
    gen = rs.front().first;
  }
  Elt x = 1;
  for (int i = 0; i < from_->degree(); ++i) {
    gen_pows_.push_back(x);
    x = to_->mul(x, gen);
  }
}

Elt Embedding::operator()(Elt a) const {
  if (from_ == to_) return a;
  auto d = from_->digits(a);
  Elt r = 0;
  for (size_t i = 0; i < d.size(); ++i)
    if (d[i]) r = to_->add(r, to_->mul(to_->from_int(int64_t(d[i])), gen_pows_[i]));
  return r;
}

}  // namespace kzp
