#include "kzp/hyperg.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <unordered_map>

#include "kzp/upoly.hpp"

namespace kzp {

namespace {

std::mutex cache_mutex;
std::map<std::tuple<int, uint64_t, int>, std::vector<PolyVector>>& family_cache() {
  static std::map<std::tuple<int, uint64_t, int>, std::vector<PolyVector>> c;
  return c;
}

std::vector<PolyVector> compute_family(int n, uint64_t p, int e) {
  auto F = Field::prime(p);
  int count = int(uint64_t(n) * e / p);
  std::vector<PolyVector> out(count, PolyVector(n, ZPolynomial(F, n)));
  if (count == 0) return out;
  XSeries P = master_power(F, n, e);
  int top = P.degree();
  for (int j = 0; j < n; ++j) {
    // Synthetic division from the top: q_{d-1} = c_d + z_j q_d.
    ZPolynomial cur(F, n);
    for (int d = top; d >= int(p); --d) {
      cur = P.coeff(size_t(d)) + cur.times_var(j);
      int i = d - 1;
      if ((i + 1) % int(p) == 0) {
        int l = (i + 1) / int(p);
        if (l >= 1 && l <= count) out[l - 1][j] = cur;
      }
    }
  }
  return out;
}

const std::vector<PolyVector>& cached_family(int n, uint64_t p, int e) {
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto key = std::make_tuple(n, p, e);
  auto it = family_cache().find(key);
  if (it != family_cache().end()) return it->second;
  return family_cache().emplace(key, compute_family(n, p, e)).first->second;
}

nlohmann::json family_params(const QFamily& fam) {
  auto j = context_params(fam.ctx);
  j["sign"] = fam.sign == Sign::Plus ? "+" : "-";
  j["exponent"] = fam.exponent;
  return j;
}

}  // namespace

std::vector<Elt> v_coords(const std::vector<Elt>& v) { return std::vector<Elt>(v.begin(), v.end() - 1); }

std::vector<PolyVector> q_expansion(const KZContext& ctx) {
  ctx.require_rational_nonzero_h();
  auto F = ctx.prime_field();
  XSeries P = master_power(F, ctx.n, *ctx.ht);
  int slices = ctx.n * *ctx.ht;
  std::vector<PolyVector> out(slices, PolyVector(ctx.n, ZPolynomial(F, ctx.n)));
  for (int j = 0; j < ctx.n; ++j) {
    XSeries q = P.divide_linear(j);
    for (int i = 0; i < slices; ++i) out[i][j] = q.coeff(size_t(i));
  }
  return out;
}

QFamily family_for_exponent(int n, uint64_t p, int e) {
  if (e < 1 || uint64_t(e) >= p) fail(ErrorKind::InvalidArgument, "exponent must lie in [1, p-1]");
  QFamily f;
  f.ctx = KZContext::make(n, p, e);
  f.sign = Sign::Plus;
  f.exponent = e;
  f.vectors = cached_family(n, p, e);
  return f;
}

QFamily p_solutions(const KZContext& ctx, Sign sign) {
  ctx.require_rational_nonzero_h();
  QFamily f;
  f.sign = sign;
  f.ctx = sign == Sign::Plus ? ctx : ctx.negated();
  f.exponent = sign == Sign::Plus ? *ctx.ht : int(ctx.p()) - *ctx.ht;
  f.vectors = cached_family(ctx.n, ctx.p(), f.exponent);
  return f;
}

std::vector<std::vector<Elt>> family_at_point(int n, uint64_t p, int e, const EvalPoint& a) {
  const FieldRef& L = a.field;
  const auto& F = *L;
  int count = int(uint64_t(n) * e / p);
  std::vector<std::vector<Elt>> rows(count, std::vector<Elt>(n, 0));
  if (count == 0) return rows;
  UPoly P = UPoly::constant(L, 1);
  for (int s = 0; s < n; ++s) {
    UPoly lin(L, {F.neg(a.coords[s]), 1});
    for (int r = 0; r < e; ++r) P = P * lin;
  }
  int top = P.degree();
  for (int j = 0; j < n; ++j) {
    Elt cur = 0;
    for (int d = top; d >= int(p); --d) {
      cur = F.add(P.coeff(size_t(d)), F.mul(a.coords[j], cur));
      if (d % int(p) == 0) rows[d / int(p) - 1][j] = cur;
    }
  }
  return rows;
}

Certificate counting_check(const KZContext& ctx) {
  Certificate c = make_certificate("counting");
  c.params = context_params(ctx);
  if (!ctx.ht) {
    c.status = Status::NotApplicable;
    c.detail["reason"] = "h is not in F_p \\ {0}";
    return c;
  }
  if (ctx.p_divides_n) {
    c.status = Status::NotApplicable;
    c.detail["reason"] = "p divides n";
    return c;
  }
  c.detail["sum"] = ctx.dplus + ctx.dminus;
  if (ctx.dplus + ctx.dminus != ctx.n - 1) c.fail_with({{"dplus", ctx.dplus}, {"dminus", ctx.dminus}});
  return c;
}

Certificate homogeneity_check(const QFamily& fam) {
  Certificate c = make_certificate("homogeneity");
  c.params = family_params(fam);
  for (size_t l = 0; l < fam.size(); ++l) {
    int d = fam.degree(int(l + 1));
    for (size_t j = 0; j < fam.vectors[l].size(); ++j) {
      const auto& q = fam.vectors[l][j];
      for (auto& [k, coef] : q.terms())
        if (mono_degree(k) != d) {
          c.fail_with({{"l", l + 1}, {"component", j + 1}, {"exponent", mono_exps(k, q.nvars())}, {"expected_degree", d}});
          return c;
        }
    }
  }
  c.detail["vectors"] = fam.size();
  return c;
}

Certificate degree_bounds_check(const QFamily& fam) {
  Certificate c = make_certificate("degree-bounds");
  c.params = family_params(fam);
  int n = fam.ctx.n;
  for (size_t l = 0; l < fam.size(); ++l) {
    const auto& v = fam.vectors[l];
    ZPolynomial sum(v[0].field(), n);
    for (int j = 0; j < n; ++j) {
      sum = sum + v[j];
      for (int i = 0; i < n; ++i) {
        int bound = fam.exponent - (i == j ? 1 : 0);
        if (v[j].degree_in(i) > bound) {
          c.fail_with({{"l", l + 1}, {"component", j + 1}, {"variable", i + 1}, {"degree", v[j].degree_in(i)}, {"bound", bound}});
          return c;
        }
      }
    }
    if (!sum.is_zero()) {
      c.fail_with({{"l", l + 1}, {"reason", "component sum is nonzero"}});
      return c;
    }
  }
  return c;
}

Certificate family_flatness_check(const QFamily& fam) {
  Certificate c = make_certificate("flatness");
  c.params = family_params(fam);
  for (size_t l = 0; l < fam.size(); ++l) {
    Certificate one = flatness_check(fam.ctx, fam.vectors[l]);
    if (!one.passed()) {
      auto w = one.witness;
      w["l"] = l + 1;
      c.fail_with(w);
      return c;
    }
  }
  c.detail["vectors"] = fam.size();
  return c;
}

Certificate derivative_identity_check(const KZContext& ctx, int j) {
  ctx.require_rational_nonzero_h();
  Certificate c = make_certificate("derivative-identity");
  c.params = context_params(ctx);
  c.params["j"] = j;
  int n = ctx.n;
  if (j < 0 || j > n) fail(ErrorKind::IndexOutOfRange, "component index out of range");
  auto F = ctx.prime_field();
  int p = int(ctx.p());
  XSeries P = master_power(F, n, *ctx.ht);
  auto fam = p_solutions(ctx, Sign::Plus);
  XSeries total(F, n);
  // j = 0 checks every component and the vanishing of their sum.
  int lo = j == 0 ? 1 : j, hi = j == 0 ? n : j;
  for (int jj = lo; jj <= hi; ++jj) {
    XSeries lhs = -(P.divide_linear(jj - 1).derivative(p - 1));
    std::vector<ZPolynomial> rc;
    for (size_t l = 0; l < fam.size(); ++l) {
      rc.resize(size_t(p) * l + 1, ZPolynomial(F, n));
      rc[size_t(p) * l] = fam.vectors[l][jj - 1];
    }
    XSeries rhs(F, n, std::move(rc));
    if (!(lhs == rhs)) {
      c.fail_with({{"component", jj}, {"reason", "derivative identity mismatch"}});
      return c;
    }
    if (j == 0) {
      std::vector<ZPolynomial> s;
      for (int d = 0; d <= std::max(total.degree(), lhs.degree()); ++d) s.push_back(total.coeff(d) + lhs.coeff(d));
      total = XSeries(F, n, std::move(s));
    }
  }
  if (j == 0 && total.degree() >= 0) c.fail_with({{"reason", "sum over components is nonzero"}});
  return c;
}

Certificate point_independence_check(const KZContext& ctx, int trials, uint64_t seed) {
  Certificate c = make_certificate("point-independence", seed);
  c.params = context_params(ctx);
  c.params["trials"] = trials;
  if (ctx.p_divides_n || !ctx.ht) {
    c.status = Status::NotApplicable;
    return c;
  }
  if (ctx.dplus == 0) {
    c.detail["vacuous"] = true;
    return c;
  }
  FieldRef sample = sample_field(ctx);
  c.detail["point_field_degree"] = sample->degree();
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    EvalPoint a = random_point(sample, ctx.n, rng);
    auto rows = family_at_point(ctx.n, ctx.p(), *ctx.ht, a);
    FMatrix m(sample, rows.size(), size_t(ctx.n));
    for (size_t i = 0; i < rows.size(); ++i)
      for (int j = 0; j < ctx.n; ++j) m(i, j) = rows[i][j];
    size_t r = m.rank();
    if (r != size_t(ctx.dplus)) {
      c.fail_with({{"point", a.to_json()}, {"rank", r}});
      return c;
    }
  }
  return c;
}

Certificate lagrangian_check(const KZContext& ctx, int trials, uint64_t seed) {
  Certificate c = make_certificate("lagrangian", seed);
  c.params = context_params(ctx);
  c.params["trials"] = trials;
  if (ctx.p_divides_n || !ctx.ht) {
    c.status = Status::NotApplicable;
    return c;
  }
  FieldRef sample = sample_field(ctx);
  c.detail["point_field_degree"] = sample->degree();
  const auto& F = *sample;
  auto rank_of = [&](const std::vector<std::vector<Elt>>& rows) {
    FMatrix m(sample, rows.size(), size_t(ctx.n));
    for (size_t i = 0; i < rows.size(); ++i)
      for (int j = 0; j < ctx.n; ++j) m(i, j) = rows[i][j];
    return m.rank();
  };
  // U_{-h} lies in the annihilator of U_h, and the ranks add up to n - 1, so
  // U_{-h} is all of it: the form pairs V/U_h perfectly with U_{-h}. Whether
  // the stacked families span V is recorded too; that holds only off the
  // hypersurface where the form degenerates on U_h.
  int spanning = 0;
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    EvalPoint a = random_point(sample, ctx.n, rng);
    auto A = family_at_point(ctx.n, ctx.p(), *ctx.ht, a);
    auto B = family_at_point(ctx.n, ctx.p(), int(ctx.p()) - *ctx.ht, a);
    for (size_t l = 0; l < A.size(); ++l)
      for (size_t m = 0; m < B.size(); ++m)
        if (shapovalov(F, A[l], B[m]) != 0) {
          c.fail_with({{"point", a.to_json()}, {"l", l + 1}, {"m", m + 1}, {"reason", "Gram block nonzero"}});
          return c;
        }
    size_t ra = rank_of(A), rb = rank_of(B);
    if (ra != A.size() || rb != B.size() || ra + rb != size_t(ctx.n - 1)) {
      c.fail_with({{"point", a.to_json()}, {"rank_plus", ra}, {"rank_minus", rb}, {"reason", "pairing with V/U_h is not perfect"}});
      return c;
    }
    auto stacked = A;
    stacked.insert(stacked.end(), B.begin(), B.end());
    if (rank_of(stacked) == size_t(ctx.n - 1)) ++spanning;
  }
  c.detail["points_where_families_span_V"] = spanning;
  return c;
}

// ---- exact vanishing of sum_j A_j B_j ----

namespace {

constexpr uint64_t kMod = 998244353, kRoot = 3;

uint64_t powm(uint64_t a, uint64_t e) {
  uint64_t r = 1;
  a %= kMod;
  while (e) {
    if (e & 1) r = r * a % kMod;
    a = a * a % kMod;
    e >>= 1;
  }
  return r;
}

void ntt(std::vector<uint32_t>& a, bool invert) {
  size_t n = a.size();
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    uint64_t w = powm(kRoot, (kMod - 1) / len);
    if (invert) w = powm(w, kMod - 2);
    std::vector<uint32_t> ws(len / 2);
    ws[0] = 1;
    for (size_t k = 1; k < len / 2; ++k) ws[k] = uint32_t(uint64_t(ws[k - 1]) * w % kMod);
    for (size_t i = 0; i < n; i += len)
      for (size_t k = 0; k < len / 2; ++k) {
        uint64_t u = a[i + k], v = uint64_t(a[i + k + len / 2]) * ws[k] % kMod;
        a[i + k] = uint32_t(u + v >= kMod ? u + v - kMod : u + v);
        a[i + k + len / 2] = uint32_t(u >= v ? u - v : u + kMod - v);
      }
  }
  if (invert) {
    uint64_t ni = powm(n, kMod - 2);
    for (auto& x : a) x = uint32_t(x * ni % kMod);
  }
}

// Kronecker layout after setting z_n = 1 (exact for homogeneous products).
struct Kronecker {
  int nv = 0;
  std::vector<uint64_t> stride;
  size_t size = 1;

  Kronecker(int n, int base) : nv(n - 1), stride(n - 1) {
    uint64_t s = 1;
    for (int i = nv - 1; i >= 0; --i) {
      stride[i] = s;
      s *= uint64_t(base);
    }
    while (size < s) size <<= 1;
  }
  std::vector<uint32_t> forward(const ZPolynomial& f) const {
    std::vector<uint32_t> a(size, 0);
    for (auto& [k, c] : f.terms()) {
      uint64_t idx = 0;
      for (int i = 0; i < nv; ++i) idx += uint64_t(mono_exp(k, i)) * stride[i];
      a[idx] = uint32_t((a[idx] + c) % kMod);
    }
    ntt(a, false);
    return a;
  }
  std::vector<int> decode(uint64_t idx) const {
    std::vector<int> e(nv);
    for (int i = 0; i < nv; ++i) {
      e[i] = int(idx / stride[i]);
      idx %= stride[i];
    }
    return e;
  }
};

bool homogeneous_pair(const PolyVector& A, const PolyVector& B) {
  int da = -1, db = -1;
  for (auto& x : A)
    for (auto& [k, c] : x.terms()) {
      if (da >= 0 && mono_degree(k) != da) return false;
      da = mono_degree(k);
    }
  for (auto& x : B)
    for (auto& [k, c] : x.terms()) {
      if (db >= 0 && mono_degree(k) != db) return false;
      db = mono_degree(k);
    }
  return true;
}

size_t sparse_cost(const PolyVector& A, const PolyVector& B) {
  size_t s = 0;
  for (size_t j = 0; j < A.size(); ++j) s += A[j].size() * B[j].size();
  return s;
}

constexpr size_t kSparseLimit = 3'000'000;

bool sparse_vanishes(const PolyVector& A, const PolyVector& B, std::vector<int>* witness) {
  ZPolynomial s = shapovalov(A, B);
  if (s.is_zero()) return true;
  if (witness) *witness = mono_exps(s.terms().front().first, s.nvars());
  return false;
}

struct NttPairing {
  const Kronecker& kr;
  uint64_t p;
  bool vanishes(const std::vector<const std::vector<uint32_t>*>& fa, const std::vector<const std::vector<uint32_t>*>& fb,
                int total_degree, std::vector<int>* witness) const {
    std::vector<uint32_t> acc(kr.size, 0);
    for (size_t j = 0; j < fa.size(); ++j)
      for (size_t i = 0; i < kr.size; ++i)
        acc[i] = uint32_t((acc[i] + uint64_t((*fa[j])[i]) * (*fb[j])[i]) % kMod);
    ntt(acc, true);
    for (size_t i = 0; i < kr.size; ++i)
      if (acc[i] % p != 0) {
        if (witness) {
          auto e = kr.decode(i);
          int s = 0;
          for (int x : e) s += x;
          e.push_back(total_degree - s);
          *witness = e;
        }
        return false;
      }
    return true;
  }
};

int max_degree_in(const PolyVector& v, int i) {
  int d = 0;
  for (auto& x : v) d = std::max(d, x.degree_in(i));
  return d;
}

int total_degree_of(const PolyVector& v) {
  int d = 0;
  for (auto& x : v) d = std::max(d, x.total_degree());
  return d;
}

size_t max_terms(const PolyVector& v) {
  size_t m = 0;
  for (auto& x : v) m = std::max(m, x.size());
  return m;
}

}  // namespace

bool pairing_vanishes(const PolyVector& A, const PolyVector& B, std::vector<int>* witness) {
  if (A.size() != B.size() || A.empty()) fail(ErrorKind::LengthMismatch, "vectors differ in length");
  const auto& F = *A[0].field();
  int n = A[0].nvars();
  bool integer_safe = F.is_prime_field() &&
                      uint64_t(A.size()) * (F.order() - 1) * (F.order() - 1) * std::min(max_terms(A), max_terms(B)) < kMod;
  if (sparse_cost(A, B) <= kSparseLimit || !homogeneous_pair(A, B) || !integer_safe || n < 2)
    return sparse_vanishes(A, B, witness);
  int base = 1;
  for (int i = 0; i < n - 1; ++i) base = std::max(base, max_degree_in(A, i) + max_degree_in(B, i) + 1);
  Kronecker kr(n, base);
  std::vector<std::vector<uint32_t>> fa, fb;
  std::vector<const std::vector<uint32_t>*> pa, pb;
  for (size_t j = 0; j < A.size(); ++j) {
    fa.push_back(kr.forward(A[j]));
    fb.push_back(kr.forward(B[j]));
  }
  for (size_t j = 0; j < A.size(); ++j) {
    pa.push_back(&fa[j]);
    pb.push_back(&fb[j]);
  }
  NttPairing np{kr, F.characteristic()};
  return np.vanishes(pa, pb, total_degree_of(A) + total_degree_of(B), witness);
}

Certificate orthogonality_check(const KZContext& ctx) {
  ctx.require_rational_nonzero_h();
  return orthogonality_check(ctx, p_solutions(ctx, Sign::Plus), p_solutions(ctx, Sign::Minus));
}

Certificate orthogonality_check(const KZContext& ctx, const QFamily& plus, const QFamily& minus) {
  Certificate c = make_certificate("orthogonality");
  c.params = context_params(ctx);
  c.detail["pairs"] = plus.size() * minus.size();
  if (plus.size() == 0 || minus.size() == 0) {
    c.detail["vacuous"] = true;
    return c;
  }
  int n = ctx.n;
  uint64_t p = ctx.p();
  const auto& F = *plus.vectors[0][0].field();
  // Shared Kronecker layout: per-variable degree of any product is at most p.
  int base = 1;
  for (auto& v : plus.vectors)
    for (auto& w : minus.vectors)
      for (int i = 0; i < n - 1; ++i) base = std::max(base, max_degree_in(v, i) + max_degree_in(w, i) + 1);
  std::unique_ptr<Kronecker> kr;
  std::map<std::pair<int, size_t>, std::vector<std::vector<uint32_t>>> transforms;
  auto transform_of = [&](int side, size_t idx, const PolyVector& v) -> const std::vector<std::vector<uint32_t>>& {
    auto key = std::make_pair(side, idx);
    auto it = transforms.find(key);
    if (it != transforms.end()) return it->second;
    std::vector<std::vector<uint32_t>> t;
    for (auto& comp : v) t.push_back(kr->forward(comp));
    return transforms.emplace(key, std::move(t)).first->second;
  };
  for (size_t l = 0; l < plus.size(); ++l)
    for (size_t m = 0; m < minus.size(); ++m) {
      const auto& A = plus.vectors[l];
      const auto& B = minus.vectors[m];
      std::vector<int> w;
      bool ok;
      bool integer_safe = F.is_prime_field() && uint64_t(n) * (p - 1) * (p - 1) * std::min(max_terms(A), max_terms(B)) < kMod;
      if (sparse_cost(A, B) <= kSparseLimit || !integer_safe || n < 2) {
        ok = sparse_vanishes(A, B, &w);
      } else {
        if (!kr) kr = std::make_unique<Kronecker>(n, base);
        const auto& ta = transform_of(0, l, A);
        const auto& tb = transform_of(1, m, B);
        std::vector<const std::vector<uint32_t>*> pa, pb;
        for (int j = 0; j < n; ++j) {
          pa.push_back(&ta[j]);
          pb.push_back(&tb[j]);
        }
        NttPairing np{*kr, p};
        ok = np.vanishes(pa, pb, total_degree_of(A) + total_degree_of(B), &w);
      }
      if (!ok) {
        c.fail_with({{"l", l + 1}, {"m", m + 1}, {"nonzero_monomial", w}});
        return c;
      }
    }
  return c;
}

void mutate_family(QFamily& fam) {
  if (fam.vectors.empty()) return;
  auto& v = fam.vectors[0];
  int n = fam.ctx.n;
  // Reuse a monomial the vector already has so every degree bound survives.
  size_t j = 0;
  while (j < v.size() && v[j].terms().empty()) ++j;
  if (j == v.size()) return;
  ZPolynomial m = ZPolynomial::from_terms(v[j].field(), n, {{v[j].terms().front().first, 1}});
  v[j] = v[j] + m;
  v[(j + 1) % v.size()] = v[(j + 1) % v.size()] - m;
}

}  // namespace kzp
