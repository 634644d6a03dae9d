#include "kzp/solspace.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>

namespace kzp {

namespace {

struct Binomials {
  std::vector<std::vector<uint64_t>> c;
  explicit Binomials(int N) : c(size_t(N) + 1) {
    for (int i = 0; i <= N; ++i) {
      c[i].assign(size_t(i) + 1, 1);
      for (int j = 1; j < i; ++j) c[i][j] = c[i - 1][j - 1] + c[i - 1][j];
    }
  }
  uint64_t operator()(int a, int b) const {
    if (a < 0 || b < 0 || b > a) return 0;
    return c[size_t(a)][size_t(b)];
  }
};

// Monomials of a fixed degree in m variables, ranked by the combinatorial
// number system on the partial sums.
struct LayerRank {
  int m;
  const Binomials& B;
  size_t size(int d) const { return size_t(B(d + m - 1, m - 1)); }
  size_t rank(const std::vector<int>& e) const {
    size_t r = 0;
    int c = -1;
    for (int i = 0; i + 1 < m; ++i) {
      c += e[i] + 1;
      r += size_t(B(c, i + 1));
    }
    return r;
  }
};

void for_each_monomial(int m, int d, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> e(size_t(m), 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == m - 1) {
      e[i] = left;
      fn(e);
      return;
    }
    for (int x = left; x >= 0; --x) {
      e[i] = x;
      rec(i + 1, left - x);
    }
  };
  rec(0, d);
}

// Row echelon form built one row at a time.
class IncrementalEchelon {
 public:
  IncrementalEchelon(const Field& F, size_t cols) : F_(F), cols_(cols) {}
  size_t rank() const { return rows_.size(); }
  bool full() const { return rows_.size() == cols_; }
  const std::vector<std::vector<Elt>>& rows() const { return rows_; }

  void add(std::vector<Elt> r) {
    if (full()) return;
    for (size_t k = 0; k < rows_.size(); ++k) {
      Elt c = r[piv_[k]];
      if (c == 0) continue;
      Elt m = F_.neg(c);
      const auto& pr = rows_[k];
      for (size_t i = piv_[k]; i < cols_; ++i)
        if (pr[i] != 0) r[i] = F_.add(r[i], F_.mul(m, pr[i]));
    }
    size_t lead = 0;
    while (lead < cols_ && r[lead] == 0) ++lead;
    if (lead == cols_) return;
    Elt inv = F_.inv(r[lead]);
    for (size_t i = lead; i < cols_; ++i) r[i] = F_.mul(r[i], inv);
    rows_.push_back(std::move(r));
    piv_.push_back(lead);
  }

 private:
  const Field& F_;
  size_t cols_;
  std::vector<std::vector<Elt>> rows_;
  std::vector<size_t> piv_;
};

Elt level_at(const KZContext& ctx, const EvalPoint& a) {
  if (ctx.field == a.field || ctx.field->in_prime_subfield(ctx.h)) return ctx.h;
  fail(ErrorKind::FieldMismatch, "the point's field does not contain h");
}

// The KZ system in y_i = z_i - z_n (i < n), centered at a, with the value at
// every p-th-power monomial y^{pb} as the free parameter. Solutions are
// y^{pb}-shifts of the n - 1 solutions seeded at y^0 by e_s - e_n; the only
// constraints left are the barrier equations h (H_j G)(mu) = 0 at
// mu_1 = ... = mu_{j-1} = 0, mu_j = -1 (mod p), where the derivative term of
// the j-th equation vanishes.
struct ReducedSystem {
  int trunc;  // keep truncations at degree < trunc
  int ext;    // equations through degree ext - 2
  bool want_kernel = false;
  bool keep_series = false;

  // Results.
  std::vector<std::vector<int>> cols_b;  // b with p|b| < trunc, graded
  size_t rank_all = 0;
  size_t params = 0;
  std::vector<std::vector<Elt>> kernel;  // over (b, s) columns
  // Seeded series G^{(0)}[e_s - e_n] at degree < trunc: key -> n x S values.
  std::unordered_map<uint64_t, std::vector<Elt>> series;

  int dimension() const { return int(params - rank_all); }
};

uint64_t pack(const std::vector<int>& e, int extra) {
  uint64_t k = uint64_t(extra);
  for (int x : e) k = (k << 8) | uint64_t(x);
  return k;
}

void solve_reduced(const KZContext& ctx, const EvalPoint& a, ReducedSystem& sys) {
  const Field& F = *a.field;
  const int n = ctx.n, m = n - 1, S = n - 1;
  const int p = int(ctx.p());
  const Elt h = level_at(ctx, a);
  const int maxdeg = sys.ext - 1;
  if (maxdeg > 250) fail(ErrorKind::DegreeGuard, "truncation too large");

  // Columns: b with p|b| < trunc. A row at mu touches b only when mu - pb is
  // itself a barrier, so p|b| <= |mu| - (p - 1) <= trunc - 1 and wider
  // columns would be identically zero.
  sys.cols_b.clear();
  for (int d = 0; p * d < sys.trunc; ++d) for_each_monomial(m, d, [&](const std::vector<int>& b) { sys.cols_b.push_back(b); });
  std::map<std::vector<int>, size_t> col_of;
  for (size_t i = 0; i < sys.cols_b.size(); ++i) col_of[sys.cols_b[i]] = i;
  const size_t P = sys.cols_b.size() * size_t(S);
  sys.params = P;
  IncrementalEchelon all(F, P);

  Binomials B(maxdeg + m + 2);
  LayerRank L{m, B};
  const int npairs = n * (n - 1) / 2;
  std::vector<std::vector<int>> pid(size_t(n), std::vector<int>(size_t(n), -1));
  std::vector<std::pair<int, int>> pairs;
  for (int j = 0; j < n; ++j)
    for (int l = j + 1; l < n; ++l) {
      pid[j][l] = pid[l][j] = int(pairs.size());
      pairs.push_back({j, l});
    }
  std::vector<Elt> binv(static_cast<size_t>(npairs));
  for (int q = 0; q < npairs; ++q) binv[q] = F.inv(F.sub(a.coords[pairs[q].first], a.coords[pairs[q].second]));
  std::vector<Elt> inv_small(size_t(p), 0);
  for (int x = 1; x < p; ++x) inv_small[x] = F.inv(F.from_int(x));
  const Elt mh = F.neg(h);

  // X^{jl}(mu) = ((G_j - G_l)/(z_j - z_l))(mu), per seed; two layers stored
  // monomial-major so that one monomial's values are contiguous.
  std::vector<Elt> Xprev, Xcur;
  std::unordered_map<uint64_t, size_t> barrier_at;  // (j, mu) -> offset
  std::vector<Elt> barrier_vals;                    // (n-1) x S per entry

  auto X = [&](const std::vector<Elt>& layer, size_t r, int q, int s) -> Elt {
    return layer[(r * size_t(npairs) + size_t(q)) * size_t(S) + size_t(s)];
  };

  std::vector<int> nu(static_cast<size_t>(m));
  std::vector<size_t> down(static_cast<size_t>(m), 0);
  std::vector<Elt> G(size_t(n) * size_t(S)), HG(size_t(n) * size_t(S));
  bool done = false;
  for (int d = 0; d <= maxdeg && !done; ++d) {
    size_t lsize = L.size(d);
    Xcur.resize(size_t(npairs) * lsize * size_t(S));  // every entry is written below
    for_each_monomial(m, d, [&](const std::vector<int>& mu) {
      if (done) return;
      size_t r = L.rank(mu);
      for (int i = 0; i < m; ++i)
        if (mu[i] > 0) {
          nu = mu;
          nu[i] -= 1;
          down[i] = L.rank(nu);
        }
      // G(mu).
      int j = -1;
      for (int i = 0; i < m; ++i)
        if (mu[i] % p != 0) {
          j = i;
          break;
        }
      std::fill(G.begin(), G.end(), 0);
      if (j < 0) {
        if (d == 0)
          for (int s = 0; s < S; ++s) {
            G[size_t(s) * size_t(S) + size_t(s)] = 1;
            G[size_t(n - 1) * size_t(S) + size_t(s)] = F.neg(1);
          }
      } else {
        size_t rn = down[j];
        Elt c = F.mul(mh, inv_small[size_t(mu[j] % p)]);
        for (int s = 0; s < S; ++s) {
          Elt diag = 0;
          for (int l = 0; l < n; ++l) {
            if (l == j) continue;
            Elt x = X(Xprev, rn, pid[j][l], s);
            G[size_t(l) * size_t(S) + size_t(s)] = F.mul(c, x);
            diag = F.sub(diag, x);
          }
          G[size_t(j) * size_t(S) + size_t(s)] = F.mul(c, diag);
        }
      }
      if (sys.keep_series && d < sys.trunc) sys.series[pack(mu, 0)] = G;
      // X(mu): b X(mu) = (G_j - G_l)(mu) - X(mu - e_j) + X(mu - e_l).
      for (int q = 0; q < npairs; ++q) {
        auto [pj, pl] = pairs[q];
        bool has_j = pj < m && mu[pj] > 0, has_l = pl < m && mu[pl] > 0;
        size_t rj = has_j ? down[pj] : 0, rl = has_l ? down[pl] : 0;
        for (int s = 0; s < S; ++s) {
          Elt v = F.sub(G[size_t(pj) * size_t(S) + size_t(s)], G[size_t(pl) * size_t(S) + size_t(s)]);
          if (has_j) v = F.sub(v, X(Xprev, rj, q, s));
          if (has_l) v = F.add(v, X(Xprev, rl, q, s));
          Xcur[(r * size_t(npairs) + size_t(q)) * size_t(S) + size_t(s)] = F.mul(v, binv[q]);
        }
      }
      if (d > sys.ext - 2) return;
      // Barrier equations at mu.
      for (int jb = 0; jb < m; ++jb) {
        if (jb > 0 && mu[jb - 1] % p != 0) break;
        if (mu[jb] % p != p - 1) continue;
        // R = h (H_jb G)(mu), components 0..n-2.
        size_t off = barrier_vals.size();
        barrier_vals.resize(off + size_t(n - 1) * size_t(S), 0);
        for (int s = 0; s < S; ++s) {
          Elt diag = 0;
          for (int l = 0; l < n; ++l) {
            if (l == jb) continue;
            Elt x = X(Xcur, r, pid[jb][l], s);
            diag = F.sub(diag, x);
            if (l < n - 1) barrier_vals[off + size_t(l) * size_t(S) + size_t(s)] = F.mul(h, x);
          }
          barrier_vals[off + size_t(jb) * size_t(S) + size_t(s)] = F.mul(h, diag);
        }
        barrier_at[pack(mu, jb + 1)] = off;
        // Rows (jb, mu, i): column (b, s) holds R_jb(mu - p b)_i.
        std::vector<std::pair<size_t, size_t>> terms;  // (column block, offset)
        std::vector<int> b(size_t(m), 0), rest(static_cast<size_t>(m));
        std::function<void(int, int)> rec = [&](int i, int used) {
          if (i == m) {
            for (int t = 0; t < m; ++t) rest[t] = mu[t] - p * b[t];
            auto it = barrier_at.find(pack(rest, jb + 1));
            auto ct = col_of.find(b);
            if (it != barrier_at.end() && ct != col_of.end()) terms.push_back({ct->second, it->second});
            return;
          }
          for (int x = 0; p * x <= mu[i] && p * (used + x) < sys.trunc; ++x) {
            b[i] = x;
            rec(i + 1, used + x);
          }
          b[i] = 0;
        };
        rec(0, 0);
        for (int i = 0; i < n - 1; ++i) {
          std::vector<Elt> row(P, 0);
          bool any = false;
          for (auto [cb, o] : terms)
            for (int s = 0; s < S; ++s) {
              Elt v = barrier_vals[o + size_t(i) * size_t(S) + size_t(s)];
              row[cb * size_t(S) + size_t(s)] = v;
              any |= v != 0;
            }
          if (!any) continue;
          all.add(std::move(row));
        }
        if (all.full() && !sys.keep_series) done = true;
      }
    });
    Xprev.swap(Xcur);
  }
  sys.rank_all = all.rank();
  if (sys.want_kernel) {
    FMatrix M(a.field, all.rank(), P);
    for (size_t i = 0; i < all.rank(); ++i)
      for (size_t c = 0; c < P; ++c) M(i, c) = all.rows()[i][c];
    if (all.rank() == 0) {
      sys.kernel.clear();
      for (size_t c = 0; c < P; ++c) {
        std::vector<Elt> e(P, 0);
        e[c] = 1;
        sys.kernel.push_back(e);
      }
    } else {
      sys.kernel = M.kernel();
    }
  }
}

int degree_of(const std::vector<int>& e) {
  int d = 0;
  for (int x : e) d += x;
  return d;
}

void check_inputs(const KZContext& ctx, const EvalPoint& a, int D) {
  if (int(a.size()) != ctx.n) fail(ErrorKind::LengthMismatch, "point has the wrong number of coordinates");
  if (!a.in_S()) fail(ErrorKind::PointNotInS, "coordinates are not pairwise distinct");
  if (D < int(ctx.p())) fail(ErrorKind::TruncationTooSmall, "truncation must be at least p");
  level_at(ctx, a);
}

}  // namespace

long long power_monomial_count(int n, uint64_t p, int D) {
  if (D <= 0) return 0;
  int t = int((uint64_t(D) - 1) / p);
  Binomials B(t + n + 1);
  return (long long)B(t + n, n);
}

int expected_module_rank(const KZContext& ctx) {
  if (!ctx.h_in_prime_field()) return 0;
  if (ctx.h == 0 || ctx.dplus == 0) return ctx.n - 1;
  return ctx.dplus;
}

int formal_dimension(const KZContext& ctx, const EvalPoint& a, int D) {
  check_inputs(ctx, a, D);
  int p = int(ctx.p()), total = 0;
  for (int k = 0; p * k < D; ++k) {
    ReducedSystem sys;
    sys.trunc = D - p * k;
    sys.ext = D - p * k + p;
    solve_reduced(ctx, a, sys);
    total += sys.dimension();
  }
  return total;
}

namespace {

// Power series of I(y, w) = sum_k w^{pk} G_k(y) rewritten in z - a.
PolyVector to_shift_coordinates(const KZContext& ctx, const EvalPoint& a,
                                const std::vector<std::pair<int, std::vector<std::pair<std::vector<int>, std::vector<Elt>>>>>& pieces,
                                int D) {
  const FieldRef& K = a.field;
  int n = ctx.n, p = int(ctx.p());
  // y_i = s_i - s_n, w = s_n with s = z - a.
  std::vector<ZPolynomial> y;
  for (int i = 0; i + 1 < n; ++i) y.push_back(ZPolynomial::variable(K, n, i) - ZPolynomial::variable(K, n, n - 1));
  auto truncate = [&](const ZPolynomial& f) {
    std::vector<ZPolynomial::Term> t;
    for (auto& term : f.terms())
      if (mono_degree(term.first) < D) t.push_back(term);
    return ZPolynomial::from_terms(K, n, t);
  };
  std::map<std::pair<int, int>, ZPolynomial> pow_cache;
  auto ypow = [&](int i, int e) -> const ZPolynomial& {
    auto key = std::make_pair(i, e);
    auto it = pow_cache.find(key);
    if (it != pow_cache.end()) return it->second;
    ZPolynomial r = ZPolynomial::constant(K, n, 1);
    for (int t = 0; t < e; ++t) r = truncate(r * y[i]);
    return pow_cache.emplace(key, r).first->second;
  };
  PolyVector I(size_t(n), ZPolynomial(K, n));
  for (auto& [k, terms] : pieces) {
    std::vector<int> we(size_t(n), 0);
    we[n - 1] = p * k;
    ZPolynomial wk = ZPolynomial::from_terms(K, n, {{mono_key(we), 1}});
    for (auto& [mu, vals] : terms) {
      ZPolynomial mono = wk;
      for (int i = 0; i + 1 < n; ++i) mono = truncate(mono * ypow(i, mu[i]));
      for (int c = 0; c < n; ++c)
        if (vals[c] != 0) I[c] = I[c].axpy(vals[c], mono);
    }
  }
  return I;
}

}  // namespace

FormalSolutionBasis formal_solve(const KZContext& ctx, const EvalPoint& a, int D, bool materialize) {
  check_inputs(ctx, a, D);
  const Field& F = *a.field;
  int n = ctx.n, p = int(ctx.p()), S = n - 1;
  if (materialize) {
    Binomials B(D + n + 1);
    if (B(D - 1 + n, n) > 4000) fail(ErrorKind::DegreeGuard, "series materialization is limited to small truncations");
  }
  FormalSolutionBasis out;
  out.point = a;
  out.truncation = D;
  for (int k = 0; p * k < D; ++k) {
    ReducedSystem sys;
    sys.trunc = D - p * k;
    sys.ext = D - p * k + p;
    sys.want_kernel = true;
    sys.keep_series = materialize;
    solve_reduced(ctx, a, sys);
    // Project the kernel onto columns with p|b| < trunc and echelonize.
    std::vector<size_t> head;
    for (size_t i = 0; i < sys.cols_b.size(); ++i)
      if (p * degree_of(sys.cols_b[i]) < sys.trunc)
        for (int s = 0; s < S; ++s) head.push_back(i * size_t(S) + size_t(s));
    FMatrix proj(a.field, sys.kernel.size(), head.size());
    for (size_t r = 0; r < sys.kernel.size(); ++r)
      for (size_t c = 0; c < head.size(); ++c) proj(r, c) = sys.kernel[r][head[c]];
    size_t rk = proj.rref().size();
    if (int(rk) != sys.dimension()) fail(ErrorKind::InvalidArgument, "inconsistent formal solution count");
    for (size_t r = 0; r < rk; ++r) {
      SolutionParams sp;
      std::vector<std::pair<std::vector<int>, std::vector<Elt>>> series_terms;
      for (size_t c = 0; c < head.size(); c += size_t(S)) {
        const auto& b = sys.cols_b[head[c] / size_t(S)];
        std::vector<Elt> v(size_t(n), 0);
        bool any = false;
        for (int s = 0; s < S; ++s) {
          Elt u = proj(r, c + size_t(s));
          v[s] = u;
          v[n - 1] = F.sub(v[n - 1], u);
          any |= u != 0;
        }
        if (!any) continue;
        PowerIndex beta = b;
        beta.push_back(k);
        sp[beta] = v;
      }
      out.params.push_back(sp);
      if (materialize) {
        // G = sum_b y^{pb} sum_s u_{b,s} G^{(0)}[e_s - e_n], truncated.
        std::map<std::vector<int>, std::vector<Elt>> G;
        for (auto& [beta, v] : sp) {
          std::vector<int> b(beta.begin(), beta.end() - 1);
          for (auto& [key, vals] : sys.series) {
            std::vector<int> mu(size_t(n - 1));
            uint64_t kk = key;
            for (int i = n - 2; i >= 0; --i) {
              mu[i] = int(kk & 0xff);
              kk >>= 8;
            }
            for (int i = 0; i + 1 < n; ++i) mu[i] += p * b[i];
            if (degree_of(mu) >= sys.trunc) continue;
            auto& slot = G[mu];
            slot.resize(size_t(n), 0);
            for (int c = 0; c < n; ++c)
              for (int s = 0; s < S; ++s) slot[c] = F.add(slot[c], F.mul(v[s], vals[size_t(c) * size_t(S) + size_t(s)]));
          }
        }
        std::vector<std::pair<std::vector<int>, std::vector<Elt>>> terms(G.begin(), G.end());
        out.basis.push_back(to_shift_coordinates(ctx, a, {{k, terms}}, D));
      }
    }
  }
  out.dimension = int(out.params.size());
  return out;
}

bool truncated_flatness(const KZContext& ctx, const EvalPoint& a, const PolyVector& I, int D) {
  const FieldRef& K = a.field;
  const Field& F = *K;
  int n = ctx.n, top = D - 2;
  Elt h = level_at(ctx, a);
  auto truncate = [&](const ZPolynomial& f, int deg) {
    std::vector<ZPolynomial::Term> t;
    for (auto& term : f.terms())
      if (mono_degree(term.first) <= deg) t.push_back(term);
    return ZPolynomial::from_terms(K, n, t);
  };
  ZPolynomial sum(K, n);
  for (auto& c : I) sum = sum + c;
  if (!truncate(sum, D - 1).is_zero()) return false;
  if (top < 0) return true;
  for (int k = 0; k < n; ++k) {
    std::vector<ZPolynomial> HI(size_t(n), ZPolynomial(K, n));
    for (int j = 0; j < n; ++j) {
      if (j == k) continue;
      // 1/(b + u) = sum_t (-1)^t u^t / b^{t+1}, u = s_k - s_j.
      Elt binv = F.inv(F.sub(a.coords[k], a.coords[j]));
      ZPolynomial u = ZPolynomial::variable(K, n, k) - ZPolynomial::variable(K, n, j);
      ZPolynomial inv(K, n), upow = ZPolynomial::constant(K, n, 1);
      Elt coef = binv;
      for (int t = 0; t <= top; ++t) {
        inv = inv.axpy(coef, upow);
        upow = truncate(upow * u, top);
        coef = F.neg(F.mul(coef, binv));
      }
      ZPolynomial x = truncate((I[k] - I[j]) * inv, top);
      HI[j] = HI[j] + x;
      HI[k] = HI[k] - x;
    }
    for (int c = 0; c < n; ++c) {
      ZPolynomial e = truncate(I[c].partial(k), top).axpy(h, HI[c]);
      if (!truncate(e, top).is_zero()) return false;
    }
  }
  return true;
}

namespace {

// Coefficients of t^0 and t^p in Q^{(lp-1)}(a + t d) for l = 1..count.
std::vector<std::pair<std::vector<Elt>, std::vector<Elt>>> restricted_family(int n, int p, int e, const EvalPoint& a,
                                                                            const std::vector<Elt>& dir) {
  const Field& F = *a.field;
  int deg = n * e, T = p + 1;
  // P[i][s]: coefficient of x^i t^s.
  std::vector<std::vector<Elt>> P(size_t(deg) + 1, std::vector<Elt>(size_t(T), 0));
  P[0][0] = 1;
  int cur = 0;
  for (int s = 0; s < n; ++s)
    for (int r = 0; r < e; ++r) {
      // multiply by (x - a_s - t d_s)
      Elt ma = F.neg(a.coords[s]), md = F.neg(dir[s]);
      for (int i = cur + 1; i >= 0; --i)
        for (int t = T - 1; t >= 0; --t) {
          Elt v = i > 0 ? P[i - 1][t] : 0;
          v = F.add(v, F.mul(ma, P[i][t]));
          if (t > 0) v = F.add(v, F.mul(md, P[i][t - 1]));
          P[i][t] = v;
        }
      ++cur;
    }
  int count = deg / p;
  std::vector<std::pair<std::vector<Elt>, std::vector<Elt>>> out(size_t(count),
                                                                {std::vector<Elt>(size_t(n)), std::vector<Elt>(size_t(n))});
  for (int j = 0; j < n; ++j) {
    std::vector<Elt> q(size_t(T), 0), nq(static_cast<size_t>(T));
    for (int i = deg; i >= p; --i) {
      // q_{i-1} = c_i + (a_j + t d_j) q_i
      for (int t = 0; t < T; ++t) {
        Elt v = F.add(P[i][t], F.mul(a.coords[j], q[t]));
        if (t > 0) v = F.add(v, F.mul(dir[j], q[t - 1]));
        nq[t] = v;
      }
      q.swap(nq);
      if (i % p == 0) {
        out[size_t(i / p - 1)].first[j] = q[0];
        out[size_t(i / p - 1)].second[j] = q[size_t(p)];
      }
    }
  }
  return out;
}

}  // namespace

std::vector<SolutionParams> hyperg_params(const KZContext& ctx, const EvalPoint& a) {
  ctx.require_rational_nonzero_h();
  int n = ctx.n, p = int(ctx.p());
  std::vector<SolutionParams> out(size_t(ctx.dplus));
  for (int dirn = 0; dirn < n; ++dirn) {
    // Directions: e_i for y_i (i < n - 1 in 0-based), all-ones for w.
    std::vector<Elt> dir(size_t(n), 0);
    if (dirn + 1 < n)
      dir[dirn] = 1;
    else
      std::fill(dir.begin(), dir.end(), 1);
    auto rf = restricted_family(n, p, *ctx.ht, a, dir);
    for (int l = 0; l < ctx.dplus; ++l) {
      PowerIndex zero(size_t(n), 0), beta(size_t(n), 0);
      beta[dirn] = 1;
      out[l][zero] = rf[l].first;
      out[l][beta] = rf[l].second;
    }
  }
  return out;
}

HypergExpression express_in_hyperg_basis(const KZContext& ctx, const EvalPoint& a, const SolutionParams& solution, int D) {
  ctx.require_rational_nonzero_h();
  int n = ctx.n, p = int(ctx.p()), dp = ctx.dplus;
  if (D > 2 * p) fail(ErrorKind::NotApplicable, "expression is implemented for truncations up to 2p");
  const FieldRef& K = a.field;
  const Field& F = *K;
  auto qp = hyperg_params(ctx, a);
  HypergExpression ex;
  ex.coefficients.assign(size_t(dp), {});
  std::vector<PowerIndex> betas;
  PowerIndex zero(size_t(n), 0);
  betas.push_back(zero);
  if (D > p)
    for (int i = 0; i < n; ++i) {
      PowerIndex b(size_t(n), 0);
      b[i] = 1;
      betas.push_back(b);
    }
  for (auto& [beta, v] : solution)
    if (p * degree_of(beta) >= D || std::find(betas.begin(), betas.end(), beta) == betas.end())
      fail(ErrorKind::InvalidArgument, "solution parameter outside the truncation");
  auto value = [&](const SolutionParams& sp, const PowerIndex& b) {
    auto it = sp.find(b);
    return it == sp.end() ? std::vector<Elt>(size_t(n), 0) : it->second;
  };
  for (auto& beta : betas) {
    std::vector<Elt> r = value(solution, beta);
    // Subtract contributions f_l(gamma) Q_l(beta - gamma) with gamma < beta.
    for (int l = 0; l < dp; ++l)
      for (auto& [gamma, f] : ex.coefficients[l]) {
        if (gamma == beta) continue;
        PowerIndex diff(static_cast<size_t>(n));
        bool ok = true;
        for (int i = 0; i < n; ++i) {
          diff[i] = beta[i] - gamma[i];
          ok &= diff[i] >= 0;
        }
        if (!ok) continue;
        auto q = value(qp[l], diff);
        for (int c = 0; c < n; ++c) r[c] = F.sub(r[c], F.mul(f, q[c]));
      }
    // Solve sum_l f_l Q_l(a) = r.
    FMatrix M(K, size_t(n), size_t(dp) + 1);
    for (int c = 0; c < n; ++c) {
      for (int l = 0; l < dp; ++l) M(c, l) = qp[l].at(zero)[c];
      M(c, dp) = r[c];
    }
    auto piv = M.rref();
    if (!piv.empty() && piv.back() == size_t(dp)) {
      ex.zero_remainder = false;
      nlohmann::json rv = nlohmann::json::array();
      for (Elt x : r) rv.push_back(F.format(x));
      ex.remainder = {{"beta", beta}, {"residual", rv}};
      return ex;
    }
    for (size_t i = 0; i < piv.size(); ++i)
      if (M(i, dp) != 0) ex.coefficients[piv[i]][beta] = M(i, dp);
  }
  return ex;
}

Certificate module_rank_check(const KZContext& ctx, const std::vector<EvalPoint>& points, int D) {
  Certificate c = make_certificate("module-rank");
  c.params = context_params(ctx);
  c.params["truncation"] = D;
  c.params["points"] = points.size();
  if (ctx.p_divides_n) {
    c.status = Status::NotApplicable;
    return c;
  }
  long long expect = (long long)expected_module_rank(ctx) * power_monomial_count(ctx.n, ctx.p(), D);
  c.detail["expected_dimension"] = expect;
  for (auto& a : points) {
    int dim = formal_dimension(ctx, a, D);
    if (dim != expect) {
      c.fail_with({{"point", a.to_json()}, {"dimension", dim}, {"expected", expect}});
      return c;
    }
  }
  return c;
}

Certificate no_solutions_check(const KZContext& ctx, const std::vector<EvalPoint>& points, int D) {
  Certificate c = make_certificate("no-formal-solutions");
  c.params = context_params(ctx);
  c.params["truncation"] = D;
  c.params["points"] = points.size();
  if (ctx.h_in_prime_field()) {
    c.status = Status::NotApplicable;
    c.detail["reason"] = "h is in F_p";
    return c;
  }
  for (auto& a : points) {
    int dim = formal_dimension(ctx, a, D);
    if (dim != 0) {
      c.fail_with({{"point", a.to_json()}, {"dimension", dim}});
      return c;
    }
  }
  return c;
}

Certificate hyperg_span_check(const KZContext& ctx, const std::vector<EvalPoint>& points, int D) {
  Certificate c = make_certificate("hyperg-span");
  c.params = context_params(ctx);
  c.params["truncation"] = D;
  c.params["points"] = points.size();
  if (ctx.p_divides_n || !ctx.ht || ctx.dplus == 0) {
    c.status = Status::NotApplicable;
    return c;
  }
  size_t reduced = 0;
  for (auto& a : points) {
    auto basis = formal_solve(ctx, a, D);
    for (size_t i = 0; i < basis.params.size(); ++i) {
      auto ex = express_in_hyperg_basis(ctx, a, basis.params[i], D);
      if (!ex.zero_remainder) {
        c.fail_with({{"point", a.to_json()}, {"basis_index", i}, {"remainder", ex.remainder}});
        return c;
      }
      ++reduced;
    }
  }
  c.detail["solutions_reduced"] = reduced;
  return c;
}

Certificate formal_rank_check(const KZContext& ctx, const std::vector<EvalPoint>& points, int D) {
  Certificate c = make_certificate("formal-rank");
  c.params = context_params(ctx);
  c.params["truncation"] = D;
  c.params["points"] = points.size();
  if (ctx.p_divides_n) {
    c.status = Status::NotApplicable;
    return c;
  }
  long long expect = (long long)expected_module_rank(ctx) * power_monomial_count(ctx.n, ctx.p(), D);
  bool reduce = ctx.ht && ctx.dplus > 0 && D <= 2 * int(ctx.p());
  c.detail["expected_dimension"] = expect;
  c.detail["hyperg_reduction"] = reduce;
  for (auto& a : points) {
    auto basis = formal_solve(ctx, a, D);
    if (basis.dimension != expect) {
      c.fail_with({{"point", a.to_json()}, {"dimension", basis.dimension}, {"expected", expect}});
      return c;
    }
    if (!reduce) continue;
    for (size_t i = 0; i < basis.params.size(); ++i) {
      auto ex = express_in_hyperg_basis(ctx, a, basis.params[i], D);
      if (!ex.zero_remainder) {
        c.fail_with({{"point", a.to_json()}, {"basis_index", i}, {"remainder", ex.remainder}});
        return c;
      }
    }
  }
  return c;
}

Certificate formal_flatness_check(const KZContext& ctx, const std::vector<EvalPoint>& points, int D) {
  Certificate c = make_certificate("formal-flatness");
  c.params = context_params(ctx);
  c.params["truncation"] = D;
  for (auto& a : points) {
    auto basis = formal_solve(ctx, a, D, true);
    for (size_t i = 0; i < basis.basis.size(); ++i)
      if (!truncated_flatness(ctx, a, basis.basis[i], D)) {
        c.fail_with({{"point", a.to_json()}, {"basis_index", i}});
        return c;
      }
  }
  return c;
}

}  // namespace kzp
