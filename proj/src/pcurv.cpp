#include "kzp/pcurv.hpp"

#include <algorithm>
#include <numeric>

#include "kzp/upoly.hpp"

namespace kzp {

namespace {

// h as an element of the point's field.
Elt level_in(const KZContext& ctx, const FieldRef& L) {
  if (ctx.field == L || ctx.field->in_prime_subfield(ctx.h)) return ctx.h;
  fail(ErrorKind::FieldMismatch, "the point's field does not contain h");
}

// Jet of h H_k(a + t e_k) at precision p, as an n x n operator.
JetOperator connection_jets(const KZContext& ctx, int k, const EvalPoint& a) {
  const FieldRef& L = a.field;
  const Field& F = *L;
  size_t n = size_t(ctx.n), p = size_t(ctx.p());
  Elt h = level_in(ctx, L);
  JetOperator op{n, std::vector<Jet>(n * n, Jet(L, p))};
  size_t kk = size_t(k - 1);
  for (size_t j = 0; j < n; ++j) {
    if (j == kk) continue;
    // h / (d + t) = sum_s h (-1)^s t^s / d^{s+1}
    Elt inv = F.inv(F.sub(a.coords[kk], a.coords[j]));
    Jet f(L, p);
    Elt c = F.mul(h, inv);
    for (size_t s = 0; s < p; ++s) {
      f[s] = c;
      c = F.neg(F.mul(c, inv));
    }
    for (size_t s = 0; s < p; ++s) {
      Elt v = f[s], m = F.neg(v);
      op.matrix[kk * n + kk][s] = F.add(op.matrix[kk * n + kk][s], m);
      op.matrix[j * n + j][s] = F.add(op.matrix[j * n + j][s], m);
      op.matrix[kk * n + j][s] = F.add(op.matrix[kk * n + j][s], v);
      op.matrix[j * n + kk][s] = F.add(op.matrix[j * n + kk][s], v);
    }
  }
  return op;
}

void check_point(const KZContext& ctx, int k, const EvalPoint& a) {
  if (int(a.size()) != ctx.n) fail(ErrorKind::LengthMismatch, "point has the wrong number of coordinates");
  if (k < 1 || k > ctx.n) fail(ErrorKind::IndexOutOfRange, "direction index out of range");
  if (!a.in_S()) fail(ErrorKind::PointNotInS, "coordinates are not pairwise distinct");
}

std::vector<Elt> restrict_vector(const std::vector<Elt>& v) { return std::vector<Elt>(v.begin(), v.end() - 1); }

nlohmann::json matrix_json(const FMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (size_t i = 0; i < m.rows(); ++i) {
    nlohmann::json r = nlohmann::json::array();
    for (size_t j = 0; j < m.cols(); ++j) r.push_back(m.field()->format(m(i, j)));
    rows.push_back(r);
  }
  return rows;
}

Certificate point_certificate(const std::string& name, const KZContext& ctx, const std::vector<EvalPoint>& points) {
  Certificate c = make_certificate(name);
  c.params = context_params(ctx);
  c.params["points"] = points.size();
  return c;
}

}  // namespace

FMatrix PCurvatureMatrix::on_V() const {
  size_t n = full.rows();
  FMatrix r(full.field(), n - 1, n - 1);
  const Field& F = *full.field();
  for (size_t i = 0; i + 1 < n; ++i)
    for (size_t s = 0; s + 1 < n; ++s) r(i, s) = F.sub(full(i, s), full(i, n - 1));
  return r;
}

PCurvatureMatrix psi_at_point(const KZContext& ctx, int k, const EvalPoint& a) {
  check_point(ctx, k, a);
  const FieldRef& L = a.field;
  size_t n = size_t(ctx.n), p = size_t(ctx.p());
  JetOperator op = connection_jets(ctx, k, a);
  PCurvatureMatrix out{k, a, FMatrix(L, n, n)};
  for (size_t s = 0; s < n; ++s) {
    std::vector<Jet> series(n, Jet(L, p));
    series[s][0] = 1;
    auto res = jet_compose(std::move(series), op, int(p));
    for (size_t i = 0; i < n; ++i) out.full(i, s) = res[i][0];
  }
  return out;
}

std::vector<Elt> psi_on_section(const KZContext& ctx, int k, const EvalPoint& a, const PolyVector& I) {
  check_point(ctx, k, a);
  const FieldRef& L = a.field;
  const Field& F = *L;
  size_t n = size_t(ctx.n), p = size_t(ctx.p());
  int kk = k - 1;
  // Jet of (a_k + t)^e, cached by e.
  std::vector<Jet> pows{Jet::constant(L, p, 1)};
  Jet lin(L, p);
  lin[0] = a.coords[kk];
  if (p > 1) lin[1] = 1;
  std::vector<Jet> series;
  for (auto& comp : I) {
    Jet acc(L, p);
    for (auto& [key, c] : comp.terms()) {
      Elt rest = c;
      for (int i = 0; i < ctx.n; ++i)
        if (i != kk) rest = F.mul(rest, F.pow(a.coords[i], uint64_t(mono_exp(key, i))));
      size_t e = size_t(mono_exp(key, kk));
      while (pows.size() <= e) pows.push_back(pows.back() * lin);
      for (size_t s = 0; s < p; ++s) acc[s] = F.add(acc[s], F.mul(rest, pows[e][s]));
    }
    series.push_back(std::move(acc));
  }
  auto res = jet_compose(std::move(series), connection_jets(ctx, k, a), int(p));
  std::vector<Elt> out(n);
  for (size_t i = 0; i < n; ++i) out[i] = res[i][0];
  return out;
}

std::vector<Elt> weighted_family_sum(int n, uint64_t p, int e, int k, const EvalPoint& a) {
  const Field& F = *a.field;
  auto rows = family_at_point(n, p, e, a);
  std::vector<Elt> s(size_t(n), 0);
  Elt w = 1, step = F.pow(a.coords[size_t(k - 1)], p);
  for (auto& r : rows) {
    for (int i = 0; i < n; ++i) s[i] = F.add(s[i], F.mul(w, r[i]));
    w = F.mul(w, step);
  }
  return s;
}

FMatrix closed_form_psi(const KZContext& ctx, int k, const EvalPoint& a, int sign) {
  ctx.require_rational_nonzero_h();
  check_point(ctx, k, a);
  const FieldRef& L = a.field;
  const Field& F = *L;
  uint64_t p = ctx.p();
  Elt C = 1;
  for (int i = 0; i < ctx.n; ++i)
    if (i != k - 1) C = F.mul(C, F.sub(a.coords[k - 1], a.coords[i]));
  Elt coef = F.div(level_in(ctx, L), F.pow(C, p));
  if (sign < 0) coef = F.neg(coef);
  auto S = weighted_family_sum(ctx.n, p, *ctx.ht, k, a);
  auto T = weighted_family_sum(ctx.n, p, int(p) - *ctx.ht, k, a);
  FMatrix m(L, size_t(ctx.n), size_t(ctx.n));
  for (int i = 0; i < ctx.n; ++i)
    for (int j = 0; j < ctx.n; ++j) m(i, j) = F.mul(coef, F.mul(S[i], T[j]));
  return m;
}

std::vector<EvalPoint> seeded_points(const FieldRef& f, int n, int count, uint64_t seed, bool etale) {
  Rng rng(seed);
  std::vector<EvalPoint> pts;
  for (int i = 0; i < count; ++i) pts.push_back(random_point(f, n, rng, etale));
  return pts;
}

Certificate nilpotency_check(const KZContext& ctx, const std::vector<EvalPoint>& points) {
  Certificate c = point_certificate("nilpotency", ctx, points);
  if (!ctx.h_in_prime_field()) {
    c.status = Status::NotApplicable;
    c.detail["reason"] = "h is not in F_p";
    return c;
  }
  for (auto& a : points) {
    std::vector<FMatrix> psi;
    for (int k = 1; k <= ctx.n; ++k) psi.push_back(psi_at_point(ctx, k, a).full);
    for (int k = 0; k < ctx.n; ++k)
      for (int l = 0; l < ctx.n; ++l)
        if (!(psi[k] * psi[l]).is_zero()) {
          c.fail_with({{"point", a.to_json()}, {"k", k + 1}, {"l", l + 1}});
          return c;
        }
  }
  return c;
}

Certificate zero_curvature_check(const KZContext& ctx, const std::vector<EvalPoint>& points) {
  Certificate c = point_certificate("zero-curvature", ctx, points);
  for (auto& a : points)
    for (int k = 1; k <= ctx.n; ++k) {
      auto psi = psi_at_point(ctx, k, a);
      if (!psi.full.is_zero()) {
        c.fail_with({{"point", a.to_json()}, {"k", k}, {"psi", matrix_json(psi.full)}});
        return c;
      }
    }
  return c;
}

Certificate rank_structure_check(const KZContext& ctx, const std::vector<EvalPoint>& points) {
  ctx.require_p_coprime_n();
  ctx.require_rational_nonzero_h();
  if (ctx.dplus == 0 || ctx.dplus == ctx.n - 1) fail(ErrorKind::DegenerateCase, "p-curvature vanishes identically here");
  Certificate c = point_certificate("rank-structure", ctx, points);
  uint64_t p = ctx.p();
  for (auto& a : points) {
    const FieldRef& L = a.field;
    const Field& F = *L;
    auto plus_rows = family_at_point(ctx.n, p, *ctx.ht, a);
    for (int k = 1; k <= ctx.n; ++k) {
      auto psi = psi_at_point(ctx, k, a);
      FMatrix R = psi.on_V();
      nlohmann::json where = {{"point", a.to_json()}, {"k", k}};
      if (R.rank() != 1) {
        where["rank"] = R.rank();
        c.fail_with(where);
        return c;
      }
      auto S = weighted_family_sum(ctx.n, p, *ctx.ht, k, a);
      auto T = weighted_family_sum(ctx.n, p, int(p) - *ctx.ht, k, a);
      // The kernel hyperplane {v in V : T . v = 0}, in V coordinates.
      std::vector<Elt> t(size_t(ctx.n - 1));
      for (int s = 0; s + 1 < ctx.n; ++s) t[s] = F.sub(T[s], T[ctx.n - 1]);
      bool t_nonzero = std::any_of(t.begin(), t.end(), [](Elt x) { return x != 0; });
      auto ker = R.kernel();
      bool ker_ok = t_nonzero && ker.size() == size_t(ctx.n - 2);
      for (auto& v : ker) ker_ok = ker_ok && shapovalov(F, t, v) == 0;
      if (!ker_ok) {
        where["reason"] = "kernel differs from the predicted hyperplane";
        c.fail_with(where);
        return c;
      }
      // The image is the line through S.
      auto sv = restrict_vector(S);
      FMatrix aug(L, size_t(ctx.n - 1), size_t(ctx.n));
      for (int i = 0; i + 1 < ctx.n; ++i) {
        for (int s = 0; s + 1 < ctx.n; ++s) aug(i, s) = R(i, s);
        aug(i, ctx.n - 1) = sv[i];
      }
      bool s_nonzero = std::any_of(sv.begin(), sv.end(), [](Elt x) { return x != 0; });
      if (!s_nonzero || aug.rank() != 1) {
        where["reason"] = "image is not spanned by the predicted vector";
        c.fail_with(where);
        return c;
      }
      for (size_t l = 0; l < plus_rows.size(); ++l)
        for (Elt x : psi.full.apply(plus_rows[l]))
          if (x != 0) {
            where["reason"] = "a p-hypergeometric vector is not in the kernel";
            where["l"] = l + 1;
            c.fail_with(where);
            return c;
          }
    }
  }
  return c;
}

Certificate curvature_structure_check(const KZContext& ctx, const std::vector<EvalPoint>& points) {
  if (!ctx.h_in_prime_field() || ctx.p_divides_n) {
    Certificate c = point_certificate("curvature-structure", ctx, points);
    c.status = Status::NotApplicable;
    return c;
  }
  bool zero = ctx.h == 0 || ctx.dplus == 0 || ctx.dplus == ctx.n - 1;
  Certificate c = zero ? zero_curvature_check(ctx, points) : rank_structure_check(ctx, points);
  c.detail["case"] = zero ? "zero" : "rank-one";
  c.check = "curvature-structure";
  return c;
}

Certificate closed_form_check(const KZContext& ctx, const std::vector<EvalPoint>& points, bool mutate, int sign) {
  Certificate c = point_certificate("closed-form", ctx, points);
  c.params["sign"] = sign;
  if (!ctx.ht || ctx.p_divides_n) {
    c.status = Status::NotApplicable;
    return c;
  }
  uint64_t p = ctx.p();
  for (auto& a : points) {
    const Field& F = *a.field;
    for (int k = 1; k <= ctx.n; ++k) {
      FMatrix expect = closed_form_psi(ctx, k, a, sign);
      if (mutate && ctx.dplus >= 1) {
        // Same corruption as mutate_family, seen through the l = 1 term of S.
        Elt C = 1;
        for (int i = 0; i < ctx.n; ++i)
          if (i != k - 1) C = F.mul(C, F.sub(a.coords[k - 1], a.coords[i]));
        Elt coef = F.div(level_in(ctx, a.field), F.pow(C, p));
        if (sign < 0) coef = F.neg(coef);
        auto T = weighted_family_sum(ctx.n, p, int(p) - *ctx.ht, k, a);
        Elt m = F.pow(a.coords[1], uint64_t(ctx.n * *ctx.ht - int(p)));
        for (int j = 0; j < ctx.n; ++j) {
          Elt d = F.mul(coef, F.mul(m, T[j]));
          expect(0, j) = F.add(expect(0, j), d);
          expect(1, j) = F.sub(expect(1, j), d);
        }
      }
      auto psi = psi_at_point(ctx, k, a);
      if (!(psi.full == expect)) {
        c.fail_with({{"point", a.to_json()}, {"k", k}, {"jets", matrix_json(psi.full)}, {"closed_form", matrix_json(expect)}});
        return c;
      }
    }
  }
  if (mutate) c.detail["mutated"] = true;
  return c;
}

Certificate linearity_check(const KZContext& ctx, const std::vector<EvalPoint>& points, uint64_t seed) {
  Certificate c = point_certificate("linearity", ctx, points);
  c.seed = seed;
  Rng rng(seed);
  for (auto& a : points) {
    FieldRef F = poly_field_for(ctx);
    PolyVector I;
    for (int j = 0; j < ctx.n; ++j) {
      std::vector<ZPolynomial::Term> t;
      for (int s = 0; s < 4; ++s) {
        std::vector<int> e(size_t(ctx.n));
        for (auto& x : e) x = int(rng.below(uint64_t(ctx.p()) + 2));
        t.push_back({mono_key(e), rng.below(F->order())});
      }
      I.push_back(ZPolynomial::from_terms(F, ctx.n, t));
    }
    std::vector<Elt> Ia;
    for (auto& comp : I) Ia.push_back(comp.evaluate(a.coords, *a.field));
    for (int k = 1; k <= ctx.n; ++k) {
      if (psi_on_section(ctx, k, a, I) != psi_at_point(ctx, k, a).full.apply(Ia)) {
        c.fail_with({{"point", a.to_json()}, {"k", k}});
        return c;
      }
    }
  }
  return c;
}

std::vector<Elt> critical_points(const EvalPoint& a, const FieldRef& into) {
  const FieldRef& K = a.field;
  UPoly P = UPoly::constant(K, 1);
  for (Elt x : a.coords) P = P * UPoly(K, {K->neg(x), 1});
  UPoly d = P.derivative();
  if (into != K) {
    Embedding emb(K, into);
    d = d.mapped(into, emb);
  }
  std::vector<Elt> out;
  for (auto [r, m] : roots_with_multiplicity(d))
    for (int i = 0; i < m; ++i) out.push_back(r);
  return out;
}

namespace {

uint64_t checked_order(uint64_t p, int k) {
  unsigned __int128 q = 1;
  for (int i = 0; i < k; ++i) {
    q *= p;
    if (q >> 62) return 0;
  }
  return uint64_t(q);
}

}  // namespace

Certificate steepest_descent_spectrum_check(const KZContext& ctx, const std::vector<EvalPoint>& points, int sigma) {
  Certificate c = point_certificate("steepest-descent-spectrum", ctx, points);
  c.params["sigma"] = sigma;
  uint64_t p = ctx.p();
  if (p == 2 || ctx.p_divides_n || ctx.h_in_prime_field()) {
    c.status = Status::NotApplicable;
    c.detail["reason"] = "requires odd p, p not dividing n and h outside F_p";
    return c;
  }
  const FieldRef& K = ctx.field;
  const Field& FK = *K;
  Elt hh = FK.sub(FK.frobenius(ctx.h), ctx.h);
  std::vector<int> ext_degrees;
  for (auto a : points) {
    if (a.field != K) {
      if (!a.field->is_prime_field() || a.field->characteristic() != p)
        fail(ErrorKind::FieldMismatch, "point field must be F_p or the context field");
      a.field = K;
    }
    if (!a.is_etale()) fail(ErrorKind::NotEtale, "critical points collide");
    UPoly P = UPoly::constant(K, 1);
    for (Elt x : a.coords) P = P * UPoly(K, {FK.neg(x), 1});
    UPoly dP = P.derivative();
    for (int k = 1; k <= ctx.n; ++k) {
      FMatrix R = psi_at_point(ctx, k, a).on_V();
      UPoly chi = R.charpoly();
      int m = 1;
      for (int d : factor_degrees(dP)) m = std::lcm(m, d);
      int m_all = m;
      for (int d : factor_degrees(chi)) m_all = std::lcm(m_all, d);
      // When chi and the prediction agree, their splitting fields agree too;
      // the larger field is only needed to report a mismatch.
      if (checked_order(p, FK.degree() * m_all) != 0) m = m_all;
      int deg = FK.degree() * m;
      FieldRef L = deg == FK.degree() ? K : Field::extension(p, deg);
      ext_degrees.push_back(deg);
      std::vector<Elt> eig;
      std::vector<Elt> expect;
      std::vector<Elt> crit;
      Elt hL, akL;
      if (L == K) {
        for (auto [r, mult] : roots_with_multiplicity(chi))
          for (int i = 0; i < mult; ++i) eig.push_back(r);
        crit = critical_points(a, K);
        hL = hh;
        akL = a.coords[k - 1];
      } else {
        Embedding emb(K, L);
        for (auto [r, mult] : roots_with_multiplicity(chi.mapped(L, emb)))
          for (int i = 0; i < mult; ++i) eig.push_back(r);
        crit = critical_points(a, L);
        hL = emb(hh);
        akL = emb(a.coords[k - 1]);
      }
      const Field& FL = *L;
      Elt sg = sigma >= 0 ? FL.from_int(sigma) : FL.neg(FL.from_int(-sigma));
      for (Elt cp : crit) expect.push_back(FL.mul(sg, FL.div(hL, FL.pow(FL.sub(akL, cp), p))));
      std::sort(eig.begin(), eig.end());
      std::sort(expect.begin(), expect.end());
      if (eig != expect) {
        nlohmann::json ev = nlohmann::json::array(), ex = nlohmann::json::array();
        for (Elt x : eig) ev.push_back(FL.format(x));
        for (Elt x : expect) ex.push_back(FL.format(x));
        c.fail_with({{"point", a.to_json()}, {"k", k}, {"eigenvalues", ev}, {"predicted", ex}, {"splitting_degree", deg}});
        return c;
      }
    }
  }
  if (!ext_degrees.empty()) c.detail["max_splitting_degree"] = *std::max_element(ext_degrees.begin(), ext_degrees.end());
  return c;
}

int pinned_descent_sign() {
  auto K = Field::extension(5, 2);
  auto ctx = KZContext::make(2, K, K->generator());
  EvalPoint a{K, {0, 1}};
  Elt psi = psi_at_point(ctx, 1, a).on_V()(0, 0);
  Elt c = critical_points(a, K).at(0);
  Elt base = K->div(K->sub(K->frobenius(ctx.h), ctx.h), K->pow(K->sub(a.coords[0], c), 5));
  if (psi == base) return 1;
  if (psi == K->neg(base)) return -1;
  return 0;
}

}  // namespace kzp
