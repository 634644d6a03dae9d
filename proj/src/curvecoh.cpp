#include "kzp/curvecoh.hpp"

#include <numeric>

namespace kzp {

CurveContext CurveContext::make(int n, int q, int r, FieldRef field) {
  if (n < 2) fail(ErrorKind::InvalidArgument, "need n >= 2");
  if (q < 2 || std::gcd(q, n) != 1) fail(ErrorKind::InvalidArgument, "q must be coprime to n");
  if (uint64_t(q) % field->characteristic() == 0) fail(ErrorKind::InvalidArgument, "q must be prime to p");
  if (r <= 0 || r >= q) fail(ErrorKind::IndexOutOfRange, "need 0 < r < q");
  return CurveContext{n, q, r, std::move(field)};
}

Elt CurveContext::level() const { return field->neg(field->div(field->from_int(r), field->from_int(q))); }

int genus_by_hodge_ranks(int n, int q) {
  int s = 0;
  for (int r = 1; r < q; ++r) s += n * r / q;
  return s;
}

CohClass CohClass::canonical(const Field& f) const {
  CohClass c = *this;
  if (c.omega.empty()) return c;
  Elt last = c.omega.back();
  for (auto& x : c.omega) x = f.sub(x, last);
  return c;
}

namespace {

void require_point(const CurveContext& c, const EvalPoint& a) {
  if (int(a.size()) != c.n) fail(ErrorKind::LengthMismatch, "point has the wrong number of coordinates");
  if (!a.in_S()) fail(ErrorKind::PointNotInS, "coordinates are not pairwise distinct");
}

Elt r_over_q(const Field& F, int r, int q) { return F.div(F.from_int(r), F.from_int(q)); }

Elt c_k(const EvalPoint& a, int k) {
  const Field& F = *a.field;
  Elt c = 1;
  for (size_t j = 0; j < a.size(); ++j)
    if (int(j) != k - 1) c = F.mul(c, F.sub(a.coords[k - 1], a.coords[j]));
  return c;
}

}  // namespace

CohClass gm_on_mu(const CurveContext& c, const EvalPoint& a, int i, int k) {
  require_point(c, a);
  if (k < 1 || k > c.hodge_rank()) fail(ErrorKind::IndexOutOfRange, "mu index outside 1..floor(nr/q)");
  if (i < 1 || i > c.n) fail(ErrorKind::IndexOutOfRange, "direction outside 1..n");
  const Field& F = *a.field;
  Elt rq = r_over_q(F, c.r, c.q), z = a.coords[i - 1];
  CohClass out{std::vector<Elt>(size_t(c.n), 0), std::vector<Elt>(size_t(c.hodge_rank()), 0)};
  // z_i^t multiplies mu_{k-1-t}, and z_i^{k-1} lands on omega_i.
  Elt zt = 1;
  for (int t = 0; t + 1 < k; ++t) {
    out.mu[k - 2 - t] = F.mul(rq, zt);
    zt = F.mul(zt, z);
  }
  out.omega[i - 1] = F.mul(rq, zt);
  return out;
}

Elt pair_omega_mu(const CurveContext& c, int k, int j, const EvalPoint& a) {
  require_point(c, a);
  if (j < 1 || j > c.dual_hodge_rank()) fail(ErrorKind::IndexOutOfRange, "mu index outside 1..floor(n(q-r)/q)");
  if (k < 1 || k > c.n) fail(ErrorKind::IndexOutOfRange, "omega index outside 1..n");
  const Field& F = *a.field;
  Elt v = F.neg(F.div(F.from_int(c.q), F.mul(F.from_int(c.r), c_k(a, k))));
  return F.mul(v, F.pow(a.coords[k - 1], uint64_t(j - 1)));
}

Elt pair_omega_omega(const CurveContext& c, int i, int j) {
  const Field& F = *c.field;
  Elt h = c.level();
  Elt d = F.sub(i == j ? 1 : 0, F.inv(F.from_int(c.n)));
  return F.neg(F.div(d, h));
}

std::vector<Elt> kodaira_spencer(const CurveContext& c, const EvalPoint& a, int k) {
  require_point(c, a);
  if (k < 1 || k > c.hodge_rank()) fail(ErrorKind::IndexOutOfRange, "mu index outside 1..floor(nr/q)");
  const Field& F = *a.field;
  Elt rq = r_over_q(F, c.r, c.q);
  std::vector<Elt> out;
  for (Elt z : a.coords) out.push_back(F.mul(rq, F.pow(z, uint64_t(k - 1))));
  return out;
}

namespace {

std::optional<KatzLinkage> admissible(int n, uint64_t p, int ht, int q) {
  if (q <= n || std::gcd(q, n) != 1 || uint64_t(q) % p == 0) return std::nullopt;
  uint64_t num = uint64_t(q) * uint64_t(ht) + 1;
  if (num % p != 0) return std::nullopt;
  int a = int(num / p);
  // The pairing and Kodaira-Spencer formulas on component a have
  // denominators a and prod_{t <= na/q} (q t - n a); both must be units.
  if (uint64_t(a) % p == 0) return std::nullopt;
  for (int t = 0; t <= n * a / q; ++t)
    if ((int64_t(q) * t - int64_t(n) * a) % int64_t(p) == 0) return std::nullopt;
  return KatzLinkage{q, a};
}

}  // namespace

std::optional<KatzLinkage> find_linkage(int n, uint64_t p, int ht, int bound) {
  if (ht <= 0 || uint64_t(ht) >= p) return std::nullopt;
  for (int q = n + 1; q <= bound; ++q)
    if (auto l = admissible(n, p, ht, q)) return l;
  return std::nullopt;
}

KatzLinkage linkage_for(int n, uint64_t p, int ht, int q) {
  if (ht <= 0 || uint64_t(ht) >= p) fail(ErrorKind::LinkageError, "linkage needs h in F_p \\ {0}");
  if (auto l = admissible(n, p, ht, q)) return *l;
  fail(ErrorKind::LinkageError, "q = " + std::to_string(q) + " is not admissible for this level");
}

CohClass cartier_on_omega(int n, uint64_t p, int e, const EvalPoint& a, int i) {
  if (i < 1 || i > n) fail(ErrorKind::IndexOutOfRange, "omega index outside 1..n");
  if (e <= 0 || uint64_t(e) > p) fail(ErrorKind::LinkageError, "need 0 < e <= p in r = pa - qe");
  CohClass out;
  out.omega.assign(size_t(n), 0);
  for (auto& row : family_at_point(n, p, e, a)) out.mu.push_back(row[i - 1]);
  return out;
}

FMatrix katz_psi(const KZContext& ctx, const KatzLinkage& link, int k, const EvalPoint& a, int katz_sign) {
  ctx.require_rational_nonzero_h();
  const FieldRef& K = a.field;
  const Field& F = *K;
  const int n = ctx.n, ht = *ctx.ht;
  const uint64_t p = ctx.p();
  if (uint64_t(link.q) * uint64_t(ht) + 1 != uint64_t(link.a) * p) fail(ErrorKind::LinkageError, "q h~ + 1 != a p");
  // Components 1 and a of the cover, and -1 = p (q - a) - q (p - h~).
  auto one = CurveContext::make(n, link.q, 1, K);
  auto deg_a = CurveContext::make(n, link.q, link.a, K);
  if (deg_a.hodge_rank() != ctx.dplus || deg_a.dual_hodge_rank() != ctx.dminus)
    fail(ErrorKind::LinkageError, "Hodge ranks of the auxiliary cover do not match the family counts");

  // Psi-bar leg on mu_l^(a): katz_sign times the Frobenius twist of KS, whose
  // k-th direction has coefficient (a/q) a_k^{l-1} on the class of omega_k^(a).
  std::vector<Elt> ks_twisted;
  for (int l = 1; l <= ctx.dplus; ++l)
    ks_twisted.push_back(F.mul(F.from_int(katz_sign), F.frobenius(kodaira_spencer(deg_a, a, l)[k - 1])));

  // F* leg: pairing of F*(class of omega_k^(a)) with omega_j^(-1), by
  // adjunction (omega_k^(a), C(omega_j^(-1))).
  std::vector<Elt> y(size_t(n), 0);
  for (int j = 1; j <= n; ++j) {
    CohClass cj = cartier_on_omega(n, p, int(p) - ht, a, j);
    for (size_t m = 0; m < cj.mu.size(); ++m)
      y[j - 1] = F.add(y[j - 1], F.mul(cj.mu[m], F.frobenius(pair_omega_mu(deg_a, k, int(m) + 1, a))));
  }

  // Gram matrix of omega^(1) against omega^(-1) on the first n - 1 indices.
  FMatrix G(K, size_t(n - 1), size_t(n - 1));
  for (int b = 1; b < n; ++b)
    for (int j = 1; j < n; ++j) G(size_t(j - 1), size_t(b - 1)) = pair_omega_omega(one, b, j);

  Elt inv_n = F.inv(F.from_int(n));
  FMatrix out(K, size_t(n), size_t(n));
  for (int i = 1; i <= n; ++i) {
    // C leg, then Psi-bar: a multiple s_i of F*(class of omega_k^(a)).
    CohClass ci = cartier_on_omega(n, p, ht, a, i);
    Elt s = 0;
    for (size_t l = 0; l < ci.mu.size(); ++l) s = F.add(s, F.mul(ci.mu[l], ks_twisted[l]));
    // Solve (X, omega_j^(-1)) = s y_j for X = sum_{b<n} x_b omega_b^(1).
    FMatrix aug(K, size_t(n - 1), size_t(n));
    for (size_t r = 0; r + 1 < size_t(n); ++r) {
      for (size_t c = 0; c + 1 < size_t(n); ++c) aug(r, c) = G(r, c);
      aug(r, size_t(n - 1)) = F.mul(s, y[r]);
    }
    auto piv = aug.rref();
    if (piv.size() != size_t(n - 1) || piv.back() == size_t(n - 1))
      fail(ErrorKind::DegenerateCase, "the omega pairing is degenerate");
    std::vector<Elt> x(size_t(n), 0);
    for (size_t r = 0; r + 1 < size_t(n); ++r) x[piv[r]] = aug(r, size_t(n - 1));
    // omega_b^(1) -> e_b - (1/n)(1, ..., 1) in V_{-h}.
    Elt sum = 0;
    for (Elt v : x) sum = F.add(sum, v);
    for (int b = 0; b < n; ++b) out(size_t(b), size_t(i - 1)) = F.sub(x[b], F.mul(sum, inv_n));
  }
  return out;
}

Certificate genus_check(const std::vector<int>& ns, const std::vector<int>& qs) {
  Certificate c = make_certificate("genus-identity");
  c.params["n"] = ns;
  c.params["q"] = qs;
  int cases = 0;
  for (int n : ns)
    for (int q : qs) {
      if (std::gcd(q, n) != 1) continue;
      ++cases;
      int lhs = genus_by_hodge_ranks(n, q), rhs = (q * n - q - n + 1) / 2;
      bool ok = lhs == rhs && 2 * rhs == (q - 1) * (n - 1);
      for (int r = 1; r < q && ok; ++r) ok = n * r / q + n * (q - r) / q == n - 1;
      if (!ok) {
        c.fail_with({{"n", n}, {"q", q}, {"hodge_sum", lhs}, {"genus", rhs}});
        return c;
      }
    }
  c.detail["cases"] = cases;
  return c;
}

Certificate katz_composition_check(const KZContext& ctx, const std::vector<EvalPoint>& points, int katz_sign,
                                   std::optional<KatzLinkage> link) {
  Certificate c = make_certificate("katz-composition");
  c.params = context_params(ctx);
  c.params["points"] = points.size();
  c.params["katz_sign"] = katz_sign;
  if (ctx.p_divides_n || !ctx.ht || ctx.h == 0) {
    c.status = Status::NotApplicable;
    return c;
  }
  // Every admissible q has q = -1/h~ mod p and na/q > n h~/p, so once
  // floor(n h~/p) >= p - 1 the factors q t - n a hit every residue mod p.
  if (!link && uint64_t(ctx.n) * uint64_t(*ctx.ht) / ctx.p() >= ctx.p() - 1) {
    c.status = Status::NotApplicable;
    c.detail["reason"] = "no admissible auxiliary cover exists for this level";
    return c;
  }
  if (!link) link = find_linkage(ctx.n, ctx.p(), *ctx.ht);
  if (!link) fail(ErrorKind::LinkageError, "no auxiliary cover below the search bound");
  c.detail["q"] = link->q;
  c.detail["a"] = link->a;
  c.detail["jet_sign"] = kClosedFormSign;
  auto neg = ctx.negated();
  for (auto& a : points) {
    const Field& F = *a.field;
    for (int k = 1; k <= ctx.n; ++k) {
      FMatrix katz = katz_psi(ctx, *link, k, a, katz_sign);
      FMatrix printed = closed_form_psi(neg, k, a, +1);
      FMatrix jets = psi_at_point(neg, k, a).full;
      for (int i = 0; i < ctx.n; ++i) {
        // Both sides on e_i - (1/n)(1, ..., 1).
        std::vector<Elt> w(size_t(ctx.n), F.neg(F.inv(F.from_int(ctx.n))));
        w[i] = F.add(w[i], 1);
        auto pv = printed.apply(w), jv = jets.apply(w);
        for (int b = 0; b < ctx.n; ++b) {
          Elt kv = katz(size_t(b), size_t(i));
          Elt jet_scaled = F.mul(F.from_int(kClosedFormSign), jv[b]);
          if (kv != pv[b] || kv != jet_scaled) {
            c.fail_with({{"point", a.to_json()},
                         {"k", k},
                         {"column", i + 1},
                         {"row", b + 1},
                         {"assembled", F.format(kv)},
                         {"closed_form", F.format(pv[b])},
                         {"jets", F.format(jv[b])}});
            return c;
          }
        }
      }
    }
  }
  return c;
}

}  // namespace kzp
