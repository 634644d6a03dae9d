#include "kzp/kz_core.hpp"

#include "kzp/upoly.hpp"

namespace kzp {

std::string to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::NotApplicable: return "not-applicable";
    case Status::Error: return "error";
  }
  return "error";
}

nlohmann::json Certificate::to_json() const {
  nlohmann::json j = {{"check", check}, {"params", params}, {"status", to_string(status)},
                      {"witness", witness}, {"detail", detail}, {"seed", seed}};
  if (timing_ms) j["timing_ms"] = *timing_ms;
  return j;
}

KZContext KZContext::make(int n, FieldRef field, Elt h) {
  if (n < 2) fail(ErrorKind::InvalidArgument, "n must be at least 2");
  if (!field->valid(h)) fail(ErrorKind::InvalidArgument, "h is not an element of the field");
  KZContext c;
  c.n = n;
  c.field = std::move(field);
  c.h = h;
  uint64_t p = c.field->characteristic();
  c.p_divides_n = uint64_t(n) % p == 0;
  if (c.field->in_prime_subfield(h) && h != 0) {
    c.ht = int(h);
    c.dplus = int(uint64_t(n) * h / p);
    c.dminus = int(uint64_t(n) * (p - h) / p);
  }
  return c;
}

void KZContext::require_p_coprime_n() const {
  if (p_divides_n) fail(ErrorKind::PDividesN, "operation requires p not dividing n");
}

void KZContext::require_rational_nonzero_h() const {
  if (!ht) fail(ErrorKind::RationalH, "operation requires h in F_p \\ {0}");
}

FieldRef poly_field_for(const KZContext& ctx) {
  return ctx.field->in_prime_subfield(ctx.h) ? ctx.prime_field() : ctx.field;
}

nlohmann::json context_params(const KZContext& ctx) {
  nlohmann::json j = {{"n", ctx.n},
                      {"p", ctx.p()},
                      {"ext_degree", ctx.field->degree()},
                      {"h", ctx.field->format(ctx.h)},
                      {"dplus", ctx.dplus},
                      {"dminus", ctx.dminus}};
  j["h_tilde"] = ctx.ht ? nlohmann::json(*ctx.ht) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json poly_vector_json(const PolyVector& v) {
  nlohmann::json a = nlohmann::json::array();
  for (auto& c : v) a.push_back(c.to_json());
  return a;
}

bool EvalPoint::in_S() const {
  for (size_t i = 0; i < coords.size(); ++i)
    for (size_t j = i + 1; j < coords.size(); ++j)
      if (coords[i] == coords[j]) return false;
  return true;
}

bool EvalPoint::is_etale() const {
  UPoly P = UPoly::constant(field, 1);
  for (auto a : coords) P = P * UPoly(field, {field->neg(a), 1});
  UPoly d = P.derivative();
  if (d.degree() != int(coords.size()) - 1) return false;
  return gcd(d, d.derivative()).degree() == 0;
}

nlohmann::json EvalPoint::to_json() const {
  nlohmann::json a = nlohmann::json::array();
  for (auto c : coords) a.push_back(field->format(c));
  return a;
}

EvalPoint random_point(const FieldRef& f, int n, Rng& rng, bool etale) {
  if (f->order() < uint64_t(n)) fail(ErrorKind::PointNotInS, "field too small for a point of S");
  for (int attempt = 0; attempt < 100000; ++attempt) {
    EvalPoint a{f, std::vector<Elt>(n)};
    for (auto& c : a.coords) c = rng.below(f->order());
    if (!a.in_S()) continue;
    if (etale && !a.is_etale()) continue;
    return a;
  }
  fail(etale ? ErrorKind::NotEtale : ErrorKind::PointNotInS, "no suitable random point found");
}

FieldRef sample_field(const KZContext& ctx) {
  if (ctx.field->order() > uint64_t(ctx.n)) return ctx.field;
  if (!ctx.field->in_prime_subfield(ctx.h)) fail(ErrorKind::PointNotInS, "field too small for a point of S");
  int k = 1;
  uint64_t q = ctx.p();
  while (q <= uint64_t(ctx.n)) {
    q *= ctx.p();
    ++k;
  }
  return Field::extension(ctx.p(), std::max(k, ctx.field->degree()));
}

FMatrix omega(const FieldRef& f, int i, int j, int n) {
  if (i == j) fail(ErrorKind::IndexError, "omega needs i != j");
  if (i < 1 || j < 1 || i > n || j > n) fail(ErrorKind::IndexOutOfRange, "omega index out of range");
  FMatrix m(f, n, n);
  Elt m1 = f->neg(1);
  m(i - 1, i - 1) = m1;
  m(j - 1, j - 1) = m1;
  m(i - 1, j - 1) = 1;
  m(j - 1, i - 1) = 1;
  return m;
}

Elt shapovalov(const Field& f, const std::vector<Elt>& x, const std::vector<Elt>& y) {
  if (x.size() != y.size()) fail(ErrorKind::LengthMismatch, "vectors differ in length");
  Elt s = 0;
  for (size_t i = 0; i < x.size(); ++i) s = f.add(s, f.mul(x[i], y[i]));
  return s;
}

ZPolynomial shapovalov(const PolyVector& x, const PolyVector& y) {
  if (x.size() != y.size() || x.empty()) fail(ErrorKind::LengthMismatch, "vectors differ in length");
  ZPolynomial s(x[0].field(), x[0].nvars());
  for (size_t i = 0; i < x.size(); ++i) s = s + x[i] * y[i];
  return s;
}

namespace {

ZPolynomial linear_diff(const FieldRef& f, int n, int a, int b) {
  return ZPolynomial::variable(f, n, a) - ZPolynomial::variable(f, n, b);
}

// C_kj = prod_{l != k, j} (z_k - z_l), 0-based.
ZPolynomial cofactor(const FieldRef& f, int n, int k, int j) {
  ZPolynomial c = ZPolynomial::constant(f, n, 1);
  for (int l = 0; l < n; ++l)
    if (l != k && l != j) c = c * linear_diff(f, n, k, l);
  return c;
}

}  // namespace

ZPolynomial gaudin_denominator(const FieldRef& f, int n, int k) {
  ZPolynomial c = ZPolynomial::constant(f, n, 1);
  for (int l = 0; l < n; ++l)
    if (l != k - 1) c = c * linear_diff(f, n, k - 1, l);
  return c;
}

GaudinMatrix gaudin(const FieldRef& f, int n, int k) {
  if (k < 1 || k > n) fail(ErrorKind::IndexOutOfRange, "Gaudin index out of range");
  GaudinMatrix g;
  g.k = k;
  g.numerator.assign(size_t(n) * n, ZPolynomial(f, n));
  g.denominator = gaudin_denominator(f, n, k);
  int kk = k - 1;
  for (int j = 0; j < n; ++j) {
    if (j == kk) continue;
    ZPolynomial c = cofactor(f, n, kk, j);
    g.numerator[kk * n + kk] = g.numerator[kk * n + kk] - c;
    g.numerator[j * n + j] = g.numerator[j * n + j] - c;
    g.numerator[kk * n + j] = g.numerator[kk * n + j] + c;
    g.numerator[j * n + kk] = g.numerator[j * n + kk] + c;
  }
  return g;
}

FMatrix gaudin_at(int n, int k, const EvalPoint& a) {
  const auto& F = *a.field;
  FMatrix m(a.field, n, n);
  int kk = k - 1;
  for (int j = 0; j < n; ++j) {
    if (j == kk) continue;
    Elt d = F.sub(a.coords[kk], a.coords[j]);
    if (!d) fail(ErrorKind::PointNotInS, "coincident coordinates");
    Elt w = F.inv(d);
    m(kk, kk) = F.sub(m(kk, kk), w);
    m(j, j) = F.sub(m(j, j), w);
    m(kk, j) = F.add(m(kk, j), w);
    m(j, kk) = F.add(m(j, kk), w);
  }
  return m;
}

PolyVector nabla_apply(const KZContext& ctx, int k, const PolyVector& I) {
  if (int(I.size()) != ctx.n) fail(ErrorKind::LengthMismatch, "vector length differs from n");
  if (k < 1 || k > ctx.n) fail(ErrorKind::IndexOutOfRange, "direction index out of range");
  const FieldRef& f = I[0].field();
  if (!(f == ctx.field || (f->is_prime_field() && ctx.field->in_prime_subfield(ctx.h) && f->characteristic() == ctx.p())))
    fail(ErrorKind::FieldMismatch, "polynomial field does not contain h");
  auto g = gaudin(f, ctx.n, k);
  PolyVector out;
  for (int t = 0; t < ctx.n; ++t) {
    ZPolynomial acc = g.denominator * I[t].partial(k - 1);
    ZPolynomial hv(f, ctx.n);
    for (int s = 0; s < ctx.n; ++s)
      if (!g.numerator[t * ctx.n + s].is_zero()) hv = hv + g.numerator[t * ctx.n + s] * I[s];
    out.push_back(acc.axpy(ctx.h, hv));
  }
  return out;
}

// Component j != k of nabla_apply(ctx, k, I) equals C_kj times
// (z_k - z_j) d_k I_j + h (I_k - I_j), with C_kj a nonzero polynomial, and
// component k equals D_k d_k(sum I) minus the sum of the others. So the
// pairwise identities plus the sum condition are equivalent to the full check,
// at linear rather than multiplicative cost in the size of I.
Certificate flatness_check(const KZContext& ctx, const PolyVector& I) {
  Certificate c = make_certificate("flatness");
  c.params = context_params(ctx);
  if (int(I.size()) != ctx.n) fail(ErrorKind::LengthMismatch, "vector length differs from n");
  const FieldRef& f = I[0].field();
  ZPolynomial sum(f, ctx.n);
  for (auto& x : I) sum = sum + x;
  if (!sum.is_zero()) {
    c.fail_with({{"reason", "component sum is nonzero"}, {"sum_leading_term", ZPolynomial::from_terms(f, ctx.n, {sum.terms().back()}).to_json()}});
    return c;
  }
  for (int k = 0; k < ctx.n; ++k) {
    for (int j = 0; j < ctx.n; ++j) {
      if (j == k) continue;
      ZPolynomial d = I[j].partial(k);
      ZPolynomial r = d.times_var(k) - d.times_var(j);
      r = r.axpy(ctx.h, I[k] - I[j]);
      if (!r.is_zero()) {
        c.fail_with({{"k", k + 1},
                     {"component", j + 1},
                     {"residual_term", ZPolynomial::from_terms(f, ctx.n, {r.terms().front()}).to_json()}});
        return c;
      }
    }
  }
  return c;
}

}  // namespace kzp
