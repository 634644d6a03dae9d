#include "kzp/multipoly.hpp"

#include <algorithm>
#include <unordered_map>

namespace kzp {

namespace {
constexpr int shift_of(int i) { return 8 * (kMaxVars - 1 - i); }
constexpr MonoKey kDegUnit = MonoKey(1) << 56;
}  // namespace

MonoKey mono_key(const std::vector<int>& e) {
  if (int(e.size()) > kMaxVars) fail(ErrorKind::DegreeGuard, "too many variables");
  MonoKey k = 0;
  int d = 0;
  for (size_t i = 0; i < e.size(); ++i) {
    if (e[i] < 0 || e[i] > 255) fail(ErrorKind::DegreeGuard, "exponent outside [0,255]");
    k |= MonoKey(e[i]) << shift_of(int(i));
    d += e[i];
  }
  if (d > 255) fail(ErrorKind::DegreeGuard, "total degree above 255");
  return k | (MonoKey(d) << 56);
}

std::vector<int> mono_exps(MonoKey k, int n) {
  std::vector<int> e(n);
  for (int i = 0; i < n; ++i) e[i] = mono_exp(k, i);
  return e;
}

MonoKey mono_times_var(MonoKey k, int i) {
  if (mono_exp(k, i) == 255 || mono_degree(k) == 255) fail(ErrorKind::DegreeGuard, "exponent overflow");
  return k + (MonoKey(1) << shift_of(i)) + kDegUnit;
}

ZPolynomial::ZPolynomial(FieldRef f, int n) : f_(std::move(f)), n_(n) {
  if (n < 0 || n > kMaxVars) fail(ErrorKind::DegreeGuard, "variable count must be in [0,7]");
}

ZPolynomial ZPolynomial::constant(FieldRef f, int n, Elt c) {
  ZPolynomial z(std::move(f), n);
  if (c) z.t_.emplace_back(0, c);
  return z;
}

ZPolynomial ZPolynomial::variable(FieldRef f, int n, int i) {
  ZPolynomial z(std::move(f), n);
  if (i < 0 || i >= n) fail(ErrorKind::IndexOutOfRange, "variable index out of range");
  z.t_.emplace_back(mono_times_var(0, i), 1);
  return z;
}

ZPolynomial ZPolynomial::from_terms(FieldRef f, int n, std::vector<Term> terms) {
  ZPolynomial z(std::move(f), n);
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
  const auto& F = *z.f_;
  for (auto& [k, c] : terms) {
    if (!z.t_.empty() && z.t_.back().first == k)
      z.t_.back().second = F.add(z.t_.back().second, c);
    else
      z.t_.emplace_back(k, c);
    if (z.t_.back().second == 0) z.t_.pop_back();
  }
  return z;
}

Elt ZPolynomial::coeff(const std::vector<int>& e) const {
  MonoKey k = mono_key(e);
  auto it = std::lower_bound(t_.begin(), t_.end(), k, [](const Term& a, MonoKey b) { return a.first < b; });
  return it != t_.end() && it->first == k ? it->second : 0;
}

void ZPolynomial::check_compatible(const ZPolynomial& o) const {
  if (f_ != o.f_) fail(ErrorKind::FieldMismatch, "polynomials over different fields");
  if (n_ != o.n_) fail(ErrorKind::LengthMismatch, "polynomials in different variable counts");
}

ZPolynomial ZPolynomial::axpy(Elt s, const ZPolynomial& o) const {
  check_compatible(o);
  const auto& F = *f_;
  ZPolynomial r(f_, n_);
  if (s == 0) {
    r.t_ = t_;
    return r;
  }
  r.t_.reserve(t_.size() + o.t_.size());
  size_t i = 0, j = 0;
  while (i < t_.size() || j < o.t_.size()) {
    if (j == o.t_.size() || (i < t_.size() && t_[i].first < o.t_[j].first)) {
      r.t_.push_back(t_[i++]);
    } else if (i == t_.size() || o.t_[j].first < t_[i].first) {
      r.t_.emplace_back(o.t_[j].first, F.mul(s, o.t_[j].second));
      ++j;
    } else {
      Elt c = F.add(t_[i].second, F.mul(s, o.t_[j].second));
      if (c) r.t_.emplace_back(t_[i].first, c);
      ++i;
      ++j;
    }
  }
  return r;
}

ZPolynomial ZPolynomial::operator+(const ZPolynomial& o) const { return axpy(1, o); }
ZPolynomial ZPolynomial::operator-(const ZPolynomial& o) const { return axpy(f_->neg(1), o); }
ZPolynomial ZPolynomial::operator-() const { return scale(f_->neg(1)); }

ZPolynomial ZPolynomial::scale(Elt s) const {
  ZPolynomial r(f_, n_);
  if (s == 0) return r;
  r.t_.reserve(t_.size());
  for (auto& [k, c] : t_) r.t_.emplace_back(k, f_->mul(c, s));
  return r;
}

ZPolynomial ZPolynomial::times_var(int i) const {
  if (i < 0 || i >= n_) fail(ErrorKind::IndexOutOfRange, "variable index out of range");
  ZPolynomial r(f_, n_);
  r.t_.reserve(t_.size());
  // Adding a fixed exponent vector preserves graded-lex order.
  for (auto& [k, c] : t_) r.t_.emplace_back(mono_times_var(k, i), c);
  return r;
}

ZPolynomial ZPolynomial::operator*(const ZPolynomial& o) const {
  check_compatible(o);
  ZPolynomial r(f_, n_);
  if (is_zero() || o.is_zero()) return r;
  const auto& F = *f_;
  const ZPolynomial& a = t_.size() <= o.t_.size() ? *this : o;
  const ZPolynomial& b = t_.size() <= o.t_.size() ? o : *this;
  // Packed keys add without carries as long as every byte sum stays below 256.
  if (a.total_degree() + b.total_degree() > 255) fail(ErrorKind::DegreeGuard, "total degree above 255");
  std::unordered_map<MonoKey, Elt> acc;
  acc.reserve(a.size() * b.size() / 2 + 16);
  for (auto& [ka, ca] : a.t_) {
    for (auto& [kb, cb] : b.t_) {
      Elt& slot = acc[ka + kb];
      slot = F.add(slot, F.mul(ca, cb));
    }
  }
  std::vector<Term> terms;
  terms.reserve(acc.size());
  for (auto& [k, c] : acc)
    if (c) terms.emplace_back(k, c);
  std::sort(terms.begin(), terms.end(), [](const Term& x, const Term& y) { return x.first < y.first; });
  r.t_ = std::move(terms);
  return r;
}

ZPolynomial ZPolynomial::partial(int i) const {
  if (i < 0 || i >= n_) fail(ErrorKind::IndexOutOfRange, "variable index out of range");
  const auto& F = *f_;
  uint64_t p = F.characteristic();
  ZPolynomial r(f_, n_);
  const MonoKey dec = (MonoKey(1) << shift_of(i)) + kDegUnit;
  for (auto& [k, c] : t_) {
    int e = mono_exp(k, i);
    if (e % p == 0) continue;
    r.t_.emplace_back(k - dec, F.mul(c, F.from_int(e)));
  }
  return r;
}

Elt ZPolynomial::evaluate(const std::vector<Elt>& point, const Field& pf) const {
  if (int(point.size()) != n_) fail(ErrorKind::LengthMismatch, "point has wrong dimension");
  if (&pf != f_.get() && !(f_->is_prime_field() && f_->characteristic() == pf.characteristic()))
    fail(ErrorKind::FieldMismatch, "point field does not contain the coefficient field");
  int maxdeg = 0;
  for (int i = 0; i < n_; ++i) maxdeg = std::max(maxdeg, degree_in(i));
  std::vector<std::vector<Elt>> pw(n_, std::vector<Elt>(maxdeg + 1, 1));
  for (int i = 0; i < n_; ++i)
    for (int d = 1; d <= maxdeg; ++d) pw[i][d] = pf.mul(pw[i][d - 1], point[i]);
  Elt acc = 0;
  for (auto& [k, c] : t_) {
    Elt m = c;
    for (int i = 0; i < n_ && m; ++i) m = pf.mul(m, pw[i][mono_exp(k, i)]);
    acc = pf.add(acc, m);
  }
  return acc;
}

bool ZPolynomial::is_homogeneous(int d) const {
  for (auto& [k, c] : t_)
    if (mono_degree(k) != d) return false;
  return true;
}

int ZPolynomial::degree_in(int i) const {
  int d = is_zero() ? -1 : 0;
  for (auto& [k, c] : t_) d = std::max(d, mono_exp(k, i));
  return d;
}

nlohmann::json ZPolynomial::to_json() const {
  nlohmann::json terms = nlohmann::json::array();
  for (auto& [k, c] : t_) terms.push_back({{"c", f_->format(c)}, {"e", mono_exps(k, n_)}});
  return {{"n", n_}, {"terms", terms}};
}

ZPolynomial ZPolynomial::from_json(const nlohmann::json& j, FieldRef f) {
  int n = j.at("n").get<int>();
  std::vector<Term> terms;
  for (auto& t : j.at("terms")) {
    auto e = t.at("e").get<std::vector<int>>();
    if (int(e.size()) != n) fail(ErrorKind::LengthMismatch, "exponent vector length differs from n");
    terms.emplace_back(mono_key(e), parse_field_string(*f, t.at("c").get<std::string>()));
  }
  return from_terms(std::move(f), n, std::move(terms));
}

Elt parse_field_string(const Field& f, const std::string& s) {
  if (s.empty()) fail(ErrorKind::InvalidArgument, "empty field string");
  std::vector<uint64_t> digits(f.degree(), 0);
  size_t pos = 0;
  while (pos < s.size()) {
    size_t end = s.find('+', pos);
    if (end == std::string::npos) end = s.size();
    std::string term = s.substr(pos, end - pos);
    pos = end + 1;
    size_t tpos = term.find('t');
    uint64_t coef = 1;
    int power = 0;
    if (tpos == std::string::npos) {
      coef = std::stoull(term);
    } else {
      if (tpos > 0) coef = std::stoull(term.substr(0, tpos));
      power = 1;
      if (tpos + 1 < term.size()) {
        if (term[tpos + 1] != '^') fail(ErrorKind::InvalidArgument, "malformed field string: " + s);
        power = std::stoi(term.substr(tpos + 2));
      }
    }
    if (power >= f.degree()) fail(ErrorKind::InvalidArgument, "power exceeds field degree: " + s);
    digits[power] = (digits[power] + coef) % f.characteristic();
  }
  return f.from_digits(digits);
}

// ---- XSeries ----

XSeries::XSeries(FieldRef f, int n, std::vector<ZPolynomial> c, std::optional<size_t> precision)
    : f_(std::move(f)), n_(n), c_(std::move(c)), prec_(precision), zero_(f_, n_) {
  if (prec_ && c_.size() > *prec_) c_.resize(*prec_);
  trim();
}

void XSeries::trim() {
  if (prec_) return;
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

const ZPolynomial& XSeries::coeff(size_t i) const { return i < c_.size() ? c_[i] : zero_; }

XSeries XSeries::times_linear(int i) const {
  std::vector<ZPolynomial> out(c_.size() + 1, ZPolynomial(f_, n_));
  Elt m1 = f_->neg(1);
  for (size_t d = 0; d <= c_.size(); ++d) {
    ZPolynomial cur = d >= 1 ? c_[d - 1] : ZPolynomial(f_, n_);
    if (d < c_.size()) cur = cur.axpy(m1, c_[d].times_var(i));
    out[d] = std::move(cur);
  }
  return XSeries(f_, n_, std::move(out), prec_ ? std::optional<size_t>(*prec_) : std::nullopt);
}

XSeries XSeries::operator*(const XSeries& o) const {
  if (c_.empty() || o.c_.empty()) return XSeries(f_, n_);
  std::vector<ZPolynomial> out(c_.size() + o.c_.size() - 1, ZPolynomial(f_, n_));
  for (size_t i = 0; i < c_.size(); ++i)
    for (size_t j = 0; j < o.c_.size(); ++j) out[i + j] = out[i + j] + c_[i] * o.c_[j];
  std::optional<size_t> pr;
  if (prec_ || o.prec_) pr = std::min(prec_.value_or(SIZE_MAX), o.prec_.value_or(SIZE_MAX));
  return XSeries(f_, n_, std::move(out), pr);
}

XSeries XSeries::operator-() const {
  std::vector<ZPolynomial> out;
  for (auto& c : c_) out.push_back(-c);
  return XSeries(f_, n_, std::move(out), prec_);
}

bool XSeries::operator==(const XSeries& o) const {
  size_t m = std::max(c_.size(), o.c_.size());
  for (size_t i = 0; i < m; ++i)
    if (coeff(i) != o.coeff(i)) return false;
  return true;
}

XSeries XSeries::divide_linear(int i) const {
  if (prec_) fail(ErrorKind::InvalidArgument, "exact division of a truncated series");
  if (c_.empty()) return *this;
  // P = sum c_d x^d = (x - z) sum q_d x^d: q_{d-1} = c_d + z q_d, remainder c_0 + z q_0.
  std::vector<ZPolynomial> q(c_.size() - 1, ZPolynomial(f_, n_));
  ZPolynomial cur(f_, n_);
  for (size_t d = c_.size() - 1; d >= 1; --d) {
    cur = c_[d] + cur.times_var(i);
    q[d - 1] = cur;
  }
  ZPolynomial rem = c_[0] + (q.empty() ? ZPolynomial(f_, n_) : q[0].times_var(i));
  if (!rem.is_zero()) fail(ErrorKind::InvalidArgument, "division by (x - z_i) is not exact");
  return XSeries(f_, n_, std::move(q));
}

XSeries XSeries::derivative(int k) const {
  std::vector<ZPolynomial> out;
  const auto& F = *f_;
  for (size_t d = size_t(k); d < c_.size(); ++d) {
    Elt ff = 1;
    for (int s = 0; s < k; ++s) ff = F.mul(ff, F.from_int(int64_t((d - s) % F.characteristic())));
    out.push_back(c_[d].scale(ff));
  }
  std::optional<size_t> pr;
  if (prec_) pr = *prec_ > size_t(k) ? *prec_ - k : 0;
  return XSeries(f_, n_, std::move(out), pr);
}

XSeries master_power(FieldRef f, int n, int ht) {
  if (ht < 0) fail(ErrorKind::InvalidArgument, "negative exponent");
  if (int64_t(n) * ht > kMaxMasterDegree) fail(ErrorKind::DegreeGuard, "n*h~ exceeds the x-degree guard");
  XSeries s(f, n, {ZPolynomial::constant(f, n, 1)});
  for (int e = 0; e < ht; ++e)
    for (int i = 0; i < n; ++i) s = s.times_linear(i);
  return s;
}

// ---- Jets ----

Jet Jet::constant(FieldRef f, size_t precision, Elt c) {
  Jet j(std::move(f), precision);
  if (precision) j.c_[0] = c;
  return j;
}

Jet Jet::operator+(const Jet& o) const {
  size_t n = std::min(c_.size(), o.c_.size());
  Jet r(f_, n);
  for (size_t i = 0; i < n; ++i) r.c_[i] = f_->add(c_[i], o.c_[i]);
  return r;
}

Jet Jet::operator*(const Jet& o) const {
  size_t n = std::min(c_.size(), o.c_.size());
  Jet r(f_, n);
  for (size_t i = 0; i < n; ++i) {
    if (!c_[i]) continue;
    for (size_t j = 0; i + j < n; ++j) r.c_[i + j] = f_->add(r.c_[i + j], f_->mul(c_[i], o.c_[j]));
  }
  return r;
}

Jet Jet::derivative() const {
  size_t n = c_.size();
  uint64_t p = f_->characteristic();
  size_t out = (n % p == 0) ? n : (n ? n - 1 : 0);
  Jet r(f_, out);
  for (size_t i = 0; i < out; ++i) r.c_[i] = i + 1 < n ? f_->mul(c_[i + 1], f_->from_int(int64_t((i + 1) % p))) : 0;
  return r;
}

std::vector<Jet> jet_compose(std::vector<Jet> series, const JetOperator& op, int iterations) {
  if (series.size() != op.dim || op.matrix.size() != op.dim * op.dim)
    fail(ErrorKind::LengthMismatch, "operator and series dimensions differ");
  for (auto& s : series)
    if (s.precision() < size_t(iterations)) fail(ErrorKind::PrecisionExceeded, "precision below iteration count");
  for (int it = 0; it < iterations; ++it) {
    std::vector<Jet> next;
    next.reserve(op.dim);
    for (size_t i = 0; i < op.dim; ++i) {
      Jet acc = series[i].derivative();
      for (size_t j = 0; j < op.dim; ++j) acc = acc + op.matrix[i * op.dim + j] * series[j];
      next.push_back(std::move(acc));
    }
    series = std::move(next);
  }
  return series;
}

}  // namespace kzp
