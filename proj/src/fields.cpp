#include "kzp/fields.hpp"

#include <map>
#include <mutex>

#include "kzp/upoly.hpp"

namespace kzp {

std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::ZeroInverse: return "ZeroInverse";
    case ErrorKind::NotPrime: return "NotPrime";
    case ErrorKind::FieldMismatch: return "FieldMismatch";
    case ErrorKind::FieldTooLarge: return "FieldTooLarge";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::IndexError: return "IndexError";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::PrecisionExceeded: return "PrecisionExceeded";
    case ErrorKind::DegreeGuard: return "DegreeGuard";
    case ErrorKind::RationalH: return "RationalH";
    case ErrorKind::PointNotInS: return "PointNotInS";
    case ErrorKind::NotEtale: return "NotEtale";
    case ErrorKind::DegenerateCase: return "DegenerateCase";
    case ErrorKind::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorKind::LinkageError: return "LinkageError";
    case ErrorKind::PDividesN: return "PDividesN";
    case ErrorKind::NotApplicable: return "NotApplicable";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Config: return "Config";
  }
  return "Unknown";
}

bool is_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

namespace {

std::mutex registry_mutex;
std::map<std::pair<uint64_t, std::vector<uint64_t>>, FieldRef>& registry() {
  static std::map<std::pair<uint64_t, std::vector<uint64_t>>, FieldRef> r;
  return r;
}

std::vector<uint64_t> prime_factors(uint64_t n) {
  std::vector<uint64_t> out;
  for (uint64_t d = 2; d * d <= n; ++d) {
    if (n % d) continue;
    out.push_back(d);
    while (n % d == 0) n /= d;
  }
  if (n > 1) out.push_back(n);
  return out;
}

constexpr uint64_t kTableLimit = 1024;
constexpr uint64_t kLogLimit = uint64_t(1) << 20;

}  // namespace

FieldRef Field::prime(uint64_t p) { return with_modulus(p, {0, 1}); }

FieldRef Field::extension(uint64_t p, int k) {
  if (!is_prime(p)) fail(ErrorKind::NotPrime, std::to_string(p) + " is not prime");
  if (k < 1) fail(ErrorKind::InvalidArgument, "extension degree must be >= 1");
  if (k == 1) return prime(p);
  auto Fp = prime(p);
  // Enumerate (c_0, ..., c_{k-1}) lexicographically with c_0 most significant.
  uint64_t total = 1;
  for (int i = 0; i < k; ++i) {
    if (total > (uint64_t(1) << 62) / p) fail(ErrorKind::FieldTooLarge, "p^k exceeds 2^62");
    total *= p;
  }
  // Indices below p^(k-1) have c_0 = 0 and can never be irreducible.
  for (uint64_t idx = total / p; idx < total; ++idx) {
    std::vector<Elt> c(k + 1, 0);
    uint64_t v = idx;
    for (int i = k - 1; i >= 0; --i) {
      c[i] = v % p;
      v /= p;
    }
    c[k] = 1;
    UPoly f(Fp, c);
    if (is_irreducible(f)) return with_modulus(p, std::vector<uint64_t>(c.begin(), c.end()));
  }
  fail(ErrorKind::InvalidArgument, "no irreducible polynomial found");
}

FieldRef Field::with_modulus(uint64_t p, std::vector<uint64_t> modulus) {
  if (!is_prime(p)) fail(ErrorKind::NotPrime, std::to_string(p) + " is not prime");
  if (p >= (uint64_t(1) << 31)) fail(ErrorKind::FieldTooLarge, "characteristic must be below 2^31");
  if (modulus.size() < 2 || modulus.back() != 1)
    fail(ErrorKind::InvalidArgument, "modulus must be monic of degree >= 1");
  for (auto c : modulus)
    if (c >= p) fail(ErrorKind::InvalidArgument, "modulus coefficient out of range");
  std::lock_guard<std::mutex> lock(registry_mutex);
  auto key = std::make_pair(p, modulus);
  auto it = registry().find(key);
  if (it != registry().end()) return it->second;
  if (modulus.size() > 2) {
    // Irreducibility check runs over the prime field, which is interned separately.
    FieldRef Fp;
    auto pk = std::make_pair(p, std::vector<uint64_t>{0, 1});
    auto pit = registry().find(pk);
    if (pit == registry().end()) {
      Fp = FieldRef(new Field(p, {0, 1}));
      registry()[pk] = Fp;
    } else {
      Fp = pit->second;
    }
    if (!is_irreducible(UPoly(Fp, std::vector<Elt>(modulus.begin(), modulus.end()))))
      fail(ErrorKind::InvalidArgument, "modulus is reducible");
  }
  FieldRef f(new Field(p, modulus));
  registry()[key] = f;
  return f;
}

Field::Field(uint64_t p, std::vector<uint64_t> modulus) : p_(p), k_(int(modulus.size()) - 1), mod_(std::move(modulus)) {
  q_ = 1;
  for (int i = 0; i < k_; ++i) {
    if (q_ > (uint64_t(1) << 62) / p_) fail(ErrorKind::FieldTooLarge, "p^k exceeds 2^62");
    ppow_.push_back(q_);
    q_ *= p_;
  }
  barrett_ = ~uint64_t(0) / p_;
  if (k_ == 1) {
    mode_ = Mode::Prime;
    return;
  }
  mode_ = Mode::Slow;
  if (q_ <= kLogLimit) build_tables();
}

void Field::build_tables() {
  // Find a primitive element with slow arithmetic first.
  auto factors = prime_factors(q_ - 1);
  Elt g = 0;
  for (Elt cand = 2; cand < q_; ++cand) {
    bool ok = true;
    for (auto r : factors)
      if (pow(cand, (q_ - 1) / r) == 1) {
        ok = false;
        break;
      }
    if (ok) {
      g = cand;
      break;
    }
  }
  log_.assign(q_, 0);
  exp_.assign(q_ - 1, 0);
  Elt x = 1;
  for (uint64_t e = 0; e < q_ - 1; ++e) {
    exp_[e] = uint32_t(x);
    log_[x] = uint32_t(e);
    x = mul_slow(x, g);
  }
  // Zech logarithms: zech[d] = log(1 + g^d), or q-1 when 1 + g^d = 0.
  zech_.assign(q_ - 1, 0);
  for (uint64_t d = 0; d < q_ - 1; ++d) {
    Elt s = add_slow(1, exp_[d]);
    zech_[d] = s == 0 ? uint32_t(q_ - 1) : log_[s];
  }
  mode_ = Mode::Log;
  if (q_ <= kTableLimit) {
    add_tab_.resize(q_ * q_);
    mul_tab_.resize(q_ * q_);
    neg_tab_.resize(q_);
    inv_tab_.resize(q_);
    for (Elt a = 0; a < q_; ++a) {
      neg_tab_[a] = uint16_t(neg_slow(a));
      inv_tab_[a] = a == 0 ? 0 : uint16_t(exp_[(q_ - 1 - log_[a]) % (q_ - 1)]);
      for (Elt b = 0; b < q_; ++b) {
        add_tab_[a * q_ + b] = uint16_t(add_log(a, b));
        mul_tab_[a * q_ + b] = uint16_t(mul(a, b));
      }
    }
    mode_ = Mode::Table;
  }
}

Elt Field::from_int(int64_t v) const {
  int64_t r = v % int64_t(p_);
  if (r < 0) r += int64_t(p_);
  return Elt(r);
}

Elt Field::from_digits(const std::vector<uint64_t>& d) const {
  if (int(d.size()) > k_) fail(ErrorKind::InvalidArgument, "too many coefficients for field degree");
  Elt v = 0;
  for (size_t i = 0; i < d.size(); ++i) v += (d[i] % p_) * ppow_[i];
  return v;
}

std::vector<uint64_t> Field::digits(Elt a) const {
  std::vector<uint64_t> d(k_);
  for (int i = 0; i < k_; ++i) {
    d[i] = a % p_;
    a /= p_;
  }
  return d;
}

Elt Field::add_log(Elt a, Elt b) const {
  if (a == 0) return b;
  if (b == 0) return a;
  uint64_t la = log_[a], lb = log_[b];
  uint64_t d = lb >= la ? lb - la : lb + (q_ - 1) - la;
  uint32_t z = zech_[d];
  if (z == q_ - 1) return 0;
  uint64_t e = la + z;
  if (e >= q_ - 1) e -= q_ - 1;
  return exp_[e];
}

Elt Field::add_slow(Elt a, Elt b) const {
  if (mode_ == Mode::Log) return add_log(a, b);
  Elt r = 0;
  for (int i = 0; i < k_; ++i) {
    uint64_t s = a % p_ + b % p_;
    if (s >= p_) s -= p_;
    r += s * ppow_[i];
    a /= p_;
    b /= p_;
  }
  return r;
}

Elt Field::neg_slow(Elt a) const {
  Elt r = 0;
  for (int i = 0; i < k_; ++i) {
    uint64_t d = a % p_;
    r += (d == 0 ? 0 : p_ - d) * ppow_[i];
    a /= p_;
  }
  return r;
}

Elt Field::mul_slow(Elt a, Elt b) const {
  auto da = digits(a), db = digits(b);
  std::vector<uint64_t> r(2 * k_ - 1, 0);
  for (int i = 0; i < k_; ++i) {
    if (!da[i]) continue;
    for (int j = 0; j < k_; ++j) r[i + j] = (r[i + j] + da[i] * db[j]) % p_;
  }
  for (int i = 2 * k_ - 2; i >= k_; --i) {
    uint64_t c = r[i];
    if (!c) continue;
    for (int j = 0; j < k_; ++j) r[i - k_ + j] = (r[i - k_ + j] + (p_ - c) * mod_[j]) % p_;
    r[i] = 0;
  }
  Elt v = 0;
  for (int i = 0; i < k_; ++i) v += r[i] * ppow_[i];
  return v;
}

Elt Field::inv(Elt a) const {
  if (a == 0) fail(ErrorKind::ZeroInverse, "inverse of zero");
  if (mode_ == Mode::Table) return inv_tab_[a];
  if (mode_ == Mode::Log) return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
  return pow(a, q_ - 2);
}

Elt Field::pow(Elt a, uint64_t e) const {
  Elt r = 1, b = a;
  while (e) {
    if (e & 1) r = mode_ == Mode::Slow ? mul_slow(r, b) : mul(r, b);
    b = mode_ == Mode::Slow ? mul_slow(b, b) : mul(b, b);
    e >>= 1;
  }
  return r;
}

std::string Field::format(Elt a) const {
  if (k_ == 1) return std::to_string(a);
  auto d = digits(a);
  std::string out;
  for (int i = k_ - 1; i >= 0; --i) {
    if (!d[i]) continue;
    if (!out.empty()) out += "+";
    if (i == 0 || d[i] != 1) out += std::to_string(d[i]);
    if (i >= 1) out += "t";
    if (i >= 2) out += "^" + std::to_string(i);
  }
  return out.empty() ? "0" : out;
}

}  // namespace kzp
