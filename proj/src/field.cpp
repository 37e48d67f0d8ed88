#include "zhu/field.hpp"

#include <charconv>
#include <map>
#include <mutex>
#include <ostream>
#include <tuple>

namespace zhu {

namespace {

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  b %= p;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

std::uint64_t mod_of(const mpz_class& z, std::uint64_t p) {
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), z.get_mpz_t(), p);
  return r.get_ui();
}

void check_same(std::uint64_t a, std::uint64_t b) {
  if (a != b) throw FieldError("scalars from different fields combined");
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Field Field::prime(std::uint64_t p) {
  if (p == 2) throw FieldError("characteristic 2 is not supported");
  if (!is_prime(p)) throw FieldError("Fp modulus " + std::to_string(p) + " is not prime");
  if (p >= (1ULL << 31)) throw FieldError("Fp modulus must be below 2^31");
  return Field(p);
}

Field Field::parse(std::string_view spec) {
  if (spec == "Q") return rationals();
  if (spec.substr(0, 3) == "Fp:") {
    auto digits = spec.substr(3);
    std::uint64_t p = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), p);
    if (ec != std::errc() || ptr != digits.data() + digits.size())
      throw FieldError("bad field spec '" + std::string(spec) + "'");
    return prime(p);
  }
  throw FieldError("bad field spec '" + std::string(spec) + "' (expected Q or Fp:<prime>)");
}

std::string Field::to_string() const { return p_ ? "Fp:" + std::to_string(p_) : "Q"; }

Scalar Field::zero() const {
  Scalar s;
  s.p_ = p_;
  return s;
}

Scalar Field::one() const { return from_int(1); }

Scalar Field::from_int(long long z) const {
  Scalar s;
  s.p_ = p_;
  if (p_) {
    long long r = z % static_cast<long long>(p_);
    if (r < 0) r += static_cast<long long>(p_);
    s.r_ = static_cast<std::uint64_t>(r);
  } else {
    s.q_ = mpz_class(static_cast<long>(z));
  }
  return s;
}

Scalar Field::from_mpz(const mpz_class& z) const {
  Scalar s;
  s.p_ = p_;
  if (p_)
    s.r_ = mod_of(z, p_);
  else
    s.q_ = z;
  return s;
}

Scalar Field::from_mpq(const mpq_class& q) const {
  if (!p_) {
    Scalar s;
    s.q_ = q;
    return s;
  }
  return from_mpz(q.get_num()) / from_mpz(q.get_den());
}

Scalar Field::parse_scalar(std::string_view text) const {
  std::string t(text);
  mpq_class q;
  if (q.set_str(t, 10) != 0) throw FieldError("bad scalar '" + t + "'");
  if (q.get_den() == 0) throw FieldError("zero denominator in '" + t + "'");
  q.canonicalize();
  return from_mpq(q);
}

Field Scalar::field() const { return p_ ? Field::prime(p_) : Field::rationals(); }

Scalar& Scalar::operator+=(const Scalar& o) {
  check_same(p_, o.p_);
  if (p_) {
    r_ += o.r_;
    if (r_ >= p_) r_ -= p_;
  } else {
    q_ += o.q_;
  }
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  check_same(p_, o.p_);
  if (p_)
    r_ = r_ >= o.r_ ? r_ - o.r_ : r_ + p_ - o.r_;
  else
    q_ -= o.q_;
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  check_same(p_, o.p_);
  if (p_)
    r_ = r_ * o.r_ % p_;
  else
    q_ *= o.q_;
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) { return *this *= o.inverse(); }

Scalar Scalar::operator-() const {
  Scalar s = *this;
  if (p_)
    s.r_ = r_ ? p_ - r_ : 0;
  else
    s.q_ = -q_;
  return s;
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw FieldError("division by zero");
  Scalar s = *this;
  if (p_)
    s.r_ = pow_mod(r_, p_ - 2, p_);
  else
    s.q_ = 1 / q_;
  return s;
}

bool operator==(const Scalar& a, const Scalar& b) {
  if (a.p_ != b.p_) return false;
  return a.p_ ? a.r_ == b.r_ : a.q_ == b.q_;
}

std::string Scalar::to_string() const {
  if (p_) return std::to_string(r_);
  return q_.get_str();
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.to_string(); }

mpz_class int_binomial(long long m, long long i) {
  if (i < 0) return 0;
  mpz_class num = 1;
  for (long long k = 0; k < i; ++k) num *= mpz_class(static_cast<long>(m - k));
  mpz_class den;
  mpz_fac_ui(den.get_mpz_t(), static_cast<unsigned long>(i));
  mpz_class out;
  mpz_divexact(out.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return out;
}

Scalar reduce(const mpz_class& z, const Field& f) { return f.from_mpz(z); }

Scalar binomial_in_field(long long m, long long i, const Field& f) {
  if (i < 0) return f.zero();
  if (i == 0) return f.one();
  if (m >= 0 && i > m) return f.zero();
  constexpr long long kCacheBound = 256;
  if (m < -kCacheBound || m > kCacheBound || i > kCacheBound)
    return reduce(int_binomial(m, i), f);

  using Key = std::tuple<std::uint64_t, long long, long long>;
  static std::mutex mu;
  static std::map<Key, Scalar> cache;
  Key key{f.characteristic(), m, i};
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  Scalar value = reduce(int_binomial(m, i), f);
  std::lock_guard lock(mu);
  cache.emplace(key, value);
  return value;
}

}  // namespace zhu
