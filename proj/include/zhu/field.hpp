/**
 * @file field.hpp
 *
 * Exact scalars over the rationals and over prime fields GF(p), p odd.
 *
 * Binomial coefficients with arbitrary integer upper argument are always
 * evaluated in unbounded integers and reduced afterwards; in characteristic p
 * the factorial in the denominator may vanish, so dividing inside the field
 * is never an option.
 */
#ifndef ZHU_FIELD_HPP
#define ZHU_FIELD_HPP

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

namespace zhu {

class Scalar;

/// Thrown for malformed field specifications or arithmetic outside the field.
class FieldError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Either Q (characteristic 0) or GF(p) for an odd prime p < 2^31.
class Field {
 public:
  Field() = default;

  static Field rationals() { return Field(); }
  static Field prime(std::uint64_t p);
  /// Accepts "Q" or "Fp:<prime>".
  static Field parse(std::string_view spec);

  std::uint64_t characteristic() const { return p_; }
  bool is_rational() const { return p_ == 0; }
  std::string to_string() const;

  Scalar zero() const;
  Scalar one() const;
  Scalar from_int(long long z) const;
  Scalar from_mpz(const mpz_class& z) const;
  Scalar from_mpq(const mpq_class& q) const;
  /// Parses "a", "-a", or "a/b"; in GF(p) the fraction is reduced mod p.
  Scalar parse_scalar(std::string_view text) const;

  friend bool operator==(const Field& a, const Field& b) { return a.p_ == b.p_; }
  friend bool operator!=(const Field& a, const Field& b) { return a.p_ != b.p_; }

 private:
  explicit Field(std::uint64_t p) : p_(p) {}
  std::uint64_t p_ = 0;
};

bool is_prime(std::uint64_t n);

/// An exact field element. Residues are kept canonical in [0, p-1];
/// rationals are kept in lowest terms by GMP.
class Scalar {
 public:
  Scalar() = default;

  Field field() const;
  bool is_zero() const { return p_ ? r_ == 0 : sgn(q_) == 0; }
  bool is_one() const { return p_ ? r_ == 1 : q_ == 1; }

  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  Scalar operator-() const;

  Scalar inverse() const;

  friend bool operator==(const Scalar& a, const Scalar& b);
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  /// "a/b" for rationals, the canonical residue for GF(p).
  std::string to_string() const;

  /// Only meaningful in GF(p).
  std::uint64_t residue() const { return r_; }
  /// Only meaningful over Q.
  const mpq_class& rational() const { return q_; }

 private:
  friend class Field;
  std::uint64_t p_ = 0;
  std::uint64_t r_ = 0;
  mpq_class q_;
};

std::ostream& operator<<(std::ostream& os, const Scalar& s);

/// m(m-1)...(m-i+1)/i! in unbounded integers; i >= 0, any integer m.
mpz_class int_binomial(long long m, long long i);

/// Canonical image of z in F.
Scalar reduce(const mpz_class& z, const Field& f);

/// int_binomial(m, i) reduced into F. Small arguments are served from a cache.
Scalar binomial_in_field(long long m, long long i, const Field& f);

}  // namespace zhu

#endif  // ZHU_FIELD_HPP
