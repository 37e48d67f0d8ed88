#ifndef ZHU_SEMISIMPLE_HPP
#define ZHU_SEMISIMPLE_HPP

#include "zhu/an_algebra.hpp"
#include "zhu/graded_space.hpp"

#include <optional>
#include <string>
#include <vector>

namespace zhu {

class WindowNotClosed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A finite-dimensional associative algebra given by structure constants.
struct Algebra {
  Field field;
  std::size_t dim = 0;
  /// mul[i][j] = e_i e_j.
  std::vector<std::vector<SparseVec>> mul;

  SparseVec multiply(const SparseVec& x, const SparseVec& y) const;
  /// Matrix of y -> x y.
  Matrix left(const SparseVec& x) const;
  bool commutative() const;
};

/// The stored products of a window; throws WindowNotClosed unless every pair
/// of representatives has one.
Algebra algebra_from_window(const AnWindow& w);

struct SemisimpleReport {
  std::size_t dim = 0;
  std::size_t radical_dim = 0;
  /// "trace-form", "frobenius" or "unsupported".
  std::string radical_method;
  /// Dimensions of the simple blocks of A / rad A; an unsplit remainder is
  /// reported as one entry and raises field_too_small.
  std::vector<std::size_t> blocks;
  bool field_too_small = false;
  bool semisimple() const { return radical_dim == 0 && radical_method != "unsupported"; }
};

SemisimpleReport semisimple_analyze(const Algebra& a);

/// Monic characteristic polynomial, coefficients from x^0 upward.
std::vector<Scalar> characteristic_polynomial(const Matrix& m);

/// Roots in the base field, with multiplicity ignored. nullopt when the
/// search is not supported (GF(p) with p beyond the brute-force range, or
/// rational coefficients too large to factor).
std::optional<std::vector<Scalar>> field_roots(const std::vector<Scalar>& poly, const Field& f);

}  // namespace zhu

#endif  // ZHU_SEMISIMPLE_HPP
