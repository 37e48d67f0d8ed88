/**
 * @file mode_liealg.hpp
 *
 * The Lie algebra V^ = F[t, 1/t] (x) V / D L(V) spanned by modes a(m), with
 *
 *     [a(p), b(q)] = sum_{i >= 0} binom(p, i) (a_i b)(p + q - i),
 *
 * graded by deg a(m) = deg a - m - 1. Elements are kept in a canonical form:
 * for each degree q the relations D^(i)(t^m (x) a) = sum_j binom(m, j)
 * (D^(i-j) a)(m - j) whose terms all have base degree <= G are row reduced
 * with pivots on the highest base degrees, and every combination is reduced
 * against them. 1(m) = 0 for m != -1.
 */
#ifndef ZHU_MODE_LIEALG_HPP
#define ZHU_MODE_LIEALG_HPP

#include "zhu/an_algebra.hpp"
#include "zhu/voa.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

namespace zhu {

/// a(m) for a homogeneous base a.
struct LoopMode {
  State base;
  long m = 0;
};

/// Finite combination of basis modes (monomial, m).
class LoopCombo {
 public:
  using Key = std::pair<Monomial, long>;

  LoopCombo() = default;
  explicit LoopCombo(Field f) : field_(f) {}
  static LoopCombo of(const LoopMode& x);

  const Field& field() const { return field_; }
  const std::map<Key, Scalar>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  void add(const Monomial& base, long m, const Scalar& c);
  void axpy(const Scalar& c, const LoopCombo& o);

  friend LoopCombo operator+(LoopCombo a, const LoopCombo& b) {
    a.axpy(a.field_.one(), b);
    return a;
  }
  friend LoopCombo operator-(LoopCombo a, const LoopCombo& b) {
    a.axpy(-a.field_.one(), b);
    return a;
  }
  friend LoopCombo operator*(const Scalar& c, LoopCombo a) {
    LoopCombo out(a.field_);
    out.axpy(c, a);
    return out;
  }
  friend bool operator==(const LoopCombo& a, const LoopCombo& b) { return a.terms_ == b.terms_; }

 private:
  Field field_;
  std::map<Key, Scalar> terms_;
};

class LoopAlgebra {
 public:
  /// G: the base-degree bound for relations and results (<= v.dmax()).
  LoopAlgebra(Voa v, int fidelity);

  const Voa& voa() const { return v_; }
  int fidelity() const { return G_; }

  /// deg a - m - 1 of every term, or nullopt for 0 / mixed degrees.
  std::optional<long> degree(const LoopCombo& x) const;
  /// Canonical representative modulo D L(V).
  LoopCombo reduce(const LoopCombo& x) const;
  /// Canonical bracket; asserts deg [x, y] = deg x + deg y.
  LoopCombo bracket(const LoopCombo& x, const LoopCombo& y) const;
  LoopCombo bracket(const LoopMode& x, const LoopMode& y) const { return bracket(LoopCombo::of(x), LoopCombo::of(y)); }

  /// {a(deg a - 1 - q) : a in the V-basis, deg a <= G}.
  std::vector<LoopMode> component(long q, int G) const;

  /// Image of a degree-0 element in the A_n window: a(deg a - 1) -> [a].
  SparseVec to_an_lie(const LoopCombo& x, const AnWindow& a) const;

  std::string label(const LoopCombo& x) const;

 private:
  struct Relations {
    WindowCoords coords;
    Subspace span;
  };
  const Relations& relations(long q) const;

  Voa v_;
  int G_;
  mutable std::mutex mu_;
  mutable std::map<long, std::unique_ptr<Relations>> rel_;
};

}  // namespace zhu

#endif  // ZHU_MODE_LIEALG_HPP
