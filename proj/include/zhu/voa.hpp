/**
 * @file voa.hpp
 *
 * Vertex operator algebras given by generators and the finitely many
 * nonnegative generator-pair products g_k h. Every mode a_m b is rebuilt from
 * that table:
 *
 *  - generator modes act on an ordered monomial by commuting to the right with
 *    [g_m, h_n] = sum_i binom(m, i) (g_i h)_{m+n-i} until they annihilate or
 *    find their slot;
 *  - modes of a composite state x_{-k} b are expanded with the iterate formula
 *    (u_p v)_q = sum_i (-1)^i binom(p, i) (u_{p-i} v_{q+i} - (-1)^p v_{p+q-i} u_i).
 *
 * States are combinations of monomials g_{-k1} ... g_{-kr} 1 with
 * k1 >= ... >= kr >= 1, ties ordered by generator label. A presentation may be
 * a quotient by a mode-closed ideal, kept degreewise up to the cutoff; results
 * are then reduced to the non-pivot representatives of the ideal.
 */
#ifndef ZHU_VOA_HPP
#define ZHU_VOA_HPP

#include "zhu/field.hpp"
#include "zhu/graded_space.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace zhu {

/// Result degree above the presentation's cutoff.
class CutoffExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inconsistent presentation data (grading violations, unknown labels, ...).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Generator {
  std::string label;
  int degree = 1;
};

/// (generator index, k) standing for g_{-k}, k >= 1.
using Factor = std::pair<int, int>;
using Monomial = std::vector<Factor>;

/// Exact linear combination of monomials.
class State {
 public:
  State() = default;
  explicit State(Field f) : field_(f) {}
  static State vacuum(Field f);
  static State of(Field f, Monomial m, Scalar c);
  static State of(Field f, Monomial m) { return of(f, std::move(m), f.one()); }

  const Field& field() const { return field_; }
  const std::map<Monomial, Scalar>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Scalar coeff(const Monomial& m) const;

  void add(const Monomial& m, const Scalar& c);
  void axpy(const Scalar& c, const State& other);

  State& operator+=(const State& o) {
    axpy(field_.one(), o);
    return *this;
  }
  State& operator-=(const State& o) {
    axpy(-field_.one(), o);
    return *this;
  }
  friend State operator+(State a, const State& b) { return a += b; }
  friend State operator-(State a, const State& b) { return a -= b; }
  friend State operator*(const Scalar& c, const State& a);
  friend bool operator==(const State& a, const State& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const State& a, const State& b) { return !(a == b); }

 private:
  Field field_;
  std::map<Monomial, Scalar> terms_;
};

/// Nonnegative products g_k h, keyed by (left generator, k, right generator).
using ProductTable = std::map<std::tuple<int, int, int>, State>;

class Engine;

/// A presentation together with its memoized mode engine.
class Voa {
 public:
  static constexpr int kDefaultDmax = 12;

  /// Generators are re-sorted by label; table keys and monomials in `omega`
  /// refer to positions in the given `gens` order and are remapped.
  /// An empty placeholder; only assignment is meaningful.
  Voa() = default;
  Voa(Field f, std::vector<Generator> gens, ProductTable table, State omega, Scalar central_charge,
      int dmax = kDefaultDmax);

  const Field& field() const { return field_; }
  const std::vector<Generator>& generators() const { return gens_; }
  std::optional<int> generator_index(const std::string& label) const;
  const ProductTable& table() const;
  const State& omega() const { return omega_; }
  const Scalar& central_charge() const { return c_; }
  int dmax() const { return dmax_; }
  bool is_quotient() const { return !ideal_.empty(); }
  /// Dimension of the ideal in each degree 0..dmax (empty when not a quotient).
  std::vector<std::size_t> ideal_dims() const;
  /// The relations this presentation was cut down by (empty when not a quotient).
  const std::vector<State>& relations() const { return relations_; }

  State vacuum() const { return State::vacuum(field_); }
  /// g_{-1} 1.
  State generator_state(int g) const;

  int degree(const Monomial& m) const;
  /// Degree of a nonzero homogeneous state; nullopt for 0 or mixed degrees.
  std::optional<int> degree(const State& s) const;
  std::map<int, State> components(const State& s) const;
  int max_degree(const State& s) const;

  std::string label(const Monomial& m) const;
  /// Parses a label produced by label().
  Monomial parse_label(const std::string& text) const;

  /// Every ordered monomial of degree d (ignores the ideal).
  std::vector<Monomial> free_monomials(int d) const;
  /// Representatives spanning V_d, sorted by label.
  const std::vector<Monomial>& basis(int d) const;
  /// Coordinates of V_{<= top} in (degree, label) order.
  GradedSpace coordinates(int top) const;
  SparseVec to_coords(const State& s, const GradedSpace& space) const;
  State from_coords(const SparseVec& v, const GradedSpace& space) const;

  /// a_k b. Throws CutoffExceeded when some component lands above dmax.
  State mode(const State& a, long k, const State& b) const;
  /// a_k b with no cutoff; components at or below dmax are reduced.
  State mode_free(const State& a, long k, const State& b) const;
  /// D^(i) a = a_{-i-1} 1.
  State divided_power(int i, const State& a) const;
  /// L(m) a = omega_{m+1} a.
  State virasoro(long m, const State& a) const;
  /// Normal form modulo the ideal in degrees <= dmax.
  State reduce(const State& s) const;

  /// Same engine, cut down by the mode-closed ideal generated by `relations`.
  Voa quotient(const std::vector<State>& relations) const;

  std::size_t memo_size() const;

 private:
  void build_bases();

  Field field_;
  std::vector<Generator> gens_;
  State omega_;
  Scalar c_;
  int dmax_ = kDefaultDmax;
  std::shared_ptr<Engine> engine_;
  // Quotient data, degreewise on free monomials.
  std::vector<GradedSpace> free_coords_;
  std::vector<Subspace> ideal_;
  std::vector<State> relations_;
  std::vector<std::vector<Monomial>> basis_;
};

Voa build_heisenberg(Field f, int dmax = Voa::kDefaultDmax);
Voa build_virasoro(Field f, Scalar c, int dmax = Voa::kDefaultDmax);

/// Per-degree span of all iterated generator modes applied to `seeds`,
/// truncated at `top`. Works on free monomials.
std::vector<Subspace> ideal_closure(const Voa& v, const std::vector<State>& seeds, int top);

/// Basis of {v in V_level : L(1)v = L(2)v = 0} modulo the ideal generated by
/// the singular vectors of lower levels.
std::vector<State> find_singular_vectors(const Voa& v, int level);

struct SkewReport {
  bool ok = true;
  /// (k, offending difference) pairs.
  std::vector<std::pair<long, State>> failures;
};

/// a_k b = sum_i (-1)^{k+1+i} D^(i)(b_{k+i} a) for every k with a_k b in
/// degrees [0, dmax].
SkewReport check_skew_symmetry(const Voa& v, const State& a, const State& b);

/// [a_s, b_t] p = sum_i binom(s, i) (a_i b)_{s+t-i} p.
bool check_commutator(const Voa& v, const State& a, const State& b, long s, long t,
                      const State& probe);

/// [L(m), L(n)] p = (m-n) L(m+n) p + binom(m+1, 3) (c/2) delta_{m+n,0} p.
bool check_virasoro_bracket(const Voa& v, long m, long n, const State& probe);

/// D^(i) D^(j) a = binom(i+j, i) D^(i+j) a.
bool check_divided_powers(const Voa& v, int i, int j, const State& a);

}  // namespace zhu

#endif  // ZHU_VOA_HPP
