/**
 * @file verma.hpp
 *
 * Verma-type modules induced from an A_n(V)-module U placed at level n.
 *
 * The Lie algebra used is the span of the generator modes g(m) and 1(-1)
 * inside V^. Its degree-0 part acts on U through g(deg g - 1) -> [g], modes
 * of degree < -n kill U, and the rest act freely. A basis of each level is
 * given by PBW monomials
 *
 *     g1(m1) ... gr(mr) u,   factors sorted by degree descending,
 *
 * so creation modes stand to the left of the degree -1..-n modes. Monomials
 * whose right-hand (negative) part drops below level 0 span a graded
 * submodule meeting U trivially; it is factored out from the start, which
 * changes nothing for n = 0 and makes every level finite for n >= 1.
 * Modes of composite states act through the iterate formula.
 */
#ifndef ZHU_VERMA_HPP
#define ZHU_VERMA_HPP

#include "zhu/an_algebra.hpp"
#include "zhu/mode_liealg.hpp"
#include "zhu/module.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

namespace zhu {

/// An A_n(V)-module: matrices for (some of) the window representatives,
/// keyed by representative label.
struct AnModule {
  Field field;
  std::size_t dim = 0;
  std::map<std::string, Matrix> action;

  /// o(rep) on level k of M, for every representative of A.
  static AnModule from_level(const GradedModule& m, int k, const AnWindow& a);
  /// Action of a class given in representative coordinates; throws DataError
  /// when a needed representative has no matrix.
  Matrix of_class(const AnWindow& a, const SparseVec& cls) const;
  /// Violations of action([1]) = 1 and action(x * y) = action(x) action(y)
  /// over the stored products whose factors and result all have matrices.
  std::vector<std::string> check(const AnWindow& a) const;
};

/// One basis element of the generator-mode Lie algebra: g(deg g - 1 - d).
struct GenMode {
  int g = 0;
  long d = 0;  // degree
  friend auto operator<=>(const GenMode&, const GenMode&) = default;
};

/// [x, y] as (mode, coefficient) pairs plus the coefficient of 1(-1).
struct GenBracket {
  std::vector<std::pair<GenMode, Scalar>> modes;
  Scalar central;
};

/// The induced module (with the sub-zero part factored out), levels built
/// lazily up to a cap. Not copyable; internally synchronized.
class InducedModule : public GradedModule {
 public:
  /// levels: the reported range 0..levels; fidelity G bounds the degree of
  /// states whose modes are used. Levels up to levels + G are built on demand.
  InducedModule(const Voa& v, const AnModule& u, int n, int levels, int fidelity);

  const Voa& voa() const override { return v_; }
  int top_level() const override { return cap_; }
  std::size_t level_dim(int k) const override;
  SparseVec act(const State& a, long m, int k, std::size_t i) const override;

  int n() const { return n_; }
  int levels() const { return levels_; }
  int fidelity() const { return G_; }
  const AnModule& u_module() const { return u_; }
  std::string basis_label(int k, std::size_t i) const;
  /// Index of 1 (x) u_j in level n.
  std::size_t u_index(std::size_t j) const;

  /// Matrix of the mode m of a basis monomial of V, level k -> target.
  Matrix monomial_matrix(const Monomial& a, long m, int k) const;
  Matrix generator_matrix(int g, long m, int k) const;
  /// a_m applied to a vector of level k (a homogeneous).
  SparseVec apply(const State& a, long m, int k, const SparseVec& x) const;
  /// Throws DataError when the bracket leaves the span of generator modes.
  const GenBracket& bracket(const GenMode& x, const GenMode& y) const;

 private:
  using Word = std::vector<GenMode>;
  using Key = std::pair<Word, std::size_t>;
  using Vec = std::map<Key, Scalar>;
  struct Level {
    std::vector<Key> basis;
    std::map<Key, std::size_t> index;
  };

  bool before(const GenMode& x, const GenMode& y) const;
  long neg_total(const Word& w) const;
  const Level& level(int k) const;
  Vec apply_mode(const GenMode& y, const Key& key) const;
  void add_apply(Vec& out, const Scalar& c, const GenMode& y, const Vec& x) const;
  std::string mode_label(const GenMode& x) const;

  Voa v_;
  AnModule u_;
  int n_, levels_, G_, cap_;
  LoopAlgebra loop_;
  std::vector<Matrix> zero_modes_;  // per generator, on U
  mutable std::recursive_mutex mu_;
  mutable std::map<int, Level> levels_built_;
  mutable std::map<std::pair<GenMode, GenMode>, GenBracket> brackets_;
  mutable std::map<std::tuple<int, long, Key>, Vec> apply_memo_;
  mutable std::map<std::tuple<Monomial, long, int>, Matrix> matrices_;
};

/// Per-level subspaces of an induced module (in its level coordinates).
struct LevelSubspaces {
  std::vector<Subspace> levels;
  std::vector<std::size_t> dims() const;
};

/// Coefficients of the associativity relation at level k:
///   (a_p b)_q u - sum_i (-1)^i binom(p, i) (a_{p-i} b_{q+i} u - (-1)^p b_{p+q-i} a_i u)
/// for a, b in the V-basis of degree <= G and u in a basis of U. With a
/// window, level n also gets o(a) u - [a].u for every basis a that fits it
/// and whose class U has matrices for.
Subspace w_relations(const InducedModule& m, int k, int G, const AnWindow* window = nullptr);

/// U(V^) W on levels 0..m.levels(): relations at each level, closed under
/// the generator modes that stay within that range.
LevelSubspaces w_closure(const InducedModule& m, int G, const AnWindow* window = nullptr);

/// Largest family J(k) containing `rel` with J(n) = rel(n) and closed under
/// generator modes within levels 0..max(levels, n): the radical of the
/// quotient by `rel`.
LevelSubspaces radical_J(const InducedModule& m, const LevelSubspaces& rel);

/// Omega_n of the quotient by `rel`: per level, the preimage of
/// {w : a_i w = 0 for a in the V-basis with deg a <= G, i >= deg a + n}.
LevelSubspaces omega_n(const InducedModule& m, const LevelSubspaces& rel, int n, int G);

struct VermaLevels {
  std::string tag;  // "barM", "M" or "L"
  std::vector<std::size_t> dims;
};

/// M / J; throws std::logic_error if J meets the copy of U at level n.
VermaLevels ln_quotient(const InducedModule& m, const LevelSubspaces& J);

/// One factor o_p(a) = a(deg a - 1 - p) of a level-n monomial.
struct PairingFactor {
  long p = 0;
  State a;
};

/// <u', o_{p1}(a1) ... o_{ps}(as) u>, collapsing the two leftmost factors
/// with the *_{m, m+p2}^{m+p1+p2} product, m = n + p3 + ... + ps being the
/// level they act on and m + p2 the level in between, until one degree-0
/// factor o_0(c) remains, which acts on u through [c]. A negative level on
/// the way gives 0.
class PairingState {
 public:
  PairingState(const AnWindow& a, const AnModule& u);
  Scalar pair(const std::vector<Scalar>& functional, const std::vector<PairingFactor>& mono, std::size_t u) const;

 private:
  const AnWindow& a_;
  const AnModule& u_;
  mutable std::mutex mu_;
  mutable std::map<std::string, Matrix> memo_;
};

}  // namespace zhu

#endif  // ZHU_VERMA_HPP
