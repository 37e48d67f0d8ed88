/**
 * @file an_algebra.hpp
 *
 * The products *_n and circle products of the higher Zhu algebras
 * A_n(V) = V / O_n(V), and degree-bounded models ("windows") of O_n(V) and
 * A_n(V).
 *
 * O_n(V) is spanned by L(-1)a + L(0)a and the circle products
 *
 *     a o^s_{n,t} b = Res_z Y(a,z) b (1+z)^{deg a + n + s} / z^{2n+2+t},
 *
 * none of which is homogeneous. A window of size D keeps only generators whose
 * every component has degree <= D, so it is a subspace of O_n(V) cut down to
 * V_{<=D} and the window quotient is an upper bound for the image of V_{<=D}.
 */
#ifndef ZHU_AN_ALGEBRA_HPP
#define ZHU_AN_ALGEBRA_HPP

#include "zhu/graded_space.hpp"
#include "zhu/module.hpp"
#include "zhu/voa.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace zhu {

struct CircleParams {
  int n = 0;
  int s = 0;
  int t = 0;
};

/// sum_{j >= 0} binom(E, j) a_{j-P} b, stopping where a_{j-P} b must vanish
/// for degree reasons (and at j = E when E >= 0).
State residue_product(const Voa& v, const State& a, const State& b, long E, long P);

/// a o^s_{n,t} b; requires s <= t. `a` may be inhomogeneous (summed over its
/// components, each with its own degree).
State circle_product(const Voa& v, const State& a, const State& b, const CircleParams& p);

/// L(-1)a + L(0)a.
State ell_generator(const Voa& v, const State& a);

/// a *_n b = sum_{m=0}^{n} (-1)^m binom(m+n, n) Res_z Y(a,z) b (1+z)^{deg a+n} / z^{n+m+1}.
State star_n(const Voa& v, const State& a, const State& b, int n);

/// u *^q_{m,p} v = sum_{i=0}^{p} (-1)^i binom(m+q-p+i, i)
///                 Res_z Y(u,z) v (1+z)^{deg u+m} / z^{m+q-p+i+1}.
State dj_product(const Voa& v, const State& u, const State& w, int m, int p, int q);

/// Coordinates on V_{<=top} ordered by degree descending, then label, so that
/// pivots of a reduced span sit on the highest degree and class
/// representatives are the low-degree monomials.
class WindowCoords {
 public:
  WindowCoords() = default;
  WindowCoords(const Voa& v, int top);

  int top() const { return top_; }
  std::size_t size() const { return monos_.size(); }
  const Monomial& monomial(std::size_t i) const { return monos_[i]; }
  int degree(std::size_t i) const { return degrees_[i]; }
  const std::string& label(std::size_t i) const { return labels_[i]; }
  bool fits(const Voa& v, const State& s) const;
  /// Throws CutoffExceeded when s has a component above top.
  SparseVec encode(const Voa& v, const State& s) const;
  State decode(const Field& f, const SparseVec& x) const;

 private:
  int top_ = 0;
  std::vector<Monomial> monos_;
  std::vector<int> degrees_;
  std::vector<std::string> labels_;
  std::map<Monomial, std::size_t> index_;
};

struct WindowOptions {
  /// Largest t; negative means "the window size".
  int tmax = -1;
  /// Smallest s swept. Values below 0 are a diagnostic extension.
  int smin = 0;
  std::size_t patience = 3;
};

struct WindowGenerator {
  enum class Kind { Ell, Circle };
  Kind kind = Kind::Ell;
  Monomial a;
  Monomial b;
  CircleParams p;
};

struct OnWindow {
  Voa voa;
  int n = 0;
  int D = 0;
  WindowOptions options;
  WindowCoords coords;
  Subspace span;
  std::vector<WindowGenerator> generators;
  std::size_t ell_dim = 0;
  /// s values in sweep order (descending) and the span dimension after each.
  std::vector<int> s_values;
  std::vector<std::size_t> s_dims;
  std::optional<std::size_t> stabilized_at;
  /// Some s < 0 layer strictly enlarged the span.
  bool negative_s_grew = false;

  bool fits(const State& s) const { return coords.fits(voa, s); }
  bool contains(const State& s) const { return span.member(coords.encode(voa, s)); }
  State generator_value(const WindowGenerator& g) const;
};

OnWindow build_On_window(const Voa& v, int n, int D, const WindowOptions& opt = {});

struct AnWindow {
  OnWindow on;
  QuotientBasis quotient;
  /// Class representatives (window coordinates), with monomials and degrees.
  std::vector<std::size_t> rep_coords;
  std::vector<Monomial> reps;
  std::vector<int> rep_degrees;
  /// [rep_i] *_n [rep_j] in representative coordinates, for every pair with
  /// deg_i + deg_j + 2n <= D.
  std::map<std::pair<std::size_t, std::size_t>, SparseVec> products;
  SparseVec unit;
  SparseVec omega;
  bool identity_ok = true;
  bool omega_central_ok = true;
  /// Position in `reps` of each QuotientBasis representative.
  std::vector<std::size_t> slot_of_quotient;

  const Voa& voa() const { return on.voa; }
  int n() const { return on.n; }
  int D() const { return on.D; }
  std::size_t dim() const { return reps.size(); }
  std::string rep_label(std::size_t i) const { return voa().label(reps[i]); }
  SparseVec class_of(const State& s) const;
  State rep_state(std::size_t i) const { return State::of(voa().field(), reps[i]); }
  /// Every pair of representatives has a stored product.
  bool closed() const { return products.size() == dim() * dim(); }
  std::optional<SparseVec> product(std::size_t i, std::size_t j) const;
};

AnWindow an_window(const Voa& v, int n, int D, const WindowOptions& opt = {});

/// dim of the A_n window for each D in [lo, hi].
std::vector<std::size_t> window_dim_sweep(const Voa& v, int n, int lo, int hi,
                                          const WindowOptions& opt = {});

struct Lemma31Report {
  bool part1 = false;
  bool part2 = false;
  State residual1;
  State residual2;
  bool ok() const { return part1 && part2; }
};

/// Membership in the window of
///  (1) a *_n b - sum_{m=0}^{n} binom(m+n, n) (-1)^n Res_z Y(b,z) a (1+z)^{deg b+m-1} / z^{1+m+n},
///  (2) a *_n b - b *_n a - Res_z Y(a,z) b (1+z)^{deg a-1}.
/// a and b homogeneous with deg a + deg b + 2n <= D.
Lemma31Report check_lemma31(const OnWindow& w, const State& a, const State& b);

/// a *_n (b o c) and (b o c) *_n a both lie in the window.
bool check_absorption(const OnWindow& w, const State& a, const State& b, const State& c,
                      const CircleParams& p);

/// Window size needed by check_absorption for homogeneous inputs of the given degrees.
int absorption_degree(int da, int db, int dc, const CircleParams& p);

/// (a *_n b) *_n c - a *_n (b *_n c) in the window.
bool check_associativity(const OnWindow& w, const State& a, const State& b, const State& c);

/// o(a o^s_{n,t} b) on level k of M from the two-sum expansion
///   sum_i binom(-2n-t-2, i) (-1)^i a_{deg a+s-n-2-t-i} b_{deg b+n-s+i+t}
/// - sum_i binom(-2n-t-2, i) (-1)^{t+i} b_{deg b-n-s-2-i} a_{deg a+n+s+i},
/// for homogeneous a, b.
Matrix o_circle_expansion(const Voa& v, const State& a, const State& b, const CircleParams& p,
                          const GradedModule& m, int k);

class DividedPowerUndefined : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// e^{L(1)} (-1)^{L(0)} a. In characteristic p every component must have
/// degree < p, so that only L(1)^m / m! with m < p can be nonzero; otherwise
/// DividedPowerUndefined.
State phi_anti(const Voa& v, const State& a);

/// phi(a *_n b) - phi(b) *_n phi(a) in the window.
bool check_phi_product(const OnWindow& w, const State& a, const State& b);

struct SurjectionReport {
  /// Every basis row of the O_n window lies in the O_m window.
  bool inclusion = true;
  /// a *_n b - a *_m b lies in the O_m window for the stored A_n pairs.
  bool products = true;
  bool ok() const { return inclusion && products; }
};

/// Requires both windows at the same D and m <= n.
SurjectionReport surjection_check(const AnWindow& an, const AnWindow& am);

/// Matrix of the induced map A_n window -> A_m window on representatives.
Matrix class_map(const AnWindow& from, const AnWindow& to);

}  // namespace zhu

#endif  // ZHU_AN_ALGEBRA_HPP
