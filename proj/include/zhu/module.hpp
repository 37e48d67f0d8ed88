#ifndef ZHU_MODULE_HPP
#define ZHU_MODULE_HPP

#include "zhu/graded_space.hpp"
#include "zhu/voa.hpp"

#include <algorithm>
#include <map>
#include <vector>

namespace zhu {

/// A V-module known on levels 0..top_level(), each with an ordered basis.
class GradedModule {
 public:
  virtual ~GradedModule() = default;

  virtual const Voa& voa() const = 0;
  const Field& field() const { return voa().field(); }
  virtual int top_level() const = 0;
  virtual std::size_t level_dim(int k) const = 0;
  /// a_m applied to basis vector i of level k, in the basis of level
  /// k + deg a - m - 1. `a` must be homogeneous; the target level must be
  /// built unless it is negative (then the result is zero).
  virtual SparseVec act(const State& a, long m, int k, std::size_t i) const = 0;

  /// a_m on a whole level as a matrix (a homogeneous). Rows index the
  /// target level; a target below 0 gives a 0-row matrix.
  Matrix mode_matrix(const State& a, long m, int k) const;
};

/// V as a module over itself, levels 0..top.
class VacuumModule : public GradedModule {
 public:
  VacuumModule(const Voa& v, int top);

  const Voa& voa() const override { return v_; }
  int top_level() const override { return top_; }
  std::size_t level_dim(int k) const override;
  SparseVec act(const State& a, long m, int k, std::size_t i) const override;

  State basis_state(int k, std::size_t i) const;
  SparseVec coords(int k, const State& s) const;

 private:
  Voa v_;
  int top_;
  std::vector<std::map<Monomial, std::size_t>> index_;
};

/// o(a) = a_{deg a - 1} on level k, summed over homogeneous components of a.
Matrix o_operator(const Voa& v, const State& a, const GradedModule& m, int k);

}  // namespace zhu

#endif  // ZHU_MODULE_HPP
