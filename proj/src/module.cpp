#include "zhu/module.hpp"

namespace zhu {

Matrix GradedModule::mode_matrix(const State& a, long m, int k) const {
  const auto d = voa().degree(a);
  if (!d) {
    if (a.is_zero()) return Matrix(field(), 0, level_dim(k));
    throw DataError("mode_matrix needs a homogeneous state");
  }
  const long target = k + *d - m - 1;
  if (target > top_level()) throw CutoffExceeded("mode lands above the top built level");
  const std::size_t rows = target < 0 ? 0 : level_dim(static_cast<int>(target));
  Matrix out(field(), rows, level_dim(k));
  if (rows == 0) return out;
  for (std::size_t i = 0; i < level_dim(k); ++i) out.set_column(i, act(a, m, k, i));
  return out;
}

VacuumModule::VacuumModule(const Voa& v, int top) : v_(v), top_(top) {
  if (top > v.dmax()) throw CutoffExceeded("vacuum module levels exceed the cutoff");
  for (int k = 0; k <= top; ++k) {
    std::map<Monomial, std::size_t> idx;
    for (const auto& m : v.basis(k)) idx.emplace(m, idx.size());
    index_.push_back(std::move(idx));
  }
}

std::size_t VacuumModule::level_dim(int k) const {
  if (k < 0 || k > top_) throw DataError("level not built");
  return index_[k].size();
}

State VacuumModule::basis_state(int k, std::size_t i) const {
  return State::of(v_.field(), v_.basis(k).at(i));
}

SparseVec VacuumModule::coords(int k, const State& s) const {
  SparseVec out;
  for (const auto& [m, c] : s.terms()) {
    auto it = index_.at(k).find(m);
    if (it == index_.at(k).end()) throw DataError("state is not in the requested level");
    out.emplace_back(it->second, c);
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  return out;
}

SparseVec VacuumModule::act(const State& a, long m, int k, std::size_t i) const {
  const auto d = v_.degree(a);
  if (!d) return {};
  const long target = k + *d - m - 1;
  if (target < 0) return {};
  if (target > top_) throw CutoffExceeded("mode lands above the top built level");
  return coords(static_cast<int>(target), v_.mode(a, m, basis_state(k, i)));
}

Matrix o_operator(const Voa& v, const State& a, const GradedModule& m, int k) {
  Matrix out(m.field(), m.level_dim(k), m.level_dim(k));
  for (const auto& [d, part] : v.components(a)) out = out + m.mode_matrix(part, d - 1, k);
  return out;
}

}  // namespace zhu
