#include "zhu/verma.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace zhu {

namespace {

SparseVec times(const Matrix& m, const SparseVec& x) {
  SparseVec out;
  for (const auto& [j, c] : x) axpy(out, c, m.column(j));
  return out;
}

SparseVec unit(const Field& f, std::size_t i) { return {{i, f.one()}}; }

int parity_sign(long p) { return (p % 2 == 0) ? 1 : -1; }

// Vectors of span(basis) whose images under every probe vanish modulo the
// paired subspace.
std::vector<SparseVec> constrained(const Field& f, const std::vector<SparseVec>& basis,
                                   const std::vector<std::pair<Matrix, const Subspace*>>& probes) {
  if (basis.empty()) return {};
  std::size_t rows = 0;
  for (const auto& [m, s] : probes) rows += m.rows();
  Matrix big(f, rows, basis.size());
  std::size_t off = 0;
  for (const auto& [m, s] : probes) {
    for (std::size_t j = 0; j < basis.size(); ++j) {
      SparseVec y = times(m, basis[j]);
      if (s) y = s->reduce(y);
      for (const auto& [r, c] : y) big(off + r, j) = c;
    }
    off += m.rows();
  }
  std::vector<SparseVec> out;
  for (const auto& k : kernel(big)) {
    SparseVec v;
    for (const auto& [j, c] : k) axpy(v, c, basis[j]);
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- AnModule

AnModule AnModule::from_level(const GradedModule& m, int k, const AnWindow& a) {
  AnModule out{m.field(), m.level_dim(k), {}};
  for (std::size_t i = 0; i < a.dim(); ++i) out.action[a.rep_label(i)] = o_operator(m.voa(), a.rep_state(i), m, k);
  return out;
}

Matrix AnModule::of_class(const AnWindow& a, const SparseVec& cls) const {
  Matrix out(field, dim, dim);
  for (const auto& [i, c] : cls) {
    auto it = action.find(a.rep_label(i));
    if (it == action.end()) throw DataError("module has no action for " + a.rep_label(i));
    out = out + c * it->second;
  }
  return out;
}

std::vector<std::string> AnModule::check(const AnWindow& a) const {
  std::vector<std::string> bad;
  auto known = [&](const SparseVec& x) {
    return std::all_of(x.begin(), x.end(), [&](const auto& t) { return action.count(a.rep_label(t.first)) != 0; });
  };
  for (const auto& [label, m] : action)
    if (m.rows() != dim || m.cols() != dim) bad.push_back("wrong shape for " + label);
  if (!bad.empty()) return bad;
  if (known(a.unit) && of_class(a, a.unit) != Matrix::identity(field, dim)) bad.push_back("[1] does not act as 1");
  for (const auto& [ij, prod] : a.products) {
    const SparseVec x = unit(field, ij.first), y = unit(field, ij.second);
    if (!known(x) || !known(y) || !known(prod)) continue;
    if (of_class(a, prod) != of_class(a, x) * of_class(a, y))
      bad.push_back("[" + a.rep_label(ij.first) + "] * [" + a.rep_label(ij.second) + "]");
  }
  return bad;
}

// ----------------------------------------------------------- InducedModule

InducedModule::InducedModule(const Voa& v, const AnModule& u, int n, int levels, int fidelity)
    : v_(v),
      u_(u),
      n_(n),
      levels_(levels),
      G_(std::min(fidelity, v.dmax())),
      cap_(levels + 2 * std::min(fidelity, v.dmax())),
      loop_(v, [&] {
        int top = 1;
        for (const auto& g : v.generators()) top = std::max(top, 2 * g.degree);
        return std::min(top, v.dmax());
      }()) {
  if (n < 0 || levels < n) throw DataError("induced module needs 0 <= n <= levels");
  if (u.field != v.field()) throw DataError("module and VOA fields differ");
  for (std::size_t g = 0; g < v.generators().size(); ++g) {
    const std::string label = v.label(Monomial{{static_cast<int>(g), 1}});
    auto it = u.action.find(label);
    if (it == u.action.end()) throw DataError("module lacks the action of " + label);
    if (it->second.rows() != u.dim || it->second.cols() != u.dim) throw DataError("wrong shape for " + label);
    zero_modes_.push_back(it->second);
  }
}

bool InducedModule::before(const GenMode& x, const GenMode& y) const {
  if (x.d != y.d) return x.d > y.d;
  const int dx = v_.generators()[x.g].degree, dy = v_.generators()[y.g].degree;
  if (dx != dy) return dx < dy;
  return x.g < y.g;
}

long InducedModule::neg_total(const Word& w) const {
  long t = 0;
  for (const auto& x : w)
    if (x.d < 0) t -= x.d;
  return t;
}

std::string InducedModule::mode_label(const GenMode& x) const {
  const auto& g = v_.generators()[x.g];
  return g.label + "(" + std::to_string(g.degree - 1 - x.d) + ")";
}

const InducedModule::Level& InducedModule::level(int k) const {
  std::lock_guard lock(mu_);
  if (k < 0 || k > cap_) throw CutoffExceeded("level " + std::to_string(k) + " is outside the built range");
  auto it = levels_built_.find(k);
  if (it != levels_built_.end()) return it->second;

  std::vector<GenMode> pos, neg;
  for (long d = k; d >= 1; --d)
    for (std::size_t g = 0; g < v_.generators().size(); ++g) pos.push_back({static_cast<int>(g), d});
  for (long d = -1; d >= -n_; --d)
    for (std::size_t g = 0; g < v_.generators().size(); ++g) neg.push_back({static_cast<int>(g), d});
  auto cmp = [&](const GenMode& x, const GenMode& y) { return before(x, y); };
  std::sort(pos.begin(), pos.end(), cmp);
  std::sort(neg.begin(), neg.end(), cmp);

  // Multisets of `elems` (sorted words) of total |degree| equal to `total`.
  std::function<void(const std::vector<GenMode>&, std::size_t, long, Word&, std::vector<Word>&)> words =
      [&](const std::vector<GenMode>& elems, std::size_t from, long total, Word& cur, std::vector<Word>& out) {
        if (total == 0) {
          out.push_back(cur);
          return;
        }
        for (std::size_t i = from; i < elems.size(); ++i) {
          const long w = elems[i].d > 0 ? elems[i].d : -elems[i].d;
          if (w > total) continue;
          cur.push_back(elems[i]);
          words(elems, i, total - w, cur, out);
          cur.pop_back();
        }
      };

  Level lv;
  for (long N = 0; N <= n_; ++N) {
    const long P = k - n_ + N;
    if (P < 0) continue;
    std::vector<Word> ps, ns;
    Word cur;
    words(pos, 0, P, cur, ps);
    words(neg, 0, N, cur, ns);
    for (const auto& p : ps)
      for (const auto& q : ns) {
        Word w = p;
        w.insert(w.end(), q.begin(), q.end());
        for (std::size_t j = 0; j < u_.dim; ++j) lv.basis.emplace_back(w, j);
      }
  }
  for (std::size_t i = 0; i < lv.basis.size(); ++i) lv.index.emplace(lv.basis[i], i);
  return levels_built_.emplace(k, std::move(lv)).first->second;
}

std::size_t InducedModule::level_dim(int k) const { return level(k).basis.size(); }

std::string InducedModule::basis_label(int k, std::size_t i) const {
  const auto& key = level(k).basis.at(i);
  std::string s;
  for (const auto& x : key.first) s += mode_label(x);
  return s + (s.empty() ? "" : "|") + "u" + std::to_string(key.second);
}

std::size_t InducedModule::u_index(std::size_t j) const { return level(n_).index.at(Key{Word{}, j}); }

const GenBracket& InducedModule::bracket(const GenMode& x, const GenMode& y) const {
  std::lock_guard lock(mu_);
  auto it = brackets_.find({x, y});
  if (it != brackets_.end()) return it->second;
  auto as_loop = [&](const GenMode& z) {
    return LoopMode{v_.generator_state(z.g), v_.generators()[z.g].degree - 1 - z.d};
  };
  const LoopCombo r = loop_.bracket(as_loop(x), as_loop(y));
  GenBracket out{{}, v_.field().zero()};
  for (const auto& [key, c] : r.terms()) {
    const auto& [mono, m] = key;
    if (mono.empty() && m == -1) {
      out.central = c;
    } else if (mono.size() == 1 && mono[0].second == 1) {
      const int g = mono[0].first;
      out.modes.push_back({{g, v_.generators()[g].degree - 1 - m}, c});
    } else {
      throw DataError("generator modes do not close under the bracket: " + loop_.label(r));
    }
  }
  return brackets_.emplace(std::make_pair(x, y), std::move(out)).first->second;
}

void InducedModule::add_apply(Vec& out, const Scalar& c, const GenMode& y, const Vec& x) const {
  for (const auto& [key, a] : x)
    for (const auto& [k2, b] : apply_mode(y, key)) {
      auto [it, fresh] = out.try_emplace(k2, c * a * b);
      if (!fresh) it->second += c * a * b;
    }
}

InducedModule::Vec InducedModule::apply_mode(const GenMode& y, const Key& key) const {
  std::lock_guard lock(mu_);
  const auto memo_key = std::make_tuple(y.g, y.d, key);
  if (auto it = apply_memo_.find(memo_key); it != apply_memo_.end()) return it->second;

  const Field& f = v_.field();
  const Word& w = key.first;
  const bool free_mode = y.d > 0 || (y.d < 0 && -y.d <= n_);
  Vec out;
  if (w.empty()) {
    if (free_mode) {
      out.emplace(Key{Word{y}, key.second}, f.one());
    } else if (y.d == 0) {
      for (const auto& [j, c] : zero_modes_[y.g].column(key.second)) out.emplace(Key{Word{}, j}, c);
    }
  } else if (free_mode && !before(w[0], y)) {
    if (y.d > 0 || neg_total(w) - y.d <= n_) {
      Word nw{y};
      nw.insert(nw.end(), w.begin(), w.end());
      out.emplace(Key{nw, key.second}, f.one());
    }
  } else {
    const Key rest{Word(w.begin() + 1, w.end()), key.second};
    add_apply(out, f.one(), w[0], apply_mode(y, rest));
    const Vec restv{{rest, f.one()}};
    const GenBracket br = bracket(y, w[0]);
    for (const auto& [z, c] : br.modes) add_apply(out, c, z, restv);
    if (!br.central.is_zero()) {
      auto [it, fresh] = out.try_emplace(rest, br.central);
      if (!fresh) it->second += br.central;
    }
  }
  std::erase_if(out, [](const auto& t) { return t.second.is_zero(); });
  return apply_memo_.emplace(memo_key, std::move(out)).first->second;
}

Matrix InducedModule::generator_matrix(int g, long m, int k) const {
  const GenMode y{g, v_.generators()[g].degree - 1 - m};
  const long t = k + y.d;
  const auto& src = level(k);
  if (t < 0) return Matrix(v_.field(), 0, src.basis.size());
  const auto& dst = level(static_cast<int>(t));
  Matrix out(v_.field(), dst.basis.size(), src.basis.size());
  for (std::size_t i = 0; i < src.basis.size(); ++i)
    for (const auto& [key, c] : apply_mode(y, src.basis[i])) {
      auto it = dst.index.find(key);
      if (it == dst.index.end()) throw std::logic_error("normal ordering left the level basis");
      out(it->second, i) = c;
    }
  return out;
}

Matrix InducedModule::monomial_matrix(const Monomial& a, long m, int k) const {
  std::lock_guard lock(mu_);
  const auto key = std::make_tuple(a, m, k);
  if (auto it = matrices_.find(key); it != matrices_.end()) return it->second;

  const Field& f = v_.field();
  const long t = k + v_.degree(a) - m - 1;
  if (t > cap_) throw CutoffExceeded("mode lands above the built levels");
  const std::size_t cols = level_dim(k);
  Matrix out;
  if (t < 0) {
    out = Matrix(f, 0, cols);
  } else if (a.empty()) {
    out = m == -1 ? Matrix::identity(f, cols) : Matrix(f, level_dim(static_cast<int>(t)), cols);
  } else if (a.size() == 1 && a[0].second == 1) {
    out = generator_matrix(a[0].first, m, k);
  } else {
    // (g_{-kk} b)_m = sum_i binom(kk+i-1, i) (g_{-kk-i} b_{m+i} - (-1)^kk b_{m-kk-i} g_i)
    const int g = a[0].first;
    const long kk = a[0].second;
    const Monomial b(a.begin() + 1, a.end());
    const int dg = v_.generators()[g].degree, db = v_.degree(b);
    out = Matrix(f, level_dim(static_cast<int>(t)), cols);
    for (long i = 0; i <= k + db - m - 1; ++i) {
      const Scalar c = binomial_in_field(kk + i - 1, i, f);
      if (c.is_zero()) continue;
      const int mid = static_cast<int>(k + db - m - i - 1);
      out = out + c * (generator_matrix(g, -kk - i, mid) * monomial_matrix(b, m + i, k));
    }
    const Scalar sign = f.from_int(parity_sign(kk));
    for (long i = 0; i <= k + dg - 1; ++i) {
      const Scalar c = binomial_in_field(kk + i - 1, i, f);
      if (c.is_zero()) continue;
      const int mid = static_cast<int>(k + dg - i - 1);
      out = out - (sign * c) * (monomial_matrix(b, m - kk - i, mid) * generator_matrix(g, i, k));
    }
  }
  return matrices_.emplace(key, out).first->second;
}

SparseVec InducedModule::apply(const State& a, long m, int k, const SparseVec& x) const {
  SparseVec out;
  for (const auto& [mono, c] : a.terms()) axpy(out, c, times(monomial_matrix(mono, m, k), x));
  return out;
}

SparseVec InducedModule::act(const State& a, long m, int k, std::size_t i) const {
  if (!v_.degree(a)) return {};
  return apply(a, m, k, unit(v_.field(), i));
}

// ------------------------------------------------------- level subspaces

std::vector<std::size_t> LevelSubspaces::dims() const {
  std::vector<std::size_t> out;
  for (const auto& s : levels) out.push_back(s.dim());
  return out;
}

namespace {

std::vector<std::pair<State, int>> basis_up_to(const Voa& v, int G) {
  std::vector<std::pair<State, int>> out;
  for (int d = 0; d <= std::min(G, v.dmax()); ++d)
    for (const auto& m : v.basis(d)) out.emplace_back(State::of(v.field(), m), d);
  return out;
}

}  // namespace

Subspace w_relations(const InducedModule& M, int k, int G, const AnWindow* window) {
  const Voa& v = M.voa();
  const Field& f = v.field();
  const int n = M.n();
  Subspace out(f, M.level_dim(k));
  const auto basis = basis_up_to(v, G);
  for (const auto& [a, da] : basis) {
    if (da == 0) continue;
    for (const auto& [b, db] : basis)
      for (std::size_t j = 0; j < M.u_module().dim; ++j) {
        const SparseVec u = unit(f, M.u_index(j));
        for (long p = da + db - 1 - G; p <= da + db - 1; ++p) {
          const State c = v.mode(a, p, b);
          const long dc = da + db - p - 1;
          const long q = n + dc - 1 - k;
          SparseVec rel = c.is_zero() ? SparseVec{} : M.apply(c, q, n, u);
          const Scalar sp = f.from_int(parity_sign(p));
          const long top = std::max<long>(n + db - q - 1, n + da - 1);
          for (long i = 0; i <= top; ++i) {
            const Scalar bin = binomial_in_field(p, i, f);
            if (bin.is_zero()) continue;
            const Scalar c1 = (i % 2 == 0) ? bin : -bin;
            const long l1 = n + db - (q + i) - 1;
            if (l1 >= 0) {
              const SparseVec bu = M.apply(b, q + i, n, u);
              if (!bu.empty()) axpy(rel, -c1, M.apply(a, p - i, static_cast<int>(l1), bu));
            }
            const long l2 = n + da - i - 1;
            if (l2 >= 0) {
              const SparseVec au = M.apply(a, i, n, u);
              if (!au.empty()) axpy(rel, c1 * sp, M.apply(b, p + q - i, static_cast<int>(l2), au));
            }
          }
          out.insert(rel);
        }
      }
  }
  if (window && k == n) {
    const AnModule& U = M.u_module();
    for (const auto& [a, da] : basis) {
      if (da == 0 || da > window->D()) continue;
      Matrix act;
      try {
        act = U.of_class(*window, window->class_of(a));
      } catch (const DataError&) {
        continue;
      }
      for (std::size_t j = 0; j < U.dim; ++j) {
        SparseVec rel = M.apply(a, da - 1, n, unit(f, M.u_index(j)));
        for (std::size_t i = 0; i < U.dim; ++i)
          if (!act(i, j).is_zero()) axpy(rel, -act(i, j), unit(f, M.u_index(i)));
        out.insert(rel);
      }
    }
  }
  return out;
}

LevelSubspaces w_closure(const InducedModule& M, int G, const AnWindow* window) {
  const Voa& v = M.voa();
  const int L = M.levels();
  LevelSubspaces out;
  std::vector<std::pair<int, SparseVec>> work;
  for (int k = 0; k <= L; ++k) {
    out.levels.push_back(w_relations(M, k, G, window));
    for (const auto& r : out.levels.back().basis()) work.emplace_back(k, r);
  }
  while (!work.empty()) {
    auto [k, x] = std::move(work.back());
    work.pop_back();
    for (std::size_t g = 0; g < v.generators().size(); ++g)
      for (int t = 0; t <= L; ++t) {
        const long m = v.generators()[g].degree - 1 - (t - k);
        SparseVec y = times(M.generator_matrix(static_cast<int>(g), m, k), x);
        if (out.levels[t].insert(y)) work.emplace_back(t, std::move(y));
      }
  }
  return out;
}

LevelSubspaces radical_J(const InducedModule& M, const LevelSubspaces& rel) {
  const Voa& v = M.voa();
  const Field& f = v.field();
  const int n = M.n();
  const int T = std::max(M.levels(), n);
  if (static_cast<int>(rel.levels.size()) <= n) throw DataError("relations must cover level n");
  std::vector<std::vector<SparseVec>> J(T + 1);
  LevelSubspaces out;
  out.levels.resize(T + 1);
  for (int k = 0; k <= T; ++k) {
    if (k == n) {
      J[k] = rel.levels[n].basis();
    } else {
      for (std::size_t i = 0; i < M.level_dim(k); ++i) J[k].push_back(unit(f, i));
    }
  }
  auto span = [&](int k) {
    Subspace s(f, M.level_dim(k));
    for (const auto& x : J[k]) s.insert(x);
    return s;
  };
  for (int k = 0; k <= T; ++k) out.levels[k] = span(k);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int k = 0; k <= T; ++k) {
      if (k == n) continue;
      std::vector<std::pair<Matrix, const Subspace*>> probes;
      for (std::size_t g = 0; g < v.generators().size(); ++g)
        for (int t = 0; t <= T; ++t) {
          if (t == k) continue;
          const long m = v.generators()[g].degree - 1 - (t - k);
          probes.emplace_back(M.generator_matrix(static_cast<int>(g), m, k), &out.levels[t]);
        }
      // degree-0 modes keep the level
      for (std::size_t g = 0; g < v.generators().size(); ++g)
        probes.emplace_back(M.generator_matrix(static_cast<int>(g), v.generators()[g].degree - 1, k), &out.levels[k]);
      auto next = constrained(f, J[k], probes);
      if (next.size() < J[k].size()) {
        J[k] = std::move(next);
        out.levels[k] = span(k);
        changed = true;
      }
    }
  }
  out.levels.resize(M.levels() + 1);
  return out;
}

LevelSubspaces omega_n(const InducedModule& M, const LevelSubspaces& rel, int n, int G) {
  const Voa& v = M.voa();
  const Field& f = v.field();
  LevelSubspaces out;
  const auto basis = basis_up_to(v, G);
  for (int k = 0; k < static_cast<int>(rel.levels.size()); ++k) {
    std::vector<SparseVec> all;
    for (std::size_t i = 0; i < M.level_dim(k); ++i) all.push_back(unit(f, i));
    std::vector<std::pair<Matrix, const Subspace*>> probes;
    for (const auto& [a, da] : basis) {
      if (da == 0) continue;
      for (long i = da + n; k + da - i - 1 >= 0; ++i) {
        const int t = static_cast<int>(k + da - i - 1);
        probes.emplace_back(M.monomial_matrix(a.terms().begin()->first, i, k), &rel.levels[t]);
      }
    }
    Subspace s(f, M.level_dim(k));
    for (const auto& x : constrained(f, all, probes)) s.insert(x);
    out.levels.push_back(std::move(s));
  }
  return out;
}

VermaLevels ln_quotient(const InducedModule& M, const LevelSubspaces& J) {
  const Field& f = M.field();
  const int n = M.n();
  Subspace meet = J.levels.at(n);
  for (std::size_t j = 0; j < M.u_module().dim; ++j)
    if (!meet.insert(unit(f, M.u_index(j)))) throw std::logic_error("the radical meets U");
  VermaLevels out{"L", {}};
  for (int k = 0; k < static_cast<int>(J.levels.size()); ++k) out.dims.push_back(M.level_dim(k) - J.levels[k].dim());
  return out;
}

// ------------------------------------------------------------ PairingState

PairingState::PairingState(const AnWindow& a, const AnModule& u) : a_(a), u_(u) {}

Scalar PairingState::pair(const std::vector<Scalar>& functional, const std::vector<PairingFactor>& mono,
                          std::size_t u) const {
  const Voa& v = a_.voa();
  const Field& f = v.field();
  const long n = a_.n();
  if (functional.size() != u_.dim || u >= u_.dim) throw DataError("functional or vector outside U");
  long sum = 0;
  for (std::size_t i = 0; i < mono.size(); ++i) {
    if (mono[i].p == 0) throw DataError("factors o_p with p = 0 are not in normal form");
    if (i > 0 && mono[i].p > mono[i - 1].p) throw DataError("factors must have p descending");
    sum += mono[i].p;
  }
  if (sum != 0) throw DataError("a level-n monomial needs p1 + ... + ps = 0");
  if (!mono.empty() && mono.back().p < -n) throw DataError("the last factor must have p >= -n");
  if (mono.empty()) return functional[u];

  std::string key;
  for (const auto& x : mono) {
    key += std::to_string(x.p) + ":";
    for (const auto& [m, c] : x.a.terms()) key += v.label(m) + "*" + c.to_string() + ";";
    key += "|";
  }
  Matrix act;
  {
    std::lock_guard lock(mu_);
    if (auto it = memo_.find(key); it != memo_.end()) act = it->second;
  }
  if (act.rows() == 0) {
    std::vector<PairingFactor> cur = mono;
    while (cur.size() >= 2) {
      long m = n;
      for (std::size_t i = 2; i < cur.size(); ++i) m += cur[i].p;
      const long p = m + cur[1].p, q = m + cur[0].p + cur[1].p;
      if (m < 0 || p < 0 || q < 0) return f.zero();
      State c = dj_product(v, cur[0].a, cur[1].a, static_cast<int>(m), static_cast<int>(p), static_cast<int>(q));
      cur[1] = {cur[0].p + cur[1].p, std::move(c)};
      cur.erase(cur.begin());
    }
    act = u_.of_class(a_, a_.class_of(cur[0].a));
    std::lock_guard lock(mu_);
    memo_.emplace(key, act);
  }
  Scalar out = f.zero();
  for (std::size_t i = 0; i < u_.dim; ++i) out += functional[i] * act(i, u);
  return out;
}

}  // namespace zhu
