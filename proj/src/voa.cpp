#include "zhu/voa.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <unordered_map>

namespace zhu {

namespace {

bool factor_before(const Factor& a, const Factor& b) {
  return a.second != b.second ? a.second > b.second : a.first < b.first;
}

void canonicalize(Monomial& m) { std::stable_sort(m.begin(), m.end(), factor_before); }

struct MemoKey {
  Monomial a;
  long m;
  Monomial w;
  bool operator==(const MemoKey& o) const { return m == o.m && a == o.a && w == o.w; }
};

struct MemoHash {
  std::size_t operator()(const MemoKey& k) const {
    std::size_t h = std::hash<long>()(k.m);
    auto mix = [&h](std::size_t x) { h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
    for (const auto& [g, q] : k.a) mix(static_cast<std::size_t>(g) * 131 + static_cast<std::size_t>(q));
    mix(0xabcdef);
    for (const auto& [g, q] : k.w) mix(static_cast<std::size_t>(g) * 131 + static_cast<std::size_t>(q));
    return h;
  }
};

}  // namespace

State State::vacuum(Field f) { return of(f, Monomial{}); }

State State::of(Field f, Monomial m, Scalar c) {
  State s(f);
  s.add(m, c);
  return s;
}

Scalar State::coeff(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? field_.zero() : it->second;
}

void State::add(const Monomial& m, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = terms_.try_emplace(m, c);
  if (fresh) return;
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

void State::axpy(const Scalar& c, const State& other) {
  if (c.is_zero()) return;
  for (const auto& [m, x] : other.terms_) add(m, c * x);
}

State operator*(const Scalar& c, const State& a) {
  State out(a.field_);
  if (c.is_zero()) return out;
  for (const auto& [m, x] : a.terms_) out.terms_.emplace(m, c * x);
  return out;
}

/// The memoized evaluator. Works on free monomials only; reduction modulo an
/// ideal is the caller's business.
class Engine {
 public:
  Engine(Field f, std::vector<int> degrees, ProductTable table)
      : f_(f), deg_(std::move(degrees)), table_(std::move(table)) {}

  const ProductTable& table() const { return table_; }

  int degree(const Monomial& m) const {
    int d = 0;
    for (const auto& [g, k] : m) d += deg_[g] + k - 1;
    return d;
  }

  /// a_m w for monomials a, w.
  State raw(const Monomial& a, long m, const Monomial& w) {
    const long target = degree(a) + degree(w) - m - 1;
    if (target < 0) return State(f_);
    if (a.empty()) return m == -1 ? State::of(f_, w) : State(f_);

    MemoKey key{a, m, w};
    {
      std::shared_lock lock(mu_);
      if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    }
    State out = (a.size() == 1 && a[0].second == 1) ? gen_mode(a[0].first, m, w) : iterate(a, m, w);
    for (const auto& [mono, c] : out.terms())
      if (degree(mono) != target)
        throw DataError("grading violated: a_m b landed in degree " + std::to_string(degree(mono)) +
                        " instead of " + std::to_string(target));
    std::unique_lock lock(mu_);
    memo_.emplace(std::move(key), out);
    return out;
  }

  State apply(const Monomial& a, long m, const State& s) {
    State out(f_);
    for (const auto& [w, c] : s.terms()) out.axpy(c, raw(a, m, w));
    return out;
  }

  State apply(const State& a, long m, const Monomial& w) {
    State out(f_);
    for (const auto& [mono, c] : a.terms()) out.axpy(c, raw(mono, m, w));
    return out;
  }

  State apply(const State& a, long m, const State& b) {
    State out(f_);
    for (const auto& [mono, c] : a.terms()) out.axpy(c, apply(mono, m, b));
    return out;
  }

  std::size_t memo_size() const {
    std::shared_lock lock(mu_);
    return memo_.size();
  }

 private:
  // (x_{-k} b)_m w via the iterate formula.
  State iterate(const Monomial& a, long m, const Monomial& w) {
    const int x = a[0].first;
    const long k = a[0].second;
    const Monomial b(a.begin() + 1, a.end());
    const long db = degree(b), dw = degree(w), dx = deg_[x];
    const Monomial gx{{x, 1}};
    State out(f_);
    for (long i = 0; m + i <= db + dw - 1; ++i) {
      State inner = raw(b, m + i, w);
      if (inner.is_zero()) continue;
      // (-1)^i binom(-k, i) = binom(k+i-1, i)
      out.axpy(binomial_in_field(k + i - 1, i, f_), apply(gx, -k - i, inner));
    }
    const Scalar sign = (k % 2 == 0) ? -f_.one() : f_.one();
    for (long i = 0; i <= dx + dw - 1; ++i) {
      State inner = raw(gx, i, w);
      if (inner.is_zero()) continue;
      out.axpy(sign * binomial_in_field(k + i - 1, i, f_), apply(b, -k + m - i, inner));
    }
    return out;
  }

  // g_m w for a generator g.
  State gen_mode(int g, long m, const Monomial& w) {
    if (w.empty()) {
      if (m >= 0) return State(f_);
      return State::of(f_, Monomial{{g, static_cast<int>(-m)}});
    }
    const auto [h, k1] = w[0];
    if (m < 0) {
      const Factor mine{g, static_cast<int>(-m)};
      if (!factor_before(w[0], mine)) {
        Monomial out;
        out.reserve(w.size() + 1);
        out.push_back(mine);
        out.insert(out.end(), w.begin(), w.end());
        return State::of(f_, std::move(out));
      }
    }
    const Monomial rest(w.begin() + 1, w.end());
    const Monomial gh{{h, 1}};
    State out = apply(gh, -static_cast<long>(k1), raw(Monomial{{g, 1}}, m, rest));
    for (auto it = table_.lower_bound({g, 0, 0}); it != table_.end() && std::get<0>(it->first) == g; ++it) {
      const auto [gg, i, hh] = it->first;
      if (hh != h) continue;
      Scalar c = binomial_in_field(m, i, f_);
      if (c.is_zero()) continue;
      out.axpy(c, apply(it->second, m - k1 - i, rest));
    }
    return out;
  }

  Field f_;
  std::vector<int> deg_;
  ProductTable table_;
  mutable std::shared_mutex mu_;
  std::unordered_map<MemoKey, State, MemoHash> memo_;
};

Voa::Voa(Field f, std::vector<Generator> gens, ProductTable table, State omega, Scalar central_charge,
         int dmax)
    : field_(f), c_(std::move(central_charge)), dmax_(dmax) {
  if (dmax < 1) throw DataError("degree cutoff must be positive");
  if (gens.empty()) throw DataError("a presentation needs at least one generator");
  std::vector<int> order(gens.size());
  for (std::size_t i = 0; i < gens.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return gens[a].label < gens[b].label; });
  std::vector<int> remap(gens.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    remap[order[i]] = static_cast<int>(i);
    gens_.push_back(gens[order[i]]);
  }
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    if (gens_[i].degree < 1) throw DataError("generator '" + gens_[i].label + "' must have positive degree");
    if (i && gens_[i].label == gens_[i - 1].label) throw DataError("duplicate generator '" + gens_[i].label + "'");
  }
  auto remap_state = [&](const State& s) {
    State out(field_);
    for (const auto& [m, c] : s.terms()) {
      Monomial mm = m;
      for (auto& fct : mm) {
        if (fct.first < 0 || fct.first >= static_cast<int>(remap.size()))
          throw DataError("unknown generator index in state");
        if (fct.second < 1) throw DataError("monomial factors need k >= 1");
        fct.first = remap[fct.first];
      }
      canonicalize(mm);
      out.add(mm, c);
    }
    return out;
  };
  ProductTable mapped;
  std::vector<int> degs;
  for (const auto& g : gens_) degs.push_back(g.degree);
  Engine probe(field_, degs, {});
  for (const auto& [key, value] : table) {
    auto [l, k, r] = key;
    if (k < 0) throw DataError("product table entries need k >= 0");
    if (l < 0 || r < 0 || l >= static_cast<int>(gens.size()) || r >= static_cast<int>(gens.size()))
      throw DataError("unknown generator in product table");
    State v = remap_state(value);
    const int nl = remap[l], nr = remap[r];
    const int expect = gens_[nl].degree + gens_[nr].degree - k - 1;
    for (const auto& [m, c] : v.terms())
      if (probe.degree(m) != expect)
        throw DataError("product " + gens_[nl].label + "_" + std::to_string(k) + gens_[nr].label +
                        " has a term of degree " + std::to_string(probe.degree(m)) + ", expected " +
                        std::to_string(expect));
    if (!v.is_zero()) mapped.emplace(std::make_tuple(nl, k, nr), std::move(v));
  }
  engine_ = std::make_shared<Engine>(field_, degs, std::move(mapped));
  omega_ = remap_state(omega);
  if (!omega_.is_zero() && degree(omega_) != std::optional<int>(2))
    throw DataError("omega must be homogeneous of degree 2");
  build_bases();
}

void Voa::build_bases() {
  basis_.assign(static_cast<std::size_t>(dmax_) + 1, {});
  for (int d = 0; d <= dmax_; ++d) {
    std::vector<Monomial> all = free_monomials(d);
    if (ideal_.empty()) {
      basis_[d] = std::move(all);
      continue;
    }
    for (std::size_t i = 0; i < free_coords_[d].size(); ++i)
      if (!ideal_[d].is_pivot(i)) basis_[d].push_back(parse_label(free_coords_[d].coord(i).label));
  }
}

std::optional<int> Voa::generator_index(const std::string& label) const {
  for (std::size_t i = 0; i < gens_.size(); ++i)
    if (gens_[i].label == label) return static_cast<int>(i);
  return std::nullopt;
}

const ProductTable& Voa::table() const { return engine_->table(); }

std::vector<std::size_t> Voa::ideal_dims() const {
  std::vector<std::size_t> out;
  for (const auto& s : ideal_) out.push_back(s.dim());
  return out;
}

State Voa::generator_state(int g) const { return State::of(field_, Monomial{{g, 1}}); }

int Voa::degree(const Monomial& m) const { return engine_->degree(m); }

std::optional<int> Voa::degree(const State& s) const {
  std::optional<int> d;
  for (const auto& [m, c] : s.terms()) {
    int e = degree(m);
    if (d && *d != e) return std::nullopt;
    d = e;
  }
  return d;
}

std::map<int, State> Voa::components(const State& s) const {
  std::map<int, State> out;
  for (const auto& [m, c] : s.terms()) out.try_emplace(degree(m), field_).first->second.add(m, c);
  return out;
}

int Voa::max_degree(const State& s) const {
  int d = -1;
  for (const auto& [m, c] : s.terms()) d = std::max(d, degree(m));
  return d;
}

std::string Voa::label(const Monomial& m) const {
  if (m.empty()) return "1";
  std::string out;
  for (const auto& [g, k] : m) out += gens_[g].label + "(" + std::to_string(-k) + ")";
  return out;
}

Monomial Voa::parse_label(const std::string& text) const {
  Monomial m;
  if (text == "1") return m;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto open = text.find('(', pos);
    auto close = text.find(')', open == std::string::npos ? pos : open);
    if (open == std::string::npos || close == std::string::npos) throw DataError("bad monomial label '" + text + "'");
    auto g = generator_index(text.substr(pos, open - pos));
    if (!g) throw DataError("unknown generator in label '" + text + "'");
    int k = -std::stoi(text.substr(open + 1, close - open - 1));
    if (k < 1) throw DataError("monomial factors need negative modes: '" + text + "'");
    m.emplace_back(*g, k);
    pos = close + 1;
  }
  canonicalize(m);
  return m;
}

std::vector<Monomial> Voa::free_monomials(int d) const {
  std::vector<Monomial> out;
  if (d < 0) return out;
  // Factors in canonical order; each next factor must not precede the last one.
  std::vector<Factor> choices;
  for (int k = d + 1; k >= 1; --k)
    for (std::size_t g = 0; g < gens_.size(); ++g)
      if (gens_[g].degree + k - 1 <= d && gens_[g].degree + k - 1 >= 1) choices.emplace_back(static_cast<int>(g), k);
  Monomial cur;
  std::function<void(std::size_t, int)> rec = [&](std::size_t from, int left) {
    if (left == 0) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = from; i < choices.size(); ++i) {
      int w = gens_[choices[i].first].degree + choices[i].second - 1;
      if (w > left) continue;
      cur.push_back(choices[i]);
      rec(i, left - w);
      cur.pop_back();
    }
  };
  rec(0, d);
  std::sort(out.begin(), out.end(), [&](const Monomial& a, const Monomial& b) { return label(a) < label(b); });
  return out;
}

const std::vector<Monomial>& Voa::basis(int d) const {
  if (d < 0 || d > dmax_) throw CutoffExceeded("degree " + std::to_string(d) + " outside [0, dmax]");
  return basis_[d];
}

GradedSpace Voa::coordinates(int top) const {
  std::vector<GradedSpace::Coord> cs;
  for (int d = 0; d <= top; ++d)
    for (const auto& m : basis(d)) cs.push_back({d, label(m)});
  return GradedSpace(std::move(cs));
}

SparseVec Voa::to_coords(const State& s, const GradedSpace& space) const {
  SparseVec v;
  const State r = reduce(s);
  for (const auto& [m, c] : r.terms()) {
    auto i = space.index_of(label(m));
    if (!i) throw CutoffExceeded("state term " + label(m) + " is outside the coordinate window");
    v.emplace_back(*i, c);
  }
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return v;
}

State Voa::from_coords(const SparseVec& v, const GradedSpace& space) const {
  State s(field_);
  for (const auto& [i, c] : v) s.add(parse_label(space.coord(i).label), c);
  return s;
}

State Voa::reduce(const State& s) const {
  if (ideal_.empty()) return s;
  State out(field_);
  for (auto& [d, comp] : components(s)) {
    if (d > dmax_) {
      out += comp;
      continue;
    }
    SparseVec v;
    for (const auto& [m, c] : comp.terms()) v.emplace_back(*free_coords_[d].index_of(label(m)), c);
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [i, c] : ideal_[d].reduce(v)) out.add(parse_label(free_coords_[d].coord(i).label), c);
  }
  return out;
}

State Voa::mode(const State& a, long k, const State& b) const {
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) {
      long target = degree(ma) + degree(mb) - k - 1;
      if (target > dmax_)
        throw CutoffExceeded("mode product lands in degree " + std::to_string(target) + " > dmax " +
                             std::to_string(dmax_));
    }
  return reduce(engine_->apply(a, k, b));
}

State Voa::mode_free(const State& a, long k, const State& b) const { return reduce(engine_->apply(a, k, b)); }

State Voa::divided_power(int i, const State& a) const { return mode(a, -i - 1, vacuum()); }

State Voa::virasoro(long m, const State& a) const { return mode_free(omega_, m + 1, a); }

Voa Voa::quotient(const std::vector<State>& relations) const {
  Voa q = *this;
  std::vector<State> seeds = relations_;
  seeds.insert(seeds.end(), relations.begin(), relations.end());
  q.relations_ = seeds;
  q.free_coords_.clear();
  for (int d = 0; d <= dmax_; ++d) {
    std::vector<GradedSpace::Coord> cs;
    for (const auto& m : free_monomials(d)) cs.push_back({d, label(m)});
    q.free_coords_.emplace_back(std::move(cs));
  }
  q.ideal_ = ideal_closure(*this, seeds, dmax_);
  if (q.ideal_[0].dim() > 0) throw DataError("the relations generate an ideal containing the vacuum");
  q.build_bases();
  return q;
}

std::size_t Voa::memo_size() const { return engine_->memo_size(); }

Voa build_heisenberg(Field f, int dmax) {
  if (f.characteristic() == 2) throw FieldError("Heisenberg needs 1/2");
  ProductTable t;
  t.emplace(std::make_tuple(0, 1, 0), State::vacuum(f));
  State omega = State::of(f, Monomial{{0, 1}, {0, 1}}, f.one() / f.from_int(2));
  return Voa(f, {{"a", 1}}, std::move(t), std::move(omega), f.one(), dmax);
}

Voa build_virasoro(Field f, Scalar c, int dmax) {
  ProductTable t;
  t.emplace(std::make_tuple(0, 0, 0), State::of(f, Monomial{{0, 2}}));
  t.emplace(std::make_tuple(0, 1, 0), State::of(f, Monomial{{0, 1}}, f.from_int(2)));
  t.emplace(std::make_tuple(0, 3, 0), State::of(f, Monomial{}, c / f.from_int(2)));
  State omega = State::of(f, Monomial{{0, 1}});
  return Voa(f, {{"w", 2}}, std::move(t), std::move(omega), std::move(c), dmax);
}

std::vector<Subspace> ideal_closure(const Voa& v, const std::vector<State>& seeds, int top) {
  const Field& f = v.field();
  std::vector<GradedSpace> coords;
  std::vector<Subspace> ideal;
  for (int d = 0; d <= top; ++d) {
    std::vector<GradedSpace::Coord> cs;
    for (const auto& m : v.free_monomials(d)) cs.push_back({d, v.label(m)});
    coords.emplace_back(std::move(cs));
    ideal.emplace_back(f, coords.back().size());
  }
  auto encode = [&](int d, const State& s) {
    SparseVec x;
    for (const auto& [m, c] : s.terms()) x.emplace_back(*coords[d].index_of(v.label(m)), c);
    std::sort(x.begin(), x.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return x;
  };
  std::vector<std::pair<int, State>> work;
  auto push = [&](const State& s) {
    for (auto& [d, comp] : v.components(s)) {
      if (d > top) continue;
      if (ideal[d].insert(encode(d, comp))) work.emplace_back(d, comp);
    }
  };
  for (const auto& s : seeds) {
    if (!v.degree(s)) throw DataError("relations must be homogeneous and nonzero");
    push(s);
  }
  while (!work.empty()) {
    auto [d, s] = work.back();
    work.pop_back();
    for (std::size_t g = 0; g < v.generators().size(); ++g) {
      const int dg = v.generators()[g].degree;
      // target degree dg + d - m - 1 in [0, top]
      for (long m = dg + d - 1 - top; m <= dg + d - 1; ++m) push(v.mode_free(v.generator_state(static_cast<int>(g)), m, s));
    }
  }
  return ideal;
}

std::vector<State> find_singular_vectors(const Voa& v, int level) {
  if (level > v.dmax()) throw CutoffExceeded("singular vector level above dmax");
  const auto& basis = v.basis(level);
  if (basis.empty()) return {};
  const Field& f = v.field();
  GradedSpace space = v.coordinates(level);
  // Stack L(1) and L(2) images; kernel columns are the candidates.
  std::vector<SparseVec> images;
  for (const auto& m : basis) {
    State s = State::of(f, m);
    SparseVec col = v.to_coords(v.virasoro(1, s), space);
    SparseVec col2 = v.to_coords(v.virasoro(2, s), space);
    for (auto& e : col2) e.first += space.size();
    col.insert(col.end(), col2.begin(), col2.end());
    images.push_back(std::move(col));
  }
  Matrix m(f, 2 * space.size(), basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) m.set_column(j, images[j]);
  std::vector<SparseVec> ker = kernel(m);
  if (ker.empty()) return {};

  std::vector<State> lower;
  for (int l = 1; l < level; ++l)
    for (auto& s : find_singular_vectors(v, l)) lower.push_back(std::move(s));
  std::vector<State> out;
  Subspace seen(f, basis.size());
  if (!lower.empty()) {
    auto closure = ideal_closure(v, lower, level);
    // Express the closure at this level in the basis of V_level.
    GradedSpace fc([&] {
      std::vector<GradedSpace::Coord> cs;
      for (const auto& mono : v.free_monomials(level)) cs.push_back({level, v.label(mono)});
      return cs;
    }());
    for (const auto& row : closure[level].basis()) {
      State s(f);
      for (const auto& [i, c] : row) s.add(v.parse_label(fc.coord(i).label), c);
      s = v.reduce(s);
      SparseVec x;
      for (const auto& [mono, c] : s.terms()) {
        auto it = std::find(basis.begin(), basis.end(), mono);
        x.emplace_back(static_cast<std::size_t>(it - basis.begin()), c);
      }
      std::sort(x.begin(), x.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      seen.insert(x);
    }
  }
  for (const auto& k : ker)
    if (seen.insert(k)) {
      State s(f);
      for (const auto& [j, c] : k) s.add(basis[j], c);
      out.push_back(std::move(s));
    }
  return out;
}

SkewReport check_skew_symmetry(const Voa& v, const State& a, const State& b) {
  SkewReport rep;
  const int da = v.max_degree(a), db = v.max_degree(b);
  if (da < 0 || db < 0) return rep;
  for (long k = da + db - 1; da + db - k - 1 <= v.dmax(); --k) {
    State lhs = v.mode(a, k, b);
    State rhs(v.field());
    for (long i = 0; k + i <= da + db - 1; ++i) {
      State inner = v.mode(b, k + i, a);
      if (inner.is_zero()) continue;
      Scalar sign = ((k + 1 + i) % 2 == 0) ? v.field().one() : -v.field().one();
      rhs.axpy(sign, v.divided_power(static_cast<int>(i), inner));
    }
    State diff = v.reduce(lhs - rhs);
    if (!diff.is_zero()) {
      rep.ok = false;
      rep.failures.emplace_back(k, diff);
    }
  }
  return rep;
}

bool check_commutator(const Voa& v, const State& a, const State& b, long s, long t, const State& probe) {
  State lhs = v.mode_free(a, s, v.mode_free(b, t, probe)) - v.mode_free(b, t, v.mode_free(a, s, probe));
  State rhs(v.field());
  const int da = v.max_degree(a), db = v.max_degree(b);
  for (long i = 0; i <= da + db - 1; ++i) {
    Scalar c = binomial_in_field(s, i, v.field());
    if (c.is_zero()) continue;
    State ab = v.mode_free(a, i, b);
    if (ab.is_zero()) continue;
    rhs.axpy(c, v.mode_free(ab, s + t - i, probe));
  }
  return v.reduce(lhs - rhs).is_zero();
}

bool check_virasoro_bracket(const Voa& v, long m, long n, const State& probe) {
  const Field& f = v.field();
  State lhs = v.virasoro(m, v.virasoro(n, probe)) - v.virasoro(n, v.virasoro(m, probe));
  State rhs = f.from_int(m - n) * v.virasoro(m + n, probe);
  if (m + n == 0) rhs.axpy(binomial_in_field(m + 1, 3, f) * (v.central_charge() / f.from_int(2)), probe);
  return v.reduce(lhs - rhs).is_zero();
}

bool check_divided_powers(const Voa& v, int i, int j, const State& a) {
  State lhs = v.divided_power(i, v.divided_power(j, a));
  State rhs = binomial_in_field(i + j, i, v.field()) * v.divided_power(i + j, a);
  return lhs == rhs;
}

}  // namespace zhu
