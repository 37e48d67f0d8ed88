#include "zhu/mode_liealg.hpp"

#include <sstream>
#include <stdexcept>

namespace zhu {

LoopCombo LoopCombo::of(const LoopMode& x) {
  LoopCombo out(x.base.field());
  for (const auto& [mono, c] : x.base.terms()) out.add(mono, x.m, c);
  return out;
}

void LoopCombo::add(const Monomial& base, long m, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = terms_.try_emplace({base, m}, c);
  if (fresh) return;
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

void LoopCombo::axpy(const Scalar& c, const LoopCombo& o) {
  if (c.is_zero()) return;
  for (const auto& [k, x] : o.terms_) add(k.first, k.second, c * x);
}

LoopAlgebra::LoopAlgebra(Voa v, int fidelity) : v_(std::move(v)), G_(fidelity) {
  if (G_ < 0 || G_ > v_.dmax()) throw DataError("loop algebra fidelity must lie in [0, dmax]");
}

std::optional<long> LoopAlgebra::degree(const LoopCombo& x) const {
  std::optional<long> d;
  for (const auto& [k, c] : x.terms()) {
    const long q = v_.degree(k.first) - k.second - 1;
    if (d && *d != q) return std::nullopt;
    d = q;
  }
  return d;
}

const LoopAlgebra::Relations& LoopAlgebra::relations(long q) const {
  std::lock_guard lock(mu_);
  auto& slot = rel_[q];
  if (slot) return *slot;
  auto r = std::make_unique<Relations>();
  r->coords = WindowCoords(v_, G_);
  r->span = Subspace(v_.field(), r->coords.size());
  const Field& f = v_.field();
  if (q != 0) r->span.insert(r->coords.encode(v_, State::vacuum(f)));
  for (int d = 1; d <= G_; ++d)
    for (const auto& mono : v_.basis(d)) {
      const State a = State::of(f, mono);
      for (int i = 1; d + i <= G_; ++i) {
        const long m = d + i - 1 - q;
        State rel(f);
        for (int j = 0; j <= i; ++j) {
          const Scalar b = binomial_in_field(m, j, f);
          if (!b.is_zero()) rel.axpy(b, j == i ? a : v_.divided_power(i - j, a));
        }
        r->span.insert(r->coords.encode(v_, rel));
      }
    }
  slot = std::move(r);
  return *slot;
}

LoopCombo LoopAlgebra::reduce(const LoopCombo& x) const {
  const Field& f = v_.field();
  std::map<long, State> groups;
  for (const auto& [k, c] : x.terms()) {
    const long q = v_.degree(k.first) - k.second - 1;
    auto it = groups.try_emplace(q, State(f)).first;
    it->second.add(k.first, c);
  }
  LoopCombo out(f);
  for (const auto& [q, s] : groups) {
    const auto& r = relations(q);
    const State rep = r.coords.decode(f, r.span.reduce(r.coords.encode(v_, s)));
    for (const auto& [mono, c] : rep.terms()) out.add(mono, v_.degree(mono) - 1 - q, c);
  }
  return out;
}

LoopCombo LoopAlgebra::bracket(const LoopCombo& x, const LoopCombo& y) const {
  const Field& f = v_.field();
  LoopCombo out(f);
  for (const auto& [kx, cx] : x.terms())
    for (const auto& [ky, cy] : y.terms()) {
      const State a = State::of(f, kx.first, cx);
      const State b = State::of(f, ky.first, cy);
      const long p = kx.second, r = ky.second;
      const int top = v_.degree(kx.first) + v_.degree(ky.first) - 1;
      for (long i = 0; i <= top; ++i) {
        const Scalar c = binomial_in_field(p, i, f);
        if (c.is_zero()) continue;
        const State ab = v_.mode(a, i, b);
        if (v_.max_degree(ab) > G_) throw CutoffExceeded("bracket leaves the loop algebra fidelity");
        for (const auto& [mono, s] : ab.terms()) out.add(mono, p + r - i, c * s);
      }
    }
  out = reduce(out);
  if (!out.is_zero()) {
    const auto dx = degree(x), dy = degree(y), dz = degree(out);
    if (dx && dy && (!dz || *dz != *dx + *dy)) throw std::logic_error("bracket is not degree additive");
  }
  return out;
}

std::vector<LoopMode> LoopAlgebra::component(long q, int G) const {
  std::vector<LoopMode> out;
  for (int d = 0; d <= std::min(G, v_.dmax()); ++d)
    for (const auto& mono : v_.basis(d)) out.push_back({State::of(v_.field(), mono), d - 1 - q});
  return out;
}

SparseVec LoopAlgebra::to_an_lie(const LoopCombo& x, const AnWindow& a) const {
  State s(v_.field());
  for (const auto& [k, c] : x.terms()) {
    if (v_.degree(k.first) - k.second - 1 != 0) throw DataError("only degree-0 modes map to A_n");
    s.add(k.first, c);
  }
  return a.class_of(s);
}

std::string LoopAlgebra::label(const LoopCombo& x) const {
  if (x.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : x.terms()) {
    if (!first) os << " + ";
    first = false;
    os << c.to_string() << "*[" << v_.label(k.first) << "](" << k.second << ")";
  }
  return os.str();
}

}  // namespace zhu
