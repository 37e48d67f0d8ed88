#include "zhu/an_algebra.hpp"

#include "zhu/parallel.hpp"

#include <algorithm>
#include <numeric>

namespace zhu {

namespace {

Scalar sign(const Field& f, long e) { return (e % 2 == 0) ? f.one() : -f.one(); }

int homogeneous_degree(const Voa& v, const State& a, const char* what) {
  const auto d = v.degree(a);
  if (!d) throw DataError(std::string(what) + " needs a nonzero homogeneous state");
  return *d;
}

}  // namespace

State residue_product(const Voa& v, const State& a, const State& b, long E, long P) {
  const Field& f = v.field();
  State acc(f);
  if (a.is_zero() || b.is_zero()) return acc;
  const int top_b = v.max_degree(b);
  for (const auto& [da, part] : v.components(a)) {
    for (long j = 0;; ++j) {
      const long k = j - P;
      if (k > da + top_b - 1) break;
      if (E >= 0 && j > E) break;
      const Scalar c = binomial_in_field(E, j, f);
      if (c.is_zero()) continue;
      acc.axpy(c, v.mode(part, k, b));
    }
  }
  return acc;
}

State circle_product(const Voa& v, const State& a, const State& b, const CircleParams& p) {
  if (p.s > p.t) throw DataError("circle product needs s <= t");
  if (p.n < 0) throw DataError("circle product needs n >= 0");
  State acc(v.field());
  for (const auto& [da, part] : v.components(a))
    acc += residue_product(v, part, b, da + p.n + p.s, 2L * p.n + 2 + p.t);
  return acc;
}

State ell_generator(const Voa& v, const State& a) {
  const Field& f = v.field();
  State out = v.virasoro(-1, a);
  for (const auto& [d, part] : v.components(a)) out.axpy(f.from_int(d), part);
  return out;
}

State star_n(const Voa& v, const State& a, const State& b, int n) {
  const Field& f = v.field();
  State acc(f);
  for (const auto& [da, part] : v.components(a))
    for (int m = 0; m <= n; ++m) {
      const Scalar c = sign(f, m) * binomial_in_field(m + n, n, f);
      if (c.is_zero()) continue;
      acc.axpy(c, residue_product(v, part, b, da + n, n + m + 1));
    }
  return acc;
}

State dj_product(const Voa& v, const State& u, const State& w, int m, int p, int q) {
  if (m < 0 || p < 0 || q < 0) throw DataError("dj_product needs m, p, q >= 0");
  const Field& f = v.field();
  State acc(f);
  for (const auto& [du, part] : v.components(u))
    for (int i = 0; i <= p; ++i) {
      const long shift = static_cast<long>(m) + q - p + i;
      const Scalar c = sign(f, i) * binomial_in_field(shift, i, f);
      if (c.is_zero()) continue;
      acc.axpy(c, residue_product(v, part, w, du + m, shift + 1));
    }
  return acc;
}

WindowCoords::WindowCoords(const Voa& v, int top) : top_(top) {
  if (top > v.dmax()) throw CutoffExceeded("window exceeds the presentation cutoff");
  for (int d = top; d >= 0; --d)
    for (const auto& m : v.basis(d)) {
      index_.emplace(m, monos_.size());
      monos_.push_back(m);
      degrees_.push_back(d);
      labels_.push_back(v.label(m));
    }
}

bool WindowCoords::fits(const Voa& v, const State& s) const { return s.is_zero() || v.max_degree(s) <= top_; }

SparseVec WindowCoords::encode(const Voa& v, const State& s) const {
  if (!fits(v, s)) throw CutoffExceeded("state does not fit the window");
  const State r = v.is_quotient() ? v.reduce(s) : s;
  SparseVec out;
  out.reserve(r.terms().size());
  for (const auto& [m, c] : r.terms()) {
    auto it = index_.find(m);
    if (it == index_.end()) throw DataError("monomial outside the window basis: " + v.label(m));
    out.emplace_back(it->second, c);
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  return out;
}

State WindowCoords::decode(const Field& f, const SparseVec& x) const {
  State s(f);
  for (const auto& [i, c] : x) s.add(monos_.at(i), c);
  return s;
}

State OnWindow::generator_value(const WindowGenerator& g) const {
  const Field& f = voa.field();
  if (g.kind == WindowGenerator::Kind::Ell) return ell_generator(voa, State::of(f, g.a));
  return circle_product(voa, State::of(f, g.a), State::of(f, g.b), g.p);
}

OnWindow build_On_window(const Voa& v, int n, int D, const WindowOptions& opt) {
  if (n < 0 || D < 0) throw DataError("window needs n >= 0 and D >= 0");
  OnWindow w;
  w.voa = v;
  w.n = n;
  w.D = D;
  w.options = opt;
  w.coords = WindowCoords(v, D);
  w.span = Subspace(v.field(), w.coords.size());
  const int tmax = opt.tmax < 0 ? D : opt.tmax;

  auto run_batch = [&](std::vector<WindowGenerator>&& batch) {
    std::vector<SparseVec> values(batch.size());
    parallel_for(batch.size(), [&](std::size_t i) { values[i] = w.coords.encode(v, w.generator_value(batch[i])); });
    for (std::size_t i = 0; i < batch.size(); ++i) {
      w.span.insert(values[i]);
      w.generators.push_back(std::move(batch[i]));
    }
  };

  std::vector<WindowGenerator> ell;
  for (int d = 0; d + 1 <= D; ++d)
    for (const auto& m : v.basis(d)) ell.push_back({WindowGenerator::Kind::Ell, m, {}, {}});
  run_batch(std::move(ell));
  w.ell_dim = w.span.dim();

  std::size_t nonneg_dim = w.span.dim();
  for (int s = tmax; s >= opt.smin; --s) {
    std::vector<WindowGenerator> layer;
    for (int t = std::max(s, 0); t <= tmax; ++t) {
      const int budget = D - 2 * n - 1 - t;
      for (int da = 0; da <= budget; ++da)
        for (int db = 0; da + db <= budget; ++db)
          for (const auto& ma : v.basis(da))
            for (const auto& mb : v.basis(db)) layer.push_back({WindowGenerator::Kind::Circle, ma, mb, {n, s, t}});
    }
    run_batch(std::move(layer));
    w.s_values.push_back(s);
    w.s_dims.push_back(w.span.dim());
    if (s == 0) nonneg_dim = w.span.dim();
    if (s < 0) {
      if (w.span.dim() > nonneg_dim) w.negative_s_grew = true;
      std::vector<std::size_t> tail(w.s_dims.end() - std::min<std::size_t>(w.s_dims.size(), -s + 1), w.s_dims.end());
      if (stabilization_detect(tail, opt.patience)) break;
    }
  }
  if (!w.s_dims.empty()) w.stabilized_at = stabilization_detect(w.s_dims, std::min(opt.patience, w.s_dims.size()));
  return w;
}

SparseVec AnWindow::class_of(const State& s) const {
  const SparseVec q = quotient.project(on.coords.encode(voa(), s));
  SparseVec out;
  out.reserve(q.size());
  for (const auto& [i, c] : q) out.emplace_back(slot_of_quotient[i], c);
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  return out;
}

std::optional<SparseVec> AnWindow::product(std::size_t i, std::size_t j) const {
  auto it = products.find({i, j});
  if (it == products.end()) return std::nullopt;
  return it->second;
}

AnWindow an_window(const Voa& v, int n, int D, const WindowOptions& opt) {
  AnWindow a;
  a.on = build_On_window(v, n, D, opt);
  a.quotient = QuotientBasis(a.on.span);
  const auto& qreps = a.quotient.representatives();
  std::vector<std::size_t> order(qreps.size());
  std::iota(order.begin(), order.end(), 0);
  const auto& wc = a.on.coords;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    const std::size_t cx = qreps[x], cy = qreps[y];
    if (wc.degree(cx) != wc.degree(cy)) return wc.degree(cx) < wc.degree(cy);
    return wc.label(cx) < wc.label(cy);
  });
  a.slot_of_quotient.assign(qreps.size(), 0);
  for (std::size_t r = 0; r < order.size(); ++r) {
    const std::size_t c = qreps[order[r]];
    a.slot_of_quotient[order[r]] = r;
    a.rep_coords.push_back(c);
    a.reps.push_back(wc.monomial(c));
    a.rep_degrees.push_back(wc.degree(c));
  }

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      if (a.rep_degrees[i] + a.rep_degrees[j] + 2 * n <= D) pairs.emplace_back(i, j);
  std::vector<SparseVec> values(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t k) {
    values[k] = a.class_of(star_n(v, a.rep_state(pairs[k].first), a.rep_state(pairs[k].second), n));
  });
  for (std::size_t k = 0; k < pairs.size(); ++k) a.products.emplace(pairs[k], std::move(values[k]));

  const Field& f = v.field();
  a.unit = a.class_of(v.vacuum());
  for (std::size_t j = 0; j < a.dim(); ++j) {
    if (a.rep_degrees[j] + 2 * n > D) continue;
    const SparseVec e{{j, f.one()}};
    const State r = a.rep_state(j);
    if (a.class_of(star_n(v, v.vacuum(), r, n)) != e || a.class_of(star_n(v, r, v.vacuum(), n)) != e)
      a.identity_ok = false;
  }
  if (D >= 2) {
    a.omega = a.class_of(v.omega());
    for (std::size_t j = 0; j < a.dim(); ++j) {
      if (a.rep_degrees[j] + 2 + 2 * n > D) continue;
      const State r = a.rep_state(j);
      if (!a.on.contains(star_n(v, v.omega(), r, n) - star_n(v, r, v.omega(), n))) a.omega_central_ok = false;
    }
  }
  return a;
}

std::vector<std::size_t> window_dim_sweep(const Voa& v, int n, int lo, int hi, const WindowOptions& opt) {
  std::vector<std::size_t> dims;
  for (int D = lo; D <= hi; ++D) {
    const OnWindow w = build_On_window(v, n, D, opt);
    dims.push_back(w.coords.size() - w.span.dim());
  }
  return dims;
}

Lemma31Report check_lemma31(const OnWindow& w, const State& a, const State& b) {
  const Voa& v = w.voa;
  const Field& f = v.field();
  const int n = w.n;
  const int db = homogeneous_degree(v, b, "check_lemma31");
  const int da = homogeneous_degree(v, a, "check_lemma31");
  const State ab = star_n(v, a, b, n);
  Lemma31Report r;
  State rhs(f);
  for (int m = 0; m <= n; ++m)
    rhs.axpy(binomial_in_field(m + n, n, f) * sign(f, n), residue_product(v, b, a, db + m - 1, 1 + m + n));
  r.residual1 = ab - rhs;
  r.residual2 = ab - star_n(v, b, a, n) - residue_product(v, a, b, da - 1, 0);
  r.part1 = w.contains(r.residual1);
  r.part2 = w.contains(r.residual2);
  return r;
}

int absorption_degree(int da, int db, int dc, const CircleParams& p) {
  return da + db + dc + 2 * p.n + 1 + p.t + 2 * p.n;
}

bool check_absorption(const OnWindow& w, const State& a, const State& b, const State& c, const CircleParams& p) {
  const Voa& v = w.voa;
  const State x = circle_product(v, b, c, p);
  return w.contains(star_n(v, a, x, w.n)) && w.contains(star_n(v, x, a, w.n));
}

bool check_associativity(const OnWindow& w, const State& a, const State& b, const State& c) {
  const Voa& v = w.voa;
  const int n = w.n;
  return w.contains(star_n(v, star_n(v, a, b, n), c, n) - star_n(v, a, star_n(v, b, c, n), n));
}

Matrix o_circle_expansion(const Voa& v, const State& a, const State& b, const CircleParams& p,
                          const GradedModule& m, int k) {
  const Field& f = v.field();
  const long da = homogeneous_degree(v, a, "o_circle_expansion");
  const long db = homogeneous_degree(v, b, "o_circle_expansion");
  const long n = p.n, s = p.s, t = p.t;
  const long top = -2 * n - t - 2;
  Matrix out(f, m.level_dim(k), m.level_dim(k));
  for (long i = 0;; ++i) {
    const long mb = db + n - s + i + t;
    const long mid = k + db - mb - 1;
    if (mid < 0) break;
    const Scalar c = binomial_in_field(top, i, f) * sign(f, i);
    if (c.is_zero()) continue;
    out = out + c * (m.mode_matrix(a, da + s - n - 2 - t - i, static_cast<int>(mid)) * m.mode_matrix(b, mb, k));
  }
  for (long i = 0;; ++i) {
    const long ma = da + n + s + i;
    const long mid = k + da - ma - 1;
    if (mid < 0) break;
    const Scalar c = binomial_in_field(top, i, f) * sign(f, t + i);
    if (c.is_zero()) continue;
    out = out - c * (m.mode_matrix(b, db - n - s - 2 - i, static_cast<int>(mid)) * m.mode_matrix(a, ma, k));
  }
  return out;
}

State phi_anti(const Voa& v, const State& a) {
  const Field& f = v.field();
  const std::uint64_t p = f.characteristic();
  State out(f);
  for (const auto& [d, part] : v.components(a)) {
    // L(1)^m kills degree d once m > d. Mod p, L(1)^m vanishes for m >= p
    // while L(1)^m / m! need not, and that quotient is not visible here.
    if (p != 0 && static_cast<std::uint64_t>(d) >= p)
      throw DividedPowerUndefined("phi needs L(1)^m/m! with m >= p on a degree " + std::to_string(d) + " state");
    State cur = sign(f, d) * part;
    Scalar fact = f.one();
    for (long m = 0; !cur.is_zero(); ++m) {
      if (m > 0) fact *= f.from_int(m);
      out.axpy(fact.inverse(), cur);
      cur = v.virasoro(1, cur);
    }
  }
  return out;
}

bool check_phi_product(const OnWindow& w, const State& a, const State& b) {
  const Voa& v = w.voa;
  const int n = w.n;
  return w.contains(phi_anti(v, star_n(v, a, b, n)) - star_n(v, phi_anti(v, b), phi_anti(v, a), n));
}

SurjectionReport surjection_check(const AnWindow& an, const AnWindow& am) {
  if (an.D() != am.D()) throw DataError("surjection_check needs windows of the same size");
  if (am.n() > an.n()) throw DataError("surjection_check needs m <= n");
  SurjectionReport r;
  const Field& f = an.voa().field();
  for (const auto& row : an.on.span.basis())
    if (!am.on.contains(an.on.coords.decode(f, row))) r.inclusion = false;
  for (const auto& [ij, value] : an.products) {
    (void)value;
    const State x = an.rep_state(ij.first), y = an.rep_state(ij.second);
    const Voa& v = an.voa();
    if (!am.on.contains(star_n(v, x, y, an.n()) - star_n(v, x, y, am.n()))) r.products = false;
  }
  return r;
}

Matrix class_map(const AnWindow& from, const AnWindow& to) {
  Matrix out(to.voa().field(), to.dim(), from.dim());
  for (std::size_t i = 0; i < from.dim(); ++i) out.set_column(i, to.class_of(from.rep_state(i)));
  return out;
}

}  // namespace zhu
