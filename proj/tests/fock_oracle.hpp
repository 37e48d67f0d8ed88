// Independent Fock-space model of the rank-one Heisenberg vertex algebra.
// States are polynomials in x_k = a(-k); a(-k) multiplies by x_k and a(n) for
// n > 0 acts as n d/dx_n. Nothing here goes through the table-driven engine.
#ifndef ZHU_TESTS_FOCK_ORACLE_HPP
#define ZHU_TESTS_FOCK_ORACLE_HPP

#include "zhu/graded_space.hpp"
#include "zhu/voa.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <vector>

namespace fock {

using zhu::Field;
using zhu::Scalar;
using zhu::Matrix;
using zhu::binomial_in_field;
using zhu::rank;

using Poly = std::map<std::vector<int>, Scalar>;  // key: the k's, descending

inline void add(Poly& p, std::vector<int> key, const Scalar& c) {
  std::sort(key.rbegin(), key.rend());
  if (c.is_zero()) return;
  auto [it, fresh] = p.try_emplace(key, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) p.erase(it);
  }
}

inline void add(Poly& p, const Poly& q, const Scalar& c) {
  for (const auto& [k, x] : q) add(p, k, x * c);
}

inline int degree(const Poly& p) {
  int d = 0;
  for (const auto& [ks, c] : p) {
    int s = 0;
    for (int k : ks) s += k;
    d = std::max(d, s);
  }
  return d;
}

inline Poly mode(const Field& f, long n, const Poly& p) {
  Poly out;
  for (const auto& [ks, c] : p) {
    if (n < 0) {
      auto k2 = ks;
      k2.push_back(static_cast<int>(-n));
      add(out, k2, c);
    } else if (n > 0) {
      long count = std::count(ks.begin(), ks.end(), static_cast<int>(n));
      if (!count) continue;
      auto k2 = ks;
      k2.erase(std::find(k2.begin(), k2.end(), static_cast<int>(n)));
      add(out, k2, c * f.from_int(n * count));
    }
  }
  return out;
}

// L(n) = 1/2 sum_j :a(j) a(n-j):
inline Poly virasoro(const Field& f, long n, const Poly& p) {
  Poly out;
  const int top = degree(p);
  const Scalar half = f.one() / f.from_int(2);
  for (long j = -top - 2 - std::abs(n); j <= top + 2 + std::abs(n); ++j) {
    long l = n - j;
    Poly t = j <= l ? mode(f, j, mode(f, l, p)) : mode(f, l, mode(f, j, p));
    add(out, t, half);
  }
  return out;
}

// The m-th mode of the state a(-k1)...a(-kr)1, i.e. the coefficient of
// z^{-m-1} in :prod_i d^{(k_i - 1)} a(z):, applied to p. Each factor
// contributes sum_n binom(-n-1, k-1) a(n) z^{-n-k}; annihilators act first.
inline Poly composite_mode(const Field& f, const std::vector<int>& ks, long m, const Poly& p) {
  if (ks.empty()) return m == -1 ? p : Poly{};
  long total = m + 1;
  for (int k : ks) total -= k;
  const int dp = degree(p);
  const long lo = std::min<long>(0, total - dp), hi = dp;
  Poly out;
  std::vector<long> ns(ks.size());
  std::function<void(std::size_t, long, Scalar)> rec = [&](std::size_t i, long sum, Scalar c) {
    if (i == ks.size()) {
      if (sum != total) return;
      Poly cur = p;
      for (long n : ns)
        if (n > 0) cur = mode(f, n, cur);
      for (long n : ns)
        if (n < 0) cur = mode(f, n, cur);
      add(out, cur, c);
      return;
    }
    for (long n = lo; n <= hi; ++n) {
      if (n == 0) continue;
      Scalar b = zhu::binomial_in_field(-n - 1, ks[i] - 1, f);
      if (b.is_zero()) continue;
      ns[i] = n;
      rec(i + 1, sum + n, c * b);
    }
  };
  rec(0, 0, f.one());
  return out;
}

inline Poly to_poly(const zhu::State& s) {
  Poly p;
  for (const auto& [m, c] : s.terms()) {
    std::vector<int> ks;
    for (const auto& [g, k] : m) ks.push_back(k);
    add(p, ks, c);
  }
  return p;
}

inline zhu::State to_state(const Field& f, const Poly& p) {
  zhu::State s(f);
  for (const auto& [ks, c] : p) {
    zhu::Monomial m;
    for (int k : ks) m.emplace_back(0, k);
    s.add(m, c);
  }
  return s;
}

// Modes of an arbitrary polynomial state.
inline Poly state_mode(const Field& f, const Poly& a, long m, const Poly& b) {
  Poly out;
  for (const auto& [ks, c] : a) add(out, composite_mode(f, ks, m, b), c);
  return out;
}

// Partitions of d (descending parts), the Fock basis of degree d.
inline std::vector<std::vector<int>> partitions(int d, int largest = -1) {
  if (largest < 0) largest = d;
  if (d == 0) return {{}};
  std::vector<std::vector<int>> out;
  for (int k = std::min(d, largest); k >= 1; --k)
    for (auto rest : partitions(d - k, k)) {
      rest.insert(rest.begin(), k);
      out.push_back(rest);
    }
  return out;
}

// The O_n window computed entirely in the Fock model: every generator as a
// dense row over the partitions of degree <= D, then a rank.
inline std::size_t window_dim(const Field& f, int n, int D) {
  std::vector<std::vector<int>> coords;
  for (int d = 0; d <= D; ++d)
    for (auto& p : partitions(d)) coords.push_back(p);
  std::map<std::vector<int>, std::size_t> idx;
  for (std::size_t i = 0; i < coords.size(); ++i) idx[coords[i]] = i;
  std::vector<Poly> rows;
  auto unit = [&](const std::vector<int>& ks) {
    Poly p;
    add(p, ks, f.one());
    return p;
  };
  auto deg = [](const std::vector<int>& ks) {
    int s = 0;
    for (int k : ks) s += k;
    return s;
  };
  for (const auto& a : coords) {
    if (deg(a) + 1 > D) continue;
    Poly r = virasoro(f, -1, unit(a));
    add(r, unit(a), f.from_int(deg(a)));
    rows.push_back(r);
  }
  for (int t = 0; t <= D; ++t)
    for (int s = 0; s <= t; ++s)
      for (const auto& a : coords)
        for (const auto& b : coords) {
          const int da = deg(a), db = deg(b);
          if (da + db + 2 * n + 1 + t > D) continue;
          Poly r;
          const long P = 2 * n + 2 + t;
          for (long j = 0; j <= da + n + s && j - P <= da + db - 1; ++j)
            add(r, composite_mode(f, a, j - P, unit(b)), binomial_in_field(da + n + s, j, f));
          rows.push_back(r);
        }
  Matrix m(f, rows.size(), coords.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (const auto& [k, c] : rows[i]) m(i, idx.at(k)) = c;
  return rank(m);
}

}  // namespace fock

#endif  // ZHU_TESTS_FOCK_ORACLE_HPP
