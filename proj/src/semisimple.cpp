#include "zhu/semisimple.hpp"

#include <algorithm>
#include <set>

namespace zhu {

namespace {

Matrix from_columns(const Field& f, std::size_t rows, const std::vector<SparseVec>& cols) {
  Matrix m(f, rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) m.set_column(j, cols[j]);
  return m;
}

// Coordinates of v in the span of the independent columns `basis`.
SparseVec coordinates_in(const Field& f, std::size_t n, const std::vector<SparseVec>& basis, const SparseVec& v) {
  std::vector<SparseVec> cols = basis;
  cols.push_back(v);
  const auto ker = kernel(from_columns(f, n, cols));
  for (const auto& k : ker) {
    if (k.empty() || k.back().first != basis.size()) continue;
    const Scalar g = -k.back().second.inverse();
    SparseVec out;
    for (const auto& [i, c] : k)
      if (i < basis.size()) out.emplace_back(i, c * g);
    return out;
  }
  throw LinalgError("vector is not in the span");
}

SparseVec power(const Algebra& a, SparseVec x, mpz_class e, const SparseVec& one) {
  SparseVec acc = one;
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) acc = a.multiply(acc, x);
    e >>= 1;
    if (e > 0) x = a.multiply(x, x);
  }
  return acc;
}

Scalar evaluate(const std::vector<Scalar>& poly, const Scalar& x, const Field& f) {
  Scalar acc = f.zero();
  for (auto it = poly.rbegin(); it != poly.rend(); ++it) acc = acc * x + *it;
  return acc;
}

// Divisors of |z| by trial division, or nullopt when z has a cofactor we
// cannot certify as prime.
std::optional<std::vector<mpz_class>> divisors(mpz_class z) {
  z = abs(z);
  std::vector<std::pair<mpz_class, int>> primes;
  for (unsigned long d = 2; d <= 1000000 && d * d <= z; ++d) {
    int e = 0;
    while (mpz_divisible_ui_p(z.get_mpz_t(), d)) {
      z /= d;
      ++e;
    }
    if (e) primes.emplace_back(mpz_class(d), e);
  }
  if (z > 1) {
    if (mpz_probab_prime_p(z.get_mpz_t(), 30) == 0) return std::nullopt;
    primes.emplace_back(z, 1);
  }
  std::vector<mpz_class> out{1};
  for (const auto& [p, e] : primes) {
    const std::size_t base = out.size();
    mpz_class pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
    if (out.size() > 100000) return std::nullopt;
  }
  return out;
}

std::optional<std::vector<Scalar>> rational_roots(std::vector<Scalar> poly, const Field& f) {
  std::vector<Scalar> roots;
  while (poly.size() > 1 && poly.front().is_zero()) {
    poly.erase(poly.begin());
    if (roots.empty()) roots.push_back(f.zero());
  }
  if (poly.size() <= 1) return roots;
  mpz_class l = 1;
  for (const auto& c : poly) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.rational().get_den_mpz_t());
  std::vector<mpz_class> z;
  for (const auto& c : poly) z.push_back(mpz_class(c.rational() * l));
  const auto num = divisors(z.front()), den = divisors(z.back());
  if (!num || !den || num->size() * den->size() > 2000000) return std::nullopt;
  std::set<mpq_class> seen;
  for (const auto& d : *num)
    for (const auto& e : *den)
      for (int sgn : {1, -1}) {
        mpq_class r(sgn * d, e);
        r.canonicalize();
        if (!seen.insert(r).second) continue;
        const Scalar x = f.from_mpq(r);
        if (evaluate(poly, x, f).is_zero()) roots.push_back(x);
      }
  return roots;
}

constexpr std::uint64_t kBruteForceLimit = 2000000;

std::optional<std::vector<Scalar>> prime_field_roots(const std::vector<Scalar>& poly, const Field& f) {
  const std::uint64_t p = f.characteristic();
  if (p > kBruteForceLimit) return std::nullopt;
  std::vector<std::uint64_t> c;
  for (const auto& x : poly) c.push_back(x.residue());
  std::vector<Scalar> roots;
  for (std::uint64_t x = 0; x < p; ++x) {
    unsigned __int128 acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = (acc * x + *it) % p;
    if (acc == 0) roots.push_back(f.from_int(static_cast<long long>(x)));
  }
  return roots;
}

// Radical of a by the Dickson trace form, valid in characteristic 0 or p > dim.
std::vector<SparseVec> trace_radical(const Algebra& a) {
  std::vector<Matrix> lefts;
  for (std::size_t i = 0; i < a.dim; ++i) lefts.push_back(a.left(SparseVec{{i, a.field.one()}}));
  Matrix g(a.field, a.dim, a.dim);
  for (std::size_t i = 0; i < a.dim; ++i)
    for (std::size_t j = 0; j < a.dim; ++j) {
      Scalar tr = a.field.zero();
      for (const auto& [k, c] : a.mul[i][j]) {
        Scalar t = a.field.zero();
        for (std::size_t r = 0; r < a.dim; ++r) t += lefts[k](r, r);
        tr += c * t;
      }
      g(i, j) = tr;
    }
  return kernel(g);
}

// Nilpotent elements of a commutative algebra over GF(p): the kernel of the
// F_p-linear map x -> x^{p^k} with p^k >= dim.
std::vector<SparseVec> frobenius_radical(const Algebra& a, const SparseVec& one) {
  const std::uint64_t p = a.field.characteristic();
  mpz_class e = p;
  while (e < a.dim) e *= p;
  std::vector<SparseVec> cols;
  for (std::size_t i = 0; i < a.dim; ++i) cols.push_back(power(a, SparseVec{{i, a.field.one()}}, e, one));
  return kernel(from_columns(a.field, a.dim, cols));
}

std::optional<SparseVec> find_unit(const Algebra& a) {
  // Solve e x = x for all basis x: sum_i e_i mul[i][j] = e_j.
  Matrix m(a.field, a.dim * a.dim, a.dim + 1);
  for (std::size_t j = 0; j < a.dim; ++j) {
    for (std::size_t i = 0; i < a.dim; ++i)
      for (const auto& [k, c] : a.mul[i][j]) m(j * a.dim + k, i) += c;
    m(j * a.dim + j, a.dim) -= a.field.one();
  }
  for (const auto& k : kernel(m)) {
    if (k.empty() || k.back().first != a.dim) continue;
    const Scalar g = -k.back().second.inverse();
    SparseVec u;
    for (const auto& [i, c] : k)
      if (i < a.dim) u.emplace_back(i, c * g);
    return u;
  }
  return std::nullopt;
}

// A / span(rad) with structure constants on the non-pivot coordinates.
Algebra quotient_algebra(const Algebra& a, const std::vector<SparseVec>& rad) {
  Subspace s(a.field, a.dim);
  for (const auto& r : rad) s.insert(r);
  QuotientBasis q(s);
  Algebra b{a.field, q.size(), {}};
  b.mul.assign(b.dim, std::vector<SparseVec>(b.dim));
  for (std::size_t i = 0; i < b.dim; ++i)
    for (std::size_t j = 0; j < b.dim; ++j) b.mul[i][j] = q.project(a.multiply(q.lift(i), q.lift(j)));
  return b;
}

std::vector<SparseVec> center(const Algebra& a) {
  Matrix m(a.field, a.dim * a.dim, a.dim);
  for (std::size_t j = 0; j < a.dim; ++j)
    for (std::size_t i = 0; i < a.dim; ++i) {
      for (const auto& [k, c] : a.mul[i][j]) m(j * a.dim + k, i) += c;
      for (const auto& [k, c] : a.mul[j][i]) m(j * a.dim + k, i) -= c;
    }
  return kernel(m);
}

}  // namespace

SparseVec Algebra::multiply(const SparseVec& x, const SparseVec& y) const {
  SparseVec out;
  for (const auto& [i, a] : x)
    for (const auto& [j, b] : y) axpy(out, a * b, mul[i][j]);
  return out;
}

Matrix Algebra::left(const SparseVec& x) const {
  Matrix m(field, dim, dim);
  for (std::size_t j = 0; j < dim; ++j) m.set_column(j, multiply(x, SparseVec{{j, field.one()}}));
  return m;
}

bool Algebra::commutative() const {
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = i + 1; j < dim; ++j)
      if (mul[i][j] != mul[j][i]) return false;
  return true;
}

Algebra algebra_from_window(const AnWindow& w) {
  if (!w.closed())
    throw WindowNotClosed("the window stores only " + std::to_string(w.products.size()) + " of " +
                          std::to_string(w.dim() * w.dim()) + " products; enlarge D");
  Algebra a{w.voa().field(), w.dim(), {}};
  a.mul.assign(a.dim, std::vector<SparseVec>(a.dim));
  for (const auto& [ij, v] : w.products) a.mul[ij.first][ij.second] = v;
  return a;
}

std::vector<Scalar> characteristic_polynomial(const Matrix& m) {
  if (m.rows() != m.cols()) throw LinalgError("characteristic polynomial of a non-square matrix");
  const Field& f = m.field();
  const std::size_t n = m.rows();
  Matrix h = m;
  for (std::size_t j = 0; j + 2 < n; ++j) {
    std::size_t piv = j + 1;
    while (piv < n && h(piv, j).is_zero()) ++piv;
    if (piv == n) continue;
    if (piv != j + 1) {
      for (std::size_t c = 0; c < n; ++c) std::swap(h(piv, c), h(j + 1, c));
      for (std::size_t r = 0; r < n; ++r) std::swap(h(r, piv), h(r, j + 1));
    }
    const Scalar inv = h(j + 1, j).inverse();
    for (std::size_t k = j + 2; k < n; ++k) {
      const Scalar u = h(k, j) * inv;
      if (u.is_zero()) continue;
      for (std::size_t c = 0; c < n; ++c) h(k, c) -= u * h(j + 1, c);
      for (std::size_t r = 0; r < n; ++r) h(r, j + 1) += u * h(r, k);
    }
  }
  // p_m = (x - h_mm) p_{m-1} - sum_{i<m} h_im (prod_{j=i+1}^{m} h_{j,j-1}) p_{i-1}, 1-based.
  std::vector<std::vector<Scalar>> p{{f.one()}};
  for (std::size_t mm = 1; mm <= n; ++mm) {
    std::vector<Scalar> next(mm + 1, f.zero());
    const auto& prev = p[mm - 1];
    for (std::size_t d = 0; d < prev.size(); ++d) {
      next[d + 1] += prev[d];
      next[d] -= h(mm - 1, mm - 1) * prev[d];
    }
    Scalar prod = f.one();
    for (std::size_t i = mm - 1; i >= 1; --i) {
      prod *= h(i, i - 1);
      if (prod.is_zero()) break;
      const Scalar c = h(i - 1, mm - 1) * prod;
      for (std::size_t d = 0; d < p[i - 1].size(); ++d) next[d] -= c * p[i - 1][d];
    }
    p.push_back(std::move(next));
  }
  return p[n];
}

std::optional<std::vector<Scalar>> field_roots(const std::vector<Scalar>& poly, const Field& f) {
  return f.is_rational() ? rational_roots(poly, f) : prime_field_roots(poly, f);
}

SemisimpleReport semisimple_analyze(const Algebra& a) {
  const Field& f = a.field;
  SemisimpleReport r;
  r.dim = a.dim;
  if (a.dim == 0) {
    r.radical_method = "trace-form";
    return r;
  }
  const std::uint64_t p = f.characteristic();
  std::vector<SparseVec> rad;
  if (p == 0 || p > a.dim) {
    r.radical_method = "trace-form";
    rad = trace_radical(a);
  } else if (a.commutative()) {
    const auto one = find_unit(a);
    if (!one) throw LinalgError("algebra has no identity");
    r.radical_method = "frobenius";
    rad = frobenius_radical(a, *one);
  } else {
    r.radical_method = "unsupported";
    return r;
  }
  r.radical_dim = rad.size();
  const Algebra b = quotient_algebra(a, rad);
  if (b.dim == 0) return r;

  // Split the center by joint eigenspaces of its multiplication operators.
  const std::vector<SparseVec> z = center(b);
  const std::size_t nz = z.size();
  auto z_mult = [&](const SparseVec& x, const SparseVec& y) {
    SparseVec xb, yb;
    for (const auto& [i, c] : x) axpy(xb, c, z[i]);
    for (const auto& [i, c] : y) axpy(yb, c, z[i]);
    return coordinates_in(f, b.dim, z, b.multiply(xb, yb));
  };
  struct Piece {
    std::vector<SparseVec> basis;  // in center coordinates
  };
  std::vector<Piece> pieces{{{}}};
  for (std::size_t i = 0; i < nz; ++i) pieces[0].basis.push_back({{i, f.one()}});
  for (std::size_t g = 0; g < nz; ++g) {
    std::vector<Piece> next;
    for (const auto& piece : pieces) {
      const std::size_t d = piece.basis.size();
      if (d == 1) {
        next.push_back(piece);
        continue;
      }
      const SparseVec gen{{g, f.one()}};
      Matrix lz(f, d, d);
      for (std::size_t j = 0; j < d; ++j) lz.set_column(j, coordinates_in(f, nz, piece.basis, z_mult(gen, piece.basis[j])));
      const auto roots = field_roots(characteristic_polynomial(lz), f);
      std::size_t covered = 0;
      Matrix rest = Matrix::identity(f, d);
      if (roots)
        for (const auto& lambda : *roots) {
          Matrix shifted = lz - lambda * Matrix::identity(f, d);
          rest = shifted * rest;
          Piece sub;
          for (const auto& k : kernel(shifted)) {
            SparseVec v;
            for (const auto& [j, c] : k) axpy(v, c, piece.basis[j]);
            sub.basis.push_back(v);
          }
          covered += sub.basis.size();
          next.push_back(std::move(sub));
        }
      if (covered < d) {
        // The complement on which this generator has no eigenvalue in the field.
        Piece sub;
        Subspace img(f, nz);
        for (std::size_t j = 0; j < d; ++j) {
          SparseVec v;
          for (const auto& [k, c] : rest.column(j)) axpy(v, c, piece.basis[k]);
          if (img.insert(v)) sub.basis.push_back(v);
        }
        next.push_back(std::move(sub));
      }
    }
    pieces = std::move(next);
  }

  std::size_t used = 0;
  for (const auto& piece : pieces) {
    if (piece.basis.size() != 1) continue;
    // piece = F v with v^2 = c v; e = v / c is a central idempotent.
    const SparseVec& v = piece.basis[0];
    const SparseVec vv = z_mult(v, v);
    const Scalar c = vv.front().second / v.front().second;
    SparseVec e;
    for (const auto& [i, x] : v) axpy(e, x / c, z[i]);
    const std::size_t block = rank(b.left(e));
    r.blocks.push_back(block);
    used += block;
  }
  std::sort(r.blocks.begin(), r.blocks.end());
  if (used < b.dim) {
    r.field_too_small = true;
    r.blocks.push_back(b.dim - used);
  }
  return r;
}

}  // namespace zhu
