#include "doctest.h"
#include "zhu/semisimple.hpp"

#include <random>
#include <set>

using namespace zhu;

namespace {

SparseVec e(const Field& f, std::size_t i) { return {{i, f.one()}}; }

// Matrix algebra M_k(F) on the basis E_ij, index i*k + j.
Algebra matrix_algebra(const Field& f, std::size_t k) {
  Algebra a{f, k * k, {}};
  a.mul.assign(a.dim, std::vector<SparseVec>(a.dim));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t l = 0; l < k; ++l) a.mul[i * k + j][j * k + l] = e(f, i * k + l);
  return a;
}

// F[x] / (poly), poly monic of degree d given low to high (d+1 coefficients).
Algebra truncated_polynomials(const Field& f, const std::vector<long long>& poly) {
  const std::size_t d = poly.size() - 1;
  Algebra a{f, d, {}};
  a.mul.assign(d, std::vector<SparseVec>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      std::vector<Scalar> c(2 * d, f.zero());
      c[i + j] = f.one();
      for (std::size_t top = 2 * d - 1; top >= d; --top) {
        const Scalar lead = c[top];
        if (lead.is_zero()) continue;
        for (std::size_t k = 0; k <= d; ++k) c[top - d + k] -= lead * f.from_int(poly[k]);
      }
      c.resize(d);
      a.mul[i][j] = from_dense(c);
    }
  return a;
}

Matrix random_matrix(const Field& f, std::size_t n, std::mt19937& rng) {
  std::uniform_int_distribution<int> d(-3, 3);
  Matrix m(f, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = f.from_int(d(rng));
  return m;
}

}  // namespace

TEST_CASE("characteristic polynomial satisfies Cayley-Hamilton") {
  std::mt19937 rng(5);
  for (auto f : {Field::rationals(), Field::prime(5)})
    for (std::size_t n = 1; n <= 6; ++n)
      for (int trial = 0; trial < 5; ++trial) {
        Matrix m = random_matrix(f, n, rng);
        auto p = characteristic_polynomial(m);
        REQUIRE(p.size() == n + 1);
        CHECK(p.back() == f.one());
        Matrix acc(f, n, n), pw = Matrix::identity(f, n);
        for (const auto& c : p) {
          acc = acc + c * pw;
          pw = pw * m;
        }
        CHECK(acc.is_zero());
      }
}

TEST_CASE("roots in the base field") {
  auto q = Field::rationals();
  // (x - 1/2)(x + 3) x = x^3 + 5/2 x^2 - 3/2 x
  auto r = field_roots({q.zero(), q.parse_scalar("-3/2"), q.parse_scalar("5/2"), q.one()}, q);
  REQUIRE(r);
  std::set<std::string> got;
  for (const auto& x : *r) got.insert(x.to_string());
  CHECK(got == std::set<std::string>{"0", "1/2", "-3"});
  CHECK(field_roots({q.from_int(-2), q.zero(), q.one()}, q)->empty());
  auto f7 = Field::prime(7);
  CHECK(field_roots({f7.from_int(-2), f7.zero(), f7.one()}, f7)->size() == 2);
}

TEST_CASE("small fixtures") {
  auto q = Field::rationals();
  Algebra one{q, 1, {{e(q, 0)}}};
  auto r1 = semisimple_analyze(one);
  CHECK(r1.radical_dim == 0);
  CHECK(r1.blocks == std::vector<std::size_t>{1});

  // F[x]/(x^2): x * x = 0 adjoined to the identity.
  auto dual = semisimple_analyze(truncated_polynomials(q, {0, 0, 1}));
  CHECK(dual.radical_dim == 1);
  CHECK(dual.blocks == std::vector<std::size_t>{1});

  auto m2 = semisimple_analyze(matrix_algebra(q, 2));
  CHECK(m2.radical_dim == 0);
  CHECK(m2.blocks == std::vector<std::size_t>{4});
  CHECK_FALSE(m2.field_too_small);

  // Q[x]/(x^2 - 2) is a field that Q cannot split; GF(7) can.
  auto sqrt2 = semisimple_analyze(truncated_polynomials(q, {-2, 0, 1}));
  CHECK(sqrt2.radical_dim == 0);
  CHECK(sqrt2.field_too_small);
  CHECK(sqrt2.blocks == std::vector<std::size_t>{2});
  auto split7 = semisimple_analyze(truncated_polynomials(Field::prime(7), {-2, 0, 1}));
  CHECK(split7.blocks == std::vector<std::size_t>{1, 1});
  CHECK_FALSE(split7.field_too_small);
}

TEST_CASE("upper triangular matrices have a one-dimensional radical") {
  auto q = Field::rationals();
  // basis E11, E12, E22
  Algebra t{q, 3, {}};
  t.mul.assign(3, std::vector<SparseVec>(3));
  t.mul[0][0] = e(q, 0);
  t.mul[0][1] = e(q, 1);
  t.mul[1][2] = e(q, 1);
  t.mul[2][2] = e(q, 2);
  auto r = semisimple_analyze(t);
  CHECK(r.radical_dim == 1);
  CHECK(r.blocks == std::vector<std::size_t>{1, 1});
}

TEST_CASE("small characteristic uses the Frobenius kernel") {
  auto f3 = Field::prime(3);
  // GF(3)[x]/(x^3): dim 3 = p, radical (x) of dim 2.
  auto r = semisimple_analyze(truncated_polynomials(f3, {0, 0, 0, 1}));
  CHECK(r.radical_method == "frobenius");
  CHECK(r.radical_dim == 2);
  CHECK(r.blocks == std::vector<std::size_t>{1});
  // GF(3)[x]/(x^3 - x) = GF(3)^3.
  auto s = semisimple_analyze(truncated_polynomials(f3, {0, -1, 0, 1}));
  CHECK(s.radical_dim == 0);
  CHECK(s.blocks == std::vector<std::size_t>{1, 1, 1});
  auto m = semisimple_analyze(matrix_algebra(f3, 2));
  CHECK(m.radical_method == "unsupported");
  CHECK_FALSE(m.semisimple());
}

TEST_CASE("Ising A_0 window: three one-dimensional blocks at weights 0, 1/2, 1/16") {
  auto q = Field::rationals();
  auto vir = build_virasoro(q, q.parse_scalar("1/2"));
  auto ising = vir.quotient(find_singular_vectors(vir, 6));
  auto w = an_window(ising, 0, 8);
  REQUIRE(w.dim() == 3);
  auto a = algebra_from_window(w);
  CHECK(a.commutative());
  auto r = semisimple_analyze(a);
  CHECK(r.radical_dim == 0);
  CHECK(r.blocks == std::vector<std::size_t>{1, 1, 1});
  CHECK_FALSE(r.field_too_small);
  // Eigenvalues of [omega] are the conformal weights of the three irreducibles.
  auto roots = field_roots(characteristic_polynomial(a.left(w.omega)), q);
  REQUIRE(roots);
  std::set<std::string> got;
  for (const auto& x : *roots) got.insert(x.to_string());
  CHECK(got == std::set<std::string>{"0", "1/2", "1/16"});
  CHECK_THROWS_AS(algebra_from_window(an_window(ising, 0, 6)), WindowNotClosed);
}
