#include "doctest.h"
#include "zhu/graded_space.hpp"

#include <random>

using namespace zhu;

namespace {

SparseVec vec(const Field& f, std::initializer_list<long long> dense) {
  std::vector<Scalar> d;
  for (auto x : dense) d.push_back(f.from_int(x));
  return from_dense(d);
}

SparseVec random_vec(const Field& f, std::size_t n, std::mt19937& rng, int density) {
  std::uniform_int_distribution<int> coin(0, 99), val(-3, 3);
  std::vector<Scalar> d(n, f.zero());
  for (auto& x : d)
    if (coin(rng) < density) x = f.from_int(val(rng));
  return from_dense(d);
}

}  // namespace

TEST_CASE("span_insert examples") {
  auto f = Field::rationals();
  Subspace s(f, 2);
  CHECK_FALSE(s.insert(vec(f, {0, 0})));
  CHECK(s.dim() == 0);
  CHECK(s.insert(vec(f, {1, 1})));
  CHECK(s.insert(vec(f, {0, 1})));
  CHECK_FALSE(s.insert(vec(f, {1, 0})));
  CHECK(s.dim() == 2);
  CHECK_THROWS_AS(s.insert(SparseVec{{5, f.one()}}), LinalgError);
}

TEST_CASE("member examples") {
  auto f = Field::prime(5);
  Subspace empty(f, 2);
  CHECK(empty.member({}));
  Subspace e1(f, 2);
  e1.insert(vec(f, {1, 0}));
  CHECK_FALSE(e1.member(vec(f, {0, 1})));
  Subspace s(f, 2);
  s.insert(vec(f, {1, 1}));
  s.insert(vec(f, {0, 1}));
  CHECK(s.member(vec(f, {1, 0})));
}

TEST_CASE("quotient_basis examples") {
  auto f = Field::rationals();
  Subspace zero(f, 3);
  QuotientBasis q0(zero);
  CHECK(q0.size() == 3);
  CHECK(q0.project(vec(f, {1, 2, 3})) == vec(f, {1, 2, 3}));

  Subspace all(f, 2);
  all.insert(vec(f, {1, 0}));
  all.insert(vec(f, {0, 1}));
  CHECK(QuotientBasis(all).size() == 0);

  Subspace diag(f, 2);
  diag.insert(vec(f, {1, -1}));
  QuotientBasis q(diag);
  CHECK(q.size() == 1);
  CHECK(q.project(vec(f, {1, 0})) == q.project(vec(f, {0, 1})));
}

TEST_CASE("stabilization_detect examples") {
  CHECK(stabilization_detect({1, 2, 3, 3, 3, 3}, 3) == std::optional<std::size_t>(2));
  CHECK_FALSE(stabilization_detect({1, 2, 3}, 3).has_value());
  CHECK(stabilization_detect({5, 5, 5, 5}, 2) == std::optional<std::size_t>(0));
  CHECK_THROWS_AS(stabilization_detect({3, 2}, 2), LinalgError);
}

TEST_CASE("membership agrees with non-growth; dimensions add up") {
  std::mt19937 rng(11);
  for (auto f : {Field::rationals(), Field::prime(7)})
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t n = 12;
      Subspace s(f, n);
      for (int k = 0; k < 6; ++k) s.insert(random_vec(f, n, rng, 30));
      for (int k = 0; k < 10; ++k) {
        SparseVec v = random_vec(f, n, rng, 25);
        Subspace copy = s;
        CHECK(s.member(v) == !copy.insert(v));
      }
      CHECK(QuotientBasis(s).size() + s.dim() == n);
    }
}

TEST_CASE("row reduction is deterministic and dense fallback is transparent") {
  std::mt19937 rng(3);
  auto f = Field::rationals();
  std::vector<SparseVec> vs;
  for (int k = 0; k < 8; ++k) vs.push_back(random_vec(f, 10, rng, 80));
  Subspace a(f, 10), b(f, 10);
  for (const auto& v : vs) a.insert(v);
  for (const auto& v : vs) b.insert(v);
  CHECK(a.pivots() == b.pivots());
  CHECK(a.basis() == b.basis());
  for (const auto& v : vs) CHECK(a.member(v));
}

TEST_CASE("kernel and rank") {
  auto f = Field::rationals();
  Matrix m(f, 2, 3);
  m(0, 0) = f.from_int(1);
  m(0, 1) = f.from_int(2);
  m(1, 2) = f.from_int(3);
  CHECK(rank(m) == 2);
  auto ker = kernel(m);
  REQUIRE(ker.size() == 1);
  Matrix x(f, 3, 1);
  x.set_column(0, ker[0]);
  CHECK((m * x).is_zero());
  CHECK(Matrix::identity(f, 3) * x == x);
}

TEST_CASE("graded space ordering") {
  GradedSpace g({{2, "b"}, {0, "z"}, {2, "a"}});
  CHECK(g.coord(0).label == "z");
  CHECK(g.coord(1).label == "a");
  CHECK(g.dim(2) == 2);
  CHECK(g.index_of("b") == std::optional<std::size_t>(2));
  CHECK_THROWS_AS(GradedSpace({{1, "x"}, {2, "x"}}), LinalgError);
}
