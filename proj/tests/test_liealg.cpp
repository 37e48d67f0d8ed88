#include "doctest.h"
#include "zhu/mode_liealg.hpp"

using namespace zhu;

namespace {

LoopCombo mode_of(const Voa& v, const Monomial& m, long k) {
  return LoopCombo::of({State::of(v.field(), m), k});
}

LoopCombo vac(const Voa& v) { return mode_of(v, {}, -1); }

std::vector<LoopCombo> sample(const LoopAlgebra& L, int maxdeg, long maxm) {
  std::vector<LoopCombo> out;
  const Voa& v = L.voa();
  for (int d = 1; d <= maxdeg; ++d)
    for (const auto& mono : v.basis(d))
      for (long m = -maxm; m <= maxm; ++m) {
        auto x = L.reduce(mode_of(v, mono, m));
        if (!x.is_zero()) out.push_back(x);
      }
  return out;
}

}  // namespace

TEST_CASE("Heisenberg loop brackets") {
  for (auto f : {Field::rationals(), Field::prime(5)}) {
    auto v = build_heisenberg(f, 8);
    LoopAlgebra L(v, 8);
    const Monomial a{{0, 1}};
    for (long p = -4; p <= 4; ++p)
      for (long q = -4; q <= 4; ++q) {
        auto br = L.bracket(mode_of(v, a, p), mode_of(v, a, q));
        LoopCombo want(f);
        if (p + q == 0) want = f.from_int(p) * vac(v);
        CHECK(br == want);
      }
    CHECK(L.reduce(mode_of(v, {}, 3)).is_zero());
    CHECK(L.reduce(mode_of(v, {}, -1)) == vac(v));
  }
}

TEST_CASE("derivatives reduce to lower modes") {
  auto q = Field::rationals();
  auto v = build_heisenberg(q, 8);
  LoopAlgebra L(v, 8);
  // (D a)(m) = -m a(m - 1)
  for (long m = -3; m <= 3; ++m) {
    auto lhs = L.reduce(mode_of(v, {{0, 2}}, m));
    auto rhs = L.reduce(q.from_int(-m) * mode_of(v, {{0, 1}}, m - 1));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("Virasoro loop brackets") {
  auto q = Field::rationals();
  const Scalar c = q.parse_scalar("1/2");
  auto v = build_virasoro(q, c, 8);
  LoopAlgebra L(v, 8);
  const Monomial w{{0, 1}};
  auto Lm = [&](long m) { return mode_of(v, w, m + 1); };
  for (long m = -3; m <= 3; ++m)
    for (long n = -3; n <= 3; ++n) {
      auto want = q.from_int(m - n) * L.reduce(Lm(m + n));
      if (m + n == 0) want = want + (c * q.from_int(m * m * m - m) * q.parse_scalar("1/12")) * vac(v);
      CHECK(L.bracket(Lm(m), Lm(n)) == want);
    }
}

TEST_CASE("antisymmetry and Jacobi") {
  struct Case {
    Voa v;
    int maxdeg;
  };
  auto q = Field::rationals();
  auto f5 = Field::prime(5);
  std::vector<Case> cases{{build_heisenberg(q, 12), 3},
                          {build_heisenberg(f5, 12), 3},
                          {build_virasoro(q, q.parse_scalar("1/2"), 12), 4},
                          {build_virasoro(f5, f5.from_int(3), 12), 4}};
  for (const auto& cs : cases) {
    LoopAlgebra L(cs.v, 12);
    auto xs = sample(L, cs.maxdeg, 2);
    for (const auto& x : xs)
      for (const auto& y : xs) CHECK((L.bracket(x, y) + L.bracket(y, x)).is_zero());
    const std::size_t step = xs.size() > 12 ? xs.size() / 12 : 1;
    for (std::size_t i = 0; i < xs.size(); i += step)
      for (std::size_t j = 0; j < xs.size(); j += step)
        for (std::size_t k = 0; k < xs.size(); k += step) {
          const auto &x = xs[i], &y = xs[j], &z = xs[k];
          auto jac = L.bracket(x, L.bracket(y, z)) + L.bracket(y, L.bracket(z, x)) + L.bracket(z, L.bracket(x, y));
          CHECK(jac.is_zero());
        }
  }
}

TEST_CASE("degree-zero modes map onto commutators in A_n") {
  auto q = Field::rationals();
  for (auto v : {build_heisenberg(q, 10), build_virasoro(q, q.parse_scalar("1/2"), 10)})
    for (int n = 0; n <= 1; ++n) {
      auto A = an_window(v, n, 8);
      LoopAlgebra L(v, 10);
      for (std::size_t i = 0; i < A.dim(); ++i)
        for (std::size_t j = 0; j < A.dim(); ++j) {
          auto pij = A.product(i, j), pji = A.product(j, i);
          if (!pij || !pji) continue;
          auto x = mode_of(v, A.reps[i], A.rep_degrees[i] - 1);
          auto y = mode_of(v, A.reps[j], A.rep_degrees[j] - 1);
          auto img = L.to_an_lie(L.bracket(x, y), A);
          SparseVec want = *pij;
          axpy(want, -q.one(), *pji);
          CHECK(img == want);
        }
    }
}

TEST_CASE("components list one mode per basis vector") {
  auto v = build_heisenberg(Field::rationals(), 8);
  LoopAlgebra L(v, 8);
  auto c = L.component(0, 2);
  REQUIRE(c.size() == 4);
  CHECK(c[0].m == -1);
  CHECK(c[1].m == 0);
  CHECK(L.degree(LoopCombo::of(c[3])) == 0);
  CHECK_THROWS_AS(L.to_an_lie(mode_of(v, {{0, 1}}, 1), an_window(v, 0, 4)), DataError);
}
