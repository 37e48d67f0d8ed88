#include "doctest.h"
#include "fock_oracle.hpp"
#include "zhu/voa.hpp"

#include <algorithm>

using namespace zhu;

namespace {

using fock::Poly;
using fock::to_poly;

State heis(const Field& f, std::vector<int> ks) {
  Monomial m;
  std::sort(ks.rbegin(), ks.rend());
  for (int k : ks) m.emplace_back(0, k);
  return State::of(f, m);
}

std::vector<State> basis_states(const Voa& v, int top) {
  std::vector<State> out;
  for (int d = 0; d <= top; ++d)
    for (const auto& m : v.basis(d)) out.push_back(State::of(v.field(), m));
  return out;
}

}  // namespace

TEST_CASE("vacuum modes") {
  auto v = build_heisenberg(Field::rationals());
  State b = heis(v.field(), {2, 1});
  CHECK(v.mode(v.vacuum(), -1, b) == b);
  CHECK(v.mode(v.vacuum(), 0, b).is_zero());
  CHECK(v.mode(v.vacuum(), -3, b).is_zero());
}

TEST_CASE("Heisenberg examples against the Fock oracle") {
  auto f = Field::rationals();
  auto v = build_heisenberg(f);
  State a = v.generator_state(0);
  CHECK(v.mode(a, 1, a) == v.vacuum());
  CHECK(v.mode(a, -2, a) == heis(f, {2, 1}));
  CHECK(v.divided_power(1, a) == heis(f, {2}));
  CHECK(v.divided_power(0, a) == a);
  CHECK(v.divided_power(1, v.vacuum()).is_zero());
}

TEST_CASE("generator modes agree with the Fock oracle") {
  for (auto f : {Field::rationals(), Field::prime(7)}) {
    auto v = build_heisenberg(f);
    State a = v.generator_state(0);
    for (const auto& b : basis_states(v, 5))
      for (long n = -4; n <= 5; ++n) {
        if (v.max_degree(b) + 1 - n - 1 > v.dmax()) continue;
        CHECK(to_poly(v.mode(a, n, b)) == fock::mode(f, n, to_poly(b)));
      }
  }
}

TEST_CASE("modes of composite states agree with the normal-ordered Fock oracle") {
  for (auto f : {Field::rationals(), Field::prime(5)}) {
    auto v = build_heisenberg(f);
    auto states = basis_states(v, 3);
    for (const auto& a : states)
      for (const auto& b : states)
        for (long k = -3; k <= 4; ++k) {
          if (*v.degree(a) + *v.degree(b) - k - 1 > v.dmax()) continue;
          CHECK(to_poly(v.mode(a, k, b)) == fock::state_mode(f, to_poly(a), k, to_poly(b)));
        }
  }
}

TEST_CASE("Virasoro modes of the Heisenberg conformal vector agree with the Fock oracle") {
  auto f = Field::rationals();
  auto v = build_heisenberg(f);
  for (const auto& b : basis_states(v, 4))
    for (long n = -2; n <= 3; ++n) CHECK(to_poly(v.virasoro(n, b)) == fock::virasoro(f, n, to_poly(b)));
}

TEST_CASE("built-in dimensions and L(0) grading") {
  auto q = Field::rationals();
  auto h = build_heisenberg(q);
  std::vector<std::size_t> hd, want_h{1, 1, 2, 3, 5};
  for (int d = 0; d <= 4; ++d) hd.push_back(h.basis(d).size());
  CHECK(hd == want_h);
  auto vir = build_virasoro(q, q.parse_scalar("1/2"));
  std::vector<std::size_t> vd, want_v{1, 0, 1, 1, 2, 2, 4};
  for (int d = 0; d <= 6; ++d) vd.push_back(vir.basis(d).size());
  CHECK(vd == want_v);
  for (int d = 0; d <= 4; ++d)
    for (const auto& m : h.basis(d)) {
      State s = State::of(q, m);
      CHECK(h.virasoro(0, s) == q.from_int(d) * s);
    }
}

TEST_CASE("grading and truncation of computed products") {
  auto v = build_virasoro(Field::rationals(), Field::rationals().from_int(3));
  auto states = basis_states(v, 5);
  for (const auto& a : states)
    for (const auto& b : states) {
      int da = *v.degree(a), db = *v.degree(b);
      for (long k = da + db - 1 - 4; k <= da + db + 2; ++k) {
        if (da + db - k - 1 > v.dmax()) continue;
        State r = v.mode(a, k, b);
        if (k > da + db - 1) CHECK(r.is_zero());
        if (!r.is_zero()) CHECK(v.degree(r) == std::optional<int>(da + db - static_cast<int>(k) - 1));
      }
    }
}

TEST_CASE("skew symmetry on built-ins") {
  for (auto f : {Field::rationals(), Field::prime(7)}) {
    auto h = build_heisenberg(f);
    auto vir = build_virasoro(f, f.one() / f.from_int(2));
    for (const Voa* v : {&h, &vir}) {
      auto states = basis_states(*v, 4);
      for (const auto& a : states)
        for (const auto& b : states)
          if (*v->degree(a) + *v->degree(b) <= 6) CHECK(check_skew_symmetry(*v, a, b).ok);
      CHECK(check_skew_symmetry(*v, v->vacuum(), states.back()).ok);
    }
  }
}

TEST_CASE("commutator formula examples") {
  auto f = Field::rationals();
  auto h = build_heisenberg(f);
  State a = h.generator_state(0);
  CHECK(check_commutator(h, a, a, 1, -1, h.vacuum()));
  // [a(1), a(-1)] 1 = 1
  State lhs = h.mode(a, 1, h.mode(a, -1, h.vacuum())) - h.mode(a, -1, h.mode(a, 1, h.vacuum()));
  CHECK(lhs == h.vacuum());
  CHECK(check_commutator(h, a, a, 3, 2, heis(f, {1})));
}

TEST_CASE("Virasoro bracket from omega modes") {
  for (auto f : {Field::rationals(), Field::prime(7), Field::prime(3)}) {
    auto vir = build_virasoro(f, f.one() / f.from_int(2));
    auto h = build_heisenberg(f);
    for (const Voa* v : {&vir, &h})
      for (const auto& p : basis_states(*v, 3))
        for (long m = -3; m <= 3; ++m)
          for (long n = -3; n <= 3; ++n) CHECK(check_virasoro_bracket(*v, m, n, p));
  }
}

TEST_CASE("divided power law") {
  auto f = Field::prime(3);
  auto h = build_heisenberg(f);
  for (const auto& a : basis_states(h, 3))
    for (int i = 0; i <= 3; ++i)
      for (int j = 0; j <= 3; ++j)
        if (*h.degree(a) + i + j <= h.dmax()) CHECK(check_divided_powers(h, i, j, a));
}

TEST_CASE("cutoff is enforced") {
  auto h = build_heisenberg(Field::rationals(), 4);
  State a = h.generator_state(0);
  CHECK_THROWS_AS(h.mode(a, -5, a), CutoffExceeded);
  CHECK_NOTHROW(h.mode_free(a, -5, a));
}

TEST_CASE("singular vectors of the Virasoro vacuum module") {
  auto q = Field::rationals();
  auto generic = build_virasoro(q, q.parse_scalar("7/3"));
  for (int l = 1; l <= 6; ++l) CHECK(find_singular_vectors(generic, l).empty());
  auto ising = build_virasoro(q, q.parse_scalar("1/2"));
  for (int l = 1; l <= 5; ++l) CHECK(find_singular_vectors(ising, l).empty());
  auto sv = find_singular_vectors(ising, 6);
  REQUIRE(sv.size() == 1);
  CHECK(ising.virasoro(1, sv[0]).is_zero());
  CHECK(ising.virasoro(2, sv[0]).is_zero());
  auto quot = ising.quotient(sv);
  CHECK(quot.basis(6).size() == 3);
  CHECK(quot.basis(5).size() == 2);
  CHECK(quot.quotient({}).basis(6).size() == 3);
  CHECK_THROWS_AS(ising.quotient({ising.vacuum()}), DataError);
  CHECK(ising.quotient({}).basis(6).size() == 4);
}

TEST_CASE("quotient is consistent: skew symmetry survives reduction") {
  auto q = Field::rationals();
  auto ising = build_virasoro(q, q.parse_scalar("1/2"), 10);
  auto quot = ising.quotient(find_singular_vectors(ising, 6));
  auto states = basis_states(quot, 4);
  for (const auto& a : states)
    for (const auto& b : states)
      if (*quot.degree(a) + *quot.degree(b) <= 8) CHECK(check_skew_symmetry(quot, a, b).ok);
}

TEST_CASE("presentation validation") {
  auto f = Field::rationals();
  ProductTable bad;
  bad.emplace(std::make_tuple(0, 0, 0), State::vacuum(f));  // a_0 a would have degree 1
  CHECK_THROWS_AS(Voa(f, {{"a", 1}}, bad, State(f), f.one()), DataError);
  auto h = build_heisenberg(f);
  CHECK(h.parse_label("a(-2)a(-1)") == Monomial{{0, 2}, {0, 1}});
  CHECK(h.label(Monomial{{0, 2}, {0, 1}}) == "a(-2)a(-1)");
  CHECK_THROWS_AS(h.parse_label("b(-1)"), DataError);
}
