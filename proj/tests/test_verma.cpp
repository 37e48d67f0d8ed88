#include "doctest.h"
#include "fock_oracle.hpp"
#include "zhu/verma.hpp"

#include <set>

using namespace zhu;

namespace {

AnModule scalar_module(const Voa& v, const std::map<std::string, Scalar>& gens) {
  const Field& f = v.field();
  AnModule u{f, 1, {}};
  for (const auto& [label, x] : gens) {
    Matrix m(f, 1, 1);
    m(0, 0) = x;
    u.action[label] = m;
  }
  return u;
}

std::vector<std::size_t> partition_counts(int top) {
  std::vector<std::size_t> out;
  for (int k = 0; k <= top; ++k) out.push_back(fock::partitions(k).size());
  return out;
}

// Ising irreducible characters, by the Rocha-Caridi formula for (p, p') = (3, 4):
// sum_k q^{((24k + 4r - 3s)^2 - 1)/48} - q^{((24k + 4r + 3s)^2 - 1)/48}, over prod (1 - q^m).
std::vector<long> ising_character(int r, int s, int top) {
  auto e = [](long x) { return (x * x - 1) / 48; };
  const long base = e(4 * r - 3 * s);
  std::vector<long> num(top + 1, 0);
  for (long k = -10; k <= 10; ++k) {
    const long plus = e(24 * k + 4 * r - 3 * s) - base, minus = e(24 * k + 4 * r + 3 * s) - base;
    if (plus >= 0 && plus <= top) num[plus] += 1;
    if (minus >= 0 && minus <= top) num[minus] -= 1;
  }
  std::vector<long> out(top + 1, 0);
  const auto parts = partition_counts(top);
  for (int i = 0; i <= top; ++i)
    for (int j = 0; i + j <= top; ++j) out[i + j] += num[i] * static_cast<long>(parts[j]);
  return out;
}

}  // namespace

TEST_CASE("Heisenberg Fock module from the induced construction") {
  auto q = Field::rationals();
  auto v = build_heisenberg(q, 12);
  auto U = scalar_module(v, {{"a(-1)", q.one()}});
  InducedModule M(v, U, 0, 6, 6);
  std::vector<std::size_t> dims;
  for (int k = 0; k <= 6; ++k) dims.push_back(M.level_dim(k));
  CHECK(dims == partition_counts(6));

  InducedModule M4(v, U, 0, 4, 4);
  auto W = w_closure(M4, 4);
  CHECK(W.dims() == std::vector<std::size_t>(5, 0));
  auto J = radical_J(M4, W);
  CHECK(J.dims() == std::vector<std::size_t>(5, 0));
  auto L = ln_quotient(M4, J);
  CHECK(L.dims == std::vector<std::size_t>{1, 1, 2, 3, 5});

  auto om0 = omega_n(M4, W, 0, 4).dims();
  auto om1 = omega_n(M4, W, 1, 4).dims();
  CHECK(om0 == std::vector<std::size_t>{1, 0, 0, 0, 0});
  CHECK(om1 == std::vector<std::size_t>{1, 1, 0, 0, 0});
}

TEST_CASE("generator matrices satisfy the bracket and P_n kills U") {
  auto q = Field::rationals();
  for (auto v : {build_heisenberg(q, 10), build_virasoro(q, q.parse_scalar("1/2"), 10)}) {
    const std::string g = v.label(Monomial{{0, 1}});
    for (int n = 0; n <= 1; ++n) {
      auto U = scalar_module(v, {{g, q.parse_scalar("3/2")}});
      InducedModule M(v, U, n, 3, 4);
      const int dg = v.generators()[0].degree;
      for (int k = 0; k <= 3; ++k)
        for (long p = dg - 4; p <= dg + 3; ++p)
          for (long r = dg - 4; r <= dg + 3; ++r) {
            const long dp = dg - 1 - p, dr = dg - 1 - r;
            if (k + dr < 0 || k + dr + dp < 0 || k + dp < 0) continue;
            if (k + dr > 6 || k + dp > 6 || k + dp + dr > 6) continue;
            Matrix lhs = M.generator_matrix(0, p, k + static_cast<int>(dr)) * M.generator_matrix(0, r, k) -
                         M.generator_matrix(0, r, k + static_cast<int>(dp)) * M.generator_matrix(0, p, k);
            const auto& br = M.bracket({0, dp}, {0, dr});
            Matrix rhs(q, lhs.rows(), lhs.cols());
            for (const auto& [z, c] : br.modes) rhs = rhs + c * M.generator_matrix(z.g, dg - 1 - z.d, k);
            if (!br.central.is_zero()) rhs = rhs + br.central * Matrix::identity(q, lhs.cols());
            CHECK(lhs == rhs);
          }
      // modes of degree < -n annihilate U
      for (long d = -n - 1; d >= -n - 3; --d) {
        auto m = M.generator_matrix(0, dg - 1 - d, n);
        if (m.rows() == 0) continue;
        CHECK(m.column(M.u_index(0)).empty());
      }
    }
  }
}

TEST_CASE("composite modes of the lambda = 0 Fock module match the vacuum module") {
  for (auto f : {Field::rationals(), Field::prime(7)}) {
    auto v = build_heisenberg(f, 10);
    auto U = scalar_module(v, {{"a(-1)", f.zero()}});
    InducedModule M(v, U, 0, 4, 3);
    VacuumModule V(v, 8);
    // basis permutation by labels
    std::vector<std::vector<std::size_t>> perm(8);
    for (int k = 0; k <= 7; ++k) {
      std::map<std::string, std::size_t> idx;
      for (std::size_t i = 0; i < V.level_dim(k); ++i) idx[v.label(v.basis(k)[i])] = i;
      for (std::size_t i = 0; i < M.level_dim(k); ++i) {
        std::string l = M.basis_label(k, i);
        l = l.substr(0, l.rfind('|') == std::string::npos ? 0 : l.rfind('|'));
        perm[k].push_back(idx.at(l.empty() ? "1" : l));
      }
    }
    for (int d = 1; d <= 3; ++d)
      for (const auto& mono : v.basis(d)) {
        const State a = State::of(f, mono);
        for (int k = 0; k <= 4; ++k)
          for (long m = -3; m <= d + k; ++m) {
            const long t = k + d - m - 1;
            if (t < 0 || t > 7) continue;
            Matrix got = M.monomial_matrix(mono, m, k);
            Matrix want = V.mode_matrix(a, m, k);
            bool same = true;
            for (std::size_t i = 0; i < got.rows(); ++i)
              for (std::size_t j = 0; j < got.cols(); ++j)
                if (got(i, j) != want(perm[t][i], perm[k][j])) same = false;
            CHECK_MESSAGE(same, v.label(mono) << " mode " << m << " level " << k);
          }
      }
  }
}

TEST_CASE("the level-n action of the induced module is an A_0 module") {
  auto q = Field::rationals();
  auto v = build_heisenberg(q, 10);
  auto A = an_window(v, 0, 6);
  auto U = scalar_module(v, {{"a(-1)", q.from_int(2)}});
  InducedModule M(v, U, 0, 2, 4);
  auto full = AnModule::from_level(M, 0, A);
  CHECK(full.check(A).empty());
  CHECK(full.of_class(A, A.class_of(v.generator_state(0)))(0, 0) == q.from_int(2));
  CHECK(full.of_class(A, A.class_of(v.omega()))(0, 0) == q.from_int(2));
}

TEST_CASE("Ising modules: L_0 levels match the irreducible characters") {
  auto q = Field::rationals();
  auto vir = build_virasoro(q, q.parse_scalar("1/2"), 12);
  auto ising = vir.quotient(find_singular_vectors(vir, 6));
  const int top = 4;
  struct Case {
    const char* h;
    int r, s;
  };
  for (auto c : {Case{"0", 1, 1}, Case{"1/2", 2, 1}, Case{"1/16", 1, 2}}) {
    auto U = scalar_module(ising, {{"w(-1)", q.parse_scalar(c.h)}});
    InducedModule M(ising, U, 0, top, 6);
    auto W = w_closure(M, 6);
    auto J = radical_J(M, W);
    auto L = ln_quotient(M, J);
    auto chi = ising_character(c.r, c.s, top);
    std::vector<std::size_t> want(chi.begin(), chi.end());
    CHECK_MESSAGE(L.dims == want, "h = " << c.h);
    std::vector<std::size_t> mdims;
    for (int k = 0; k <= top; ++k) mdims.push_back(M.level_dim(k) - W.levels[k].dim());
    // the quotient by W is already irreducible for a rational VOA
    CHECK_MESSAGE(mdims == want, "h = " << c.h);
  }
}

TEST_CASE("n = 1: the degree-one space of the Heisenberg VOA induces the VOA") {
  auto q = Field::rationals();
  auto v = build_heisenberg(q, 10);
  auto A = an_window(v, 1, 6);
  VacuumModule V(v, 2);
  auto U = AnModule::from_level(V, 1, A);
  REQUIRE(U.dim == 1);
  CHECK(U.check(A).empty());
  InducedModule M(v, U, 1, 4, 4);
  auto W = w_closure(M, 4, &A);
  auto J = radical_J(M, W);
  auto L = ln_quotient(M, J);
  CHECK(L.dims == std::vector<std::size_t>{1, 1, 2, 3, 5});
  CHECK(M.level_dim(1) - W.levels[1].dim() == 1);

  // <u', o_1(a) o_{-1}(a) u> from the pairing recursion and from the module
  PairingState P(A, U);
  const State a = v.generator_state(0);
  const Scalar paired = P.pair({q.one()}, {{1, a}, {-1, a}}, 0);
  SparseVec x = M.apply(a, 1, 1, {{M.u_index(0), q.one()}});  // o_{-1}(a) = a(1)
  x = M.apply(a, -1, 0, x);                                    // o_1(a) = a(-1)
  SparseVec diff = x;
  axpy(diff, -paired, {{M.u_index(0), q.one()}});
  CHECK(J.levels[1].member(diff));
  CHECK(paired == q.one());
  CHECK(P.pair({q.from_int(3)}, {}, 0) == q.from_int(3));
  CHECK_THROWS_AS(P.pair({q.one()}, {{-1, a}, {1, a}}, 0), DataError);
}
