#include "doctest.h"
#include "zhu/field.hpp"

#include <random>

using namespace zhu;

namespace {

// Lucas: binom(m, i) mod p is the product of digitwise binomials in base p.
long long lucas(long long m, long long i, long long p) {
  long long r = 1;
  while (m || i) {
    long long a = m % p, b = i % p;
    if (b > a) return 0;
    long long c = 1;
    for (long long k = 0; k < b; ++k) c = c * (a - k);
    for (long long k = 1; k <= b; ++k) c /= k;  // small digits: exact
    r = r * (c % p) % p;
    m /= p;
    i /= p;
  }
  return r;
}

}  // namespace

TEST_CASE("int_binomial examples") {
  CHECK(int_binomial(-3, 2) == 6);
  CHECK(int_binomial(7, 2) == 21);
  for (long long n : {-5LL, 0LL, 3LL, 100LL}) CHECK(int_binomial(n, 0) == 1);
  CHECK(int_binomial(3, 5) == 0);
  CHECK(int_binomial(-1, 7) == -1);
}

TEST_CASE("reduce examples") {
  auto f5 = Field::prime(5), f7 = Field::prime(7);
  CHECK(reduce(21, f5).residue() == 1);
  CHECK(reduce(10, f5).residue() == 0);
  CHECK(reduce(-1, f7).residue() == 6);
}

TEST_CASE("binomial_in_field examples") {
  CHECK(binomial_in_field(5, 2, Field::prime(5)).is_zero());
  CHECK(binomial_in_field(-1, 3, Field::prime(7)).residue() == 6);
  CHECK(binomial_in_field(4, 2, Field::rationals()) == Field::rationals().from_int(6));
}

TEST_CASE("Pascal identity") {
  for (long long m = -50; m <= 50; ++m)
    for (long long i = 1; i <= 20; ++i) CHECK(int_binomial(m, i) == int_binomial(m - 1, i) + int_binomial(m - 1, i - 1));
}

TEST_CASE("binomial_in_field matches the rational route then reduction") {
  auto q = Field::rationals();
  for (auto f : {Field::rationals(), Field::prime(3), Field::prime(7)})
    for (long long m = -30; m <= 30; ++m)
      for (long long i = 0; i <= 12; ++i) {
        mpq_class v = 1;
        for (long long k = 0; k < i; ++k) {
          mpq_class step(static_cast<long>(m - k), static_cast<long>(k + 1));
          step.canonicalize();
          v *= step;
        }
        CHECK(binomial_in_field(m, i, f) == f.from_mpq(v));
      }
  (void)q;
}

TEST_CASE("Lucas agreement in GF(p)") {
  for (long long p : {3LL, 5LL, 7LL}) {
    auto f = Field::prime(p);
    for (long long m = 0; m <= 300; ++m)
      for (long long i = 0; i <= m; ++i)
        REQUIRE(binomial_in_field(m, i, f).residue() == static_cast<std::uint64_t>(lucas(m, i, p)));
  }
}

TEST_CASE("field specs") {
  CHECK(Field::parse("Q").is_rational());
  CHECK(Field::parse("Fp:7").characteristic() == 7);
  CHECK_THROWS_AS(Field::parse("Fp:2"), FieldError);
  CHECK_THROWS_AS(Field::parse("Fp:9"), FieldError);
  CHECK_THROWS_AS(Field::parse("R"), FieldError);
  CHECK(Field::parse("Fp:3").to_string() == "Fp:3");
}

TEST_CASE("field axioms on random elements") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> d(-40, 40);
  for (auto f : {Field::rationals(), Field::prime(11)}) {
    for (int t = 0; t < 200; ++t) {
      Scalar den = f.from_int(d(rng) * 2 + 1);
      if (den.is_zero()) continue;
      Scalar a = f.from_int(d(rng)), b = f.from_int(d(rng)) / den, c = f.from_int(d(rng));
      CHECK((a + b) * c == a * c + b * c);
      CHECK(a - a == f.zero());
      if (!b.is_zero()) CHECK((a / b) * b == a);
    }
  }
  CHECK_THROWS_AS(Field::rationals().zero().inverse(), FieldError);
}

TEST_CASE("scalar parsing and printing") {
  auto q = Field::rationals();
  CHECK(q.parse_scalar("1/2").to_string() == "1/2");
  CHECK(q.parse_scalar("-6/4").to_string() == "-3/2");
  auto f7 = Field::prime(7);
  CHECK(f7.parse_scalar("1/2").residue() == 4);
  CHECK_THROWS_AS(q.parse_scalar("x"), FieldError);
  CHECK_THROWS_AS(f7.from_int(1) + q.from_int(1), FieldError);
}
