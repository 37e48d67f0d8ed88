#include "doctest.h"
#include "zhu/io.hpp"

using namespace zhu;

TEST_CASE("emit, load, emit is a fixed point") {
  for (auto f : {Field::rationals(), Field::prime(7)})
    for (std::string name : {"heisenberg", "virasoro:1/2", "virasoro:-22/5"}) {
      auto v = builtin_voa(name, f, 9);
      const std::string once = dump_json(presentation_to_json(v));
      auto w = presentation_from_json(parse_json(once, "emitted"));
      CHECK(dump_json(presentation_to_json(w)) == once);
      for (int d = 0; d <= 9; ++d) CHECK(w.basis(d).size() == v.basis(d).size());
      auto a = w.generator_state(0);
      CHECK(w.mode(a, 1, a) == v.mode(v.generator_state(0), 1, v.generator_state(0)));
    }
}

TEST_CASE("serialized scalars") {
  auto v = builtin_voa("virasoro:1/2", Field::rationals());
  auto j = presentation_to_json(v);
  CHECK(j["central_charge"] == "1/2");
  CHECK(j["field"] == "Q");
  auto p = presentation_to_json(builtin_voa("heisenberg", Field::prime(5)));
  CHECK(p["field"] == "Fp:5");
  // omega = 1/2 a(-1)a(-1) = 3 mod 5
  CHECK(p["omega"][0]["coeff"] == 3);
  CHECK(scalar_from_json(Field::prime(5), Json("1/2"), "x") == Field::prime(5).from_int(3));
}

TEST_CASE("bad inputs") {
  CHECK_THROWS_AS(builtin_voa("monster", Field::rationals()), DataError);
  auto ising = builtin_voa("virasoro:1/2", Field::rationals());
  CHECK_THROWS_AS(presentation_to_json(ising.quotient(find_singular_vectors(ising, 6))), DataError);

  try {
    parse_json("{\n  \"field\": \"Q\",\n  oops\n}", "f.json");
    FAIL("expected a parse error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }

  auto j = presentation_to_json(builtin_voa("heisenberg", Field::rationals()));
  j["products"][0]["left"] = "b";
  CHECK_THROWS_WITH_AS(presentation_from_json(j), doctest::Contains("/products/0/left"), InputError);

  j = presentation_to_json(builtin_voa("heisenberg", Field::rationals()));
  j["omega"][0]["monomial"] = Json::array({Json::array({"a", 1}), Json::array({"a", 2})});
  CHECK_THROWS_WITH_AS(presentation_from_json(j), doctest::Contains("PBW order"), InputError);

  j = presentation_to_json(builtin_voa("heisenberg", Field::rationals()));
  j["products"][0]["value"][0]["monomial"] = Json::array({Json::array({"a", 1})});
  CHECK_THROWS_AS(presentation_from_json(j), InputError);
}

TEST_CASE("module files") {
  auto q = Field::rationals();
  auto v = builtin_voa("heisenberg", q, 10);
  auto A = an_window(v, 0, 4);
  auto u = module_from_json(parse_json(R"j({"dim": 1, "action": {"a(-1)": [["3/2"]]}})j", "u"), A);
  CHECK(u.action.at("a(-1)")(0, 0) == q.parse_scalar("3/2"));
  CHECK(module_from_json(module_to_json(u), A).action == u.action);
  CHECK_THROWS_AS(module_from_json(parse_json(R"j({"dim": 1, "action": {"zz": [[1]]}})j", "u"), A), InputError);
  CHECK_THROWS_AS(module_from_json(parse_json(R"j({"dim": 2, "action": {"a(-1)": [[1]]}})j", "u"), A), InputError);
}
