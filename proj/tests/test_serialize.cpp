#include "gaudin/serialize.hpp"

#include "doctest.h"

using namespace gaudin;

namespace {

using RF = RationalFunction<Rational>;
using Poly = Polynomial<Rational>;

ScalarDiffOp<Rational> two_point_operator() {
  RF h1(Poly{1, -2}, Poly{0, -1, 1});
  RF h2(Poly{2}, Poly{0, -1, 1});
  return ScalarDiffOp<Rational>({h2, h1, RF(1L)});
}

}  // namespace

TEST_CASE("operators round trip bit for bit") {
  auto d = two_point_operator();
  Json j = operator_to_json(d);
  CHECK(j.at("order") == 2);
  CHECK(j.at("coeffs").size() == 3);
  CHECK(j.at("coeffs")[0].at("num")[0] == "2");

  auto back = operator_from_json(j);
  CHECK(back == d);
  CHECK(operator_to_json(back).dump() == j.dump());

  SUBCASE("seeded random operators") {
    Rng rng(42);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<RF> c;
      int order = 1 + static_cast<int>(rng.next() % 3);
      for (int k = 0; k <= order; ++k) {
        auto coeff = [&](int deg) {
          std::vector<Rational> v;
          for (int i = 0; i <= deg; ++i)
            v.push_back(frac(static_cast<long>(rng.next() % 19) - 9,
                             1 + static_cast<long>(rng.next() % 7)));
          return Poly(std::move(v));
        };
        Poly den = coeff(static_cast<int>(rng.next() % 3));
        if (den.is_zero()) den = Poly(1L);
        c.emplace_back(coeff(static_cast<int>(rng.next() % 4)), den);
      }
      ScalarDiffOp<Rational> r(std::move(c));
      auto rt = operator_from_json(operator_to_json(r));
      CHECK(rt == r);
      CHECK(operator_to_json(rt).dump() == operator_to_json(r).dump());
    }
  }

  SUBCASE("malformed operators are rejected") {
    CHECK_THROWS_AS(operator_from_json(Json::array()), input_error);
    CHECK_THROWS_AS(operator_from_json(Json{{"coeffs", Json::array()}}),
                    input_error);
    Json bad = operator_to_json(d);
    bad["order"] = 5;
    CHECK_THROWS_AS(operator_from_json(bad), input_error);
    Json zero_den = operator_to_json(d);
    zero_den["coeffs"][0]["den"] = Json::array();
    CHECK_THROWS_AS(operator_from_json(zero_den), input_error);
    Json no_den = operator_to_json(d);
    no_den["coeffs"][0].erase("den");
    CHECK_THROWS_AS(operator_from_json(no_den), input_error);
  }
}

TEST_CASE("flag points round trip") {
  SchubertPoint<Rational> x(Partition{1, 1},
                            {Poly{0, 0, 1}, Poly{frac(-1, 2), 1}});
  Json j = point_to_json(x);
  CHECK(j.at("N") == 2);
  CHECK(j.at("d") == 3);
  CHECK(j.at("lambda") == Json::array({1, 1}));
  CHECK(j.at("flag_coeffs").at("1,2") == "1");
  CHECK(j.at("flag_coeffs").at("2,0") == "-1/2");
  CHECK(!j.at("flag_coeffs").contains("1,0"));

  auto back = point_from_json(j);
  CHECK(back == x);
  CHECK(point_to_json(back).dump() == j.dump());

  Json bad = j;
  bad["flag_coeffs"]["9,0"] = "1";
  CHECK_THROWS_AS(point_from_json(bad), input_error);
  Json badkey = j;
  badkey["flag_coeffs"]["first"] = "1";
  CHECK_THROWS_AS(point_from_json(badkey), input_error);
}

TEST_CASE("vectors carry index tuples") {
  config::set_precision(256);
  ModuleSpace<MpComplex> space(2, {MpComplex(0L), MpComplex(1L)});
  VecX<MpComplex> v = VecX<MpComplex>::Zero(4);
  v[1] = MpComplex(1L);
  v[2] = MpComplex(MpReal(-0.5), MpReal(2L));
  Json j = vector_to_json(space, v);
  CHECK(j.size() == 2);
  CHECK(j.at("1,2") == "1");
  CHECK(j.at("2,1") == "-0.5+2i");
  CHECK(!j.contains("1,1"));
}

TEST_CASE("instances round trip with validation") {
  ProblemInstance inst;
  inst.name = "two-point";
  inst.rank = 2;
  inst.big_lambda = {Partition{1, 0}, Partition{1, 0}};
  inst.b = {Rational(0), frac(1, 3)};
  inst.lambda = Partition{1, 1};

  Json j = instance_to_json(inst, 7, 256);
  CHECK(j.at("N") == 2);
  CHECK(j.at("factors")[1].at("b") == "1/3");
  CHECK(j.at("factors")[1].at("n_s") == 1);

  InstanceConfig back = instance_from_json(j);
  CHECK(back.instance.name == inst.name);
  CHECK(back.instance.rank == 2);
  CHECK(back.instance.b == inst.b);
  CHECK(back.instance.lambda.parts() == inst.lambda.parts());
  CHECK(back.seed == 7);
  CHECK(back.precision == 256);
  CHECK(!back.op);

  SUBCASE("operator payload is picked up") {
    j["operator"] = operator_to_json(two_point_operator());
    InstanceConfig with_op = instance_from_json(j);
    REQUIRE(with_op.op.has_value());
    CHECK(*with_op.op == two_point_operator());
  }

  SUBCASE("field validation") {
    Json no_b = j;
    no_b["factors"][0].erase("b");
    CHECK_THROWS_AS(instance_from_json(no_b), input_error);
    Json bad_ns = j;
    bad_ns["factors"][0]["n_s"] = 3;
    CHECK_THROWS_AS(instance_from_json(bad_ns), input_error);
    Json no_weight = j;
    no_weight.erase("weight");
    CHECK_THROWS_AS(instance_from_json(no_weight), input_error);
    CHECK_THROWS_AS(instance_from_json(Json::array()), input_error);
  }
}

TEST_CASE("reports dump deterministically") {
  PipelineReport rep;
  rep.instance = "demo";
  rep.seed = 11;
  rep.precision = 256;
  rep.assertions.push_back(Assertion{"first", true, 0.5, ""});
  rep.assertions.push_back(Assertion{"second", false, 2.0, "why"});

  Json j = report_to_json(rep);
  CHECK(j.at("instance") == "demo");
  CHECK(j.at("seeds") == 11);
  CHECK(j.at("precision") == 256);
  REQUIRE(j.at("assertions").size() == 2);
  CHECK(j.at("assertions")[0].at("name") == "first");
  CHECK(!j.at("assertions")[0].contains("note"));
  CHECK(j.at("assertions")[1].at("note") == "why");
  CHECK(j.dump(2) == report_to_json(rep).dump(2));
}
