#include <doctest.h>

#include "riskq/json_io.hpp"

using namespace riskq;
using io::JsonArray;
using io::JsonObject;

TEST_CASE("distribution parsing") {
  auto e = io::parseDistribution(R"({"type":"empirical","samples":[3,1,2]})");
  CHECK(e.quantile(1.0) == 3.0);
  auto u = io::parseDistribution(R"({"type":"uniform","a":0,"b":2})");
  CHECK(u.quantile(0.5) == 1.0);
  auto p = io::parseDistribution(R"({"type":"pareto","scale":1,"shape":2})");
  CHECK(p.essSup() == kInf);
  auto t = io::parseDistribution(R"({"type":"two_point","x0":0,"x1":1,"p":0.25})");
  CHECK(t.survival(0.0) == 0.25);
  auto q = io::parseDistribution(
      R"({"type":"quantile_pw","breaks":[0.5,1],"values":["-inf",2],"interp":"step"})");
  CHECK(q.essInf() == -kInf);
  auto n = io::parseDistribution(R"({"type":"normal","mean":1,"sd":2})");
  CHECK(n.quantile(0.5) == doctest::Approx(1.0));
  auto x = io::parseDistribution(R"({"type":"exponential","rate":2})");
  CHECK(x.essInf() == 0.0);
  auto d = io::parseDistribution(
      R"({"type":"discrete","points":[1,2],"probs":[0.5,0.5]})");
  CHECK(d.quantile(0.5) == 1.0);
  auto fx = io::parseDistribution(R"({"type":"fixture","name":"cone_x"})");
  CHECK(fx.essSup() == 0.0);

  CHECK_THROWS_AS(io::parseDistribution("not json"), ValidationError);
  CHECK_THROWS_AS(io::parseDistribution(R"({"type":"nope"})"), ValidationError);
  CHECK_THROWS_AS(io::parseDistribution(R"({"type":"uniform","a":1})"),
                  ValidationError);
}

TEST_CASE("distortion and young parsing") {
  CHECK(io::parseDistortion(R"({"type":"var","beta":0.95})").evalG(0.05) == 1.0);
  CHECK(io::parseDistortion(R"({"type":"tvar","alpha":0.5})").evalG(0.25) == 0.5);
  CHECK(io::parseDistortion(R"({"type":"power","gamma":0.5})").concave());
  CHECK(io::parseDistortion(R"({"type":"example_cone"})").concave());
  auto m = io::parseDistortion(
      R"({"type":"mixture","atoms":[[0.5,0.3]],"segments":[{"lo":0,"hi":1,"coeffs":[0.7]}],"concave":false})");
  CHECK(m.evalG(0.5) == doctest::Approx(0.65));
  CHECK_THROWS_AS(io::parseDistortion(R"({"type":"mixture","segments":[]})"),
                  ValidationError);

  auto k = io::parseYoung(R"({"type":"pwlinear","kinks":[1],"slopes":[1,2]})");
  CHECK(k.derivsAt1().second == 2.0);
  CHECK(io::parseYoung(R"({"type":"power","c":2})").evalPhi(3.0) == 9.0);
  CHECK_FALSE(io::parseYoung(R"({"type":"expm1"})").isDelta2());
  CHECK_THROWS_AS(io::parseYoung(R"({"type":"power"})"), ValidationError);
}

TEST_CASE("csv samples") {
  auto d = io::parseCsvSamples("value\n1.5\n2.5\n0.5\n");
  CHECK(d.quantile(1.0) == 2.5);
  CHECK(d.quantile(1.0 / 3) == 0.5);
  auto noheader = io::parseCsvSamples("1\n2\n");
  CHECK(noheader.essSup() == 2.0);
  CHECK_THROWS_AS(io::parseCsvSamples("a\nb\n"), ValidationError);
  CHECK_THROWS_AS(io::parseCsvSamples(""), ValidationError);
}

TEST_CASE("writer emits sorted keys and 17 significant digits") {
  JsonObject j;
  j.set("zeta", 1.0).set("alpha", 0.1).set("mid", true).set("name", "x\"y");
  CHECK(j.dump() ==
        "{\"alpha\":0.10000000000000001,\"mid\":true,\"name\":\"x\\\"y\","
        "\"zeta\":1}");
  JsonArray a;
  a.push(0.5).push(JsonObject().set("k", std::int64_t{3}));
  CHECK(a.dump() == "[0.5,{\"k\":3}]");
  CHECK(io::formatDouble(kInf) == "\"inf\"");
  // byte-identical reruns
  JsonObject j2;
  j2.set("zeta", 1.0).set("alpha", 0.1).set("mid", true).set("name", "x\"y");
  CHECK(j.dump() == j2.dump());
}
