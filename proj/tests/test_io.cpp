#include <catch_amalgamated.hpp>

#include <sstream>

#include "support.hpp"

using namespace teig;
using support::cplx;
using support::error_code;
using json = nlohmann::json;

TEST_CASE("profile round trip") {
  std::mt19937_64 rng(31);
  const auto p = support::random_cubic_rho(rng, 2.0);
  const auto q = io::profile_from_json(json::parse(io::to_json(p).dump()));
  CHECK(q.b() == p.b());
  CHECK(q.kind() == p.kind());
  for (double x : {0.0, 0.3, 1.1, 2.0}) CHECK(q(x) == p(x));
  const double v[3] = {0.2, 0.5, 0.3};
  const auto pc = Profile::piecewise_constant(ProfileKind::WaveSpeedRho, v, 1.0);
  const auto pj = io::to_json(pc);
  CHECK(pj["smoothness"] == "piecewise");
  CHECK(io::profile_from_json(pj).smoothness() == Smoothness::Piecewise);
}

TEST_CASE("short coefficient lists are padded") {
  const auto p = io::profile_from_json(json::parse(R"({"b": 1, "kind": "rho", "pieces": [{"x0": 0, "x1": 1, "coeffs": [0.25]}]})"));
  CHECK(p.is_constant(0.25));
}

TEST_CASE("malformed profiles") {
  auto code = [](const char* text) { return error_code([&] { io::profile_from_json(json::parse(text)); }); };
  CHECK(code(R"({"kind": "rho", "pieces": []})") == ErrorCode::SchemaError);
  CHECK(code(R"({"b": 1, "kind": "speed", "pieces": []})") == ErrorCode::SchemaError);
  CHECK(code(R"({"b": "one", "kind": "rho", "pieces": []})") == ErrorCode::SchemaError);
  CHECK(code(R"({"b": 1, "kind": "rho", "pieces": [{"x0": 0, "x1": 1, "coeffs": []}]})") == ErrorCode::SchemaError);
  CHECK(code(R"({"b": 1, "kind": "rho", "pieces": [{"x0": 0, "x1": 1, "coeffs": [1,2,3,4,5]}]})") == ErrorCode::SchemaError);
  CHECK(code(R"([1, 2])") == ErrorCode::SchemaError);
  CHECK(code(R"({"b": 1, "kind": "rho", "pieces": [{"x0": 0, "x1": 1, "coeffs": [-1]}]})") == ErrorCode::NonPositiveProfile);
  CHECK(error_code([] { io::read_json_file("/nonexistent/x.json"); }) == ErrorCode::SchemaError);
}

TEST_CASE("spectral data round trip") {
  auto s = support::quarter_data(3, true);
  s.zeros.push_back(EigenvalueRecord{cplx(20.0, 13.0), 1, RecordKind::ComplexPair, {}, 0.0});
  s.zeros.push_back(EigenvalueRecord{cplx(20.0, -13.0), 1, RecordKind::ComplexPair, {}, 0.0});
  const auto t = io::spectral_data_from_json(json::parse(io::to_json(s).dump()));
  CHECK(t.d == 1);
  CHECK(*t.gamma == 0.25);
  REQUIRE(t.zeros.size() == 5);
  CHECK(t.zeros[4].lambda == cplx(20.0, -13.0));
  CHECK(t.zeros[4].kind == RecordKind::ComplexPair);
  REQUIRE(t.tail);
  CHECK(t.tail->a == 0.5);
  s.gamma.reset();
  CHECK(!io::spectral_data_from_json(io::to_json(s)).gamma);
}

TEST_CASE("malformed spectral data") {
  auto code = [](const char* text) { return error_code([&] { io::spectral_data_from_json(json::parse(text)); }); };
  CHECK(code(R"({"equation": "heat", "d": 1, "zeros": []})") == ErrorCode::SchemaError);
  CHECK(code(R"({"equation": "wave", "d": 1})") == ErrorCode::SchemaError);
  CHECK(code(R"({"equation": "wave", "d": 1, "zeros": [{"re": 5, "im": 1, "mult": 1}]})") == ErrorCode::SchemaError);
  CHECK(code(R"({"equation": "wave", "d": 1, "zeros": [{"re": 5, "mult": 1}]})") == ErrorCode::SchemaError);
  CHECK(!code(R"({"equation": "wave", "d": 1, "gamma": null, "zeros": [{"re": 5, "im": 0, "mult": 2}]})"));
}

TEST_CASE("eigenvalue table") {
  std::vector<EigenvalueRecord> recs{{cplx(0.0), 1, RecordKind::Origin, {}, 0.0},
                                     {cplx(39.47841760435743), 3, RecordKind::RealPositive, 1, 1e-12}};
  const auto csv = io::records_csv(recs);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "re_lambda,im_lambda,multiplicity,kind,index_hint,residual");
  std::getline(in, line);
  CHECK(line.rfind("0,0,1,", 0) == 0);
  std::getline(in, line);
  CHECK(line.rfind("39.47841760435743,0,3,", 0) == 0);
  CHECK(std::stod(line.substr(0, line.find(','))) == 39.47841760435743);
  const auto j = io::records_json(recs);
  CHECK(j.size() == 2);
  CHECK(j[1]["multiplicity"] == 3);
  CHECK(j[0]["index_hint"].is_null());
}

TEST_CASE("inversion input") {
  const auto in = io::inversion_input_from_json(json::parse(R"({
    "equation": "wave", "d": 1, "gamma": 0.25, "b": 1.0, "regime": "a<b",
    "zeros": [{"re": 39.47841760435743, "im": 0, "mult": 3}],
    "parametrization": {"family": "piecewise_constant", "k": 2},
    "bounds": [[0.001, 1], [0.001, 1]], "seed": [0.3, 0.3],
    "targets": {"zero_groups": 1, "tolerance": 1e-8, "max_iterations": 7}
  })"));
  CHECK(in.problem.parametrization.family == ParamFamily::PiecewiseConstant);
  CHECK(in.problem.parametrization.k == 2);
  CHECK(in.problem.bounds.size() == 2);
  CHECK(*in.targets.zero_groups == 1);
  CHECK(in.targets.max_iterations == 7);
  CHECK(io::regime_from_string("a>b") == Regime::AGreaterB);
  CHECK(error_code([] { io::regime_from_string("sideways"); }) == ErrorCode::SchemaError);
  CHECK(error_code([] {
          io::inversion_input_from_json(json::parse(R"({"equation": "wave", "d": 1, "zeros": [], "b": 1})"));
        }) == ErrorCode::SchemaError);
}

TEST_CASE("inversion result") {
  InversionResult r;
  r.misfit = 1e-9;
  r.converged = true;
  const auto j = io::to_json(r);
  CHECK(j["converged"] == true);
  CHECK(j["inferred_a"].is_null());
  CHECK(j["profile"]["kind"] == "rho");
}
