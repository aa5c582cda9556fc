#pragma once

// JSON and CSV encodings for profiles, spectral data, eigenvalue tables and
// inversion problems/results. Malformed input raises ErrorCode::SchemaError.

#include <charconv>
#include <complex>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "errors.hpp"
#include "factorization.hpp"
#include "inversion.hpp"
#include "profile.hpp"
#include "spectra.hpp"

namespace teig::io {

using json = nlohmann::json;

/// Shortest decimal that parses back to the same double.
inline std::string fmt(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, end);
}

namespace detail {
template <class T>
T get(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorCode::SchemaError, std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaError, std::string("field '") + key + "': " + e.what());
  }
}
}  // namespace detail

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::SchemaError, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaError, path + ": " + e.what());
  }
}

// ---- profiles ----

inline json to_json(const Profile& p) {
  json j;
  j["b"] = p.b();
  j["kind"] = p.kind() == ProfileKind::WaveSpeedRho ? "rho" : "potential";
  j["name"] = p.name();
  if (p.smoothness() == Smoothness::Piecewise && p.kind() == ProfileKind::WaveSpeedRho) j["smoothness"] = "piecewise";
  json pieces = json::array();
  for (const auto& pc : p.pieces())
    pieces.push_back({{"x0", pc.x0}, {"x1", pc.x1}, {"coeffs", {pc.coeffs[0], pc.coeffs[1], pc.coeffs[2], pc.coeffs[3]}}});
  j["pieces"] = pieces;
  return j;
}

inline Profile profile_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::SchemaError, "profile must be a JSON object");
  const auto b = detail::get<double>(j, "b");
  const auto kind_s = detail::get<std::string>(j, "kind");
  ProfileKind kind;
  if (kind_s == "rho") kind = ProfileKind::WaveSpeedRho;
  else if (kind_s == "potential") kind = ProfileKind::SchrodingerPotential;
  else throw Error(ErrorCode::SchemaError, "kind must be \"rho\" or \"potential\"");
  const std::string name = j.value("name", std::string{});
  Smoothness sm = kind == ProfileKind::WaveSpeedRho ? Smoothness::C1 : Smoothness::Piecewise;
  if (j.contains("smoothness")) {
    const auto s = detail::get<std::string>(j, "smoothness");
    if (s == "c1") sm = Smoothness::C1;
    else if (s == "piecewise") sm = Smoothness::Piecewise;
    else throw Error(ErrorCode::SchemaError, "smoothness must be \"c1\" or \"piecewise\"");
  }
  if (!j.contains("pieces") || !j["pieces"].is_array()) throw Error(ErrorCode::SchemaError, "pieces must be an array");
  std::vector<Piece> pieces;
  for (const auto& pj : j["pieces"]) {
    Piece pc;
    pc.x0 = detail::get<double>(pj, "x0");
    pc.x1 = detail::get<double>(pj, "x1");
    const auto c = detail::get<std::vector<double>>(pj, "coeffs");
    if (c.empty() || c.size() > 4) throw Error(ErrorCode::SchemaError, "coeffs must have 1 to 4 entries");
    for (std::size_t i = 0; i < c.size(); ++i) pc.coeffs[i] = c[i];
    pieces.push_back(pc);
  }
  return Profile(b, kind, std::move(pieces), name, sm);
}

// ---- spectral data ----

inline json to_json(const SpectralData& s) {
  json j;
  j["equation"] = std::string(to_string(s.equation));
  j["d"] = s.d;
  j["gamma"] = s.gamma ? json(*s.gamma) : json(nullptr);
  json z = json::array();
  for (const auto& r : s.zeros) z.push_back({{"re", r.lambda.real()}, {"im", r.lambda.imag()}, {"mult", r.multiplicity}});
  j["zeros"] = z;
  j["tail"] = s.tail ? json{{"a", s.tail->a}, {"b", s.tail->b}} : json(nullptr);
  return j;
}

inline SpectralData spectral_data_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::SchemaError, "spectral data must be a JSON object");
  SpectralData s;
  const auto eq = detail::get<std::string>(j, "equation");
  if (eq == "wave") s.equation = Equation::Wave;
  else if (eq == "schrodinger") s.equation = Equation::Schrodinger;
  else throw Error(ErrorCode::SchemaError, "equation must be \"wave\" or \"schrodinger\"");
  s.d = detail::get<int>(j, "d");
  if (j.contains("gamma") && !j["gamma"].is_null()) s.gamma = detail::get<double>(j, "gamma");
  if (!j.contains("zeros") || !j["zeros"].is_array()) throw Error(ErrorCode::SchemaError, "zeros must be an array");
  for (const auto& zj : j["zeros"]) {
    EigenvalueRecord r;
    r.lambda = {detail::get<double>(zj, "re"), detail::get<double>(zj, "im")};
    r.multiplicity = detail::get<int>(zj, "mult");
    if (r.lambda.imag() != 0.0) r.kind = RecordKind::ComplexPair;
    else r.kind = r.lambda.real() > 0 ? RecordKind::RealPositive : RecordKind::RealNegative;
    if (zj.contains("index_hint") && !zj["index_hint"].is_null()) r.index_hint = detail::get<int>(zj, "index_hint");
    s.zeros.push_back(r);
  }
  if (j.contains("tail") && !j["tail"].is_null())
    s.tail = TailModel{detail::get<double>(j["tail"], "a"), detail::get<double>(j["tail"], "b")};
  validate(s);
  return s;
}

// ---- eigenvalue tables ----

inline std::string records_csv(const std::vector<EigenvalueRecord>& recs) {
  std::ostringstream o;
  o << "re_lambda,im_lambda,multiplicity,kind,index_hint,residual\n";
  for (const auto& r : recs) {
    o << fmt(r.lambda.real()) << ',' << fmt(r.lambda.imag()) << ',' << r.multiplicity << ',' << to_string(r.kind)
      << ',' << (r.index_hint ? std::to_string(*r.index_hint) : std::string{}) << ',' << fmt(r.residual) << '\n';
  }
  return o.str();
}

inline json records_json(const std::vector<EigenvalueRecord>& recs) {
  json a = json::array();
  for (const auto& r : recs) {
    a.push_back({{"re_lambda", r.lambda.real()},
                 {"im_lambda", r.lambda.imag()},
                 {"multiplicity", r.multiplicity},
                 {"kind", std::string(to_string(r.kind))},
                 {"index_hint", r.index_hint ? json(*r.index_hint) : json(nullptr)},
                 {"residual", r.residual}});
  }
  return a;
}

// ---- inversion ----

inline Regime regime_from_string(const std::string& s) {
  if (s == "a<b" || s == "ALessB" || s == "a_less_b") return Regime::ALessB;
  if (s == "a=b" || s == "AEqualsB" || s == "a_equals_b") return Regime::AEqualsB;
  if (s == "a>b" || s == "AGreaterB" || s == "a_greater_b") return Regime::AGreaterB;
  throw Error(ErrorCode::SchemaError, "regime must be one of a<b, a=b, a>b");
}

struct InversionInput {
  InversionProblem problem;
  FitTargets targets;
};

inline InversionInput inversion_input_from_json(const json& j) {
  InversionInput in;
  auto& pr = in.problem;
  pr.data = spectral_data_from_json(j);
  pr.b = detail::get<double>(j, "b");
  if (!(pr.b > 0.0)) throw Error(ErrorCode::SchemaError, "b must be positive");
  pr.regime = regime_from_string(detail::get<std::string>(j, "regime"));
  if (j.contains("parametrization")) {
    const auto& pj = j["parametrization"];
    const auto fam = detail::get<std::string>(pj, "family");
    if (fam == "constant") pr.parametrization.family = ParamFamily::Constant;
    else if (fam == "piecewise_constant") pr.parametrization.family = ParamFamily::PiecewiseConstant;
    else if (fam == "piecewise_cubic") pr.parametrization.family = ParamFamily::PiecewiseCubic;
    else throw Error(ErrorCode::SchemaError, "unknown parametrization family " + fam);
    pr.parametrization.k = pj.value("k", 1);
    if (pr.parametrization.k < 1) throw Error(ErrorCode::SchemaError, "parametrization k must be >= 1");
  }
  if (j.contains("bounds")) {
    for (const auto& bj : j["bounds"]) {
      const auto v = bj.get<std::vector<double>>();
      if (v.size() != 2) throw Error(ErrorCode::SchemaError, "each bound is [lo, hi]");
      pr.bounds.emplace_back(v[0], v[1]);
    }
  }
  if (j.contains("seed")) pr.seed = detail::get<std::vector<double>>(j, "seed");
  if (j.contains("targets")) {
    const auto& t = j["targets"];
    if (t.contains("zero_groups")) in.targets.zero_groups = detail::get<std::size_t>(t, "zero_groups");
    if (t.contains("dirichlet")) in.targets.dirichlet = detail::get<std::vector<double>>(t, "dirichlet");
    if (t.contains("dirichlet_neumann"))
      in.targets.dirichlet_neumann = detail::get<std::vector<double>>(t, "dirichlet_neumann");
    if (t.contains("tolerance")) in.targets.tolerance = detail::get<double>(t, "tolerance");
    if (t.contains("max_iterations")) in.targets.max_iterations = detail::get<int>(t, "max_iterations");
  }
  return in;
}

inline json to_json(const InversionResult& r) {
  json j;
  j["profile"] = to_json(r.profile);
  j["misfit"] = r.misfit;
  j["per_eigenvalue_residuals"] = r.per_eigenvalue_residuals;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["inferred_a"] = std::isfinite(r.inferred_a) ? json(r.inferred_a) : json(nullptr);
  return j;
}

}  // namespace teig::io
