#ifndef GAUDIN_SERIALIZE_HPP
#define GAUDIN_SERIALIZE_HPP

#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "gaudin/pipeline.hpp"

namespace gaudin {

// nlohmann's default object is a sorted map, so equal content always dumps
// to equal bytes; every writer below relies on that for report determinism.
using Json = nlohmann::json;

// 17 significant digits round-trip a double exactly.
inline std::string complex_to_string(const MpComplex& z) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", z.real().to_double());
  std::string out = buf;
  if (!(z.imag() == MpReal(0L))) {
    std::snprintf(buf, sizeof buf, "%+.17g", z.imag().to_double());
    out += buf;
    out += 'i';
  }
  return out;
}

inline Json poly_to_json(const Polynomial<Rational>& p) {
  Json out = Json::array();
  for (const auto& c : p.coeffs()) out.push_back(to_string(c));
  return out;
}

inline Polynomial<Rational> poly_from_json(const Json& j) {
  if (!j.is_array())
    throw input_error("polynomial: expected an array of rational strings");
  std::vector<Rational> c;
  for (const auto& e : j) {
    if (!e.is_string())
      throw input_error("polynomial coefficients must be rational strings");
    c.push_back(parse_rational(e.get<std::string>()));
  }
  return Polynomial<Rational>(std::move(c));
}

inline Json cpoly_to_json(const Polynomial<MpComplex>& p) {
  Json out = Json::array();
  for (const auto& c : p.coeffs()) out.push_back(complex_to_string(c));
  return out;
}

// coeffs[k] multiplies the k-th derivative.  Rationals ride as strings and
// stored coefficients are already reduced, so exact operators survive a
// round trip bit for bit.  The order field is redundant and cross-checked.
inline Json operator_to_json(const ScalarDiffOp<Rational>& d) {
  Json coeffs = Json::array();
  for (int k = 0; k <= d.order(); ++k)
    coeffs.push_back(Json{{"num", poly_to_json(d.coeff(k).num())},
                          {"den", poly_to_json(d.coeff(k).den())}});
  return Json{{"coeffs", coeffs}, {"order", d.order()}};
}

inline ScalarDiffOp<Rational> operator_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("coeffs") || !j.at("coeffs").is_array() ||
      j.at("coeffs").empty())
    throw input_error("operator: expected an object with a coeffs array");
  std::vector<RationalFunction<Rational>> c;
  for (const auto& e : j.at("coeffs")) {
    if (!e.is_object() || !e.contains("num") || !e.contains("den"))
      throw input_error("operator coefficients need num and den arrays");
    Polynomial<Rational> den = poly_from_json(e.at("den"));
    if (den.is_zero())
      throw input_error("operator coefficient with zero denominator");
    c.emplace_back(poly_from_json(e.at("num")), std::move(den));
  }
  ScalarDiffOp<Rational> d(std::move(c));
  if (j.contains("order") &&
      j.at("order").get<long>() != static_cast<long>(d.order()))
    throw input_error("operator order field disagrees with the coefficients");
  return d;
}

// Flag points carry only the nonzero coefficients, keyed "row,degree" with
// rows counted from 1 in decreasing-degree order.
inline Json point_to_json(const SchubertPoint<Rational>& x) {
  Json fc = Json::object();
  for (std::size_t i = 0; i < x.flag().size(); ++i) {
    const auto& f = x.flag()[i];
    for (int k = 0; k <= f.degree(); ++k)
      if (f[k] != 0)
        fc[std::to_string(i + 1) + "," + std::to_string(k)] = to_string(f[k]);
  }
  return Json{{"N", x.rank()},
              {"d", x.ambient()},
              {"flag_coeffs", fc},
              {"lambda", x.shape().parts()}};
}

inline SchubertPoint<Rational> point_from_json(const Json& j) {
  if (!j.is_object()) throw input_error("flag point: expected an object");
  int n = j.at("N").get<int>();
  long d = j.at("d").get<long>();
  Partition lam(j.at("lambda").get<std::vector<long>>());
  if (lam.n_parts() != n)
    throw input_error("flag point: lambda length must equal N");
  if (n < 1 || d < n) throw input_error("flag point: bad dimensions");
  std::vector<std::vector<Rational>> rows(
      static_cast<std::size_t>(n),
      std::vector<Rational>(static_cast<std::size_t>(d), Rational(0)));
  for (const auto& [key, val] : j.at("flag_coeffs").items()) {
    long i = 0, k = -1;
    auto comma = key.find(',');
    try {
      if (comma == std::string::npos) throw std::invalid_argument(key);
      i = std::stol(key.substr(0, comma));
      k = std::stol(key.substr(comma + 1));
    } catch (const std::exception&) {
      throw input_error("flag coefficient keys look like \"row,degree\": " +
                        key);
    }
    if (i < 1 || i > n || k < 0 || k >= d)
      throw input_error("flag coefficient index out of range: " + key);
    if (!val.is_string())
      throw input_error("flag coefficients must be rational strings");
    rows[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(k)] =
        parse_rational(val.get<std::string>());
  }
  std::vector<Polynomial<Rational>> basis;
  for (auto& r : rows) basis.emplace_back(std::move(r));
  return SchubertPoint<Rational>(std::move(lam), std::move(basis), d);
}

// {"j_1,...,j_n": coefficient} with exact zeros dropped.
inline Json vector_to_json(const ModuleSpace<MpComplex>& space,
                           const VecX<MpComplex>& v) {
  if (v.size() != space.dim())
    throw std::invalid_argument("vector length does not match the module");
  Json out = Json::object();
  for (long i = 0; i < v.size(); ++i) {
    if (abs(v[i]) == MpReal(0L)) continue;
    std::string key;
    for (int j : space.tuple_of(i)) {
      if (!key.empty()) key += ',';
      key += std::to_string(j);
    }
    out[key] = complex_to_string(v[i]);
  }
  return out;
}

inline Json eigen_report_to_json(const EigenReport<MpComplex>& er,
                                 const UniversalOperator<MpComplex>& u) {
  Json hs = Json::array();
  for (const auto& h : er.h)
    hs.push_back(Json{{"den", cpoly_to_json(h.den())},
                      {"num", cpoly_to_json(h.num())}});
  return Json{{"degenerate", er.degenerate},
              {"h", hs},
              {"multiplicity", er.multiplicity},
              {"pass", er.pass},
              {"residual", er.residual.to_double()},
              {"vector", vector_to_json(u.space, u.full_vector(er.v))}};
}

inline Json report_to_json(const PipelineReport& r) {
  Json as = Json::array();
  for (const auto& a : r.assertions) {
    Json e{{"name", a.name}, {"pass", a.pass}, {"residual", a.residual}};
    if (!a.note.empty()) e["note"] = a.note;
    as.push_back(std::move(e));
  }
  return Json{{"assertions", as},
              {"instance", r.instance},
              {"precision", r.precision},
              {"seeds", r.seed}};
}

// One parsed instance file entry: the problem data plus the optional
// runtime hints and operator payload it may carry.
struct InstanceConfig {
  ProblemInstance instance;
  std::uint64_t seed = 1;
  unsigned precision = 0;  // 0: unspecified
  std::optional<ScalarDiffOp<Rational>> op;
};

inline Json instance_to_json(const ProblemInstance& inst,
                             std::uint64_t seed = 1,
                             unsigned precision = 0) {
  Json factors = Json::array();
  for (std::size_t s = 0; s < inst.big_lambda.size(); ++s)
    factors.push_back(Json{{"b", to_string(inst.b[s])},
                           {"n_s", inst.big_lambda[s].weight()},
                           {"partition", inst.big_lambda[s].parts()}});
  Json out{{"N", inst.rank},
           {"factors", factors},
           {"seed", seed},
           {"weight", inst.lambda.parts()}};
  if (!inst.name.empty()) out["name"] = inst.name;
  if (precision) out["precision"] = precision;
  return out;
}

inline InstanceConfig instance_from_json(const Json& j) {
  if (!j.is_object()) throw input_error("instance: expected a JSON object");
  InstanceConfig out;
  if (!j.contains("N")) throw input_error("instance: missing N");
  out.instance.rank = j.at("N").get<int>();
  if (!j.contains("factors") || !j.at("factors").is_array())
    throw input_error("instance: missing factors array");
  for (const auto& f : j.at("factors")) {
    if (!f.is_object() || !f.contains("partition"))
      throw input_error("factor: missing partition");
    Partition lam(f.at("partition").get<std::vector<long>>());
    if (!f.contains("b")) throw input_error("factor: missing evaluation point b");
    const Json& bj = f.at("b");
    Rational bv;
    if (bj.is_string())
      bv = parse_rational(bj.get<std::string>());
    else if (bj.is_number_integer())
      bv = Rational(bj.get<long>());
    else
      throw input_error("factor: b must be a rational string");
    if (f.contains("n_s") && f.at("n_s").get<long>() != lam.weight())
      throw input_error("factor: n_s disagrees with the partition weight");
    out.instance.big_lambda.push_back(std::move(lam));
    out.instance.b.push_back(std::move(bv));
  }
  if (!j.contains("weight")) throw input_error("instance: missing weight");
  out.instance.lambda = Partition(j.at("weight").get<std::vector<long>>());
  if (j.contains("name")) out.instance.name = j.at("name").get<std::string>();
  if (j.contains("seed")) out.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("precision"))
    out.precision = j.at("precision").get<unsigned>();
  if (j.contains("operator")) out.op = operator_from_json(j.at("operator"));
  return out;
}

}  // namespace gaudin

#endif
