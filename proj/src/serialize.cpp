#include "cdk/serialize.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>

#include "cdk/chebyshev.hpp"
#include "cdk/errors.hpp"

namespace cdk {

namespace {
double parse_endpoint(const json& v) {
  if (v.is_number()) return v.get<double>();
  const std::string s = v.get<std::string>();
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  throw DomainError("potential interval endpoint must be a number or \"+-inf\"");
}

json endpoint_to_json(double v) {
  if (std::isinf(v)) return v > 0 ? json("inf") : json("-inf");
  return json(v);
}
}  // namespace

Potential potential_preset(const std::string& name) {
  if (name == "gue")
    return build_polynomial_potential({0.0, 0.0, 1.0}, whole_line(), "gue");
  if (name == "quartic")
    return build_polynomial_potential({0.0, 0.0, 0.0, 0.0, 1.0}, whole_line(),
                                      "quartic");
  throw DomainError("unknown potential preset '" + name + "'");
}

Potential parse_potential(const json& spec) {
  if (spec.is_string()) return potential_preset(spec.get<std::string>());
  if (!spec.is_object()) throw DomainError("potential spec must be an object or preset name");
  if (spec.contains("preset")) return potential_preset(spec.at("preset").get<std::string>());
  const std::string kind = spec.value("kind", "poly");
  if (kind != "poly")
    throw DomainError("potential spec: only \"poly\" and presets are supported");
  std::vector<double> coeffs = spec.at("coeffs").get<std::vector<double>>();
  ExtendedInterval iv;
  if (spec.contains("interval")) {
    const json& jiv = spec.at("interval");
    if (!jiv.is_array() || jiv.size() != 2)
      throw DomainError("potential interval must be [lo, hi]");
    iv.lo = parse_endpoint(jiv[0]);
    iv.hi = parse_endpoint(jiv[1]);
  }
  return build_polynomial_potential(std::move(coeffs), iv,
                                    spec.value("label", std::string("poly")));
}

json potential_to_json(const Potential& pot) {
  json j;
  if (pot.is_polynomial()) {
    j["kind"] = "poly";
    j["coeffs"] = pot.coeffs();
  } else {
    j["kind"] = "generic";
  }
  j["label"] = pot.label();
  j["interval"] = {endpoint_to_json(pot.interval().lo),
                   endpoint_to_json(pot.interval().hi)};
  return j;
}

json equilibrium_to_json(const EquilibriumData& eq) {
  json j;
  j["a"] = eq.endpoints().a;
  j["b"] = eq.endpoints().b;
  j["residual_norm"] = eq.endpoints().residual_norm;
  j["newton_iters"] = eq.endpoints().newton_iters;
  j["gamma_plus"] = eq.gamma_plus();
  j["gamma_minus"] = eq.gamma_minus();
  j["lagrange_l"] = eq.lagrange_l();
  j["d_min"] = eq.d_min();
  j["sigma_hat"] = eq.sigma_hat();
  j["quad_order"] = eq.quad_order();
  j["g_cheb"] = {{"lo", eq.g_series().lo()},
                 {"hi", eq.g_series().hi()},
                 {"coeffs", eq.g_series().coeffs()}};
  return j;
}

EquilibriumData equilibrium_from_json(const Potential& pot, const json& j) {
  MrsEndpoints ep;
  ep.a = j.at("a").get<double>();
  ep.b = j.at("b").get<double>();
  ep.residual_norm = j.value("residual_norm", 0.0);
  ep.newton_iters = j.value("newton_iters", 0);
  return EquilibriumData::build(pot, ep, j.value("quad_order", 256));
}

json recurrence_to_json(const RecurrenceTable& tab) {
  json j;
  j["n_weight"] = tab.n_weight;
  j["alphas"] = tab.alphas;
  j["betas"] = tab.betas;
  j["trunc"] = {tab.trunc_lo, tab.trunc_hi};
  j["grid_size"] = tab.grid_size;
  return j;
}

RecurrenceTable recurrence_from_json(const Potential& pot, const json& j) {
  RecurrenceTable tab;
  tab.n_weight = j.at("n_weight").get<int>();
  tab.alphas = j.at("alphas").get<std::vector<double>>();
  tab.betas = j.at("betas").get<std::vector<double>>();
  tab.trunc_lo = j.at("trunc")[0].get<double>();
  tab.trunc_hi = j.at("trunc")[1].get<double>();
  tab.grid_size = j.value("grid_size", 0);
  tab.pot = std::make_shared<Potential>(pot);
  return tab;
}

void CsvWriter::meta(const std::string& line) { os_ << "# " << line << "\n"; }

void CsvWriter::header(const std::vector<std::string>& cols) {
  for (size_t i = 0; i < cols.size(); ++i) os_ << cols[i] << (i + 1 < cols.size() ? "," : "");
  os_ << "\n";
}

void CsvWriter::row(const std::vector<std::string>& cells) { header(cells); }

std::string CsvWriter::num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string CsvWriter::scaled(const ScaledReal& v) {
  char buf[80];
  std::snprintf(buf, sizeof buf, "%.17g,%lld", v.mantissa(),
                static_cast<long long>(v.log2_scale()));
  return buf;
}

std::string config_hash(const std::string& canonical) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

}  // namespace cdk
