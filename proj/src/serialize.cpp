#include "orlicz_lab/serialize.hpp"

#include <cmath>
#include <cstdio>

#include "orlicz_lab/error.hpp"

namespace orlicz {

void to_json(nlohmann::json& j, const GibbsSummary& s) {
  j = {{"alpha_star", s.alpha_star}, {"R", s.R},         {"phi", s.phi},
       {"phi1", s.phi1},             {"phi2", s.phi2},   {"L2", s.L2},
       {"varZ2", s.varZ2},           {"EZ4", s.EZ4},     {"cov", s.cov},
       {"residual", s.alpha_residual()}};
}

void to_json(nlohmann::json& j, const BoundValue& b) {
  j = {{"name", b.name},
       {"prefactor", b.prefactor},
       {"exponent", b.exponent},
       {"value", b.value},
       {"asymptotic_caveat", b.asymptotic_caveat}};
}

void to_json(nlohmann::json& j, const MonteCarloEstimate& e) {
  j = {{"value", e.value},
       {"std_error", e.std_error},
       {"ci_low", e.ci_low},
       {"ci_high", e.ci_high},
       {"n_samples", e.n_samples},
       {"seed", e.seed},
       {"effective_sample_size", e.effective_sample_size},
       {"unreliable", e.unreliable},
       {"approximate", e.approximate}};
}

void to_json(nlohmann::json& j, const IsotropicReport& r) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : r.finite_n_estimates) {
    entries.push_back({{"n", e.n}, {"estimate", e.estimate}});
  }
  j = {{"asymptotic_L", r.asymptotic_L},
       {"volume_radius", r.volume_radius},
       {"log_volume_radius", std::log(r.volume_radius)},
       {"finite_n_estimates", entries}};
}

void to_json(nlohmann::json& j, const RangeDiagnostics& d) {
  j = {{"t_sqrt_n", d.t_sqrt_n}, {"t", d.t}, {"t_n_quarter", d.t_quarter}};
  if (d.small_p_upper) j["small_p_upper"] = *d.small_p_upper;
  if (d.small_p_lower) j["small_p_lower"] = *d.small_p_lower;
}

namespace {

double number(const nlohmann::json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing field '") + key + "'");
  if (it->is_null()) return std::nan("");
  if (!it->is_number()) throw ParseError(std::string("field '") + key + "' is not a number");
  return it->get<double>();
}

}  // namespace

GibbsSummary gibbs_summary_from_json(const nlohmann::json& j) {
  GibbsSummary s;
  s.alpha_star = number(j, "alpha_star");
  s.R = number(j, "R");
  s.phi = number(j, "phi");
  s.phi1 = number(j, "phi1");
  s.phi2 = number(j, "phi2");
  s.L2 = number(j, "L2");
  s.varZ2 = number(j, "varZ2");
  s.EZ4 = number(j, "EZ4");
  const auto it = j.find("cov");
  if (it == j.end() || !it->is_array() || it->size() != 4) {
    throw ParseError("field 'cov' must be an array of 4 numbers");
  }
  for (std::size_t i = 0; i < 4; ++i) s.cov[i] = (*it)[i].get<double>();
  return s;
}

BoundValue bound_value_from_json(const nlohmann::json& j) {
  const auto name = j.find("name");
  const auto caveat = j.find("asymptotic_caveat");
  if (name == j.end() || !name->is_string()) throw ParseError("missing field 'name'");
  if (caveat == j.end() || !caveat->is_boolean()) {
    throw ParseError("missing field 'asymptotic_caveat'");
  }
  BoundValue b;
  b.name = name->get<std::string>();
  b.prefactor = number(j, "prefactor");
  b.exponent = number(j, "exponent");
  b.value = number(j, "value");
  b.asymptotic_caveat = caveat->get<bool>();
  return b;
}

std::string csv_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace orlicz
