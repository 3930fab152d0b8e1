#pragma once

#include <string>

#include "json.hpp"
#include "orlicz_lab/bounds.hpp"
#include "orlicz_lab/gibbs.hpp"
#include "orlicz_lab/isotropic.hpp"
#include "orlicz_lab/sampling.hpp"

namespace orlicz {

/// Version of every JSON document and CSV table the CLI emits.
inline constexpr int kSchemaVersion = 1;

// JSON encoders. Doubles are written as shortest round-trip decimals;
// non-finite values become null.
void to_json(nlohmann::json& j, const GibbsSummary& s);
void to_json(nlohmann::json& j, const BoundValue& b);
void to_json(nlohmann::json& j, const MonteCarloEstimate& e);
void to_json(nlohmann::json& j, const IsotropicReport& r);
void to_json(nlohmann::json& j, const RangeDiagnostics& d);

/// Inverse of to_json(GibbsSummary); throws ParseError on missing fields.
GibbsSummary gibbs_summary_from_json(const nlohmann::json& j);
BoundValue bound_value_from_json(const nlohmann::json& j);

/// printf("%.17g"); "inf", "-inf" and "nan" for non-finite values.
std::string csv_double(double x);

}  // namespace orlicz
