#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace orlicz::cli {

enum class OutputFormat { json, csv };

struct ExperimentConfig {
  std::string orlicz_spec;
  double R = 1.0;
  std::vector<int> n_list = {100};
  std::vector<double> t_list = {0.1};
  std::uint64_t samples = 100'000;
  std::uint64_t seed = 1;
  /// Empty means the command's default set.
  std::vector<std::string> bounds_requested;
  OutputFormat output_format = OutputFormat::json;
  std::string method = "importance";
  double c = 1.0;
  bool bootstrap = false;
  std::string out_path;

  /// Throws DomainError on empty lists, non-positive entries, samples < 1000,
  /// unknown bound names or an unknown method.
  void validate() const;
};

/// Every bound name accepted by --bounds, in evaluation order.
const std::vector<std::string>& bound_names();

/// Applies the keys of a JSON config document onto `cfg`. Throws ParseError
/// for unknown keys or values of the wrong type.
void apply_config_json(const nlohmann::json& doc, ExperimentConfig& cfg);

/// Parses "a,b,c" lists; integers may be written as 1e4.
std::vector<int> parse_int_list(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);

struct CommandResult {
  std::string output;              // document written to stdout or --out
  std::vector<std::string> notes;  // diagnostics for stderr
};

CommandResult cmd_thermo(const ExperimentConfig& cfg);
CommandResult cmd_bounds(const ExperimentConfig& cfg);
CommandResult cmd_simulate(const ExperimentConfig& cfg);
CommandResult cmd_isotropic(const ExperimentConfig& cfg);
CommandResult cmd_check_normalization(const ExperimentConfig& cfg);

}  // namespace orlicz::cli
