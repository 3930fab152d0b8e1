#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "experiment.hpp"
#include "orlicz_lab/error.hpp"

namespace {

using namespace orlicz;
using namespace orlicz::cli;

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

enum Field : unsigned {
  kBounds = 1u << 0,     // --bounds, --c
  kMethod = 1u << 1,     // --method
  kBootstrap = 1u << 2,  // --bootstrap
};

// Raw option text; parsed after the config file so that flags win.
struct RawOptions {
  std::string config, orlicz, radius, n, t, samples, seed, bounds, format, method, c, out;
  bool bootstrap = false;
};

struct Subcommand {
  CLI::App* app = nullptr;
  RawOptions raw;
  std::function<CommandResult(const ExperimentConfig&)> run;
};

// Every command accepts the common flags; those it does not use are ignored.
void add_options(Subcommand& sc, unsigned fields) {
  auto* app = sc.app;
  auto& raw = sc.raw;
  app->add_option("--config", raw.config, "JSON config file; flags override its keys");
  app->add_option("--orlicz", raw.orlicz, "Orlicz function spec, e.g. power:p=2");
  app->add_option("--radius", raw.radius, "ball radius R (default 1)");
  app->add_option("--n", raw.n, "dimensions, comma-separated (default 100)");
  app->add_option("--t", raw.t, "normalized deviations, comma-separated (default 0.1)");
  app->add_option("--samples", raw.samples, "Monte Carlo sample count (default 100000)");
  app->add_option("--seed", raw.seed, "RNG seed (default 1)");
  app->add_option("--format", raw.format, "json or csv (default json)");
  app->add_option("--out", raw.out, "output path (default stdout)");
  if (fields & kBounds) {
    app->add_option("--bounds", raw.bounds, "bound names, comma-separated");
    app->add_option("--c", raw.c, "absolute constant of the comparison bounds (default 1)");
  }
  if (fields & kMethod) app->add_option("--method", raw.method, "importance or exact-lp");
  if (fields & kBootstrap) app->add_flag("--bootstrap", raw.bootstrap, "bootstrap confidence interval");
}

std::uint64_t parse_count(const std::string& text, const char* what) {
  if (!text.empty() && text.find_first_not_of("0123456789") == std::string::npos) {
    errno = 0;
    const auto v = std::strtoull(text.c_str(), nullptr, 10);
    if (errno == ERANGE) throw ParseError(std::string(what) + " is out of range");
    return v;
  }
  const auto v = parse_double_list(text);
  if (v.size() != 1 || !(v[0] >= 0.0) || v[0] >= 1.8e19 || v[0] != std::floor(v[0])) {
    throw ParseError(std::string(what) + " must be a non-negative integer");
  }
  return static_cast<std::uint64_t>(v[0]);
}

double parse_scalar(const std::string& text, const char* what) {
  const auto v = parse_double_list(text);
  if (v.size() != 1) throw ParseError(std::string(what) + " takes a single value");
  return v[0];
}

ExperimentConfig build_config(const Subcommand& sc) {
  const auto& raw = sc.raw;
  const auto given = [&](const char* name) {
    const auto* opt = sc.app->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  };
  ExperimentConfig cfg;
  if (given("--config")) {
    std::ifstream in(raw.config);
    if (!in) throw ParseError("cannot open config file '" + raw.config + "'");
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError("config file is not valid JSON: " + std::string(e.what()));
    }
    apply_config_json(doc, cfg);
  }
  if (given("--orlicz")) cfg.orlicz_spec = raw.orlicz;
  if (given("--radius")) cfg.R = parse_scalar(raw.radius, "--radius");
  if (given("--n")) cfg.n_list = parse_int_list(raw.n);
  if (given("--t")) cfg.t_list = parse_double_list(raw.t);
  if (given("--samples")) cfg.samples = parse_count(raw.samples, "--samples");
  if (given("--seed")) cfg.seed = parse_count(raw.seed, "--seed");
  if (given("--c")) cfg.c = parse_scalar(raw.c, "--c");
  if (given("--method")) cfg.method = raw.method;
  if (given("--bootstrap")) cfg.bootstrap = raw.bootstrap;
  if (given("--out")) cfg.out_path = raw.out;
  if (given("--bounds")) {
    cfg.bounds_requested.clear();
    std::string item;
    std::istringstream list(raw.bounds);
    while (std::getline(list, item, ',')) {
      if (!item.empty()) cfg.bounds_requested.push_back(item);
    }
  }
  if (given("--format")) {
    if (raw.format != "json" && raw.format != "csv") {
      throw ParseError("--format must be 'json' or 'csv'");
    }
    cfg.output_format = raw.format == "json" ? OutputFormat::json : OutputFormat::csv;
  }
  return cfg;
}

void emit(const ExperimentConfig& cfg, const CommandResult& result) {
  for (const auto& note : result.notes) std::cerr << "note: " << note << '\n';
  if (cfg.out_path.empty()) {
    std::cout << result.output << std::flush;
    return;
  }
  std::ofstream out(cfg.out_path);
  if (!out) throw ParseError("cannot write '" + cfg.out_path + "'");
  out << result.output;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thin-shell concentration experiments on Orlicz balls", "orlicz-lab"};
  app.require_subcommand(1);

  Subcommand thermo, bounds, simulate, isotropic, normalization;
  thermo.app = app.add_subcommand("thermo", "Gibbs summary of an Orlicz function");
  thermo.run = cmd_thermo;
  add_options(thermo, 0);
  bounds.app = app.add_subcommand("bounds", "Evaluate thin-shell bounds on an (n, t) grid");
  bounds.run = cmd_bounds;
  add_options(bounds, kBounds);
  simulate.app = app.add_subcommand("simulate", "Estimate thin-shell probabilities");
  simulate.run = cmd_simulate;
  add_options(simulate, kBounds | kMethod | kBootstrap);
  isotropic.app = app.add_subcommand("isotropic", "Isotropic constant, asymptotic and finite n");
  isotropic.run = cmd_isotropic;
  add_options(isotropic, kBootstrap);
  normalization.app =
      app.add_subcommand("check-normalization", "Monte Carlo check of the local normalization constant");
  normalization.run = cmd_check_normalization;
  add_options(normalization, 0);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  for (Subcommand* sc : {&thermo, &bounds, &simulate, &isotropic, &normalization}) {
    if (!sc->app->parsed()) continue;
    try {
      const auto cfg = build_config(*sc);
      emit(cfg, sc->run(cfg));
      return 0;
    } catch (const Error& e) {
      std::cerr << "error: " << e.what() << '\n';
      return e.category() == ErrorCategory::usage ? kExitUsage : kExitNumerical;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitNumerical;
    }
  }
  return kExitUsage;
}
