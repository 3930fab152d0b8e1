#include "experiment.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <variant>

#include "orlicz_lab/bounds.hpp"
#include "orlicz_lab/error.hpp"
#include "orlicz_lab/gibbs.hpp"
#include "orlicz_lab/isotropic.hpp"
#include "orlicz_lab/orlicz_function.hpp"
#include "orlicz_lab/sampling.hpp"
#include "orlicz_lab/serialize.hpp"

namespace orlicz::cli {

using nlohmann::json;

const std::vector<std::string>& bound_names() {
  static const std::vector<std::string> names = {
      "chebyshev",  "thmB",        "thmC",       "bernstein-i",   "bernstein-ii",
      "expectation", "thmD-upper", "thmD-lower", "lee-vempala",   "guedon-milman",
      "schechtman-zinn"};
  return names;
}

namespace {

std::string joined_names() {
  std::string out;
  for (const auto& n : bound_names()) out += (out.empty() ? "" : ", ") + n;
  return out;
}

double parse_number(const std::string& item) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(item.c_str(), &end);
  if (item.empty() || end != item.c_str() + item.size() || errno == ERANGE) {
    throw ParseError("'" + item + "' is not a number");
  }
  return v;
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> items;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, ',')) {
    cur.erase(0, cur.find_first_not_of(" \t"));
    cur.erase(cur.find_last_not_of(" \t") + 1);
    items.push_back(cur);
  }
  if (items.empty()) throw ParseError("empty list");
  return items;
}

int to_dimension(double v) {
  if (!(v >= 1.0) || v != std::floor(v) || v > 2147483647.0) {
    throw DomainError("dimension n must be a positive integer");
  }
  return static_cast<int>(v);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

json header(const char* command, const ExperimentConfig& cfg, const OrliczFunction& f) {
  return {{"schema_version", kSchemaVersion}, {"command", command}, {"orlicz", f.spec()},
          {"R", cfg.R}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Bound evaluation. Returns a reason instead of a value when the bound does
// not apply to the configuration.
class BoundContext {
 public:
  BoundContext(const OrliczFunction& f, const GibbsSummary& s, double c)
      : f_(f), s_(s), c_(c), power_(f.power_exponent()) {}

  std::variant<BoundValue, std::string> evaluate(const std::string& name, int n, double t) {
    const double dn = n;
    try {
      if (name == "chebyshev") return chebyshev_thinshell_bound(s_, dn, t);
      if (name == "thmB") return mdp_upper_bound(s_, dn, t);
      if (name == "thmC") return mdp_lower_bound(s_, dn, t);
      if (name == "bernstein-i") return bernstein_bound(norm(NormKind::exp), dn, t * s_.L2);
      if (name == "bernstein-ii") {
        return bernstein_bound(norm(NormKind::subgaussian), dn, t * s_.L2);
      }
      if (name == "expectation") {
        return expectation_centered_bound(s_, norm(NormKind::subgaussian), dn, t);
      }
      if (name == "thmD-upper" || name == "thmD-lower") {
        if (!power_ || *power_ >= 2.0) {
          return std::string("requires a power family with 1 <= p < 2");
        }
        const auto b = lp_small_p_bounds(*power_, dn, t);
        if (name == "thmD-upper") return b.upper;
        if (!b.lower) return std::string("p ≤ 4/3");
        return *b.lower;
      }
      if (name == "lee-vempala") return comparison_bounds(dn, t, c_).lee_vempala;
      if (name == "guedon-milman") return comparison_bounds(dn, t, c_).guedon_milman;
      if (name == "schechtman-zinn") {
        if (!power_ || *power_ < 2.0) return std::string("requires a power family with p >= 2");
        return comparison_bounds(dn, t, c_).schechtman_zinn;
      }
    } catch (const HypothesisError& e) {
      return std::string(e.what());
    } catch (const RangeError& e) {
      return std::string(e.what());
    }
    throw DomainError("unknown bound '" + name + "'; valid names: " + joined_names());
  }

 private:
  const OrliczNormConstant& norm(NormKind kind) {
    auto& slot = kind == NormKind::exp ? exp_ : sub_;
    if (!slot) slot = orlicz_norm_constant(f_, s_, kind);
    return *slot;
  }

  OrliczFunction f_;
  GibbsSummary s_;
  double c_;
  std::optional<double> power_;
  std::optional<OrliczNormConstant> exp_;
  std::optional<OrliczNormConstant> sub_;
};

std::vector<std::string> requested(const ExperimentConfig& cfg,
                                   const std::vector<std::string>& fallback) {
  return cfg.bounds_requested.empty() ? fallback : cfg.bounds_requested;
}

std::string note_skip(const std::string& bound, int n, double t, const std::string& reason) {
  return "skipped " + bound + " at n=" + std::to_string(n) + ", t=" + csv_double(t) + ": " +
         reason;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (orlicz_spec.empty()) throw DomainError("--orlicz is required");
  if (!(R > 0.0) || !std::isfinite(R)) throw DomainError("--radius must be positive");
  if (n_list.empty()) throw DomainError("--n list is empty");
  if (t_list.empty()) throw DomainError("--t list is empty");
  for (int n : n_list) {
    if (n < 1) throw DomainError("dimension n must be a positive integer");
  }
  for (double t : t_list) {
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("deviation t must be positive");
  }
  if (samples < 1000) throw DomainError("--samples must be at least 1000");
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("--c must be positive");
  if (method != "importance" && method != "exact-lp") {
    throw DomainError("--method must be 'importance' or 'exact-lp'");
  }
  for (const auto& b : bounds_requested) {
    if (std::find(bound_names().begin(), bound_names().end(), b) == bound_names().end()) {
      throw DomainError("unknown bound '" + b + "'; valid names: " + joined_names());
    }
  }
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& item : split(text)) out.push_back(to_dimension(parse_number(item)));
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text)) out.push_back(parse_number(item));
  return out;
}

void apply_config_json(const json& doc, ExperimentConfig& cfg) {
  if (!doc.is_object()) throw ParseError("config must be a JSON object");
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "orlicz") {
        cfg.orlicz_spec = value.get<std::string>();
      } else if (key == "radius") {
        cfg.R = value.get<double>();
      } else if (key == "n") {
        cfg.n_list.clear();
        if (value.is_array()) {
          for (const auto& v : value) cfg.n_list.push_back(to_dimension(v.get<double>()));
        } else {
          cfg.n_list.push_back(to_dimension(value.get<double>()));
        }
      } else if (key == "t") {
        cfg.t_list = value.is_array() ? value.get<std::vector<double>>()
                                      : std::vector<double>{value.get<double>()};
      } else if (key == "samples") {
        cfg.samples = value.get<std::uint64_t>();
      } else if (key == "seed") {
        cfg.seed = value.get<std::uint64_t>();
      } else if (key == "bounds") {
        cfg.bounds_requested = value.get<std::vector<std::string>>();
      } else if (key == "format") {
        const auto f = value.get<std::string>();
        if (f != "json" && f != "csv") throw ParseError("format must be 'json' or 'csv'");
        cfg.output_format = f == "json" ? OutputFormat::json : OutputFormat::csv;
      } else if (key == "method") {
        cfg.method = value.get<std::string>();
      } else if (key == "c") {
        cfg.c = value.get<double>();
      } else if (key == "bootstrap") {
        cfg.bootstrap = value.get<bool>();
      } else if (key == "out") {
        cfg.out_path = value.get<std::string>();
      } else {
        throw ParseError("unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("config value has the wrong type: ") + e.what());
  }
}

CommandResult cmd_thermo(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto f = parse_orlicz_spec(cfg.orlicz_spec);
  const auto s = gibbs_summary(f, cfg.R);
  CommandResult r;
  if (cfg.output_format == OutputFormat::json) {
    json j = header("thermo", cfg, f);
    j.update(json(s));
    r.output = dump(j);
  } else {
    std::ostringstream out;
    out << "schema_version,orlicz,R,alpha_star,phi,phi1,phi2,L2,varZ2,EZ4,cov00,cov01,cov10,"
           "cov11,residual\n";
    out << kSchemaVersion << ',' << csv_field(f.spec()) << ',' << csv_double(cfg.R);
    for (double v : {s.alpha_star, s.phi, s.phi1, s.phi2, s.L2, s.varZ2, s.EZ4, s.cov[0],
                     s.cov[1], s.cov[2], s.cov[3], s.alpha_residual()}) {
      out << ',' << csv_double(v);
    }
    out << '\n';
    r.output = out.str();
  }
  return r;
}

CommandResult cmd_bounds(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto f = parse_orlicz_spec(cfg.orlicz_spec);
  const auto s = gibbs_summary(f, cfg.R);
  BoundContext ctx(f, s, cfg.c);
  const auto names = requested(cfg, bound_names());
  const auto power = f.power_exponent();

  CommandResult r;
  json rows = json::array();
  json skipped = json::array();
  json diagnostics = json::array();
  std::ostringstream csv;
  csv << "schema_version,orlicz,R,n,t,bound_name,prefactor,exponent,value,asymptotic_caveat\n";
  for (int n : cfg.n_list) {
    for (double t : cfg.t_list) {
      const auto pd = power && *power >= 1.0 && *power < 4.0 ? power : std::nullopt;
      diagnostics.push_back({{"n", n}, {"t", t}, {"ratios", tn_range_diagnostics(pd, n, t)}});
      for (const auto& name : names) {
        auto outcome = ctx.evaluate(name, n, t);
        if (auto* reason = std::get_if<std::string>(&outcome)) {
          skipped.push_back({{"bound", name}, {"n", n}, {"t", t}, {"reason", *reason}});
          r.notes.push_back(note_skip(name, n, t, *reason));
          continue;
        }
        const auto& b = std::get<BoundValue>(outcome);
        rows.push_back({{"n", n}, {"t", t}, {"bound", b}});
        csv << kSchemaVersion << ',' << csv_field(f.spec()) << ',' << csv_double(cfg.R) << ','
            << n << ',' << csv_double(t) << ',' << b.name << ',' << csv_double(b.prefactor)
            << ',' << csv_double(b.exponent) << ',' << csv_double(b.value) << ','
            << (b.asymptotic_caveat ? "true" : "false") << '\n';
      }
    }
  }
  if (cfg.output_format == OutputFormat::json) {
    json j = header("bounds", cfg, f);
    j["c"] = cfg.c;
    j["rows"] = rows;
    j["skipped"] = skipped;
    j["diagnostics"] = diagnostics;
    r.output = dump(j);
  } else {
    r.output = csv.str();
  }
  return r;
}

CommandResult cmd_simulate(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto f = parse_orlicz_spec(cfg.orlicz_spec);
  const auto power = f.power_exponent();
  if (cfg.method == "exact-lp" && !power) {
    throw DomainError("method exact-lp requires a power family; got " + f.spec());
  }
  const auto s = gibbs_summary(f, cfg.R);
  BoundContext ctx(f, s, cfg.c);
  const auto names = requested(cfg, {"thmB"});
  SamplingOptions opts;
  opts.bootstrap = cfg.bootstrap;

  CommandResult r;
  json results = json::array();
  std::ostringstream csv;
  csv << "schema_version,orlicz,R,n,t,method,estimate,std_error,ci_low,ci_high,ess,bound_name,"
         "bound_value,ratio\n";
  for (int n : cfg.n_list) {
    for (double t : cfg.t_list) {
      // The estimators take the deviation of ||X||^2 / n from L2.
      const double raw = t * s.L2;
      const MonteCarloEstimate est =
          cfg.method == "importance"
              ? thinshell_probability_is(f, cfg.R, n, raw, cfg.samples, cfg.seed, opts)
              : thinshell_probability_exact(*power, cfg.R, n, raw, cfg.samples, cfg.seed);
      if (est.unreliable) {
        r.notes.push_back("estimate at n=" + std::to_string(n) + ", t=" + csv_double(t) +
                          " is flagged unreliable");
      }
      const std::string prefix = std::to_string(kSchemaVersion) + ',' + csv_field(f.spec()) +
                                 ',' + csv_double(cfg.R) + ',' + std::to_string(n) + ',' +
                                 csv_double(t) + ',' + cfg.method + ',' +
                                 csv_double(est.value) + ',' + csv_double(est.std_error) + ',' +
                                 csv_double(est.ci_low) + ',' + csv_double(est.ci_high) + ',' +
                                 csv_double(est.effective_sample_size) + ',';
      json bounds = json::array();
      json skipped = json::array();
      for (const auto& name : names) {
        auto outcome = ctx.evaluate(name, n, t);
        if (auto* reason = std::get_if<std::string>(&outcome)) {
          skipped.push_back({{"bound", name}, {"reason", *reason}});
          r.notes.push_back(note_skip(name, n, t, *reason));
          continue;
        }
        const auto& b = std::get<BoundValue>(outcome);
        const double ratio = est.value / b.value;
        json jb = b;
        jb["ratio"] = ratio;
        bounds.push_back(jb);
        csv << prefix << b.name << ',' << csv_double(b.value) << ',' << csv_double(ratio) << '\n';
      }
      if (bounds.empty()) csv << prefix << ",,\n";
      results.push_back(
          {{"n", n}, {"t", t}, {"estimate", est}, {"bounds", bounds}, {"skipped", skipped}});
    }
  }
  if (cfg.output_format == OutputFormat::json) {
    json j = header("simulate", cfg, f);
    j["method"] = cfg.method;
    j["samples"] = cfg.samples;
    j["seed"] = cfg.seed;
    j["results"] = results;
    r.output = dump(j);
  } else {
    r.output = csv.str();
  }
  return r;
}

CommandResult cmd_isotropic(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto f = parse_orlicz_spec(cfg.orlicz_spec);
  SamplingOptions opts;
  opts.bootstrap = cfg.bootstrap;
  const auto report = isotropic_report(f, cfg.R, cfg.n_list, cfg.samples, cfg.seed, opts);

  CommandResult r;
  if (cfg.output_format == OutputFormat::json) {
    json j = header("isotropic", cfg, f);
    j["samples"] = cfg.samples;
    j["seed"] = cfg.seed;
    j.update(json(report));
    r.output = dump(j);
  } else {
    std::ostringstream out;
    out << "schema_version,orlicz,R,n,asymptotic_L,volume_radius,estimate,std_error,ci_low,"
           "ci_high,ess,approximate\n";
    for (const auto& e : report.finite_n_estimates) {
      out << kSchemaVersion << ',' << csv_field(f.spec()) << ',' << csv_double(cfg.R) << ','
          << e.n << ',' << csv_double(report.asymptotic_L) << ','
          << csv_double(report.volume_radius) << ',' << csv_double(e.estimate.value) << ','
          << csv_double(e.estimate.std_error) << ',' << csv_double(e.estimate.ci_low) << ','
          << csv_double(e.estimate.ci_high) << ','
          << csv_double(e.estimate.effective_sample_size) << ','
          << (e.estimate.approximate ? "true" : "false") << '\n';
    }
    r.output = out.str();
  }
  return r;
}

CommandResult cmd_check_normalization(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto f = parse_orlicz_spec(cfg.orlicz_spec);
  CommandResult r;
  json rows = json::array();
  std::ostringstream csv;
  csv << "schema_version,orlicz,R,n,estimate,std_error,ess,theory,ratio\n";
  for (int n : cfg.n_list) {
    const auto c = normalization_check(f, cfg.R, n, cfg.samples, cfg.seed);
    rows.push_back({{"n", n}, {"estimate", c.estimate}, {"theory", c.theory}, {"ratio", c.ratio}});
    csv << kSchemaVersion << ',' << csv_field(f.spec()) << ',' << csv_double(cfg.R) << ',' << n
        << ',' << csv_double(c.estimate.value) << ',' << csv_double(c.estimate.std_error) << ','
        << csv_double(c.estimate.effective_sample_size) << ',' << csv_double(c.theory) << ','
        << csv_double(c.ratio) << '\n';
  }
  if (cfg.output_format == OutputFormat::json) {
    json j = header("check-normalization", cfg, f);
    j["samples"] = cfg.samples;
    j["seed"] = cfg.seed;
    j["rows"] = rows;
    r.output = dump(j);
  } else {
    r.output = csv.str();
  }
  return r;
}

}  // namespace orlicz::cli
