#include "cli.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <regex>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "patternlab/curve.hpp"
#include "patternlab/domain_sim.hpp"
#include "patternlab/errors.hpp"
#include "patternlab/fit.hpp"
#include "patternlab/grid.hpp"
#include "patternlab/model.hpp"
#include "patternlab/moddiv.hpp"
#include "patternlab/presets.hpp"
#include "patternlab/sampling.hpp"
#include "patternlab/serialize.hpp"
#include "patternlab/service.hpp"

namespace patternlab::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

/// Bad flag values that CLI11 cannot catch on its own.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  // shared
  std::uint64_t seed = 0;
  std::string preset;
  std::string scenario_path;
  std::string grid{kDefaultGrid};
  std::string axis = "time";
  std::uint64_t samples = 200'000;
  std::string out;
  std::string out_dir;
  // interpolate
  double lambda = 0.0;
  std::size_t steps = 11;
  // sweep
  std::string param;
  std::string values;
  // fit
  std::string observed;
  std::size_t n_patterns = 3;
  std::size_t preferred = 0;
  double baseline = 0.0;
  std::size_t restarts = 16;
  std::size_t max_evals = 20'000;
  double tol = 1e-8;
  // dataset
  std::uint32_t p = 97;
  double train_fraction = 0.5;
  // mc-check
  std::size_t n = 6;
  std::size_t scenarios = 20;
  // serve
  std::uint16_t port = kDefaultServicePort;
  std::string host = "127.0.0.1";
};

std::string format_real(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

std::uint64_t resolve_seed(const CLI::Option* flag, std::uint64_t flag_value) {
  if (flag != nullptr && flag->count() > 0) return flag_value;
  const char* env = std::getenv("PATTERNLAB_SEED");
  if (env == nullptr || *env == '\0') return 0;
  std::uint64_t value = 0;
  const std::string_view text(env);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw UsageError("PATTERNLAB_SEED must be an unsigned 64-bit integer, got '" + std::string(text) + "'");
  }
  return value;
}

Scenario load_scenario(const Options& o) {
  if (!o.scenario_path.empty()) return scenario_from_json(read_file(o.scenario_path));
  const std::string name = o.preset.empty() ? "grokking" : o.preset;
  if (auto s = preset_by_name(name)) return *s;
  throw UsageError("unknown preset '" + name + "' (expected grokking or double-descent)");
}

CurveOptions curve_options(const Options& o) {
  CurveOptions options;
  options.mc_samples = o.samples;
  options.seed = o.seed;
  return options;
}

/// A curve and its sidecar, written only after both are rendered.
void write_curve(const fs::path& path, const Curve& c, const Scenario& scenario, std::uint64_t seed) {
  if (path.extension() == ".json") {
    write_file_atomic(path, curve_to_json(c));
    return;
  }
  const std::string csv = curve_to_csv(c);
  const std::string meta = curve_metadata_json(c, scenario, seed);
  fs::path meta_path = path;
  meta_path += ".meta.json";
  write_file_atomic(path, csv);
  write_file_atomic(meta_path, meta);
}

int cmd_simulate(const Options& o, std::ostream& out) {
  const Scenario scenario = load_scenario(o);
  const Curve c = curve(scenario, GridSpec::parse(o.grid).values(), parse_axis(o.axis), curve_options(o));
  if (o.out.empty()) {
    out << curve_to_csv(c);
  } else {
    write_curve(o.out, c, scenario, o.seed);
    out << "wrote " << c.size() << " rows to " << o.out << "\n";
  }
  return kExitOk;
}

/// Applies `value` to the parameter named by `param`:
/// `lambda`, `baseline`, or `patterns[i].{gamma,alpha,b,g}`.
Scenario with_parameter(const Scenario& base, const std::string& param, double value) {
  if (param == "lambda") return interpolate(value);
  if (param == "baseline") return Scenario({base.patterns().begin(), base.patterns().end()}, base.preferred(), value);
  static const std::regex pattern_field(R"(patterns\[(\d+)\]\.(gamma|alpha|b|g))");
  std::smatch m;
  if (!std::regex_match(param, m, pattern_field)) {
    throw UsageError("--param must be lambda, baseline or patterns[i].{gamma,alpha,b,g}, got '" + param + "'");
  }
  const std::size_t index = std::stoul(m[1].str());
  if (index >= base.size()) throw UsageError("--param index " + m[1].str() + " is out of range");
  std::vector<Pattern> patterns(base.patterns().begin(), base.patterns().end());
  const Pattern& p = patterns[index];
  const std::string field = m[2].str();
  try {
    patterns[index] = Pattern(field == "gamma" ? value : p.gamma(), field == "alpha" ? value : p.alpha(),
                              field == "b" ? value : p.b(), field == "g" ? value : p.g());
  } catch (const ValidationError& e) {
    throw e.nested("patterns[" + m[1].str() + "]");
  }
  return Scenario(std::move(patterns), base.preferred(), base.baseline());
}

int cmd_sweep(const Options& o, std::ostream& out) {
  const Scenario base = load_scenario(o);
  const std::vector<double> values = GridSpec::parse(o.values).values();
  const std::vector<double> grid = GridSpec::parse(o.grid).values();
  const Axis axis = parse_axis(o.axis);

  std::string csv = "param_value,t,train_acc,test_acc\n";
  json runs = json::array();
  for (double value : values) {
    const Scenario scenario = with_parameter(base, o.param, value);
    const Curve c = curve(scenario, grid, axis, curve_options(o));
    for (std::size_t i = 0; i < c.size(); ++i) {
      csv += format_real(value) + ',' + format_real(c.grid[i]) + ',' + format_real(c.train[i]) + ',' +
             format_real(c.test[i]) + '\n';
    }
    runs.push_back({{"param_value", value}, {"mc_samples", c.mc_samples}});
  }
  if (o.out.empty()) {
    out << csv;
    return kExitOk;
  }
  const json meta = {{"param", o.param},  {"values", o.values}, {"grid", o.grid},
                     {"axis", o.axis},    {"seed", o.seed},     {"runs", runs},
                     {"columns", {"param_value", "t", "train_acc", "test_acc"}}};
  fs::path meta_path = o.out;
  meta_path += ".meta.json";
  write_file_atomic(o.out, csv);
  write_file_atomic(meta_path, meta.dump(2) + "\n");
  out << "wrote " << values.size() << " sweep curves to " << o.out << "\n";
  return kExitOk;
}

std::string lambda_filename(double lambda) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "lambda_%.3f.csv", lambda);
  return buffer;
}

int cmd_interpolate(const Options& o, const CLI::App& sub, std::ostream& out) {
  const std::vector<double> grid = GridSpec::parse(o.grid).values();
  const Axis axis = parse_axis(o.axis);
  const bool single = sub.get_option("--lambda")->count() > 0;

  std::vector<double> lambdas;
  if (single) {
    lambdas.push_back(o.lambda);
  } else {
    if (o.steps < 1) throw UsageError("--steps must be at least 1");
    for (std::size_t i = 0; i < o.steps; ++i) {
      lambdas.push_back(o.steps == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(o.steps - 1));
    }
  }
  if (single && o.out.empty() && o.out_dir.empty()) {
    out << curve_to_csv(curve(interpolate(o.lambda), grid, axis, curve_options(o)));
    return kExitOk;
  }
  if (!single && o.out_dir.empty()) throw UsageError("interpolate --steps needs --out-dir");

  std::vector<std::pair<fs::path, std::pair<Scenario, Curve>>> rendered;
  for (double lambda : lambdas) {
    Scenario scenario = interpolate(lambda);
    Curve c = curve(scenario, grid, axis, curve_options(o));
    const fs::path path = single && !o.out.empty() ? fs::path(o.out) : fs::path(o.out_dir) / lambda_filename(lambda);
    rendered.push_back({path, {std::move(scenario), std::move(c)}});
  }
  for (const auto& [path, result] : rendered) write_curve(path, result.second, result.first, o.seed);
  out << "wrote " << rendered.size() << " interpolation curve(s)\n";
  return kExitOk;
}

int cmd_fit(const Options& o, const CLI::App& sub, std::ostream& out) {
  const ObservedCurve observed = observed_from_csv(read_file(o.observed));
  FitConfig config;
  config.n_patterns = o.n_patterns;
  if (sub.get_option("--preferred")->count() > 0) config.preferred = o.preferred;
  config.baseline = o.baseline;
  config.restarts = o.restarts;
  config.max_evals = o.max_evals;
  config.tol = o.tol;
  config.seed = o.seed;

  const FitResult result = fit(observed, config);
  const FitBounds bounds = FitBounds::from_grid(observed.grid);
  json report = json::parse(scenario_to_json(result.scenario));
  json body = {{"scenario", report},
               {"loss", result.loss},
               {"evals", result.evals},
               {"converged", result.converged},
               {"config",
                {{"n_patterns", config.n_patterns},
                 {"preferred", config.preferred ? json(*config.preferred) : json(nullptr)},
                 {"baseline", config.baseline},
                 {"restarts", config.restarts},
                 {"max_evals", config.max_evals},
                 {"tol", config.tol},
                 {"seed", config.seed},
                 {"bounds",
                  {{"gamma", {bounds.gamma.lo, bounds.gamma.hi}},
                   {"alpha", {bounds.alpha.lo, bounds.alpha.hi}},
                   {"b", {bounds.b.lo, bounds.b.hi}},
                   {"g", {bounds.g.lo, bounds.g.hi}}}}}}};
  const std::string text = body.dump(2) + "\n";
  if (o.out.empty()) {
    out << text;
  } else {
    write_file_atomic(o.out, text);
    out << "loss " << format_real(result.loss) << " after " << result.evals << " evaluations; wrote "
        << o.out << "\n";
  }
  return kExitOk;
}

int cmd_dataset(const Options& o, std::ostream& out) {
  const ModDivDataset dataset = generate(o.p, o.train_fraction, o.seed);
  const ZeroDividendStats zero = zero_dividend_stats(dataset);
  if (o.out.empty()) throw UsageError("dataset needs --out");
  export_tokens(dataset, o.out);
  out << "p " << dataset.p << ", " << dataset.examples.size() << " examples, train_fraction "
      << format_real(dataset.train_fraction) << "\n";
  out << "zero-dividend examples: " << zero.total << " (train " << zero.in_train << ", test " << zero.in_test
      << ")\n";
  for (const auto& [name, split] : {std::pair{"all", Split::all}, {"train", Split::train}, {"test", Split::test}}) {
    out << "predicted peak accuracy (" << name << "): ";
    try {
      out << format_real(predicted_peak_accuracy(dataset, split)) << "\n";
    } catch (const ValidationError&) {
      out << "n/a (empty split)\n";
    }
  }
  out << "wrote " << o.out << " and " << sidecar_path(o.out).string() << "\n";
  return kExitOk;
}

int cmd_mc_check(const Options& o, std::ostream& out) {
  if (o.n < 1 || o.n > kExactEnumerationCap) throw UsageError("--n must be in [1, 20]");
  if (o.samples < 1) throw UsageError("--samples must be at least 1");
  json rows = json::array();
  std::size_t failures = 0;
  out << std::setw(4) << "id" << std::setw(10) << "t" << std::setw(12) << "exact" << std::setw(12) << "domain"
      << std::setw(12) << "mc" << "  result\n";
  for (std::size_t k = 0; k < o.scenarios; ++k) {
    const std::uint64_t scenario_seed = o.seed + k;
    const Scenario scenario = random_scenario(o.n, scenario_seed);
    const double t = 10.0 * static_cast<double>(k + 1) / static_cast<double>(o.scenarios + 1);
    const double exact = test_accuracy_exact(scenario, t);
    const DomainSimResult sim = simulate({scenario, t, o.samples, 1, scenario_seed});
    const McEstimate mc = test_accuracy_mc(scenario, t, o.samples, scenario_seed);
    const bool sim_ok = std::abs(sim.test_acc - exact) <= std::max(3.0 * sim.stderr_test, 0.005);
    const bool mc_ok = std::abs(mc.estimate - exact) <= std::max(3.0 * mc.std_error, 0.005);
    const bool train_ok =
        std::abs(sim.train_acc - train_accuracy(scenario, t)) <= std::max(3.0 * sim.stderr_train, 0.005);
    const bool pass = sim_ok && mc_ok && train_ok;
    if (!pass) ++failures;
    out << std::setw(4) << k << std::setw(10) << std::fixed << std::setprecision(4) << t << std::setw(12)
        << std::setprecision(6) << exact << std::setw(12) << sim.test_acc << std::setw(12) << mc.estimate << "  "
        << (pass ? "pass" : "FAIL") << "\n";
    out.unsetf(std::ios::floatfield);
    rows.push_back({{"id", k},
                    {"seed", scenario_seed},
                    {"t", t},
                    {"scenario", json::parse(scenario_to_json(scenario))},
                    {"exact", exact},
                    {"domain_sim", sim.test_acc},
                    {"domain_sim_stderr", sim.stderr_test},
                    {"domain_sim_train", sim.train_acc},
                    {"mc", mc.estimate},
                    {"mc_stderr", mc.std_error},
                    {"pass", pass}});
  }
  out << (o.scenarios - failures) << "/" << o.scenarios << " scenarios pass |estimate - exact| <= max(3 stderr, 0.005)\n";
  if (!o.out.empty()) {
    const json report = {{"n", o.n}, {"samples", o.samples}, {"seed", o.seed}, {"failures", failures}, {"rows", rows}};
    write_file_atomic(o.out, report.dump(2) + "\n");
  }
  return failures == 0 ? kExitOk : kExitRuntime;
}

int cmd_serve(const Options& o, std::ostream& out) {
  ExplorerServer server;
  const std::uint16_t port = server.bind(o.host, o.port);
  out << "listening on http://" << o.host << ":" << port << std::endl;
  server.listen();
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"patternlab: pattern-learning model of grokking and double descent"};
  app.require_subcommand(1);
  Options o;

  auto add_seed = [&](CLI::App* sub) {
    return sub->add_option("--seed", o.seed, "Random seed (default: $PATTERNLAB_SEED or 0)");
  };
  auto add_scenario = [&](CLI::App* sub) {
    auto* preset = sub->add_option("--preset", o.preset, "grokking | double-descent")
                       ->check(CLI::IsMember({"grokking", "double-descent"}));
    auto* scenario = sub->add_option("--scenario", o.scenario_path, "Scenario JSON file")->check(CLI::ExistingFile);
    preset->excludes(scenario);
  };
  auto add_curve = [&](CLI::App* sub) {
    sub->add_option("--grid", o.grid, "log:start:end:count or lin:start:end:count")->capture_default_str();
    sub->add_option("--axis", o.axis, "time | capacity")->check(CLI::IsMember({"time", "capacity"}))->capture_default_str();
    sub->add_option("--samples", o.samples, "Monte Carlo samples per point beyond the exact cap")->capture_default_str();
  };

  std::vector<std::pair<CLI::App*, CLI::Option*>> seeds;

  auto* simulate_cmd = app.add_subcommand("simulate", "Evaluate train/test accuracy curves");
  add_scenario(simulate_cmd);
  add_curve(simulate_cmd);
  simulate_cmd->add_option("--out", o.out, "Output file (.csv with .meta.json sidecar, or .json)");
  seeds.emplace_back(simulate_cmd, add_seed(simulate_cmd));

  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep one parameter across a value grid");
  add_scenario(sweep_cmd);
  add_curve(sweep_cmd);
  sweep_cmd->add_option("--param", o.param, "lambda, baseline or patterns[i].{gamma,alpha,b,g}")->required();
  sweep_cmd->add_option("--values", o.values, "Value grid, e.g. lin:0:1:11")->required();
  sweep_cmd->add_option("--out", o.out, "Output CSV");
  seeds.emplace_back(sweep_cmd, add_seed(sweep_cmd));

  auto* interpolate_cmd = app.add_subcommand("interpolate", "Curves along the double-descent to grokking family");
  add_curve(interpolate_cmd);
  interpolate_cmd->add_option("--lambda", o.lambda, "Single lambda in [0, 1]");
  interpolate_cmd->add_option("--steps", o.steps, "Number of evenly spaced lambdas")->capture_default_str();
  interpolate_cmd->add_option("--out", o.out, "Output file for --lambda");
  interpolate_cmd->add_option("--out-dir", o.out_dir, "Output directory for --steps");
  interpolate_cmd->get_option("--lambda")->excludes(interpolate_cmd->get_option("--steps"));
  seeds.emplace_back(interpolate_cmd, add_seed(interpolate_cmd));

  auto* fit_cmd = app.add_subcommand("fit", "Fit pattern parameters to an observed curve");
  fit_cmd->add_option("--observed", o.observed, "CSV with t,train_acc,test_acc[,weight]")->required()->check(CLI::ExistingFile);
  fit_cmd->add_option("--n-patterns", o.n_patterns, "Patterns to fit (1..5)")->capture_default_str();
  fit_cmd->add_option("--preferred", o.preferred, "Index of the preferred pattern");
  fit_cmd->add_option("--baseline", o.baseline, "Fixed empty-set accuracy")->capture_default_str();
  fit_cmd->add_option("--restarts", o.restarts)->capture_default_str();
  fit_cmd->add_option("--max-evals", o.max_evals, "Objective evaluations per restart")->capture_default_str();
  fit_cmd->add_option("--tol", o.tol)->capture_default_str();
  fit_cmd->add_option("--out", o.out, "FitResult JSON");
  seeds.emplace_back(fit_cmd, add_seed(fit_cmd));

  auto* dataset_cmd = app.add_subcommand("dataset", "Generate the modular-division token dataset");
  dataset_cmd->add_option("--p", o.p, "Prime modulus")->capture_default_str();
  dataset_cmd->add_option("--train-fraction", o.train_fraction)->capture_default_str();
  dataset_cmd->add_option("--out", o.out, "Token file (sidecar written to <out>.json)");
  seeds.emplace_back(dataset_cmd, add_seed(dataset_cmd));

  auto* mc_cmd = app.add_subcommand("mc-check", "Compare exact test accuracy with both Monte Carlo estimators");
  mc_cmd->add_option("--n", o.n, "Patterns per random scenario")->capture_default_str();
  mc_cmd->add_option("--samples", o.samples, "Samples per estimator")->capture_default_str();
  mc_cmd->add_option("--scenarios", o.scenarios, "Random scenarios to check")->capture_default_str();
  mc_cmd->add_option("--out", o.out, "JSON report");
  seeds.emplace_back(mc_cmd, add_seed(mc_cmd));

  auto* serve_cmd = app.add_subcommand("serve", "Run the explorer JSON API");
  serve_cmd->add_option("--port", o.port)->capture_default_str();
  serve_cmd->add_option("--host", o.host)->capture_default_str();
  seeds.emplace_back(serve_cmd, add_seed(serve_cmd));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream out_text;
    std::ostringstream err_text;
    const int code = app.exit(e, out_text, err_text);
    out << out_text.str();
    err << err_text.str();
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    CLI::App* active = app.get_subcommands().front();
    for (const auto& [sub, flag] : seeds) {
      if (sub == active) o.seed = resolve_seed(flag, o.seed);
    }
    out << "seed: " << o.seed << "\n";
    const std::string name = active->get_name();
    if (name == "simulate") return cmd_simulate(o, out);
    if (name == "sweep") return cmd_sweep(o, out);
    if (name == "interpolate") return cmd_interpolate(o, *active, out);
    if (name == "fit") return cmd_fit(o, *active, out);
    if (name == "dataset") return cmd_dataset(o, out);
    if (name == "mc-check") return cmd_mc_check(o, out);
    return cmd_serve(o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace patternlab::cli
