// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "oracles.hpp"
#include "patternlab/curve.hpp"
#include "patternlab/domain_sim.hpp"
#include "patternlab/fit.hpp"
#include "patternlab/grid.hpp"
#include "patternlab/model.hpp"
#include "patternlab/moddiv.hpp"
#include "patternlab/presets.hpp"
#include "patternlab/serialize.hpp"
#include "test_support.hpp"

using namespace patternlab;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

Verdict normalization() {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> time(0.0, 12.0);
  const auto start = Clock::now();
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const Scenario s = testing_support::draw_scenario(rng, 1 + k % 8);
    for (int j = 0; j < 10; ++j) {
      const double t = time(rng);
      worst = std::max(worst, std::abs(enumerate_subsets(s, t).mass - 1.0));
      const auto ref = oracle::brute_force_test(testing_support::params_of(s), s.preferred(), s.baseline(), t);
      worst = std::max(worst, std::abs(ref.mass - 1.0));
    }
  }
  const double elapsed = seconds_since(start);
  return {worst <= 1e-12 && elapsed < 5.0, format("max |mass - 1| = %.3g, %.2f s", worst, elapsed)};
}

Verdict oracle_equivalence() {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> time(0.0, 12.0);
  const auto start = Clock::now();
  int failures = 0;
  double worst_ratio = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Scenario s = testing_support::draw_scenario(rng, 1 + k % 6);
    const double t = time(rng);
    const double exact = test_accuracy_exact(s, t);
    const double reference = oracle::brute_force_test(testing_support::params_of(s), s.preferred(), s.baseline(), t).test;
    DomainSimConfig config{s, t, 100'000, 10, 9000 + static_cast<std::uint64_t>(k)};
    const DomainSimResult sim = simulate(config);
    const double tolerance = std::max(3.0 * sim.stderr_test, 0.005);
    const double gap = std::abs(sim.test_acc - exact);
    worst_ratio = std::max(worst_ratio, gap / tolerance);
    if (gap > tolerance || std::abs(exact - reference) > 1e-12) ++failures;
  }
  const double elapsed = seconds_since(start);
  return {failures == 0 && elapsed < 60.0,
          format("%d/100 outside tolerance, worst gap/tolerance = %.3f, %.2f s", failures, worst_ratio, elapsed)};
}

Verdict grokking_shape() {
  const Scenario s = grokking_preset();
  const Curve c = curve(s, GridSpec::parse(kDefaultGrid).values());
  // Direct scan over all grid pairs.
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c.train[i] < 0.99 || c.test[i] > s.baseline() + 0.1) continue;
    for (std::size_t j = i + 1; j < c.size(); ++j) {
      if (c.test[j] >= 0.95 && c.grid[j] / c.grid[i] >= 5.0) {
        return {true, format("t1 = %.4g (train %.4f, test %.4f), t2 = %.4g (test %.4f), ratio %.1f", c.grid[i],
                             c.train[i], c.test[i], c.grid[j], c.test[j], c.grid[j] / c.grid[i])};
      }
    }
  }
  return {false, "no witnessing pair on the default grid"};
}

Verdict double_descent_shape() {
  const Curve c = curve(double_descent_preset(), GridSpec::parse(kDefaultGrid).values());
  const auto& y = c.test;
  const double final_value = y.back();
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    if (!(y[i] >= y[i - 1] && y[i] > y[i + 1])) continue;
    const double later_min = *std::min_element(y.begin() + static_cast<std::ptrdiff_t>(i) + 1, y.end());
    if (later_min <= y[i] - 0.05 && final_value > y[i]) {
      return {true, format("peak %.4f at t = %.4g, dip %.4f, final %.4f", y[i], c.grid[i], later_min, final_value)};
    }
  }
  return {false, "no rise-dip-rise in the test series"};
}

Verdict interpolation() {
  const Scenario dd = double_descent_preset();
  const Scenario grok = grokking_preset();
  if (!(interpolate(0.0) == dd) || !(interpolate(1.0) == grok)) return {false, "endpoint mismatch"};
  std::vector<std::size_t> varying;
  for (std::size_t i = 0; i < dd.size(); ++i) {
    if (dd.pattern(i).gamma() != grok.pattern(i).gamma()) varying.push_back(i);
  }
  if (varying.size() != 2) return {false, format("%zu gamma values differ between presets", varying.size())};
  std::mt19937_64 rng(303);
  std::vector<double> lambdas;
  for (int k = 0; k <= 100; ++k) lambdas.push_back(k / 100.0);
  for (int k = 0; k < 100; ++k) lambdas.push_back(std::uniform_real_distribution<double>(0.0, 1.0)(rng));
  for (double lambda : lambdas) {
    const Scenario s = interpolate(lambda);
    if (s.size() != dd.size() || s.preferred() != dd.preferred() || s.baseline() != dd.baseline() ||
        s.baseline() != grok.baseline()) {
      return {false, format("scenario-level field changed at lambda = %.4f", lambda)};
    }
    for (std::size_t i = 0; i < s.size(); ++i) {
      const Pattern& p = s.pattern(i);
      for (const Scenario* end : {&dd, &grok}) {
        const Pattern& q = end->pattern(i);
        if (p.alpha() != q.alpha() || p.b() != q.b() || p.g() != q.g()) {
          return {false, format("pattern %zu non-gamma field changed at lambda = %.4f", i, lambda)};
        }
        const bool designated = std::find(varying.begin(), varying.end(), i) != varying.end();
        if (!designated && p.gamma() != q.gamma()) {
          return {false, format("pattern %zu gamma changed at lambda = %.4f", i, lambda)};
        }
      }
    }
  }
  return {true, format("endpoints exact; only gamma of patterns %zu and %zu vary over %zu lambdas", varying[0],
                       varying[1], lambdas.size())};
}

Verdict mod97() {
  const ModDivDataset d = generate(97, 0.5, 0);
  bool rows_ok = d.examples.size() == 9312;
  std::size_t zeros = 0;
  std::uint64_t correct = 0;
  for (const auto& e : d.examples) {
    rows_ok = rows_ok && e.b != 0 && (std::uint64_t{e.c} * e.b) % 97 == e.a;
    zeros += e.a == 0;
    // Rule: answer 0 when a = 0, otherwise each of the 97 guesses is equally likely.
    for (std::uint32_t guess = 0; guess < 97; ++guess) correct += (e.a == 0 ? 0u : guess) == e.c;
  }
  const double brute = static_cast<double>(correct) / (9312.0 * 97.0);
  const double peak = predicted_peak_accuracy(d, Split::all);
  const double closed_form = (96.0 + 9216.0 / 97.0) / 9312.0;
  const bool pass = rows_ok && zeros == 96 && zero_dividend_stats(d).total == 96 &&
                    std::abs(peak - closed_form) <= 1e-12 && peak == brute;
  return {pass, format("%zu rows, relation %s, %zu zero-dividend rows, peak %.17g (brute force %.17g)",
                       d.examples.size(), rows_ok ? "holds" : "violated", zeros, peak, brute)};
}

Verdict fit_round_trip() {
  const auto grid = GridSpec::parse("log:0.1:1e4:64").values();
  int failures = 0;
  double worst_loss = 0.0, worst_dev = 0.0, slowest = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Scenario truth = testing_support::round_trip_scenario(seed);
    const Curve observed = curve(truth, grid);
    FitConfig config;
    config.n_patterns = truth.size();
    config.preferred = truth.preferred();
    config.baseline = truth.baseline();
    config.seed = seed;
    const auto start = Clock::now();
    const FitResult r = fit(ObservedCurve{observed.grid, observed.train, observed.test, {}}, config);
    const double elapsed = seconds_since(start);
    const Curve fitted = curve(r.scenario, grid);
    double dev = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      dev = std::max({dev, std::abs(fitted.train[i] - observed.train[i]), std::abs(fitted.test[i] - observed.test[i])});
    }
    worst_loss = std::max(worst_loss, r.loss);
    worst_dev = std::max(worst_dev, dev);
    slowest = std::max(slowest, elapsed);
    if (r.loss > 1e-4 || dev > 0.02 || elapsed >= 30.0) ++failures;
  }
  return {failures == 0, format("%d/20 failed; worst loss %.3g, worst deviation %.4f, slowest %.2f s", failures,
                                worst_loss, worst_dev, slowest)};
}

Verdict constant_g() {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> times = GridSpec::parse("lin:0:20:41").values();
  times.push_back(1e6);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const std::size_t n = 1 + k % 8;
    const double baseline = unit(rng);
    std::vector<Pattern> patterns;
    for (std::size_t i = 0; i < n; ++i) patterns.emplace_back(unit(rng), 3.0 * unit(rng), 10.0 * unit(rng), baseline);
    std::optional<std::size_t> preferred;
    if (k % 2 == 1) preferred = k % n;
    const Scenario s(std::move(patterns), preferred, baseline);
    for (double t : times) worst = std::max(worst, std::abs(test_accuracy_exact(s, t) - baseline));
  }
  return {worst <= 1e-12, format("max |test - baseline| = %.3g over 1000 scenarios x %zu times", worst, times.size())};
}

int run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  return cli::run(args, out, err);
}

Verdict cli_reproducibility() {
  const fs::path root = fs::temp_directory_path() / "patternlab_acceptance_cli";
  fs::remove_all(root);
  for (const char* name : {"a", "b"}) {
    const std::string dir = (root / name).string();
    fs::create_directories(dir);
    const std::vector<std::vector<std::string>> runs = {
        {"simulate", "--preset", "grokking", "--seed", "11", "--out", dir + "/grok.csv"},
        {"simulate", "--preset", "double-descent", "--axis", "capacity", "--out", dir + "/dd.json"},
        {"sweep", "--preset", "grokking", "--param", "lambda", "--values", "lin:0:1:4", "--grid", "log:1:1e3:20",
         "--seed", "11", "--out", dir + "/sweep.csv"},
        {"interpolate", "--steps", "5", "--seed", "11", "--out-dir", dir + "/interp"},
        {"fit", "--observed", (root / "observed.csv").string(), "--restarts", "2", "--seed", "11", "--out",
         dir + "/fit.json"},
        {"dataset", "--p", "97", "--train-fraction", "0.3", "--seed", "11", "--out", dir + "/m97.tok"},
        {"mc-check", "--n", "3", "--samples", "20000", "--scenarios", "3", "--seed", "11", "--out",
         dir + "/mc.json"},
    };
    if (!fs::exists(root / "observed.csv")) {
      write_file_atomic(root / "observed.csv",
                        curve_to_csv(curve(grokking_preset(), GridSpec::parse("log:0.1:1e4:32").values())));
    }
    for (const auto& args : runs) {
      if (run_cli(args) != 0) return {false, "invocation failed: " + args.front()};
    }
  }
  std::size_t compared = 0;
  for (const auto& entry : fs::recursive_directory_iterator(root / "a")) {
    if (!entry.is_regular_file()) continue;
    const fs::path twin = root / "b" / fs::relative(entry.path(), root / "a");
    if (!fs::exists(twin) || read_file(entry.path()) != read_file(twin)) {
      return {false, "differs: " + fs::relative(entry.path(), root / "a").string()};
    }
    ++compared;
  }
  fs::remove_all(root);
  return {compared > 0, format("%zu output files bitwise identical across two runs", compared)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"normalization", normalization},
      {"oracle-equivalence", oracle_equivalence},
      {"grokking-shape", grokking_shape},
      {"double-descent-shape", double_descent_shape},
      {"interpolation", interpolation},
      {"mod97-facts", mod97},
      {"fit-round-trip", fit_round_trip},
      {"constant-g-collapse", constant_g},
      {"cli-reproducibility", cli_reproducibility},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s: %s\n", v.pass ? "PASS" : "FAIL", name.c_str(), v.detail.c_str());
    std::fflush(stdout);
    failed += !v.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
