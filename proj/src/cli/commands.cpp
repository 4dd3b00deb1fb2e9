#include "eealloc/cli/commands.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "eealloc/cli/report.hpp"
#include "eealloc/cli/scenario_io.hpp"
#include "eealloc/ee_fixed.hpp"
#include "eealloc/ee_joint.hpp"
#include "eealloc/errors.hpp"
#include "eealloc/oracle.hpp"
#include "eealloc/waterfill.hpp"
#include "json.hpp"

namespace eealloc::cli {

namespace {

struct Options {
  std::string scenario;
  std::string out;
  std::string mode = "joint";
  std::size_t samples = 200;
  std::size_t steps = 1000;
  std::uint64_t seed = 0;
  std::size_t users = 3;
  std::string inject;
};

Mode parse_mode(const std::string& m) {
  if (m == "fixed") {
    return Mode::fixed;
  }
  if (m == "joint") {
    return Mode::joint;
  }
  throw InputError("--mode must be 'fixed' or 'joint'");
}

struct LoadedScenario {
  Scenario scenario;
  std::string digest;
};

LoadedScenario load(const std::string& path, Mode mode) {
  const std::string text = read_file(path);
  LoadedScenario ls{parse_scenario(text), content_digest(text)};
  const auto violations = validate(ls.scenario, mode);
  if (!violations.empty()) {
    std::string msg = "invalid scenario:";
    for (const auto& v : violations) {
      msg += "\n  " + v.field + ": " + v.message;
    }
    throw InputError(msg);
  }
  return ls;
}

void emit(const Options& opt, const std::string& content, std::ostream& out) {
  if (opt.out.empty()) {
    out << content;
  } else {
    write_file(opt.out, content);
  }
}

class CheckList {
 public:
  explicit CheckList(std::ostream& out) : out_(out) {}

  /// Passes when value <= limit.
  void at_most(const std::string& name, double value, double limit) {
    record(name, value <= limit,
           fmt::format("value={:.6g} limit={:.6g} margin={:.6g}", value, limit,
                       limit - value));
  }

  void holds(const std::string& name, bool ok, const std::string& detail) {
    record(name, ok, detail);
  }

  bool all_passed() const { return all_passed_; }

 private:
  void record(const std::string& name, bool ok, const std::string& detail) {
    all_passed_ = all_passed_ && ok;
    out_ << (ok ? "PASS " : "FAIL ") << name << ' ' << detail << '\n';
  }

  std::ostream& out_;
  bool all_passed_ = true;
};

std::vector<double> inject_array(const nlohmann::json& doc, const char* key,
                                 std::size_t n) {
  if (!doc.contains(key) || !doc[key].is_array() || doc[key].size() != n) {
    throw InputError(fmt::format("--debug-inject: '{}' must be an array of {} "
                                 "numbers",
                                 key, n));
  }
  std::vector<double> v;
  for (const auto& x : doc[key]) {
    if (!x.is_number()) {
      throw InputError(fmt::format("--debug-inject: '{}' must hold numbers", key));
    }
    v.push_back(x.get<double>());
  }
  return v;
}

double sum(const std::vector<double>& v) {
  double t = 0.0;
  for (double x : v) {
    t += x;
  }
  return t;
}

void check_sweep(CheckList& checks, const Scenario& s, Mode mode,
                 double p_opt) {
  constexpr std::size_t kSamples = 2000;
  const auto curve = sweep(s, mode, kSamples);
  const double spacing =
      (s.power_budget - curve.samples.front().power) / (kSamples - 1);
  checks.at_most("sweep_argmax_distance",
                 std::abs(curve.argmax_power - p_opt), spacing * (1 + 1e-9));
}

int verify_fixed(const Options& opt, const Scenario& s, std::ostream& out) {
  if (s.size() > 4) {
    throw OracleRefusal("verify: the power oracle supports at most 4 users");
  }
  const auto result = optimize_fixed(s);
  Allocation alloc = result.allocation;
  double total_power = result.p_opt;
  if (!opt.inject.empty()) {
    const auto doc = nlohmann::json::parse(read_file(opt.inject));
    const auto powers = inject_array(doc, "powers", s.size());
    alloc = make_allocation(fixed_bandwidths(s), powers, s);
    total_power = sum(powers);
  }

  CheckList checks(out);
  const auto res = fixed_residuals(s, alloc, total_power);
  checks.at_most("kkt_residual", res.kkt, 1e-9);
  checks.at_most("rate_floors", res.floor, 1e-9);
  checks.at_most("power_budget", res.power_budget, 1e-10);

  const auto best = grid_power_oracle(s, total_power, opt.steps);
  checks.at_most("oracle_not_better", best.best_rate - alloc.sum_rate, 1e-6);
  checks.at_most("oracle_gap", (best.best_rate - alloc.sum_rate),
                 1e-3 * std::abs(alloc.sum_rate));
  check_sweep(checks, s, Mode::fixed, result.p_opt);
  return checks.all_passed() ? kOk : kInputError;
}

int verify_joint(const Options& opt, const Scenario& s, std::ostream& out) {
  if (s.size() != 2) {
    throw OracleRefusal("verify: the joint oracle supports exactly 2 users");
  }
  const auto result = optimize_joint(s);
  Allocation alloc = result.solution.allocation;
  double total_bandwidth = s.bandwidth_budget;
  double total_power = result.p_opt;
  if (!opt.inject.empty()) {
    const auto doc = nlohmann::json::parse(read_file(opt.inject));
    const auto w = inject_array(doc, "bandwidths", s.size());
    const auto p = inject_array(doc, "powers", s.size());
    alloc = make_allocation(w, p, s);
    total_bandwidth = sum(w);
    total_power = sum(p);
  }

  CheckList checks(out);
  const auto res = joint_residuals(s, alloc, total_bandwidth, total_power);
  checks.at_most("stationarity", res.stationarity, 1e-8);
  checks.at_most("follower_floor_equality", res.floor_equality, 1e-9);
  checks.at_most("leader_floor", res.leader_floor, 1e-9);
  checks.at_most("bandwidth_budget", res.bandwidth_budget, 1e-10);
  checks.at_most("power_budget", res.power_budget, 1e-10);

  const auto best =
      grid_joint_oracle(s, total_bandwidth, total_power, opt.steps);
  if (best) {
    checks.at_most("oracle_not_better", best->best_rate - alloc.sum_rate, 1e-6);
  } else {
    checks.holds("oracle_not_better", true, "no floor-feasible grid point");
  }
  check_sweep(checks, s, Mode::joint, result.p_opt);
  return checks.all_passed() ? kOk : kInputError;
}

int dispatch(const std::string& command, const Options& opt, std::ostream& out) {
  if (command == "gen") {
    const Mode mode = parse_mode(opt.mode);
    if (opt.users == 0) {
      throw InputError("--users must be at least 1");
    }
    emit(opt, scenario_to_json(random_scenario(opt.seed, opt.users, mode)),
         out);
    return kOk;
  }
  if (command == "solve-fixed") {
    const auto ls = load(opt.scenario, Mode::fixed);
    emit(opt, fixed_report(ls.scenario, ls.digest, optimize_fixed(ls.scenario)),
         out);
    return kOk;
  }
  if (command == "solve-joint") {
    const auto ls = load(opt.scenario, Mode::joint);
    emit(opt, joint_report(ls.scenario, ls.digest, optimize_joint(ls.scenario)),
         out);
    return kOk;
  }
  const Mode mode = parse_mode(opt.mode);
  const auto ls = load(opt.scenario, mode);
  if (command == "sweep") {
    if (opt.samples == 0) {
      throw InputError("--samples must be at least 1");
    }
    emit(opt, sweep_csv(sweep(ls.scenario, mode, opt.samples)), out);
    return kOk;
  }
  if (opt.steps < 10) {
    throw InputError("--steps must be at least 10");
  }
  return mode == Mode::fixed ? verify_fixed(opt, ls.scenario, out)
                             : verify_joint(opt, ls.scenario, out);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Energy-efficient bandwidth and power allocation", "eealloc"};
  app.require_subcommand(1);
  Options opt;

  auto* fixed = app.add_subcommand("solve-fixed",
                                   "Optimal power with fixed bandwidths");
  auto* joint = app.add_subcommand(
      "solve-joint", "Optimal power with joint bandwidth assignment");
  auto* sw = app.add_subcommand("sweep", "Sample the efficiency curve as CSV");
  auto* verify =
      app.add_subcommand("verify", "Check a solution against grid oracles");
  auto* gen = app.add_subcommand("gen", "Write a seeded random scenario");

  for (auto* sub : {fixed, joint, sw, verify}) {
    sub->add_option("--scenario", opt.scenario, "Scenario document")
        ->required();
  }
  for (auto* sub : {fixed, joint, sw, gen}) {
    sub->add_option("--out", opt.out, "Output path (default: stdout)");
  }
  for (auto* sub : {sw, verify, gen}) {
    sub->add_option("--mode", opt.mode, "fixed or joint");
  }
  sw->add_option("--samples", opt.samples, "Number of power samples");
  verify->add_option("--steps", opt.steps, "Oracle grid resolution");
  verify->add_option("--debug-inject", opt.inject,
                     "Verify this allocation instead of the solver's");
  gen->add_option("--seed", opt.seed, "PRNG seed")->required();
  gen->add_option("--users", opt.users, "Number of users");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return dispatch(command, opt, out);
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << " (deficit " << e.deficit() << ")\n";
    return kInfeasible;
  } catch (const OracleRefusal& e) {
    err << "oracle refused: " << e.what() << '\n';
    return kOracleRefused;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

int run(const std::vector<std::string>& args) {
  return run(args, std::cout, std::cerr);
}

}  // namespace eealloc::cli
