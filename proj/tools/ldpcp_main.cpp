//
// Copyright 2026 The LDPCP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ldpcp/calib_label.hpp"
#include "ldpcp/calib_score.hpp"
#include "ldpcp/dataset.hpp"
#include "ldpcp/mechanisms.hpp"
#include "ldpcp/random.hpp"
#include "ldpcp/scores.hpp"
#include "ldpcp/simulate.hpp"
#include "ldpcp/types.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace ldpcp;

struct Options {
  double epsilon = 4.0;
  double alpha = 0.1;
  double delta_fail = 0.1;
  double tau = kDefaultTau;
  int rounds = 0;  // 0 = derive from tau
  std::string score_name = "hps";
  int k = 8;
  std::size_t n_calib = 10000;
  std::size_t n_test = 10000;
  double concentration = kDefaultConcentration;
  std::uint64_t seed = 0;
  std::size_t seeds = 100;
  std::vector<std::uint64_t> seed_list;
  std::string input;
  std::string output;
  bool shuffle = false;
  bool trace = false;
  bool strict = false;
  bool exhaustive = false;
  bool starred = false;
  std::optional<double> delta_target;
  std::vector<std::string> method_names{"NON_PRIVATE", "LDP_CP_L",
                                        "LDP_CP_L_STAR", "LDP_CP_S",
                                        "LDP_CP_S_STAR"};
  std::vector<std::int64_t> n_grid{1000,   3162,   10000,   31623,
                                   100000, 316228, 1000000, 3162278,
                                   10000000};
  std::vector<int> k_grid{2, 8, 11, 100, 1000};
  std::vector<double> eps_grid{1.0, 2.0, 3.0, 4.0, 8.0};
};

void add_shared_options(CLI::App* cmd, Options& opt, bool with_data) {
  cmd->add_option("--epsilon", opt.epsilon, "Local privacy budget")
      ->capture_default_str();
  cmd->add_option("--alpha", opt.alpha, "Miscoverage level")
      ->capture_default_str();
  cmd->add_option("--delta", opt.delta_fail,
                  "Failure probability of the coverage guarantee")
      ->capture_default_str();
  cmd->add_option("--tau", opt.tau, "Bisection interval floor")
      ->capture_default_str();
  cmd->add_option("--rounds", opt.rounds,
                  "Bisection rounds T (default: ceil(log2(1/tau)))");
  cmd->add_option("--score", opt.score_name, "Conformity score: hps|aps|raps")
      ->capture_default_str();
  if (with_data) {
    auto* input = cmd->add_option("--input", opt.input,
                                  "Calibration dataset CSV (true labels)");
    auto* k = cmd->add_option("--k", opt.k, "Synthetic class count")
                  ->capture_default_str();
    auto* n_calib =
        cmd->add_option("--n-calib", opt.n_calib, "Synthetic calibration size")
            ->capture_default_str();
    auto* conc = cmd->add_option("--concentration", opt.concentration,
                                 "Synthetic posterior sharpness")
                     ->capture_default_str();
    input->excludes(k)->excludes(n_calib)->excludes(conc);
    cmd->add_option("--n-test", opt.n_test,
                    "Synthetic test size (evaluated when > 0)")
        ->capture_default_str();
    cmd->add_option("--seed", opt.seed, "Master seed")->capture_default_str();
  }
  cmd->add_option("--output", opt.output, "Write results to this path");
  cmd->add_flag("--strict", opt.strict, "Exit nonzero on saturation");
}

ScoreKind score_kind_or_throw(const std::string& name) {
  const auto kind = parse_score_kind(name);
  if (!kind) {
    throw InvalidParameterError("unknown score kind: " + name +
                                " (expected hps|aps|raps)");
  }
  return *kind;
}

struct DataBundle {
  std::vector<LabeledExample> calib;
  std::vector<LabeledExample> test;
  int k = 0;
  bool synthetic = false;
};

DataBundle load_data(const Options& opt) {
  DataBundle data;
  if (!opt.input.empty()) {
    data.calib = read_dataset(opt.input);
    if (data.calib.empty()) {
      throw DatasetError(opt.input + ": no examples");
    }
    data.k = data.calib.front().probs.num_classes();
    for (const LabeledExample& ex : data.calib) {
      if (ex.probs.num_classes() != data.k) {
        throw DatasetError(opt.input + ": inconsistent class counts");
      }
    }
    return data;
  }
  SyntheticConfig config;
  config.k = opt.k;
  config.n_calib = opt.n_calib;
  config.n_test = opt.n_test;
  config.concentration = opt.concentration;
  auto [calib, test] = gen_synthetic(config, opt.seed);
  data.calib = std::move(calib);
  data.test = std::move(test);
  data.k = opt.k;
  data.synthetic = true;
  return data;
}

void emit_report(const json& report, const Options& opt) {
  for (const auto& [key, value] : report.items()) {
    std::cout << key << ": "
              << (value.is_string() ? value.get<std::string>() : value.dump())
              << "\n";
  }
  if (!opt.output.empty()) {
    std::ofstream out(opt.output);
    if (!out) {
      throw DatasetError("cannot open for writing: " + opt.output);
    }
    out << report.dump(2) << "\n";
  }
}

void append_calibration_fields(json& report, const CalibrationResult& result) {
  report["target"] = result.target_level;
  report["q_hat"] = result.q_hat;
  report["achieved_z"] = result.achieved_z;
  report["rounds_used"] = result.rounds_used;
  report["in_band"] = result.in_band;
  report["saturated"] = result.saturated;
}

void append_evaluation(json& report, const DataBundle& data, double q,
                       ScoreKind kind, std::uint64_t seed) {
  if (!data.synthetic || data.test.empty()) return;
  Rng eval_rng = Rng::substream(seed, "cli/eval");
  const Evaluation eval = evaluate(data.test, q, kind, &eval_rng);
  report["coverage"] = eval.coverage;
  report["mean_set_size"] = eval.mean_set_size;
}

int finish(const json& report, const CalibrationResult& result,
           const Options& opt) {
  emit_report(report, opt);
  if (result.saturated) {
    std::cerr << "warning: target level saturated; returned q_hat = 1\n";
    if (opt.strict) return 1;
  } else if (1.0 - opt.alpha + result.delta_applied >= 1.0) {
    std::cerr << "warning: correction delta " << result.delta_applied
              << " >= alpha; the coverage floor 1-alpha-delta is vacuous at "
                 "this n\n";
  }
  return 0;
}

int run_calibrate_l(const Options& opt) {
  const ScoreKind kind = score_kind_or_throw(opt.score_name);
  const DataBundle data = load_data(opt);
  Rng mechanism_rng = Rng::substream(opt.seed, "cli/krr");
  const NoisyCalibrationSet noisy =
      perturb_labels(data.calib, opt.epsilon, data.k, mechanism_rng);

  LabelCalibrationOptions options;
  options.alpha = opt.alpha;
  options.delta_fail = opt.delta_fail;
  options.tau = opt.tau;
  options.starred = opt.starred;
  options.exhaustive = opt.exhaustive;
  Rng score_rng = Rng::substream(opt.seed, "cli/scores");
  const CalibrationResult result =
      calibrate_l(noisy, opt.epsilon, options, kind, &score_rng);

  json report;
  report["method"] = opt.starred ? "LDP_CP_L_STAR" : "LDP_CP_L";
  report["score"] = std::string(to_string(kind));
  report["n"] = data.calib.size();
  report["k"] = data.k;
  report["alpha"] = opt.alpha;
  report["epsilon"] = opt.epsilon;
  report["eps_eff"] =
      eps_effective(opt.epsilon, static_cast<std::int64_t>(data.calib.size()));
  report["beta"] = noisy.channel.beta;
  report["delta_l"] = result.delta_applied;
  append_calibration_fields(report, result);
  append_evaluation(report, data, result.q_hat, kind, opt.seed);
  return finish(report, result, opt);
}

int run_calibrate_s(const Options& opt) {
  const ScoreKind kind = score_kind_or_throw(opt.score_name);
  const DataBundle data = load_data(opt);
  const int rounds = opt.rounds > 0 ? opt.rounds : bisection_rounds(opt.tau);
  const auto n = static_cast<std::int64_t>(data.calib.size());

  ScoreCalibrationOptions options;
  options.alpha = opt.alpha;
  options.rounds = rounds;
  options.delta = opt.delta_target
                      ? *opt.delta_target
                      : delta_s(n, opt.epsilon, opt.delta_fail, rounds);
  options.starred = opt.starred;
  options.exhaustive = opt.exhaustive;
  if (opt.trace) {
    options.on_round = [](const RoundTrace& t) {
      std::cout << "round=" << t.round << " midpoint=" << t.midpoint
                << " cohort=" << t.cohort_size << " noisy_mean=" << t.noisy_mean
                << " z=" << t.z << " branch=" << t.branch << "\n";
    };
  }
  Rng rng = Rng::substream(opt.seed, "cli/rr");
  const CalibrationResult result =
      calibrate_s(data.calib, opt.epsilon, options, kind, rng);

  const UserCohortPlan plan = plan_cohorts(data.calib.size(), rounds);
  json report;
  report["method"] = opt.starred ? "LDP_CP_S_STAR" : "LDP_CP_S";
  report["score"] = std::string(to_string(kind));
  report["n"] = data.calib.size();
  report["k"] = data.k;
  report["alpha"] = opt.alpha;
  report["epsilon"] = opt.epsilon;
  report["eps_eff"] = eps_effective(opt.epsilon, n);
  report["rounds"] = rounds;
  report["n_prime"] = plan.users_per_round;
  report["unused_users"] =
      plan.leftover() +
      plan.users_per_round *
          static_cast<std::size_t>(rounds - result.rounds_used);
  report["delta_s"] = result.delta_applied;
  append_calibration_fields(report, result);
  append_evaluation(report, data, result.q_hat, kind, opt.seed);
  return finish(report, result, opt);
}

int run_cp(const Options& opt) {
  const ScoreKind kind = score_kind_or_throw(opt.score_name);
  const DataBundle data = load_data(opt);
  Rng score_rng = Rng::substream(opt.seed, "cli/scores");
  const ConformalQuantile quantile =
      non_private_cp(data.calib, opt.alpha, kind, &score_rng);

  json report;
  report["method"] = "NON_PRIVATE";
  report["score"] = std::string(to_string(kind));
  report["n"] = data.calib.size();
  report["k"] = data.k;
  report["alpha"] = opt.alpha;
  report["q_hat"] = quantile.q;
  report["saturated"] = quantile.saturated;
  append_evaluation(report, data, quantile.q, kind, opt.seed);
  emit_report(report, opt);
  if (quantile.saturated) {
    std::cerr << "warning: rank exceeds n; returned q_hat = 1\n";
    if (opt.strict) return 1;
  }
  return 0;
}

int run_simulate(const Options& opt) {
  ExperimentConfig config;
  config.data.k = opt.k;
  config.data.n_calib = opt.n_calib;
  config.data.n_test = opt.n_test;
  config.data.concentration = opt.concentration;
  config.score_kind = score_kind_or_throw(opt.score_name);
  config.epsilon = opt.epsilon;
  config.alpha = opt.alpha;
  config.delta_fail = opt.delta_fail;
  config.tau = opt.tau;
  config.keep_going = true;
  for (const std::string& name : opt.method_names) {
    const auto method = parse_method(name);
    if (!method) {
      throw InvalidParameterError("unknown method: " + name);
    }
    config.methods.push_back(*method);
  }

  std::vector<std::uint64_t> seeds = opt.seed_list;
  if (seeds.empty()) {
    if (opt.seeds == 0) {
      throw InvalidParameterError("need at least one seed");
    }
    seeds.resize(opt.seeds);
    for (std::size_t i = 0; i < opt.seeds; ++i) {
      seeds[i] = static_cast<std::uint64_t>(i);
    }
  }
  const std::vector<ExperimentRecord> records = run_experiment(config, seeds);

  int status = 0;
  for (const ExperimentRecord& record : records) {
    if (!record.error.empty()) {
      std::cerr << "error: " << record.error << "\n";
      status = 1;
    }
  }
  if (opt.output.empty()) {
    write_experiment_csv(std::cout, records);
  } else {
    std::ofstream out(opt.output);
    if (!out) {
      throw DatasetError("cannot open for writing: " + opt.output);
    }
    write_experiment_csv(out, records);
  }
  return status;
}

int run_tradeoff(const Options& opt) {
  const int rounds = opt.rounds > 0 ? opt.rounds : bisection_rounds(opt.tau);
  const std::vector<TradeoffRow> rows =
      tradeoff_table(opt.n_grid, opt.k_grid, opt.eps_grid, opt.delta_fail,
                     rounds, opt.shuffle);
  if (opt.output.empty()) {
    write_tradeoff_csv(std::cout, rows);
  } else {
    std::ofstream out(opt.output);
    if (!out) {
      throw DatasetError("cannot open for writing: " + opt.output);
    }
    write_tradeoff_csv(out, rows);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Locally differentially private conformal prediction: label and score "
      "perturbation calibration, plus a simulation harness"};
  app.require_subcommand(1);
  app.set_config("--config")->envname("LDPCP_CONFIG");

  Options opt;

  CLI::App* calibrate_l_cmd = app.add_subcommand(
      "calibrate-l",
      "Label-perturbation calibration (k-RR + noise-aware search)");
  add_shared_options(calibrate_l_cmd, opt, true);
  calibrate_l_cmd->add_flag("--starred", opt.starred,
                            "Calibrate at 1 - alpha + delta");
  calibrate_l_cmd->add_flag("--exhaustive", opt.exhaustive,
                            "Bisect to the tau floor without early exit");

  CLI::App* calibrate_s_cmd = app.add_subcommand(
      "calibrate-s",
      "Score-perturbation calibration (interactive RR quantile search)");
  add_shared_options(calibrate_s_cmd, opt, true);
  calibrate_s_cmd->add_flag("--starred", opt.starred,
                            "Calibrate at 1 - alpha + delta");
  calibrate_s_cmd->add_flag("--exhaustive", opt.exhaustive,
                            "Bisect to the tau floor without early exit");
  calibrate_s_cmd->add_flag("--trace", opt.trace, "Print one line per round");
  calibrate_s_cmd->add_option("--delta-target", opt.delta_target,
                              "Override the delta_s band");

  CLI::App* cp_cmd =
      app.add_subcommand("cp", "Non-private split-conformal baseline");
  add_shared_options(cp_cmd, opt, true);

  CLI::App* simulate_cmd = app.add_subcommand(
      "simulate", "Multi-seed Monte Carlo comparison, CSV output");
  add_shared_options(simulate_cmd, opt, true);
  simulate_cmd->add_option("--methods", opt.method_names,
                           "Methods to run (default: all five)")
      ->delimiter(',');
  simulate_cmd->add_option("--seeds", opt.seeds, "Number of seeds (0,1,...)")
      ->capture_default_str();
  simulate_cmd->add_option("--seed-list", opt.seed_list,
                           "Explicit seeds instead of a count")
      ->delimiter(',');

  CLI::App* tradeoff_cmd = app.add_subcommand(
      "tradeoff", "Correction-term formula sweep over (n, k, eps) grids");
  add_shared_options(tradeoff_cmd, opt, false);
  tradeoff_cmd->add_option("--n-grid", opt.n_grid, "Calibration sizes")
      ->delimiter(',');
  tradeoff_cmd->add_option("--k-grid", opt.k_grid, "Class counts")
      ->delimiter(',');
  tradeoff_cmd->add_option("--eps-grid", opt.eps_grid, "Privacy budgets")
      ->delimiter(',');
  tradeoff_cmd->add_flag("--shuffle", opt.shuffle,
                         "Report shuffle-amplified eps/sqrt(n) in eps_eff");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (calibrate_l_cmd->parsed()) return run_calibrate_l(opt);
    if (calibrate_s_cmd->parsed()) return run_calibrate_s(opt);
    if (cp_cmd->parsed()) return run_cp(opt);
    if (simulate_cmd->parsed()) return run_simulate(opt);
    if (tradeoff_cmd->parsed()) return run_tradeoff(opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
