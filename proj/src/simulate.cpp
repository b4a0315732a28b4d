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

#include "ldpcp/simulate.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "ldpcp/calib_label.hpp"
#include "ldpcp/calib_score.hpp"
#include "ldpcp/mechanisms.hpp"
#include "ldpcp/random.hpp"
#include "ldpcp/scores.hpp"

namespace ldpcp {
namespace {

int draw_label(std::span<const double> prior, int k, Rng& rng) {
  if (prior.empty()) {
    return rng.uniform_int(k);
  }
  const double u = rng.uniform01();
  double acc = 0.0;
  for (int cls = 0; cls < k; ++cls) {
    acc += prior[static_cast<std::size_t>(cls)];
    if (u < acc) return cls;
  }
  return k - 1;
}

LabeledExample draw_example(const SyntheticConfig& config, Rng& rng) {
  const int label = draw_label(config.class_prior, config.k, rng);
  std::vector<double> probs(static_cast<std::size_t>(config.k));
  double total = 0.0;
  for (int cls = 0; cls < config.k; ++cls) {
    const double shape = cls == label ? config.concentration : 1.0;
    const double g = rng.gamma(shape);
    probs[static_cast<std::size_t>(cls)] = g;
    total += g;
  }
  for (double& p : probs) p /= total;
  // Normalization can leave the sum a few ulps off 1; push the residue into
  // the largest entry so the ProbVector invariant holds exactly.
  double sum = 0.0;
  for (double p : probs) sum += p;
  auto largest = std::max_element(probs.begin(), probs.end());
  *largest += 1.0 - sum;
  return LabeledExample(ProbVector(std::move(probs)), label);
}

void check_config(const SyntheticConfig& config) {
  if (config.k < 2) {
    throw InvalidParameterError("k must be at least 2");
  }
  if (!(config.concentration > 0.0)) {
    throw InvalidParameterError("concentration must be positive");
  }
  if (!config.class_prior.empty()) {
    if (config.class_prior.size() != static_cast<std::size_t>(config.k)) {
      throw InvalidParameterError("class prior must have k entries");
    }
    double sum = 0.0;
    for (double p : config.class_prior) {
      if (!(p >= 0.0)) {
        throw InvalidParameterError("class prior entries must be nonnegative");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw InvalidParameterError("class prior must sum to 1 within 1e-9");
    }
  }
}

ExperimentRecord run_method(const ExperimentConfig& config, Method method,
                            std::uint64_t seed,
                            std::span<const LabeledExample> calib,
                            std::span<const LabeledExample> test) {
  ExperimentRecord record;
  record.seed = seed;
  record.method = method;
  record.score_kind = config.score_kind;
  record.epsilon = config.epsilon;
  record.alpha = config.alpha;
  record.eps_eff =
      eps_effective(config.epsilon, static_cast<std::int64_t>(calib.size()));

  const std::string stream = std::string(to_string(method));
  Rng method_rng = Rng::substream(seed, stream);
  Rng eval_rng = Rng::substream(seed, stream + "/eval");
  const auto n = static_cast<std::int64_t>(calib.size());

  double q = 1.0;
  switch (method) {
    case Method::kNonPrivate: {
      record.delta_corr = 0.0;
      q = non_private_cp(calib, config.alpha, config.score_kind, &method_rng).q;
      break;
    }
    case Method::kLdpCpL:
    case Method::kLdpCpLStar: {
      const NoisyCalibrationSet noisy =
          perturb_labels(calib, config.epsilon, config.data.k, method_rng);
      LabelCalibrationOptions options;
      options.alpha = config.alpha;
      options.delta_fail = config.delta_fail;
      options.tau = config.tau;
      options.starred = method == Method::kLdpCpLStar;
      const CalibrationResult result = calibrate_l(
          noisy, config.epsilon, options, config.score_kind, &method_rng);
      record.delta_corr = result.delta_applied;
      q = result.q_hat;
      break;
    }
    case Method::kLdpCpS:
    case Method::kLdpCpSStar: {
      ScoreCalibrationOptions options;
      options.alpha = config.alpha;
      options.rounds = bisection_rounds(config.tau);
      options.delta =
          delta_s(n, config.epsilon, config.delta_fail, options.rounds);
      options.starred = method == Method::kLdpCpSStar;
      const CalibrationResult result = calibrate_s(
          calib, config.epsilon, options, config.score_kind, method_rng);
      record.delta_corr = result.delta_applied;
      q = result.q_hat;
      break;
    }
  }
  record.q_hat = q;
  const Evaluation eval = evaluate(test, q, config.score_kind, &eval_rng);
  record.coverage = eval.coverage;
  record.mean_set_size = eval.mean_set_size;
  return record;
}

}  // namespace

std::pair<std::vector<LabeledExample>, std::vector<LabeledExample>>
gen_synthetic(const SyntheticConfig& config, std::uint64_t seed) {
  check_config(config);
  Rng rng = Rng::substream(seed, "data");
  std::vector<LabeledExample> calib;
  calib.reserve(config.n_calib);
  for (std::size_t i = 0; i < config.n_calib; ++i) {
    calib.push_back(draw_example(config, rng));
  }
  std::vector<LabeledExample> test;
  test.reserve(config.n_test);
  for (std::size_t i = 0; i < config.n_test; ++i) {
    test.push_back(draw_example(config, rng));
  }
  return {std::move(calib), std::move(test)};
}

Evaluation evaluate(std::span<const LabeledExample> test, double q,
                    ScoreKind kind, Rng* rng) {
  if (test.empty()) {
    throw EmptyInputError("test set is empty");
  }
  std::size_t covered = 0;
  std::size_t total_size = 0;
  for (const LabeledExample& ex : test) {
    const std::vector<double> scores = class_scores(ex.probs, kind, rng);
    if (scores[static_cast<std::size_t>(ex.label)] <= q) ++covered;
    for (double s : scores) {
      if (s <= q) ++total_size;
    }
  }
  const auto n = static_cast<double>(test.size());
  return Evaluation{static_cast<double>(covered) / n,
                    static_cast<double>(total_size) / n};
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::kNonPrivate:
      return "NON_PRIVATE";
    case Method::kLdpCpL:
      return "LDP_CP_L";
    case Method::kLdpCpLStar:
      return "LDP_CP_L_STAR";
    case Method::kLdpCpS:
      return "LDP_CP_S";
    case Method::kLdpCpSStar:
      return "LDP_CP_S_STAR";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  if (name == "NON_PRIVATE" || name == "non-private") return Method::kNonPrivate;
  if (name == "LDP_CP_L" || name == "ldp-cp-l") return Method::kLdpCpL;
  if (name == "LDP_CP_L_STAR" || name == "ldp-cp-l-star") return Method::kLdpCpLStar;
  if (name == "LDP_CP_S" || name == "ldp-cp-s") return Method::kLdpCpS;
  if (name == "LDP_CP_S_STAR" || name == "ldp-cp-s-star") return Method::kLdpCpSStar;
  return std::nullopt;
}

std::vector<ExperimentRecord> run_experiment(
    const ExperimentConfig& config, std::span<const std::uint64_t> seeds) {
  if (seeds.empty()) {
    throw EmptyInputError("no seeds requested");
  }
  if (config.methods.empty()) {
    throw EmptyInputError("no methods requested");
  }
  check_config(config.data);

  std::vector<std::vector<ExperimentRecord>> per_seed(seeds.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  const auto run_seed = [&](std::size_t index) {
    const std::uint64_t seed = seeds[index];
    const auto [calib, test] = gen_synthetic(config.data, seed);
    for (Method method : config.methods) {
      try {
        per_seed[index].push_back(
            run_method(config, method, seed, calib, test));
      } catch (const std::exception& e) {
        std::ostringstream msg;
        msg << "seed " << seed << " method " << to_string(method) << ": "
            << e.what();
        if (!config.keep_going) {
          throw std::runtime_error(msg.str());
        }
        ExperimentRecord failed;
        failed.seed = seed;
        failed.method = method;
        failed.score_kind = config.score_kind;
        failed.epsilon = config.epsilon;
        failed.alpha = config.alpha;
        failed.error = msg.str();
        per_seed[index].push_back(std::move(failed));
      }
    }
  };

  const auto worker = [&] {
    for (;;) {
      const std::size_t index = next.fetch_add(1);
      if (index >= seeds.size()) return;
      {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (first_error) return;
      }
      try {
        run_seed(index);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  std::size_t n_threads = config.threads > 0
                              ? static_cast<std::size_t>(config.threads)
                              : std::thread::hardware_concurrency();
  n_threads = std::max<std::size_t>(1, std::min(n_threads, seeds.size()));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  std::vector<ExperimentRecord> records;
  records.reserve(seeds.size() * config.methods.size());
  for (std::vector<ExperimentRecord>& rows : per_seed) {
    for (ExperimentRecord& row : rows) records.push_back(std::move(row));
  }
  return records;
}

std::vector<TradeoffRow> tradeoff_table(std::span<const std::int64_t> n_grid,
                                        std::span<const int> k_grid,
                                        std::span<const double> eps_grid,
                                        double delta_fail, int rounds,
                                        bool shuffle) {
  if (n_grid.empty() || k_grid.empty() || eps_grid.empty()) {
    throw EmptyInputError("tradeoff grids must be nonempty");
  }
  std::vector<TradeoffRow> rows;
  rows.reserve(n_grid.size() * k_grid.size() * eps_grid.size());
  for (std::int64_t n : n_grid) {
    for (int k : k_grid) {
      for (double eps : eps_grid) {
        TradeoffRow row;
        row.n = n;
        row.k = k;
        row.epsilon = eps;
        row.eps_eff = shuffle ? eps_effective(eps, n) : eps;
        row.delta_l = delta_l(n, eps, k, delta_fail);
        row.delta_s = delta_s(n, eps, delta_fail, rounds);
        rows.push_back(row);
      }
    }
  }
  return rows;
}

}  // namespace ldpcp
