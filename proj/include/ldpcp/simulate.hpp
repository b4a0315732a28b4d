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

#ifndef LDPCP_SIMULATE_HPP_
#define LDPCP_SIMULATE_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ldpcp/random.hpp"
#include "ldpcp/types.hpp"

namespace ldpcp {

// Argmax accuracy ~= 0.7 at k = 8; a tuning knob, not a claim about any
// particular model.
inline constexpr double kDefaultConcentration = 4.0;

struct SyntheticConfig {
  int k = 8;
  std::size_t n_calib = 10000;
  std::size_t n_test = 10000;
  double concentration = kDefaultConcentration;
  std::vector<double> class_prior;  // empty = uniform; else k entries, sum 1
};

// Synthetic classifier: label from the prior, posterior from a Dirichlet
// with weight `concentration` on the true class and 1 elsewhere, so the
// mean mass on the true class is concentration / (concentration + k - 1).
// Calibration and test splits are drawn i.i.d. from the same process.
std::pair<std::vector<LabeledExample>, std::vector<LabeledExample>>
gen_synthetic(const SyntheticConfig& config, std::uint64_t seed);

struct Evaluation {
  double coverage = 0.0;
  double mean_set_size = 0.0;
};

Evaluation evaluate(std::span<const LabeledExample> test, double q,
                    ScoreKind kind, Rng* rng = nullptr);

enum class Method { kNonPrivate, kLdpCpL, kLdpCpLStar, kLdpCpS, kLdpCpSStar };

std::string_view to_string(Method method);
std::optional<Method> parse_method(std::string_view name);

struct ExperimentRecord {
  std::uint64_t seed = 0;
  Method method = Method::kNonPrivate;
  ScoreKind score_kind = ScoreKind::kHps;
  double epsilon = 0.0;
  double eps_eff = 0.0;
  double alpha = 0.0;
  double delta_corr = 0.0;
  double q_hat = 0.0;
  double coverage = 0.0;
  double mean_set_size = 0.0;
  std::string error;  // nonempty when this row failed and errors are kept
};

struct ExperimentConfig {
  SyntheticConfig data;
  std::vector<Method> methods;
  ScoreKind score_kind = ScoreKind::kHps;
  double epsilon = 4.0;
  double alpha = 0.1;
  double delta_fail = 0.1;
  double tau = kDefaultTau;
  int threads = 0;  // 0 = hardware concurrency
  // Record per-row failures instead of throwing on the first one.
  bool keep_going = false;
};

// One record per (seed, method), in that order regardless of the worker
// schedule. All randomness is derived from the row's seed via labeled
// substreams, so any single row reruns identically in isolation.
std::vector<ExperimentRecord> run_experiment(
    const ExperimentConfig& config, std::span<const std::uint64_t> seeds);

struct TradeoffRow {
  std::int64_t n = 0;
  int k = 0;
  double epsilon = 0.0;
  double eps_eff = 0.0;
  double delta_l = 0.0;
  double delta_s = 0.0;
};

// Pure formula sweep over the grids; no sampling. With `shuffle` set the
// eps_eff column reports eps / sqrt(n), otherwise the local eps.
std::vector<TradeoffRow> tradeoff_table(std::span<const std::int64_t> n_grid,
                                        std::span<const int> k_grid,
                                        std::span<const double> eps_grid,
                                        double delta_fail, int rounds,
                                        bool shuffle);

}  // namespace ldpcp

#endif  // LDPCP_SIMULATE_HPP_
