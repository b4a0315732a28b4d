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

#ifndef LDPCP_CALIB_SCORE_HPP_
#define LDPCP_CALIB_SCORE_HPP_

#include <cstddef>
#include <functional>
#include <span>

#include "ldpcp/random.hpp"
#include "ldpcp/types.hpp"

namespace ldpcp {

// Disjoint consecutive user blocks, one per bisection round. Users past
// rounds * users_per_round are never contacted.
struct UserCohortPlan {
  int rounds = 0;
  std::size_t users_per_round = 0;
  std::size_t total_users = 0;

  std::size_t cohort_begin(int round) const {
    return static_cast<std::size_t>(round) * users_per_round;
  }
  std::size_t leftover() const {
    return total_users -
           static_cast<std::size_t>(rounds) * users_per_round;
  }
};

UserCohortPlan plan_cohorts(std::size_t n, int rounds);

// One user's single interaction: score the own pair locally, compare
// strictly against the broadcast threshold, and answer through binary
// randomized response.
int user_response(const LabeledExample& ex, double threshold, double epsilon,
                  ScoreKind kind, Rng& rng);

struct RoundTrace {
  int round = 0;
  double midpoint = 0.0;
  std::size_t cohort_size = 0;
  double noisy_mean = 0.0;
  double z = 0.0;
  // "low" raised s_low, "high" lowered s_high, "break" ended the search.
  std::string_view branch;
};

struct ScoreCalibrationOptions {
  double epsilon = 0.0;
  double alpha = 0.1;
  double delta = 0.0;  // the target band; callers usually pass delta_s(...)
  int rounds = 14;
  bool starred = false;
  bool exhaustive = false;
  std::function<void(const RoundTrace&)> on_round;
};

// How the aggregator reaches a user; the only value that crosses the
// boundary is the randomized bit.
using UserResponder = std::function<int(std::size_t user_index, double threshold)>;

// Aggregator side of the protocol: bisects on [0,1], asking one fresh
// cohort per round and debiasing the cohort's randomized-response mean.
CalibrationResult run_score_protocol(std::size_t n_users,
                                     const UserResponder& respond,
                                     const ScoreCalibrationOptions& options);

// Both sides wired together for a local calibration set.
CalibrationResult calibrate_s(std::span<const LabeledExample> calib,
                              double epsilon,
                              const ScoreCalibrationOptions& options,
                              ScoreKind kind, Rng& rng);

}  // namespace ldpcp

#endif  // LDPCP_CALIB_SCORE_HPP_
