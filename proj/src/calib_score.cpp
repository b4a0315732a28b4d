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

#include "ldpcp/calib_score.hpp"

#include <cmath>

#include "ldpcp/mechanisms.hpp"
#include "ldpcp/scores.hpp"

namespace ldpcp {

UserCohortPlan plan_cohorts(std::size_t n, int rounds) {
  if (rounds < 1) {
    throw InvalidParameterError("rounds must be at least 1");
  }
  if (n < static_cast<std::size_t>(rounds)) {
    throw InsufficientUsersError("need at least one user per round (n >= T)");
  }
  return UserCohortPlan{rounds, n / static_cast<std::size_t>(rounds), n};
}

int user_response(const LabeledExample& ex, double threshold, double epsilon,
                  ScoreKind kind, Rng& rng) {
  const double score = conformity_score(ex, kind, &rng);
  const int below = score < threshold ? 1 : 0;  // strict, per protocol
  return rr_bit(below, epsilon, rng);
}

CalibrationResult run_score_protocol(std::size_t n_users,
                                     const UserResponder& respond,
                                     const ScoreCalibrationOptions& options) {
  if (!(options.alpha > 0.0 && options.alpha < 1.0)) {
    throw InvalidParameterError("alpha must lie in (0,1)");
  }
  if (!(options.delta > 0.0)) {
    throw InvalidParameterError("delta must be positive");
  }
  const UserCohortPlan plan = plan_cohorts(n_users, options.rounds);
  const double target =
      1.0 - options.alpha + (options.starred ? options.delta : 0.0);

  CalibrationResult result;
  result.delta_applied = options.delta;
  result.target_level = target;
  if (target >= 1.0) {
    // No users are contacted; their budget is untouched.
    result.q_hat = 1.0;
    result.saturated = true;
    return result;
  }

  double low = 0.0;
  double high = 1.0;
  double q = 0.5;
  double z = 0.0;
  for (int round = 0; round < plan.rounds; ++round) {
    q = (low + high) / 2.0;
    std::size_t ones = 0;
    const std::size_t begin = plan.cohort_begin(round);
    for (std::size_t i = begin; i < begin + plan.users_per_round; ++i) {
      ones += static_cast<std::size_t>(respond(i, q));
    }
    const double noisy_mean =
        static_cast<double>(ones) / static_cast<double>(plan.users_per_round);
    z = debias_mean(noisy_mean, options.epsilon);
    result.rounds_used = round + 1;

    std::string_view branch;
    bool stop = false;
    if (options.exhaustive) {
      if (z >= target) {
        high = q;
        branch = "high";
      } else {
        low = q;
        branch = "low";
      }
    } else if (z > target + options.delta / 2.0) {
      high = q;
      branch = "high";
    } else if (z < target - options.delta / 2.0) {
      low = q;
      branch = "low";
    } else {
      branch = "break";
      result.in_band = true;
      stop = true;
    }
    if (options.on_round) {
      options.on_round(RoundTrace{round + 1, q, plan.users_per_round,
                                  noisy_mean, z, branch});
    }
    if (stop) break;
  }
  result.q_hat = q;
  result.achieved_z = z;
  if (options.exhaustive) {
    result.in_band = std::abs(z - target) <= options.delta / 2.0;
  }
  return result;
}

CalibrationResult calibrate_s(std::span<const LabeledExample> calib,
                              double epsilon,
                              const ScoreCalibrationOptions& options,
                              ScoreKind kind, Rng& rng) {
  ScoreCalibrationOptions wired = options;
  wired.epsilon = epsilon;
  const UserResponder respond = [&](std::size_t user_index, double threshold) {
    return user_response(calib[user_index], threshold, epsilon, kind, rng);
  };
  return run_score_protocol(calib.size(), respond, wired);
}

}  // namespace ldpcp
