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

#include "ldpcp/calib_label.hpp"

#include <algorithm>
#include <cmath>

#include "ldpcp/mechanisms.hpp"
#include "ldpcp/scores.hpp"

namespace ldpcp {
namespace {

double sorted_cdf(const std::vector<double>& sorted, double q) {
  const auto it = std::upper_bound(sorted.begin(), sorted.end(), q);
  return static_cast<double>(it - sorted.begin()) /
         static_cast<double>(sorted.size());
}

void check_nonempty(const NoisyCalibrationSet& noisy) {
  if (noisy.records.empty()) {
    throw EmptyInputError("noisy calibration set is empty");
  }
}

}  // namespace

NoisyCalibrationSet perturb_labels(std::span<const LabeledExample> calib,
                                   double epsilon, int k, Rng& rng) {
  const NoiseChannel channel = NoiseChannel::from_epsilon(epsilon, k);
  NoisyCalibrationSet noisy{{}, channel};
  noisy.records.reserve(calib.size());
  for (const LabeledExample& ex : calib) {
    if (ex.probs.num_classes() != k) {
      throw InvalidParameterError("probability vector length differs from k");
    }
    noisy.records.emplace_back(ex.probs, krr(ex.label, epsilon, k, rng));
  }
  return noisy;
}

CalibrationCdfs::CalibrationCdfs(const NoisyCalibrationSet& noisy,
                                 ScoreKind kind, Rng* rng)
    : num_records_(noisy.records.size()) {
  check_nonempty(noisy);
  const auto k = static_cast<std::size_t>(noisy.channel.k);
  noisy_scores_.reserve(num_records_);
  class_scores_.reserve(num_records_ * k);
  for (const LabeledExample& ex : noisy.records) {
    // One score per (record, class), drawn once; the record's own noisy
    // label reuses the same draw so both CDFs see identical scores.
    const std::vector<double> scores = class_scores(ex.probs, kind, rng);
    noisy_scores_.push_back(scores[static_cast<std::size_t>(ex.label)]);
    class_scores_.insert(class_scores_.end(), scores.begin(), scores.end());
  }
  std::sort(noisy_scores_.begin(), noisy_scores_.end());
  std::sort(class_scores_.begin(), class_scores_.end());
}

double CalibrationCdfs::noisy_cdf(double q) const {
  return sorted_cdf(noisy_scores_, q);
}

double CalibrationCdfs::uniform_cdf(double q) const {
  return sorted_cdf(class_scores_, q);
}

double f_hat_n(const NoisyCalibrationSet& noisy, double q, ScoreKind kind,
               Rng* rng) {
  check_nonempty(noisy);
  std::size_t count = 0;
  for (const LabeledExample& ex : noisy.records) {
    if (conformity_score(ex, kind, rng) <= q) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(noisy.records.size());
}

double f_hat_r(const NoisyCalibrationSet& noisy, double q, ScoreKind kind,
               Rng* rng) {
  check_nonempty(noisy);
  double total = 0.0;
  for (const LabeledExample& ex : noisy.records) {
    total += static_cast<double>(prediction_set(ex.probs, q, kind, rng).size()) /
             static_cast<double>(noisy.channel.k);
  }
  return total / static_cast<double>(noisy.records.size());
}

double f_hat_c(double fn_val, double fr_val, double beta) {
  if (!(beta >= 0.0 && beta < 1.0)) {
    throw InvalidParameterError("beta must lie in [0,1)");
  }
  return (fn_val - beta * fr_val) / (1.0 - beta);
}

CalibrationResult calibrate_l(const NoisyCalibrationSet& noisy, double epsilon,
                              const LabelCalibrationOptions& options,
                              ScoreKind kind, Rng* rng) {
  check_nonempty(noisy);
  if (!(options.alpha > 0.0 && options.alpha < 1.0)) {
    throw InvalidParameterError("alpha must lie in (0,1)");
  }
  const int max_rounds = bisection_rounds(options.tau);
  const auto n = static_cast<std::int64_t>(noisy.records.size());
  const double delta =
      delta_l(n, epsilon, noisy.channel.k, options.delta_fail);
  const double target =
      1.0 - options.alpha + (options.starred ? delta : 0.0);

  CalibrationResult result;
  result.delta_applied = delta;
  result.target_level = target;
  if (target >= 1.0) {
    result.q_hat = 1.0;
    result.saturated = true;
    return result;
  }

  const CalibrationCdfs cdfs(noisy, kind, rng);
  const double beta = noisy.channel.beta;
  double low = 0.0;
  double high = 1.0;
  double q = 0.5;
  double z = 0.0;
  for (int round = 1; round <= max_rounds; ++round) {
    q = (low + high) / 2.0;
    z = f_hat_c(cdfs.noisy_cdf(q), cdfs.uniform_cdf(q), beta);
    result.rounds_used = round;
    if (options.exhaustive) {
      if (z >= target) {
        high = q;
      } else {
        low = q;
      }
    } else if (z > target + delta / 2.0) {
      high = q;
    } else if (z < target - delta / 2.0) {
      low = q;
    } else {
      result.in_band = true;
      break;
    }
    if (high - low < options.tau) break;
  }
  result.q_hat = q;
  result.achieved_z = z;
  if (options.exhaustive) {
    result.in_band = std::abs(z - target) <= delta / 2.0;
  }
  return result;
}

}  // namespace ldpcp
