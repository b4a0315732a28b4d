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

#ifndef LDPCP_CALIB_LABEL_HPP_
#define LDPCP_CALIB_LABEL_HPP_

#include <span>
#include <vector>

#include "ldpcp/random.hpp"
#include "ldpcp/types.hpp"

namespace ldpcp {

// What the aggregator receives: posteriors paired with randomized labels,
// plus the channel that produced them. True labels never enter this type.
struct NoisyCalibrationSet {
  std::vector<LabeledExample> records;
  NoiseChannel channel;
};

// User side: passes every label through k-ary randomized response.
// Posteriors are forwarded unchanged.
NoisyCalibrationSet perturb_labels(std::span<const LabeledExample> calib,
                                   double epsilon, int k, Rng& rng);

// F^n: fraction of noisy-label scores at most q.
double f_hat_n(const NoisyCalibrationSet& noisy, double q, ScoreKind kind,
               Rng* rng = nullptr);

// F^r: mean normalized prediction-set size |C_q(x)| / k, which equals the
// chance that a uniformly random label scores at most q.
double f_hat_r(const NoisyCalibrationSet& noisy, double q, ScoreKind kind,
               Rng* rng = nullptr);

// Channel inversion: (fn - beta * fr) / (1 - beta). May leave [0,1] in
// finite samples; not clamped.
double f_hat_c(double fn_val, double fr_val, double beta);

// Both empirical CDFs with scores fixed once per search, so every probe
// threshold sees a consistent (monotone) pair. For kRandAps the per-class
// u draws are made here, at construction.
class CalibrationCdfs {
 public:
  CalibrationCdfs(const NoisyCalibrationSet& noisy, ScoreKind kind,
                  Rng* rng = nullptr);

  double noisy_cdf(double q) const;    // F^n
  double uniform_cdf(double q) const;  // F^r
  std::size_t size() const { return num_records_; }

 private:
  std::size_t num_records_;
  std::vector<double> noisy_scores_;  // sorted, one per record
  std::vector<double> class_scores_;  // sorted, k per record
};

struct LabelCalibrationOptions {
  double alpha = 0.1;
  double delta_fail = 0.1;
  double tau = kDefaultTau;
  // Calibrate at 1 - alpha + delta so the delivered coverage is >= 1 - alpha.
  bool starred = false;
  // Ignore the early-exit band and bisect to the tau floor.
  bool exhaustive = false;
};

// Aggregator side: noise-aware bisection for the threshold solving
// F^c(q) = target. rng is needed for kRandAps only.
CalibrationResult calibrate_l(const NoisyCalibrationSet& noisy, double epsilon,
                              const LabelCalibrationOptions& options,
                              ScoreKind kind, Rng* rng = nullptr);

}  // namespace ldpcp

#endif  // LDPCP_CALIB_LABEL_HPP_
