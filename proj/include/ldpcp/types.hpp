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

#ifndef LDPCP_TYPES_HPP_
#define LDPCP_TYPES_HPP_

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ldpcp {

class InvalidParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidClassError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class EmptyInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InsufficientUsersError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ScoreKind { kHps, kAps, kRandAps };

std::string_view to_string(ScoreKind kind);
std::optional<ScoreKind> parse_score_kind(std::string_view name);

// A classifier posterior over k >= 2 classes. Entries must be finite,
// nonnegative, and sum to 1 within 1e-9.
class ProbVector {
 public:
  explicit ProbVector(std::vector<double> probs);

  int num_classes() const { return static_cast<int>(probs_.size()); }
  double operator[](int cls) const {
    return probs_[static_cast<std::size_t>(cls)];
  }
  const std::vector<double>& probs() const { return probs_; }

  bool operator==(const ProbVector& other) const = default;

 private:
  std::vector<double> probs_;
};

struct LabeledExample {
  LabeledExample(ProbVector p, int lbl);

  ProbVector probs;
  int label;

  bool operator==(const LabeledExample& other) const = default;
};

// C_q(x): the classes whose conformity score is at most the threshold.
struct PredictionSet {
  std::vector<int> members;  // sorted ascending

  bool contains(int cls) const;
  std::size_t size() const { return members.size(); }
};

struct PrivacyParams {
  PrivacyParams(double eps, double delta, int num_classes);

  double epsilon;
  double delta_fail;
  int k;
};

// The uniform-noise view of k-ary randomized response: with probability
// beta the label is replaced by a uniform draw over all k classes.
struct NoiseChannel {
  double beta;
  int k;

  static NoiseChannel from_epsilon(double epsilon, int k);
};

struct CalibrationResult {
  double q_hat = 1.0;
  int rounds_used = 0;
  double achieved_z = std::numeric_limits<double>::quiet_NaN();
  double delta_applied = 0.0;
  double target_level = 0.0;
  bool saturated = false;
  // True when the search stopped with |Z - target| <= delta/2. A false
  // value after round exhaustion is a diagnostic, not a failure.
  bool in_band = false;
};

struct ConformalQuantile {
  double q = 1.0;
  bool saturated = false;
};

// 2^-14; gives a bisection depth of 14 rounds.
inline constexpr double kDefaultTau = 0.00006103515625;

// Number of bisection rounds needed to shrink [0,1] below tau.
inline int bisection_rounds(double tau) {
  if (!(tau > 0.0 && tau < 1.0)) {
    throw InvalidParameterError("tau must lie in (0,1)");
  }
  return std::max(1, static_cast<int>(std::ceil(std::log2(1.0 / tau) - 1e-9)));
}

}  // namespace ldpcp

#endif  // LDPCP_TYPES_HPP_
