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

#include "ldpcp/types.hpp"

#include <algorithm>
#include <cmath>

#include "ldpcp/mechanisms.hpp"

namespace ldpcp {

std::string_view to_string(ScoreKind kind) {
  switch (kind) {
    case ScoreKind::kHps:
      return "hps";
    case ScoreKind::kAps:
      return "aps";
    case ScoreKind::kRandAps:
      return "raps";
  }
  return "unknown";
}

std::optional<ScoreKind> parse_score_kind(std::string_view name) {
  if (name == "hps") return ScoreKind::kHps;
  if (name == "aps") return ScoreKind::kAps;
  if (name == "raps" || name == "rand-aps") return ScoreKind::kRandAps;
  return std::nullopt;
}

ProbVector::ProbVector(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.size() < 2) {
    throw InvalidParameterError("probability vector needs k >= 2 entries");
  }
  double sum = 0.0;
  for (double p : probs_) {
    if (!std::isfinite(p) || p < 0.0) {
      throw InvalidParameterError(
          "probability entries must be finite and nonnegative");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw InvalidParameterError("probabilities must sum to 1 within 1e-9");
  }
}

LabeledExample::LabeledExample(ProbVector p, int lbl)
    : probs(std::move(p)), label(lbl) {
  if (label < 0 || label >= probs.num_classes()) {
    throw InvalidClassError("label outside {0,...,k-1}");
  }
}

bool PredictionSet::contains(int cls) const {
  return std::binary_search(members.begin(), members.end(), cls);
}

PrivacyParams::PrivacyParams(double eps, double delta, int num_classes)
    : epsilon(eps), delta_fail(delta), k(num_classes) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InvalidParameterError("epsilon must be positive and finite");
  }
  if (!(delta_fail > 0.0 && delta_fail < 1.0)) {
    throw InvalidParameterError("delta_fail must lie in (0,1)");
  }
  if (k < 2) {
    throw InvalidParameterError("k must be at least 2");
  }
}

NoiseChannel NoiseChannel::from_epsilon(double epsilon, int k) {
  return NoiseChannel{krr_flip_prob(epsilon, k), k};
}

}  // namespace ldpcp
