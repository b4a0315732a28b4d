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

#include "ldpcp/mechanisms.hpp"

#include <cmath>

namespace ldpcp {
namespace {

void check_epsilon(double epsilon) {
  if (!std::isfinite(epsilon) || epsilon < kMinEpsilon) {
    throw InvalidParameterError("epsilon must be finite and >= 1e-6");
  }
}

void check_delta(double delta_fail) {
  if (!(delta_fail > 0.0 && delta_fail < 1.0)) {
    throw InvalidParameterError("delta must lie in (0,1)");
  }
}

}  // namespace

double krr_flip_prob(double epsilon, int k) {
  check_epsilon(epsilon);
  if (k < 2) {
    throw InvalidParameterError("k must be at least 2");
  }
  return static_cast<double>(k) /
         (static_cast<double>(k) - 1.0 + std::exp(epsilon));
}

int krr(int label, double epsilon, int k, Rng& rng) {
  const double beta = krr_flip_prob(epsilon, k);
  if (label < 0 || label >= k) {
    throw InvalidClassError("label outside {0,...,k-1}");
  }
  // Uniform-replacement form of the channel: P(keep) = 1 - beta + beta/k.
  if (rng.bernoulli(beta)) {
    return rng.uniform_int(k);
  }
  return label;
}

int rr_bit(int bit, double epsilon, Rng& rng) {
  check_epsilon(epsilon);
  if (bit != 0 && bit != 1) {
    throw InvalidParameterError("bit must be 0 or 1");
  }
  const double keep = 1.0 / (1.0 + std::exp(-epsilon));
  return rng.bernoulli(keep) ? bit : 1 - bit;
}

double debias_factor(double epsilon) {
  check_epsilon(epsilon);
  // (e^eps + 1)/(e^eps - 1), stable against overflow for large eps.
  return 1.0 + 2.0 / std::expm1(epsilon);
}

double debias_mean(double noisy_mean, double epsilon) {
  if (!(noisy_mean >= 0.0 && noisy_mean <= 1.0)) {
    throw InvalidParameterError("noisy_mean must lie in [0,1]");
  }
  return debias_factor(epsilon) * noisy_mean - 1.0 / std::expm1(epsilon);
}

double delta_l(std::int64_t n, double epsilon, int k, double delta_fail) {
  check_delta(delta_fail);
  if (n < 1) {
    throw InvalidParameterError("n must be at least 1");
  }
  const double beta = krr_flip_prob(epsilon, k);
  const double h = (1.0 - beta) / (1.0 + beta);
  return std::sqrt(std::log(4.0 / delta_fail) /
                   (2.0 * static_cast<double>(n) * h * h));
}

double delta_s(std::int64_t n, double epsilon, double delta_fail, int rounds) {
  check_delta(delta_fail);
  if (rounds < 1) {
    throw InvalidParameterError("rounds must be at least 1");
  }
  if (n < rounds) {
    throw InvalidParameterError("need at least one user per round (n >= T)");
  }
  const double t = static_cast<double>(rounds);
  return debias_factor(epsilon) *
         std::sqrt(t * std::log(2.0 * t / delta_fail) /
                   (2.0 * static_cast<double>(n)));
}

double eps_effective(double epsilon, std::int64_t n) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InvalidParameterError("epsilon must be positive and finite");
  }
  if (n < 1) {
    throw InvalidParameterError("n must be at least 1");
  }
  return epsilon / std::sqrt(static_cast<double>(n));
}

}  // namespace ldpcp
