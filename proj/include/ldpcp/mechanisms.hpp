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

#ifndef LDPCP_MECHANISMS_HPP_
#define LDPCP_MECHANISMS_HPP_

#include <cstdint>

#include "ldpcp/random.hpp"
#include "ldpcp/types.hpp"

namespace ldpcp {

// Epsilons below this are rejected: they drive the channel to pure noise
// and the correction terms past 1. Callers wanting the uniform limit must
// opt in explicitly by staying above the floor.
inline constexpr double kMinEpsilon = 1e-6;

// Uniform-replacement probability of k-ary randomized response,
// beta = k / (k - 1 + e^eps). Strictly decreasing in eps, increasing in k.
double krr_flip_prob(double epsilon, int k);

// k-ary randomized response: keeps the label with probability
// e^eps / (k - 1 + e^eps), otherwise replaces it uniformly.
int krr(int label, double epsilon, int k, Rng& rng);

// Warner's binary randomized response: keeps the bit with probability
// e^eps / (1 + e^eps).
int rr_bit(int bit, double epsilon, Rng& rng);

// (e^eps + 1) / (e^eps - 1); the multiplicative factor that makes a
// randomized-response bit mean unbiased.
double debias_factor(double epsilon);

// Unbiased estimate of the true bit fraction from a randomized-response
// mean. Deliberately not clamped to [0,1]: clamping would bias the
// comparisons inside the quantile search.
double debias_mean(double noisy_mean, double epsilon);

// Finite-sample coverage correction for label perturbation:
// sqrt(ln(4/delta) / (2 n h^2)) with h = (1 - beta) / (1 + beta).
double delta_l(std::int64_t n, double epsilon, int k, double delta_fail);

// Finite-sample coverage correction for the score protocol over `rounds`
// disjoint cohorts: a per-round Hoeffding bound on the debiased mean at
// level delta/rounds, unioned over rounds:
//   debias_factor(eps) * sqrt(rounds * ln(2*rounds/delta) / (2 n)).
// Independent of the number of classes.
double delta_s(std::int64_t n, double epsilon, double delta_fail, int rounds);

// Shuffle-model amplification: effective privacy loss eps / sqrt(n).
double eps_effective(double epsilon, std::int64_t n);

}  // namespace ldpcp

#endif  // LDPCP_MECHANISMS_HPP_
