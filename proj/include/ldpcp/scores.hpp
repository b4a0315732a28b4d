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

#ifndef LDPCP_SCORES_HPP_
#define LDPCP_SCORES_HPP_

#include <span>

#include "ldpcp/random.hpp"
#include "ldpcp/types.hpp"

namespace ldpcp {

// Conformity scores; lower means better agreement between the model and
// the label. All three kinds take values in [0,1].

// 1 - p_y.
double score_hps(const ProbVector& p, int label);

// Sum of all entries at least as large as p_y (ties included).
double score_aps(const ProbVector& p, int label);

// Randomized APS: sum of entries strictly larger than p_y, plus u * p_y.
// u = 1 reproduces score_aps on tie-free vectors; u = 0 drops the own-class
// mass entirely.
double score_rand_aps(const ProbVector& p, int label, double u);

// Score of the example's own label. rng is consulted only for kRandAps
// (one fresh u); passing nullptr for kRandAps is an error.
double conformity_score(const LabeledExample& ex, ScoreKind kind,
                        Rng* rng = nullptr);

// Scores of all k classes of one posterior. For kRandAps one fresh u is
// drawn per class.
std::vector<double> class_scores(const ProbVector& p, ScoreKind kind,
                                 Rng* rng = nullptr);

PredictionSet prediction_set(const ProbVector& p, double q, ScoreKind kind,
                             Rng* rng = nullptr);

// Split-conformal baseline: the ceil((n+1)(1-alpha))-th smallest calibration
// score, or q = 1 with the saturated flag when that rank exceeds n.
ConformalQuantile non_private_cp(std::span<const LabeledExample> calib,
                                 double alpha, ScoreKind kind,
                                 Rng* rng = nullptr);

}  // namespace ldpcp

#endif  // LDPCP_SCORES_HPP_
