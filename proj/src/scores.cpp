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

#include "ldpcp/scores.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ldpcp {
namespace {

void check_label(const ProbVector& p, int label) {
  if (label < 0 || label >= p.num_classes()) {
    throw InvalidClassError("class index outside {0,...,k-1}");
  }
}

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

Rng& require_rng(Rng* rng) {
  if (rng == nullptr) {
    throw InvalidParameterError("rand-APS requires a randomness source");
  }
  return *rng;
}

}  // namespace

double score_hps(const ProbVector& p, int label) {
  check_label(p, label);
  return clamp01(1.0 - p[label]);
}

double score_aps(const ProbVector& p, int label) {
  check_label(p, label);
  const double own = p[label];
  double sum = 0.0;
  for (double pj : p.probs()) {
    if (pj >= own) sum += pj;
  }
  return clamp01(sum);
}

double score_rand_aps(const ProbVector& p, int label, double u) {
  check_label(p, label);
  if (!(u >= 0.0 && u <= 1.0)) {
    throw InvalidParameterError("rand-APS u must lie in [0,1]");
  }
  const double own = p[label];
  double above = 0.0;
  for (double pj : p.probs()) {
    if (pj > own) above += pj;
  }
  return clamp01(above + u * own);
}

double conformity_score(const LabeledExample& ex, ScoreKind kind, Rng* rng) {
  switch (kind) {
    case ScoreKind::kHps:
      return score_hps(ex.probs, ex.label);
    case ScoreKind::kAps:
      return score_aps(ex.probs, ex.label);
    case ScoreKind::kRandAps:
      return score_rand_aps(ex.probs, ex.label, require_rng(rng).uniform01());
  }
  throw InvalidParameterError("unknown score kind");
}

std::vector<double> class_scores(const ProbVector& p, ScoreKind kind,
                                 Rng* rng) {
  const int k = p.num_classes();
  std::vector<double> scores(static_cast<std::size_t>(k));
  if (kind == ScoreKind::kHps) {
    for (int j = 0; j < k; ++j) scores[static_cast<std::size_t>(j)] = clamp01(1.0 - p[j]);
    return scores;
  }

  // Shared machinery for both APS variants: rank classes by mass and keep
  // running sums, resolving ties by whole runs of equal mass.
  std::vector<int> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return p[a] > p[b]; });

  Rng* u_source = kind == ScoreKind::kRandAps ? &require_rng(rng) : nullptr;
  std::vector<double> u(static_cast<std::size_t>(k));
  if (u_source != nullptr) {
    // One fresh draw per class, in class order so the stream does not
    // depend on the sort.
    for (int j = 0; j < k; ++j) u[static_cast<std::size_t>(j)] = u_source->uniform01();
  }

  double before = 0.0;  // mass strictly above the current tie run
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t run_end = i;
    const double value = p[order[i]];
    double run_mass = 0.0;
    while (run_end < order.size() && p[order[run_end]] == value) {
      run_mass += p[order[run_end]];
      ++run_end;
    }
    for (std::size_t r = i; r < run_end; ++r) {
      const auto cls = static_cast<std::size_t>(order[r]);
      if (kind == ScoreKind::kAps) {
        scores[cls] = clamp01(before + run_mass);
      } else {
        scores[cls] = clamp01(before + u[cls] * value);
      }
    }
    before += run_mass;
    i = run_end;
  }
  return scores;
}

PredictionSet prediction_set(const ProbVector& p, double q, ScoreKind kind,
                             Rng* rng) {
  const std::vector<double> scores = class_scores(p, kind, rng);
  PredictionSet set;
  for (int j = 0; j < p.num_classes(); ++j) {
    if (scores[static_cast<std::size_t>(j)] <= q) set.members.push_back(j);
  }
  return set;
}

ConformalQuantile non_private_cp(std::span<const LabeledExample> calib,
                                 double alpha, ScoreKind kind, Rng* rng) {
  if (calib.empty()) {
    throw EmptyInputError("calibration set is empty");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidParameterError("alpha must lie in (0,1)");
  }
  const std::size_t n = calib.size();
  const double exact = (static_cast<double>(n) + 1.0) * (1.0 - alpha);
  const auto rank = static_cast<std::size_t>(std::ceil(exact - 1e-9));
  if (rank > n) {
    return ConformalQuantile{1.0, true};
  }
  std::vector<double> scores;
  scores.reserve(n);
  for (const LabeledExample& ex : calib) {
    scores.push_back(conformity_score(ex, kind, rng));
  }
  std::nth_element(scores.begin(), scores.begin() + static_cast<std::ptrdiff_t>(rank - 1),
                   scores.end());
  return ConformalQuantile{scores[rank - 1], false};
}

}  // namespace ldpcp
