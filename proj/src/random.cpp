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

#include "ldpcp/random.hpp"

#include <cmath>

#include "ldpcp/types.hpp"

namespace ldpcp {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::mt19937_64 make_engine(std::uint64_t seed) {
  // Decorrelate nearby seeds before feeding the engine.
  std::seed_seq seq{splitmix64(seed), splitmix64(seed ^ 0x5851f42d4c957f2dULL),
                    splitmix64(~seed), splitmix64(seed + 0x14057b7ef767814fULL)};
  return std::mt19937_64(seq);
}

}  // namespace

Rng::Rng(std::uint64_t seed) : engine_(make_engine(seed)) {}

Rng Rng::substream(std::uint64_t seed, std::string_view label) {
  return Rng(splitmix64(seed ^ fnv1a64(label)));
}

std::uint64_t Rng::next_u64() { return engine_(); }

double Rng::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

int Rng::uniform_int(int n) {
  if (n <= 0) {
    throw InvalidParameterError("uniform_int requires n >= 1");
  }
  const std::uint64_t span = static_cast<std::uint64_t>(n);
  // Rejection sampling to avoid modulo bias.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t draw;
  do {
    draw = next_u64();
  } while (draw >= limit);
  return static_cast<int>(draw % span);
}

bool Rng::bernoulli(double p) { return uniform01() < p; }

double Rng::normal() {
  // Box-Muller; the second variate is discarded to keep the stream stateless.
  const double u1 = 1.0 - uniform01();  // (0,1]
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

double Rng::gamma(double shape) {
  if (!(shape > 0.0)) {
    throw InvalidParameterError("gamma shape must be positive");
  }
  if (shape < 1.0) {
    // Boost to shape + 1 and scale back.
    const double g = gamma(shape + 1.0);
    const double u = 1.0 - uniform01();
    return g * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = 1.0 - uniform01();
    if (u < 1.0 - 0.0331 * x * x * x * x) {
      return d * v;
    }
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
      return d * v;
    }
  }
}

}  // namespace ldpcp
