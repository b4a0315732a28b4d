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

#ifndef LDPCP_RANDOM_HPP_
#define LDPCP_RANDOM_HPP_

#include <cstdint>
#include <random>
#include <string_view>

namespace ldpcp {

// Deterministic random source. All distribution transforms are implemented
// here (not delegated to <random> distributions, whose output is
// implementation-defined), so a (seed, label) pair reproduces the same
// stream on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  // Derives an independent stream from a master seed and a purpose label,
  // e.g. Rng::substream(seed, "data").
  static Rng substream(std::uint64_t seed, std::string_view label);

  std::uint64_t next_u64();

  // Uniform on [0,1) with 53-bit resolution.
  double uniform01();

  // Uniform over {0, ..., n-1}.
  int uniform_int(int n);

  bool bernoulli(double p);

  double normal();

  // Gamma(shape, 1) via Marsaglia-Tsang squeeze; shape > 0.
  double gamma(double shape);

 private:
  std::mt19937_64 engine_;
};

}  // namespace ldpcp

#endif  // LDPCP_RANDOM_HPP_
