// Copyright 2026 The Frasian Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FRASIAN_STATS_RNG_HPP_
#define FRASIAN_STATS_RNG_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "frasian/stats/types.hpp"

namespace frasian::stats {

// Identifies one random stream: a master seed plus a path of integer labels.
// Experiments hand each replicate its own child path, so a replicate draws
// the same numbers whether it runs first, last, or on another thread.
struct RngSeed {
  std::uint64_t master = 0;
  std::vector<std::uint64_t> path;

  RngSeed Child(std::uint64_t label) const {
    RngSeed s = *this;
    s.path.push_back(label);
    return s;
  }

  // "master/p0/p1/..." for reports.
  std::string ToString() const;

  friend bool operator==(const RngSeed&, const RngSeed&) = default;
};

// xoshiro256** keyed by a SplitMix64 hash of (master, path).
//
// Distributions are implemented here rather than taken from <random> because
// the standard library leaves their algorithms unspecified, and reports must
// be byte-identical across toolchains.
class Rng {
 public:
  explicit Rng(const RngSeed& seed);

  std::uint64_t NextU64();

  // Uniform on the open interval (0, 1).
  double Uniform();
  // Uniform integer in [0, n). n must be positive.
  std::uint64_t UniformIndex(std::uint64_t n);
  double StandardNormal();
  double Normal(const NormalParams& params);
  // Gamma(shape, 1), Marsaglia-Tsang.
  double Gamma(double shape);
  double Beta(double a, double b);

 private:
  std::array<std::uint64_t, 4> state_;
};

// Pure seed-to-value entry points. Each builds a fresh stream from the seed.
Sample SampleNormal(const NormalParams& params, std::size_t n, const RngSeed& seed);
double SampleBeta(double a, double b, const RngSeed& seed);
double SampleUniform(const RngSeed& seed);

}  // namespace frasian::stats

#endif  // FRASIAN_STATS_RNG_HPP_
