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

#include "frasian/stats/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace frasian::stats {
namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t Rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

std::uint64_t DeriveKey(const RngSeed& seed) {
  std::uint64_t h = SplitMix64(seed.master ^ 0x6A09E667F3BCC908ULL);
  for (std::uint64_t label : seed.path) {
    h = SplitMix64(h ^ SplitMix64(label ^ 0xBB67AE8584CAA73BULL));
  }
  // Path length is folded in so that a prefix never collides with its parent.
  return SplitMix64(h ^ (seed.path.size() * 0x3C6EF372FE94F82BULL));
}

void RequireShape(double v, const char* what) {
  if (!std::isfinite(v) || !(v > 0.0)) {
    throw std::domain_error(std::string(what) + " must be finite and positive");
  }
}

}  // namespace

std::string RngSeed::ToString() const {
  std::string s = std::to_string(master);
  for (std::uint64_t p : path) s += "/" + std::to_string(p);
  return s;
}

Rng::Rng(const RngSeed& seed) {
  std::uint64_t x = DeriveKey(seed);
  for (auto& word : state_) {
    x += 0x9E3779B97F4A7C15ULL;
    word = SplitMix64(x);
  }
}

std::uint64_t Rng::NextU64() {
  const std::uint64_t result = Rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = Rotl(state_[3], 45);
  return result;
}

double Rng::Uniform() {
  return (static_cast<double>(NextU64() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t Rng::UniformIndex(std::uint64_t n) {
  if (n == 0) throw std::domain_error("UniformIndex needs n > 0");
  // Lemire's nearly-divisionless bounded draw.
  __uint128_t m = static_cast<__uint128_t>(NextU64()) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = -n % n;
    while (low < threshold) {
      m = static_cast<__uint128_t>(NextU64()) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double Rng::StandardNormal() {
  // Box-Muller, one variate per call; keeps the generator free of cached state.
  const double r = std::sqrt(-2.0 * std::log(Uniform()));
  return r * std::cos(2.0 * std::numbers::pi * Uniform());
}

double Rng::Normal(const NormalParams& params) {
  return params.mean() + params.sd() * StandardNormal();
}

double Rng::Gamma(double shape) {
  RequireShape(shape, "gamma shape");
  if (shape < 1.0) {
    const double boost = std::pow(Uniform(), 1.0 / shape);
    return Gamma(shape + 1.0) * boost;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = StandardNormal();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = Uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double Rng::Beta(double a, double b) {
  RequireShape(a, "beta shape a");
  RequireShape(b, "beta shape b");
  // Closed-form inverse CDFs for the stick-breaking shapes.
  if (a == 1.0) return -std::expm1(std::log(Uniform()) / b);
  if (b == 1.0) return std::exp(std::log(Uniform()) / a);
  const double x = Gamma(a);
  const double y = Gamma(b);
  return x / (x + y);
}

Sample SampleNormal(const NormalParams& params, std::size_t n, const RngSeed& seed) {
  Rng rng(seed);
  std::vector<double> values(n);
  for (double& v : values) v = rng.Normal(params);
  return Sample(std::move(values));
}

double SampleBeta(double a, double b, const RngSeed& seed) {
  Rng rng(seed);
  return rng.Beta(a, b);
}

double SampleUniform(const RngSeed& seed) {
  Rng rng(seed);
  return rng.Uniform();
}

}  // namespace frasian::stats
