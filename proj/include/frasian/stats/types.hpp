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

#ifndef FRASIAN_STATS_TYPES_HPP_
#define FRASIAN_STATS_TYPES_HPP_

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace frasian::stats {

// A value in [0, 1]: levels, coverages and p-values.
class Probability {
 public:
  explicit Probability(double value) : value_(value) {
    if (!(value >= 0.0 && value <= 1.0)) {
      throw std::domain_error("probability must lie in [0, 1], got " +
                              std::to_string(value));
    }
  }

  double value() const { return value_; }
  // Strictly inside (0, 1); required of every significance level.
  bool is_interior() const { return value_ > 0.0 && value_ < 1.0; }

  friend bool operator==(Probability, Probability) = default;

 private:
  double value_;
};

// Throws unless alpha is in the open interval (0, 1).
inline void RequireLevel(Probability alpha, const char* what = "alpha") {
  if (!alpha.is_interior()) {
    throw std::domain_error(std::string(what) + " must lie in (0, 1)");
  }
}

class NormalParams {
 public:
  NormalParams(double mean, double variance) : mean_(mean), variance_(variance) {
    if (!std::isfinite(mean) || !std::isfinite(variance) || !(variance > 0.0)) {
      throw std::domain_error("normal parameters need finite mean and variance > 0");
    }
  }

  double mean() const { return mean_; }
  double variance() const { return variance_; }
  double sd() const { return std::sqrt(variance_); }

  friend bool operator==(const NormalParams&, const NormalParams&) = default;

 private:
  double mean_;
  double variance_;
};

// An ordered collection of finite observations.
class Sample {
 public:
  Sample() = default;
  explicit Sample(std::vector<double> values) : values_(std::move(values)) {
    for (double v : values_) {
      if (!std::isfinite(v)) throw std::domain_error("sample values must be finite");
    }
  }
  Sample(std::initializer_list<double> values)
      : Sample(std::vector<double>(values)) {}

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  // Copy with one extra observation appended.
  Sample Augmented(double value) const {
    std::vector<double> v = values_;
    v.push_back(value);
    return Sample(std::move(v));
  }

  friend bool operator==(const Sample&, const Sample&) = default;

 private:
  std::vector<double> values_;
};

}  // namespace frasian::stats

#endif  // FRASIAN_STATS_TYPES_HPP_
