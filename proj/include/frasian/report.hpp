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

#ifndef FRASIAN_REPORT_HPP_
#define FRASIAN_REPORT_HPP_

#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "frasian/stats/rng.hpp"

namespace frasian {

// A proportion estimated from Bernoulli trials, with its binomial SE.
struct ProportionEstimate {
  double value = 0.0;
  double se = 0.0;
  std::size_t trials = 0;
};

inline ProportionEstimate EstimateProportion(std::size_t successes, std::size_t trials) {
  if (trials == 0) throw std::domain_error("proportion needs at least one trial");
  const double p = static_cast<double>(successes) / static_cast<double>(trials);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(trials)), trials};
}

// Sample mean with the standard error of the mean.
inline ProportionEstimate EstimateMean(std::span<const double> values) {
  if (values.empty()) throw std::domain_error("mean needs at least one value");
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double se = values.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  return {mean, se, values.size()};
}

// Seeded Monte Carlo summary. Every estimate carries either a standard error
// or membership in `exact` (deterministic quantities such as a DKW epsilon).
struct SimulationReport {
  std::map<std::string, double> estimates;
  std::map<std::string, double> standard_errors;
  std::set<std::string> exact;
  std::size_t replicates = 0;
  stats::RngSeed seed;
  std::vector<std::string> warnings;

  void Add(const std::string& name, const ProportionEstimate& e) {
    estimates[name] = e.value;
    standard_errors[name] = e.se;
  }
  void Add(const std::string& name, double value, double se) {
    estimates[name] = value;
    standard_errors[name] = se;
  }
  void AddExact(const std::string& name, double value) {
    estimates[name] = value;
    exact.insert(name);
  }

  std::optional<double> Get(const std::string& name) const {
    auto it = estimates.find(name);
    if (it == estimates.end()) return std::nullopt;
    return it->second;
  }
  double At(const std::string& name) const { return estimates.at(name); }
  double SeAt(const std::string& name) const { return standard_errors.at(name); }

  bool IsWellFormed() const {
    for (const auto& [name, value] : estimates) {
      if (!standard_errors.contains(name) && !exact.contains(name)) return false;
    }
    return true;
  }
};

}  // namespace frasian

#endif  // FRASIAN_REPORT_HPP_
