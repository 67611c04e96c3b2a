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

// Bonferroni and weighted-Bonferroni familywise error control.
//
// With non-negative weights summing to one, rejecting H_j when
// P_j <= alpha w_j keeps P(any true null rejected) <= sum_j alpha w_j = alpha,
// whatever the weights are. Prior knowledge therefore enters through the
// weights without touching the guarantee.

#ifndef FRASIAN_MTEST_MULTIPLE_TESTING_HPP_
#define FRASIAN_MTEST_MULTIPLE_TESTING_HPP_

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "frasian/report.hpp"
#include "frasian/stats/rng.hpp"
#include "frasian/stats/types.hpp"

namespace frasian::mtest {

using stats::Probability;

class PValueVector {
 public:
  explicit PValueVector(std::vector<double> values);
  std::size_t m() const { return values_.size(); }
  double operator[](std::size_t j) const { return values_[j]; }
  std::span<const double> values() const { return values_; }

 private:
  std::vector<double> values_;
};

// Non-negative weights summing to one within 1e-9.
class WeightVector {
 public:
  explicit WeightVector(std::vector<double> weights);
  static WeightVector Uniform(std::size_t m);

  std::size_t m() const { return weights_.size(); }
  double operator[](std::size_t j) const { return weights_[j]; }
  std::span<const double> values() const { return weights_; }

 private:
  std::vector<double> weights_;
};

// One-sided alternative means; each must be finite and at least kMinTheta.
class MeanVector {
 public:
  static constexpr double kMinTheta = 1e-6;

  explicit MeanVector(std::vector<double> values);
  std::size_t m() const { return values_.size(); }
  double operator[](std::size_t j) const { return values_[j]; }
  std::span<const double> values() const { return values_; }

 private:
  std::vector<double> values_;
};

// Sorted 1-based indices of rejected hypotheses.
using RejectionSet = std::vector<std::size_t>;

enum class WeightedRule {
  // Reject when P_j <= alpha w_j. Reduces to Bonferroni at uniform weights.
  kSumToOne,
  // Reject when P_j / w_j <= alpha / m; a factor m more conservative.
  kLiteral,
};

std::string_view ToString(WeightedRule r);
WeightedRule ParseWeightedRule(std::string_view s);

// {j : P_j <= alpha / m}.
RejectionSet Bonferroni(const PValueVector& pvalues, Probability alpha);

// Per-hypothesis rejection thresholds on the raw p-value scale.
std::vector<double> Thresholds(const WeightVector& weights, Probability alpha,
                               WeightedRule rule = WeightedRule::kSumToOne);

// A zero weight means the hypothesis is never rejected. Throws
// std::invalid_argument when the vectors differ in length.
RejectionSet WeightedBonferroni(const PValueVector& pvalues, const WeightVector& weights,
                                Probability alpha,
                                WeightedRule rule = WeightedRule::kSumToOne);

// Raised when the normalizing constant cannot be bracketed or located.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// sum_j (m/alpha) Phibar(theta_j/2 + c/theta_j); strictly decreasing in c.
double WeightSum(const MeanVector& means, Probability alpha, double c);

struct OptimalWeights {
  WeightVector weights;
  double c = 0.0;
  double residual = 0.0;  // WeightSum(c) - 1 before final renormalization
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  std::size_t iterations = 0;
};

// w_j = (m/alpha) Phibar(theta_j/2 + c/theta_j), with c chosen so the weights
// sum to one: geometric bracket expansion from [-1, 1], then bisection down
// to adjacent doubles. Throws SolverError when no bracket is found.
OptimalWeights ComputeOptimalWeights(const MeanVector& means, Probability alpha);

// Averages w_j(c; theta) over the supplied draws of the mean vector before
// solving for the common c. A single draw reproduces ComputeOptimalWeights.
OptimalWeights ComputeAveragedWeights(std::span<const MeanVector> draws, Probability alpha);

struct Hypothesis {
  bool is_null = true;
  double theta = 0.0;

  static Hypothesis Null() { return {true, 0.0}; }
  static Hypothesis Alternative(double theta) { return {false, theta}; }
};

// Z_j ~ N(theta_j, 1) (theta_j = 0 under the null), P_j = Phibar(Z_j), then
// WeightedBonferroni. Reports "fwer" (any true null rejected) and, when there
// are alternatives, "average_power" (mean fraction of alternatives rejected).
// Requires replicates >= 1000.
SimulationReport FwerSimulate(std::span<const Hypothesis> truth, const WeightVector& weights,
                              Probability alpha, std::size_t replicates,
                              const stats::RngSeed& seed,
                              WeightedRule rule = WeightedRule::kSumToOne);

}  // namespace frasian::mtest

#endif  // FRASIAN_MTEST_MULTIPLE_TESTING_HPP_
