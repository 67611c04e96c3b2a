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

#include "frasian/mtest/multiple_testing.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "frasian/stats/normal.hpp"
#include "frasian/stats/parallel.hpp"

namespace frasian::mtest {
namespace {

constexpr int kMaxBracketExpansions = 64;
constexpr std::size_t kMaxBisections = 4096;
constexpr double kMaxResidual = 1e-8;

// Finds the root of a strictly decreasing `sum(c) - 1`.
template <typename SumFn>
OptimalWeights SolveNormalizer(SumFn&& sum, std::size_t m,
                               const std::function<std::vector<double>(double)>& weights_at) {
  double lo = -1.0;
  double hi = 1.0;
  double f_lo = sum(lo) - 1.0;
  double f_hi = sum(hi) - 1.0;
  int expansions = 0;
  while (!(f_lo > 0.0) && expansions < kMaxBracketExpansions) {
    lo *= 2.0;
    f_lo = sum(lo) - 1.0;
    ++expansions;
  }
  while (!(f_hi < 0.0) && expansions < kMaxBracketExpansions) {
    hi *= 2.0;
    f_hi = sum(hi) - 1.0;
    ++expansions;
  }
  if (!(f_lo > 0.0) || !(f_hi < 0.0) || !std::isfinite(f_lo) || !std::isfinite(f_hi)) {
    std::ostringstream msg;
    msg << "could not bracket the weight normalizer: m=" << m << " bracket=[" << lo << ", "
        << hi << "] sum-1=[" << f_lo << ", " << f_hi << "] after " << expansions
        << " expansions";
    throw SolverError(msg.str());
  }

  OptimalWeights out{WeightVector::Uniform(m)};
  out.bracket_lo = lo;
  out.bracket_hi = hi;
  std::size_t iter = 0;
  for (; iter < kMaxBisections; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = sum(mid) - 1.0;
    if (f_mid == 0.0) {
      lo = hi = mid;
      break;
    }
    if (f_mid > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  // Of the two final endpoints, keep the one with the smaller residual.
  const double r_lo = sum(lo) - 1.0;
  const double r_hi = sum(hi) - 1.0;
  out.c = std::abs(r_lo) <= std::abs(r_hi) ? lo : hi;
  out.residual = std::abs(r_lo) <= std::abs(r_hi) ? r_lo : r_hi;
  out.iterations = iter;
  if (!(std::abs(out.residual) <= kMaxResidual)) {
    std::ostringstream msg;
    msg << "weight normalizer did not converge: c=" << out.c << " residual=" << out.residual;
    throw SolverError(msg.str());
  }

  std::vector<double> w = weights_at(out.c);
  double total = 0.0;
  for (double x : w) total += x;
  for (double& x : w) x /= total;
  out.weights = WeightVector(std::move(w));
  return out;
}

std::vector<double> RawWeights(const MeanVector& means, double scale, double c) {
  std::vector<double> w(means.m());
  for (std::size_t j = 0; j < means.m(); ++j) {
    const double theta = means[j];
    w[j] = scale * stats::NormalSurvivor(theta / 2.0 + c / theta);
  }
  return w;
}

}  // namespace

PValueVector::PValueVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw std::domain_error("at least one p-value is required");
  for (double p : values_) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("p-values must lie in [0, 1]");
  }
}

WeightVector::WeightVector(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw std::domain_error("at least one weight is required");
  double total = 0.0;
  for (double w : weights_) {
    if (!std::isfinite(w) || w < 0.0) {
      throw std::domain_error("weights must be finite and non-negative");
    }
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "weights must sum to one within 1e-9 (sum = " << total << ")";
    throw std::domain_error(msg.str());
  }
}

WeightVector WeightVector::Uniform(std::size_t m) {
  if (m == 0) throw std::domain_error("at least one weight is required");
  return WeightVector(std::vector<double>(m, 1.0 / static_cast<double>(m)));
}

MeanVector::MeanVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw std::domain_error("at least one mean is required");
  for (double t : values_) {
    if (!std::isfinite(t) || t < kMinTheta) {
      throw std::domain_error("alternative means must be finite and >= 1e-6");
    }
  }
}

std::string_view ToString(WeightedRule r) {
  return r == WeightedRule::kSumToOne ? "sum-to-one" : "literal";
}

WeightedRule ParseWeightedRule(std::string_view s) {
  if (s == "sum-to-one") return WeightedRule::kSumToOne;
  if (s == "literal") return WeightedRule::kLiteral;
  throw std::invalid_argument("unknown weighted rule: " + std::string(s));
}

RejectionSet Bonferroni(const PValueVector& pvalues, Probability alpha) {
  stats::RequireLevel(alpha);
  const double threshold = alpha.value() / static_cast<double>(pvalues.m());
  RejectionSet rejected;
  for (std::size_t j = 0; j < pvalues.m(); ++j) {
    if (pvalues[j] <= threshold) rejected.push_back(j + 1);
  }
  return rejected;
}

std::vector<double> Thresholds(const WeightVector& weights, Probability alpha,
                               WeightedRule rule) {
  stats::RequireLevel(alpha);
  const double scale = rule == WeightedRule::kSumToOne
                           ? alpha.value()
                           : alpha.value() / static_cast<double>(weights.m());
  const auto w = weights.values();
  const bool uniform = std::adjacent_find(w.begin(), w.end(), std::not_equal_to<>()) == w.end();
  std::vector<double> t(weights.m());
  for (std::size_t j = 0; j < weights.m(); ++j) {
    // alpha * (1/m) and alpha / m can differ in the last bit; equal weights use
    // the division so the result matches plain Bonferroni exactly.
    t[j] = uniform ? scale / static_cast<double>(weights.m()) : scale * weights[j];
  }
  return t;
}

RejectionSet WeightedBonferroni(const PValueVector& pvalues, const WeightVector& weights,
                                Probability alpha, WeightedRule rule) {
  if (pvalues.m() != weights.m()) {
    throw std::invalid_argument("p-value and weight vectors differ in length");
  }
  const std::vector<double> thresholds = Thresholds(weights, alpha, rule);
  RejectionSet rejected;
  for (std::size_t j = 0; j < pvalues.m(); ++j) {
    if (weights[j] > 0.0 && pvalues[j] <= thresholds[j]) rejected.push_back(j + 1);
  }
  return rejected;
}

double WeightSum(const MeanVector& means, Probability alpha, double c) {
  stats::RequireLevel(alpha);
  const double scale = static_cast<double>(means.m()) / alpha.value();
  double total = 0.0;
  for (double w : RawWeights(means, scale, c)) total += w;
  return total;
}

OptimalWeights ComputeOptimalWeights(const MeanVector& means, Probability alpha) {
  stats::RequireLevel(alpha);
  const double scale = static_cast<double>(means.m()) / alpha.value();
  return SolveNormalizer([&](double c) { return WeightSum(means, alpha, c); }, means.m(),
                         [&](double c) { return RawWeights(means, scale, c); });
}

OptimalWeights ComputeAveragedWeights(std::span<const MeanVector> draws, Probability alpha) {
  stats::RequireLevel(alpha);
  if (draws.empty()) throw std::domain_error("at least one mean-vector draw is required");
  const std::size_t m = draws.front().m();
  for (const auto& d : draws) {
    if (d.m() != m) throw std::invalid_argument("mean-vector draws differ in length");
  }
  const double scale = static_cast<double>(m) / alpha.value();
  const auto averaged = [&](double c) {
    std::vector<double> w(m, 0.0);
    for (const auto& d : draws) {
      const std::vector<double> raw = RawWeights(d, scale, c);
      for (std::size_t j = 0; j < m; ++j) w[j] += raw[j];
    }
    for (double& x : w) x /= static_cast<double>(draws.size());
    return w;
  };
  return SolveNormalizer(
      [&](double c) {
        double total = 0.0;
        for (double x : averaged(c)) total += x;
        return total;
      },
      m, averaged);
}

SimulationReport FwerSimulate(std::span<const Hypothesis> truth, const WeightVector& weights,
                              Probability alpha, std::size_t replicates,
                              const stats::RngSeed& seed, WeightedRule rule) {
  stats::RequireLevel(alpha);
  if (replicates < 1000) throw std::domain_error("FWER simulation needs >= 1000 replicates");
  if (truth.size() != weights.m()) {
    throw std::invalid_argument("truth and weight vectors differ in length");
  }
  const std::vector<double> thresholds = Thresholds(weights, alpha, rule);
  std::size_t alternatives = 0;
  for (const auto& h : truth) alternatives += h.is_null ? 0 : 1;

  std::vector<char> any_false(replicates, 0);
  std::vector<double> power(replicates, 0.0);
  stats::ParallelFor(replicates, [&](std::size_t r) {
    stats::Rng rng(seed.Child(r));
    std::size_t true_rejections = 0;
    for (std::size_t j = 0; j < truth.size(); ++j) {
      const double z = rng.StandardNormal() + (truth[j].is_null ? 0.0 : truth[j].theta);
      const bool reject = weights[j] > 0.0 && stats::NormalSurvivor(z) <= thresholds[j];
      if (!reject) continue;
      if (truth[j].is_null) {
        any_false[r] = 1;
      } else {
        ++true_rejections;
      }
    }
    if (alternatives > 0) {
      power[r] = static_cast<double>(true_rejections) / static_cast<double>(alternatives);
    }
  });

  SimulationReport report;
  report.replicates = replicates;
  report.seed = seed;
  std::size_t errors = 0;
  for (char e : any_false) errors += e ? 1 : 0;
  report.Add("fwer", EstimateProportion(errors, replicates));
  if (alternatives > 0) {
    const ProportionEstimate p = EstimateMean(power);
    report.Add("average_power", p.value, p.se);
  }
  if (alternatives == truth.size()) report.warnings.push_back("no_true_nulls");
  return report;
}

}  // namespace frasian::mtest
