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

// Prediction regions from a conjugate Normal-Normal model.
//
// Two regions are produced for a new observation Z:
//
//  * the Bayes predictive interval, holding 1 - alpha of the posterior
//    predictive mass;
//  * the frequentized region {z : p(z) >= alpha}, where p(z) ranks the
//    predictive density of z against the densities of the observed points
//    under the posterior that conditions on all of them plus z. Because the
//    n + 1 densities are exchangeable when Z is drawn like the data, the
//    region covers Z with probability >= 1 - alpha whatever the prior, and
//    whether or not the Normal model is right.

#ifndef FRASIAN_CONFORMAL_CONFORMAL_HPP_
#define FRASIAN_CONFORMAL_CONFORMAL_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "frasian/stats/types.hpp"

namespace frasian::conformal {

using stats::NormalParams;
using stats::Probability;
using stats::Sample;

// theta ~ prior, Y_i | theta ~ N(theta, noise_variance) i.i.d.
class ConjugateNormalModel {
 public:
  ConjugateNormalModel(NormalParams prior, double noise_variance);

  // Prior N(0, 1), unit noise.
  static ConjugateNormalModel Default() {
    return ConjugateNormalModel(NormalParams(0.0, 1.0), 1.0);
  }

  const NormalParams& prior() const { return prior_; }
  double noise_variance() const { return noise_variance_; }

 private:
  NormalParams prior_;
  double noise_variance_;
};

struct PosteriorState {
  double mean = 0.0;
  double variance = 1.0;
  std::size_t n = 0;

  NormalParams AsParams() const { return NormalParams(mean, variance); }
};

// Precision-weighted update:
//   1/tau_n^2 = 1/tau^2 + n/sigma^2,  mu_n = tau_n^2 (mu_0/tau^2 + sum y / sigma^2).
PosteriorState PosteriorUpdate(const ConjugateNormalModel& model, const Sample& sample);

// The predictive law N(mu_n, tau_n^2 + sigma^2).
NormalParams Predictive(const PosteriorState& post, const ConjugateNormalModel& model);
double PredictiveDensity(const PosteriorState& post, const ConjugateNormalModel& model,
                         double z);

enum class PValueVariant {
  // (1/(n+1)) #{i <= n : D_i <= D_{n+1}}; ranges over {0, ..., n}/(n+1).
  kAsPrinted,
  // Counts the candidate itself as well, so p >= 1/(n+1) always.
  kSelfInclusive,
};

std::string_view ToString(PValueVariant v);
PValueVariant ParsePValueVariant(std::string_view s);

// Exchangeability p-value for H0: Z = z. Discrepancies are compared on the
// log-density scale, which orders them exactly as the densities do but does
// not underflow for far-out z. Ties count toward the p-value.
// Throws std::domain_error on an empty sample.
double ConformalPValue(const ConjugateNormalModel& model, const Sample& sample, double z,
                       PValueVariant variant = PValueVariant::kAsPrinted);

// Evaluation grid lo, lo + step, ..., up to hi.
class GridSpec {
 public:
  // Throws unless lo < hi, step > 0 and the grid has at least three points.
  GridSpec(double lo, double hi, double step);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double step() const { return step_; }
  std::size_t size() const { return size_; }
  double At(std::size_t i) const { return lo_ + static_cast<double>(i) * step_; }
  std::vector<double> Points() const;

 private:
  double lo_;
  double hi_;
  double step_;
  std::size_t size_;
};

// 2001 points spanning [min(y) - 6 s, max(y) + 6 s], s the predictive SD,
// widened where needed so the region cannot be clipped by the grid.
GridSpec DefaultGrid(const ConjugateNormalModel& model, const Sample& sample);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
  bool Contains(double z) const { return lo <= z && z <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

enum class RegionMethod { kFrequentized, kBayes };
std::string_view ToString(RegionMethod m);

// Machine-readable warning codes attached to regions.
inline constexpr std::string_view kWarnEmptyRegion = "empty_region";
inline constexpr std::string_view kWarnClippedLo = "region_clipped_at_grid_lo";
inline constexpr std::string_view kWarnClippedHi = "region_clipped_at_grid_hi";

struct PredictionRegion {
  std::vector<Interval> intervals;  // sorted, disjoint, possibly empty
  Probability alpha{0.05};
  std::optional<GridSpec> grid;  // set for grid-computed regions
  RegionMethod method = RegionMethod::kFrequentized;
  std::vector<std::string> warnings;

  bool empty() const { return intervals.empty(); }
  double Length() const;
  bool Contains(double z) const;
  bool HasWarning(std::string_view code) const;
};

// p(z) at every grid point, left to right.
std::vector<double> PValueCurve(const ConjugateNormalModel& model, const Sample& sample,
                                const GridSpec& grid,
                                PValueVariant variant = PValueVariant::kAsPrinted);

// Joins maximal runs of grid points with p >= alpha into intervals; an
// isolated accepted point becomes [z, z]. Runs reaching either end of the grid
// are flagged as clipped. An empty result is legal and flagged, not an error.
PredictionRegion RegionFromCurve(const std::vector<double>& pvalues, const GridSpec& grid,
                                 Probability alpha);

PredictionRegion FrequentizedRegion(const ConjugateNormalModel& model, const Sample& sample,
                                    Probability alpha, const GridSpec& grid,
                                    PValueVariant variant = PValueVariant::kAsPrinted);
PredictionRegion FrequentizedRegion(const ConjugateNormalModel& model, const Sample& sample,
                                    Probability alpha,
                                    PValueVariant variant = PValueVariant::kAsPrinted);

// Central interval mu_n -/+ z_{1-alpha/2} sqrt(tau_n^2 + sigma^2). For a
// Normal predictive this is also the highest-density set.
PredictionRegion BayesPredictiveInterval(const PosteriorState& post,
                                         const ConjugateNormalModel& model,
                                         Probability alpha);

}  // namespace frasian::conformal

#endif  // FRASIAN_CONFORMAL_CONFORMAL_HPP_
