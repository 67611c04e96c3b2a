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

#include "frasian/conformal/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "frasian/stats/normal.hpp"

namespace frasian::conformal {

ConjugateNormalModel::ConjugateNormalModel(NormalParams prior, double noise_variance)
    : prior_(prior), noise_variance_(noise_variance) {
  if (!std::isfinite(noise_variance) || !(noise_variance > 0.0)) {
    throw std::domain_error("noise variance must be finite and positive");
  }
}

PosteriorState PosteriorUpdate(const ConjugateNormalModel& model, const Sample& sample) {
  const double prior_precision = 1.0 / model.prior().variance();
  const double noise_precision = 1.0 / model.noise_variance();
  double sum = 0.0;
  for (double y : sample) sum += y;
  const auto n = static_cast<double>(sample.size());
  PosteriorState post;
  post.variance = 1.0 / (prior_precision + n * noise_precision);
  post.mean = post.variance * (model.prior().mean() * prior_precision + sum * noise_precision);
  post.n = sample.size();
  if (sample.empty()) {
    post.mean = model.prior().mean();
    post.variance = model.prior().variance();
  }
  return post;
}

NormalParams Predictive(const PosteriorState& post, const ConjugateNormalModel& model) {
  return NormalParams(post.mean, post.variance + model.noise_variance());
}

double PredictiveDensity(const PosteriorState& post, const ConjugateNormalModel& model,
                         double z) {
  return stats::NormalPdf(z, Predictive(post, model));
}

std::string_view ToString(PValueVariant v) {
  return v == PValueVariant::kAsPrinted ? "as-printed" : "self-inclusive";
}

PValueVariant ParsePValueVariant(std::string_view s) {
  if (s == "as-printed") return PValueVariant::kAsPrinted;
  if (s == "self-inclusive") return PValueVariant::kSelfInclusive;
  throw std::invalid_argument("unknown p-value variant: " + std::string(s));
}

double ConformalPValue(const ConjugateNormalModel& model, const Sample& sample, double z,
                       PValueVariant variant) {
  if (sample.empty()) {
    throw std::domain_error("conformal p-value needs at least one observation");
  }
  if (!std::isfinite(z)) throw std::domain_error("candidate value must be finite");
  const Sample augmented = sample.Augmented(z);
  const NormalParams predictive = Predictive(PosteriorUpdate(model, augmented), model);

  const double candidate = stats::NormalLogPdf(z, predictive);
  std::size_t count = variant == PValueVariant::kSelfInclusive ? 1 : 0;
  for (double y : sample) {
    if (stats::NormalLogPdf(y, predictive) <= candidate) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(augmented.size());
}

GridSpec::GridSpec(double lo, double hi, double step) : lo_(lo), hi_(hi), step_(step) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !std::isfinite(step) || !(lo < hi) ||
      !(step > 0.0)) {
    throw std::domain_error("grid needs finite lo < hi and step > 0");
  }
  const double spans = (hi - lo) / step;
  if (spans < 2.0) throw std::domain_error("grid must hold at least three points");
  if (spans > 1e8) throw std::domain_error("grid too fine (more than 1e8 points)");
  // The small slack keeps hi itself on the grid when step divides the range.
  size_ = static_cast<std::size_t>(std::floor(spans * (1.0 + 1e-12) + 1e-9)) + 1;
}

std::vector<double> GridSpec::Points() const {
  std::vector<double> points(size_);
  for (std::size_t i = 0; i < size_; ++i) points[i] = At(i);
  return points;
}

GridSpec DefaultGrid(const ConjugateNormalModel& model, const Sample& sample) {
  if (sample.empty()) throw std::domain_error("default grid needs a non-empty sample");
  const double s = Predictive(PosteriorUpdate(model, sample), model).sd();
  const auto [min_it, max_it] = std::minmax_element(sample.begin(), sample.end());
  double lo = *min_it - 6.0 * s;
  double hi = *max_it + 6.0 * s;

  // With Y_{n+1} = z the augmented posterior mean is a + b z, b < 1/2. The
  // comparison |Y_i - a - b z| >= |z - a - b z| can only switch at z = Y_i or
  // z = (2a - Y_i)/(1 - 2b), and beyond every switch point no indicator fires.
  // Under prior-data conflict those points sit far from the data, so the grid
  // is widened to reach them.
  const double n1 = static_cast<double>(sample.size() + 1);
  const double tau2 = model.prior().variance();
  const double sigma2 = model.noise_variance();
  const double post_var = 1.0 / (1.0 / tau2 + n1 / sigma2);
  double sum = 0.0;
  for (double y : sample) sum += y;
  const double a = post_var * (model.prior().mean() / tau2 + sum / sigma2);
  const double b = post_var / sigma2;
  for (double y : sample) {
    const double crossing = (2.0 * a - y) / (1.0 - 2.0 * b);
    if (std::isfinite(crossing)) {
      lo = std::min(lo, crossing - s);
      hi = std::max(hi, crossing + s);
    }
  }
  return GridSpec(lo, hi, (hi - lo) / 2000.0);
}

std::string_view ToString(RegionMethod m) {
  return m == RegionMethod::kFrequentized ? "frequentized" : "bayes";
}

double PredictionRegion::Length() const {
  double total = 0.0;
  for (const auto& iv : intervals) total += iv.length();
  return total;
}

bool PredictionRegion::Contains(double z) const {
  return std::any_of(intervals.begin(), intervals.end(),
                     [z](const Interval& iv) { return iv.Contains(z); });
}

bool PredictionRegion::HasWarning(std::string_view code) const {
  return std::find(warnings.begin(), warnings.end(), code) != warnings.end();
}

std::vector<double> PValueCurve(const ConjugateNormalModel& model, const Sample& sample,
                                const GridSpec& grid, PValueVariant variant) {
  std::vector<double> p(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    p[i] = ConformalPValue(model, sample, grid.At(i), variant);
  }
  return p;
}

PredictionRegion RegionFromCurve(const std::vector<double>& pvalues, const GridSpec& grid,
                                 Probability alpha) {
  if (pvalues.size() != grid.size()) {
    throw std::invalid_argument("p-value curve and grid differ in length");
  }
  PredictionRegion region;
  region.alpha = alpha;
  region.grid = grid;
  region.method = RegionMethod::kFrequentized;

  const std::size_t n = pvalues.size();
  std::size_t i = 0;
  while (i < n) {
    if (pvalues[i] < alpha.value()) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && pvalues[j + 1] >= alpha.value()) ++j;
    region.intervals.push_back({grid.At(i), grid.At(j)});
    i = j + 1;
  }

  if (region.intervals.empty()) {
    region.warnings.emplace_back(kWarnEmptyRegion);
  } else {
    if (pvalues.front() >= alpha.value()) region.warnings.emplace_back(kWarnClippedLo);
    if (pvalues.back() >= alpha.value()) region.warnings.emplace_back(kWarnClippedHi);
  }
  return region;
}

PredictionRegion FrequentizedRegion(const ConjugateNormalModel& model, const Sample& sample,
                                    Probability alpha, const GridSpec& grid,
                                    PValueVariant variant) {
  stats::RequireLevel(alpha);
  return RegionFromCurve(PValueCurve(model, sample, grid, variant), grid, alpha);
}

PredictionRegion FrequentizedRegion(const ConjugateNormalModel& model, const Sample& sample,
                                    Probability alpha, PValueVariant variant) {
  return FrequentizedRegion(model, sample, alpha, DefaultGrid(model, sample), variant);
}

PredictionRegion BayesPredictiveInterval(const PosteriorState& post,
                                         const ConjugateNormalModel& model,
                                         Probability alpha) {
  stats::RequireLevel(alpha);
  const NormalParams predictive = Predictive(post, model);
  const double half =
      stats::NormalQuantile(Probability(1.0 - alpha.value() / 2.0)) * predictive.sd();
  PredictionRegion region;
  region.intervals.push_back({predictive.mean() - half, predictive.mean() + half});
  region.alpha = alpha;
  region.method = RegionMethod::kBayes;
  return region;
}

}  // namespace frasian::conformal
