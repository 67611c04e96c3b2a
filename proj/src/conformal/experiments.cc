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

#include "frasian/conformal/experiments.hpp"

#include <cmath>
#include <stdexcept>

#include "frasian/stats/parallel.hpp"

namespace frasian::conformal {
namespace {

void RequireReplicates(std::size_t replicates, std::size_t n) {
  if (replicates == 0) throw std::domain_error("at least one replicate is required");
  if (n == 0) throw std::domain_error("sample size must be at least 1");
}

}  // namespace

SimulationReport PredictionCoverage(const ConjugateNormalModel& model,
                                    const NormalParams& truth, std::size_t n,
                                    Probability alpha, std::size_t replicates,
                                    const stats::RngSeed& seed, PValueVariant variant) {
  stats::RequireLevel(alpha);
  RequireReplicates(replicates, n);
  std::vector<char> freq(replicates, 0);
  std::vector<char> bayes(replicates, 0);
  stats::ParallelFor(replicates, [&](std::size_t r) {
    const Sample draws = stats::SampleNormal(truth, n + 1, seed.Child(r));
    const Sample data(std::vector<double>(draws.begin(), draws.end() - 1));
    const double z = draws[n];
    freq[r] = ConformalPValue(model, data, z, variant) >= alpha.value();
    bayes[r] = BayesPredictiveInterval(PosteriorUpdate(model, data), model, alpha).Contains(z);
  });

  SimulationReport report;
  report.replicates = replicates;
  report.seed = seed;
  std::size_t f = 0;
  std::size_t b = 0;
  for (std::size_t r = 0; r < replicates; ++r) {
    f += freq[r];
    b += bayes[r];
  }
  report.Add("frequentized_coverage", EstimateProportion(f, replicates));
  report.Add("bayes_coverage", EstimateProportion(b, replicates));
  return report;
}

SimulationReport RegionLengthComparison(const ConjugateNormalModel& model,
                                        const NormalParams& truth, std::size_t n,
                                        Probability alpha, std::size_t replicates,
                                        const stats::RngSeed& seed) {
  stats::RequireLevel(alpha);
  RequireReplicates(replicates, n);
  std::vector<double> freq_len(replicates);
  std::vector<double> bayes_len(replicates);
  std::vector<char> empty(replicates, 0);
  stats::ParallelFor(replicates, [&](std::size_t r) {
    const Sample data = stats::SampleNormal(truth, n, seed.Child(r));
    const PredictionRegion freq = FrequentizedRegion(model, data, alpha);
    freq_len[r] = freq.Length();
    empty[r] = freq.empty();
    bayes_len[r] = BayesPredictiveInterval(PosteriorUpdate(model, data), model, alpha).Length();
  });

  SimulationReport report;
  report.replicates = replicates;
  report.seed = seed;
  std::size_t longer = 0;
  std::size_t empties = 0;
  for (std::size_t r = 0; r < replicates; ++r) {
    longer += freq_len[r] > bayes_len[r] ? 1 : 0;
    empties += empty[r];
  }
  report.Add("frequentized_longer_fraction", EstimateProportion(longer, replicates));
  const ProportionEstimate fl = EstimateMean(freq_len);
  const ProportionEstimate bl = EstimateMean(bayes_len);
  report.Add("mean_frequentized_length", fl.value, fl.se);
  report.Add("mean_bayes_length", bl.value, bl.se);
  report.Add("empty_region_fraction", EstimateProportion(empties, replicates));
  return report;
}

std::vector<std::size_t> PValueRankCounts(const ConjugateNormalModel& model,
                                          const NormalParams& truth, std::size_t n,
                                          std::size_t replicates, const stats::RngSeed& seed,
                                          PValueVariant variant) {
  RequireReplicates(replicates, n);
  std::vector<std::size_t> rank(replicates);
  stats::ParallelFor(replicates, [&](std::size_t r) {
    const Sample draws = stats::SampleNormal(truth, n + 1, seed.Child(r));
    const Sample data(std::vector<double>(draws.begin(), draws.end() - 1));
    const double p = ConformalPValue(model, data, draws[n], variant);
    rank[r] = static_cast<std::size_t>(std::lround(p * static_cast<double>(n + 1)));
  });
  std::vector<std::size_t> counts(n + 2, 0);
  for (std::size_t k : rank) ++counts[k];
  return counts;
}

ToyPanel MakeToyPanel(const ConjugateNormalModel& model, double theta, std::size_t n,
                      Probability alpha, const stats::RngSeed& seed) {
  ToyPanel panel;
  panel.theta = theta;
  panel.data = stats::SampleNormal(NormalParams(theta, model.noise_variance()), n, seed);
  panel.frequentized = FrequentizedRegion(model, panel.data, alpha);
  panel.bayes = BayesPredictiveInterval(PosteriorUpdate(model, panel.data), model, alpha);
  return panel;
}

}  // namespace frasian::conformal
