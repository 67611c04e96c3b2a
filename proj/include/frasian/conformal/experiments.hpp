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

#ifndef FRASIAN_CONFORMAL_EXPERIMENTS_HPP_
#define FRASIAN_CONFORMAL_EXPERIMENTS_HPP_

#include <cstddef>
#include <vector>

#include "frasian/conformal/conformal.hpp"
#include "frasian/report.hpp"
#include "frasian/stats/rng.hpp"

namespace frasian::conformal {

// Y_1..Y_n, Z i.i.d. from `truth`; the model's prior stays fixed. Reports
// "frequentized_coverage" (p(Z) >= alpha, which needs no region inversion)
// and "bayes_coverage" (Z inside the Bayes predictive interval).
SimulationReport PredictionCoverage(const ConjugateNormalModel& model,
                                    const NormalParams& truth, std::size_t n,
                                    Probability alpha, std::size_t replicates,
                                    const stats::RngSeed& seed,
                                    PValueVariant variant = PValueVariant::kAsPrinted);

// Builds both regions on the default grid for each replicate. Reports
// "frequentized_longer_fraction", "mean_frequentized_length",
// "mean_bayes_length" and "empty_region_fraction".
SimulationReport RegionLengthComparison(const ConjugateNormalModel& model,
                                        const NormalParams& truth, std::size_t n,
                                        Probability alpha, std::size_t replicates,
                                        const stats::RngSeed& seed);

// counts[k] = #{replicates with p(Z) = k/(n+1)}, k = 0..n+1.
std::vector<std::size_t> PValueRankCounts(const ConjugateNormalModel& model,
                                          const NormalParams& truth, std::size_t n,
                                          std::size_t replicates, const stats::RngSeed& seed,
                                          PValueVariant variant = PValueVariant::kAsPrinted);

// One panel of the two-panel toy picture: data, both regions.
struct ToyPanel {
  double theta = 0.0;
  Sample data;
  PredictionRegion frequentized;
  PredictionRegion bayes;
};

ToyPanel MakeToyPanel(const ConjugateNormalModel& model, double theta, std::size_t n,
                      Probability alpha, const stats::RngSeed& seed);

}  // namespace frasian::conformal

#endif  // FRASIAN_CONFORMAL_EXPERIMENTS_HPP_
