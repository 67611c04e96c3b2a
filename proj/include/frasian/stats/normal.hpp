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

#ifndef FRASIAN_STATS_NORMAL_HPP_
#define FRASIAN_STATS_NORMAL_HPP_

#include "frasian/stats/types.hpp"

namespace frasian::stats {

// Gaussian density (2 pi v)^(-1/2) exp(-(x - m)^2 / (2 v)).
double NormalPdf(double x, const NormalParams& params);

// Log of NormalPdf; finite wherever x is, so it never underflows.
double NormalLogPdf(double x, const NormalParams& params);

// Standard normal CDF and its complement. Both are computed from erfc on the
// side where no cancellation occurs, so tails are accurate in relative terms.
double NormalCdf(double x);
double NormalSurvivor(double x);

// CDF of N(mean, variance).
double NormalCdf(double x, const NormalParams& params);

// Inverse of NormalCdf. Rational initial guess polished by Halley steps.
// Throws std::domain_error unless 0 < p < 1.
double NormalQuantile(Probability p);

}  // namespace frasian::stats

#endif  // FRASIAN_STATS_NORMAL_HPP_
