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

#ifndef FRASIAN_STATS_ECDF_HPP_
#define FRASIAN_STATS_ECDF_HPP_

#include <span>
#include <vector>

#include "frasian/stats/types.hpp"

namespace frasian::stats {

// The empirical distribution function of a sample: the fraction of
// observations <= x. Right-continuous; ties allowed.
class EmpiricalCdf {
 public:
  // Throws std::domain_error on an empty sample.
  explicit EmpiricalCdf(const Sample& sample);

  double operator()(double x) const;
  std::size_t size() const { return sorted_.size(); }
  std::span<const double> sorted() const { return sorted_; }

 private:
  std::vector<double> sorted_;
};

double EcdfEval(const Sample& sample, double x);

}  // namespace frasian::stats

#endif  // FRASIAN_STATS_ECDF_HPP_
