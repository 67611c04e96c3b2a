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

#include "frasian/stats/normal.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace frasian::stats {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
const double kSqrt2Pi = std::sqrt(2.0 * std::numbers::pi);

void RequireFinite(double x) {
  if (!std::isfinite(x)) throw std::domain_error("argument must be finite");
}

// Acklam's rational approximation, relative error about 1e-9 on (0, 0.5].
double InitialLowerQuantile(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double kLowBreak = 0.02425;

  if (p < kLowBreak) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double NormalPdf(double x, const NormalParams& params) {
  return std::exp(NormalLogPdf(x, params));
}

double NormalLogPdf(double x, const NormalParams& params) {
  RequireFinite(x);
  const double d = x - params.mean();
  return -0.5 * std::log(2.0 * std::numbers::pi * params.variance()) -
         d * d / (2.0 * params.variance());
}

double NormalCdf(double x) {
  RequireFinite(x);
  return 0.5 * std::erfc(-x * kInvSqrt2);
}

double NormalSurvivor(double x) {
  RequireFinite(x);
  return 0.5 * std::erfc(x * kInvSqrt2);
}

double NormalCdf(double x, const NormalParams& params) {
  return NormalCdf((x - params.mean()) / params.sd());
}

double NormalQuantile(Probability prob) {
  const double p = prob.value();
  if (!prob.is_interior()) {
    throw std::domain_error("normal quantile needs 0 < p < 1");
  }
  // Work in the lower half where the CDF carries full relative precision;
  // 1 - p is exact for p >= 0.5.
  if (p > 0.5) return -NormalQuantile(Probability(1.0 - p));

  double x = InitialLowerQuantile(p);
  for (int iter = 0; iter < 3; ++iter) {
    const double e = NormalCdf(x) - p;
    const double u = e * kSqrt2Pi * std::exp(0.5 * x * x);
    const double next = x - u / (1.0 + 0.5 * x * u);
    if (next == x) break;
    x = next;
  }
  return x;
}

}  // namespace frasian::stats
