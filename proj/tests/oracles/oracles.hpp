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

// Independent reference computations for tests. Nothing here calls into the
// library: the Gaussian CDF comes from a power series in long double, and
// posterior/predictive quantities from brute-force quadrature over theta.

#ifndef FRASIAN_TESTS_ORACLES_HPP_
#define FRASIAN_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace frasian::oracle {

// erf(x) = 2/sqrt(pi) e^{-x^2} sum_k (2x^2)^k x / (1*3*...*(2k+1)).
// Every term is positive, so there is no cancellation for any x.
inline long double Erf(long double x) {
  if (x < 0) return -Erf(-x);
  const long double two_x2 = 2.0L * x * x;
  long double term = x;
  long double sum = x;
  for (int k = 1; k < 10000; ++k) {
    term *= two_x2 / static_cast<long double>(2 * k + 1);
    sum += term;
    if (term < sum * 1e-24L) break;
  }
  const long double kTwoOverSqrtPi = 1.1283791670955125738961589031215452L;
  return kTwoOverSqrtPi * std::exp(-x * x) * sum;
}

inline long double NormalCdf(long double x) {
  const long double kInvSqrt2 = 0.7071067811865475244008443621048490L;
  return 0.5L * (1.0L + Erf(x * kInvSqrt2));
}

// Bisection on the series CDF.
inline double NormalQuantile(double p) {
  long double lo = -40.0L;
  long double hi = 40.0L;
  for (int i = 0; i < 200; ++i) {
    const long double mid = 0.5L * (lo + hi);
    if (NormalCdf(mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return static_cast<double>(0.5L * (lo + hi));
}

inline double GaussDensity(double x, double mean, double var) {
  const double kPi = 3.14159265358979323846;
  return std::exp(-(x - mean) * (x - mean) / (2.0 * var)) / std::sqrt(2.0 * kPi * var);
}

// Unnormalized posterior of theta on a fine uniform grid, for
// theta ~ N(mu0, tau2) and y_i | theta ~ N(theta, sigma2).
struct QuadraturePosterior {
  std::vector<double> theta;
  std::vector<double> weight;  // normalized to sum to one

  QuadraturePosterior(double mu0, double tau2, double sigma2, const std::vector<double>& ys,
                      double step = 1e-3) {
    double lo = mu0 - 14.0 * std::sqrt(tau2);
    double hi = mu0 + 14.0 * std::sqrt(tau2);
    for (double y : ys) {
      lo = std::min(lo, y - 14.0 * std::sqrt(sigma2));
      hi = std::max(hi, y + 14.0 * std::sqrt(sigma2));
    }
    const auto count = static_cast<std::size_t>((hi - lo) / step) + 1;
    theta.resize(count);
    std::vector<double> logw(count);
    double max_logw = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < count; ++k) {
      const double t = lo + step * static_cast<double>(k);
      theta[k] = t;
      double lw = -(t - mu0) * (t - mu0) / (2.0 * tau2);
      for (double y : ys) lw -= (y - t) * (y - t) / (2.0 * sigma2);
      logw[k] = lw;
      max_logw = std::max(max_logw, lw);
    }
    weight.resize(count);
    long double total = 0.0L;
    for (std::size_t k = 0; k < count; ++k) {
      weight[k] = std::exp(logw[k] - max_logw);
      total += weight[k];
    }
    for (double& w : weight) w = static_cast<double>(w / total);
  }

  double Mean() const {
    long double m = 0.0L;
    for (std::size_t k = 0; k < theta.size(); ++k) m += theta[k] * weight[k];
    return static_cast<double>(m);
  }

  double Variance() const {
    const double m = Mean();
    long double v = 0.0L;
    for (std::size_t k = 0; k < theta.size(); ++k) {
      v += (theta[k] - m) * (theta[k] - m) * weight[k];
    }
    return static_cast<double>(v);
  }

  // int f(z | theta) pi(theta | data) dtheta.
  double PredictiveDensity(double z, double sigma2) const {
    long double d = 0.0L;
    for (std::size_t k = 0; k < theta.size(); ++k) {
      d += GaussDensity(z, theta[k], sigma2) * weight[k];
    }
    return static_cast<double>(d);
  }
};

// Steps (a)-(d) done the long way: augment, integrate the posterior,
// integrate the predictive at every point, count.
inline double ConformalPValue(double mu0, double tau2, double sigma2,
                              const std::vector<double>& ys, double z,
                              bool self_inclusive = false) {
  std::vector<double> augmented = ys;
  augmented.push_back(z);
  const QuadraturePosterior post(mu0, tau2, sigma2, augmented);
  const double d_new = post.PredictiveDensity(z, sigma2);
  std::size_t count = self_inclusive ? 1 : 0;
  for (double y : ys) {
    if (post.PredictiveDensity(y, sigma2) <= d_new) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(augmented.size());
}

// sum_j (m/alpha) Phibar(theta_j/2 + c/theta_j) via the series CDF.
inline long double WeightSum(const std::vector<double>& thetas, double alpha, long double c) {
  const long double scale = static_cast<long double>(thetas.size()) / alpha;
  long double s = 0.0L;
  for (double t : thetas) s += scale * (1.0L - NormalCdf(t / 2.0L + c / t));
  return s;
}

// Normalizing constant by scanning: widen a symmetric range until the sum
// crosses one, then repeatedly rescan the bracketing cell at 1/100 spacing.
inline double ScanForNormalizer(const std::vector<double>& thetas, double alpha) {
  long double range = 1.0L;
  while (!(WeightSum(thetas, alpha, -range) > 1.0L && WeightSum(thetas, alpha, range) < 1.0L)) {
    range *= 1.5L;
  }
  long double lo = -range;
  long double hi = range;
  for (int level = 0; level < 12; ++level) {
    const long double h = (hi - lo) / 100.0L;
    for (int i = 0; i < 100; ++i) {
      const long double a = lo + h * i;
      const long double b = a + h;
      if (WeightSum(thetas, alpha, a) >= 1.0L && WeightSum(thetas, alpha, b) <= 1.0L) {
        lo = a;
        hi = b;
        break;
      }
    }
  }
  return static_cast<double>(0.5L * (lo + hi));
}

}  // namespace frasian::oracle

#endif  // FRASIAN_TESTS_ORACLES_HPP_
