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

// Confidence bands for a distribution function.
//
// DkwBand is the frequentist band F_n -/+ eps_n from the
// Dvoretzky-Kiefer-Wolfowitz inequality; it covers every F with probability
// at least 1 - alpha. DpPosteriorBand is the Bayesian counterpart: a sup-norm
// credible band around the Dirichlet-process posterior mean. It holds
// 1 - alpha posterior mass but carries no frequentist guarantee, and
// BandCoverage measures both properties on the same code path.

#ifndef FRASIAN_BANDS_CDF_BANDS_HPP_
#define FRASIAN_BANDS_CDF_BANDS_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "frasian/report.hpp"
#include "frasian/stats/ecdf.hpp"
#include "frasian/stats/rng.hpp"
#include "frasian/stats/types.hpp"

namespace frasian::bands {

using stats::NormalParams;
using stats::Probability;
using stats::RngSeed;
using stats::Sample;

enum class BandMethod { kDkw, kDpPosterior };
std::string_view ToString(BandMethod m);
BandMethod ParseBandMethod(std::string_view s);

// Lower/upper CDF envelope on an ordered grid. `center` is the curve the band
// is built around: the ECDF for DKW, the posterior mean CDF for the DP.
struct CdfBand {
  std::vector<double> grid;
  std::vector<double> lower;
  std::vector<double> center;
  std::vector<double> upper;
  Probability alpha{0.05};
  BandMethod method = BandMethod::kDkw;

  // True when lower <= cdf <= upper at every grid point.
  bool Contains(std::span<const double> cdf_on_grid) const;
};

// sqrt(log(2/alpha) / (2n)), the radius at which 2 exp(-2 n eps^2) = alpha.
double DkwEpsilon(std::size_t n, Probability alpha);

// Throws std::domain_error on an empty sample or grid.
CdfBand DkwBand(const Sample& sample, Probability alpha, std::span<const double> grid);

// Sorted union of 512 equally spaced points over [min - 4 sd, max + 4 sd]
// with every observation and its immediate left and right neighbours, so that
// both one-sided limits of the step functions are examined.
std::vector<double> DefaultBandGrid(const Sample& sample);

// A base measure for the DP: a Normal law or the empirical law of a sample.
class BaseDistribution {
 public:
  BaseDistribution(NormalParams normal) : dist_(normal) {}  // NOLINT
  BaseDistribution(const Sample& sample);                   // NOLINT

  double Cdf(double x) const;
  double Draw(stats::Rng& rng) const;
  bool is_normal() const { return std::holds_alternative<NormalParams>(dist_); }
  const NormalParams& normal() const { return std::get<NormalParams>(dist_); }

 private:
  struct Empirical {
    Sample sample;
    stats::EmpiricalCdf cdf;
  };
  std::variant<NormalParams, Empirical> dist_;
};

struct DpPrior {
  DpPrior(BaseDistribution base, double concentration);

  BaseDistribution base;
  double concentration;
};

// DP(Fbar_n, beta + n) with Fbar_n = beta/(beta+n) F_0 + n/(beta+n) F_n.
class DpPosterior {
 public:
  DpPosterior(const DpPrior& prior, const Sample& sample);

  double base_weight() const { return base_weight_; }
  double data_weight() const { return data_weight_; }
  double concentration() const { return concentration_; }
  const BaseDistribution& base() const { return base_; }
  const Sample& data() const { return data_; }

  // The posterior mean CDF Fbar_n.
  double MeanCdf(double x) const;
  std::vector<double> MeanCdfOn(std::span<const double> grid) const;
  // One atom from Fbar_n: pick a component by weight, then draw from it.
  double DrawAtom(stats::Rng& rng) const;

 private:
  BaseDistribution base_;
  Sample data_;
  std::optional<stats::EmpiricalCdf> data_cdf_;
  double base_weight_;
  double data_weight_;
  double concentration_;
};

DpPosterior UpdateDp(const DpPrior& prior, const Sample& sample);

// Stick-breaking sticks past which the residual mass is reported as large.
inline constexpr double kResidualTolerance = 1e-6;
inline constexpr std::size_t kDefaultTruncation = 1000;

// One random distribution: atoms with non-negative weights summing to one.
struct DiscreteCdf {
  std::vector<double> atoms;
  std::vector<double> weights;
  // Stick mass left after the truncation, assigned to a final base atom.
  double truncation_residual = 0.0;

  bool residual_flagged() const { return truncation_residual >= kResidualTolerance; }
  double operator()(double x) const;
  std::vector<double> EvaluateOn(std::span<const double> grid) const;
};

// Truncated stick-breaking draw with Beta(1, concentration) sticks.
DiscreteCdf SampleDp(const DpPosterior& posterior, std::size_t truncation,
                     const RngSeed& seed);

struct DpBand {
  CdfBand band;
  double radius = 0.0;  // the (1 - alpha) quantile of sup-norm deviations
  double max_truncation_residual = 0.0;
  std::size_t draws = 0;
  std::size_t truncation = 0;
};

// Draws `draws` realizations, measures each one's grid sup-norm distance from
// Fbar_n and offsets Fbar_n by the ceil((1 - alpha) draws)-th smallest
// distance, clipped to [0, 1]. Requires draws >= 100.
DpBand DpPosteriorBand(const DpPosterior& posterior, Probability alpha, std::size_t draws,
                       std::size_t truncation, std::span<const double> grid,
                       const RngSeed& seed);

// Fraction of fresh posterior draws lying inside the band on its grid.
ProportionEstimate PosteriorContent(const DpPosterior& posterior, const CdfBand& band,
                                    std::size_t draws, std::size_t truncation,
                                    const RngSeed& seed);

struct DpCoverageConfig {
  NormalParams base{0.0, 1.0};
  double beta = 10.0;
  std::size_t draws = 1000;
  std::size_t truncation = kDefaultTruncation;
  // Fresh draws per replicate for the posterior-content estimate.
  std::size_t content_draws = 200;
};

// Repeatedly draws n points from `truth`, builds the band on DefaultBandGrid
// and checks lower <= F_true <= upper at every grid point. Reports
// "coverage"; the DP method also reports "posterior_content",
// "mean_radius" and "max_truncation_residual". Requires replicates >= 100.
SimulationReport BandCoverage(BandMethod method, const NormalParams& truth, std::size_t n,
                              Probability alpha, std::size_t replicates,
                              const RngSeed& seed,
                              const std::optional<DpCoverageConfig>& dp = std::nullopt);

}  // namespace frasian::bands

#endif  // FRASIAN_BANDS_CDF_BANDS_HPP_
