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

#include "frasian/bands/cdf_bands.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "frasian/stats/normal.hpp"
#include "frasian/stats/parallel.hpp"

namespace frasian::bands {
namespace {

constexpr std::size_t kUniformGridPoints = 512;

std::size_t GridBin(std::span<const double> grid, double x) {
  return static_cast<std::size_t>(std::lower_bound(grid.begin(), grid.end(), x) -
                                  grid.begin());
}

void RequireGrid(std::span<const double> grid) {
  if (grid.empty()) throw std::domain_error("band grid must not be empty");
  if (!std::is_sorted(grid.begin(), grid.end())) {
    throw std::domain_error("band grid must be sorted");
  }
}

// Draws DP realizations straight onto a fixed grid. Atoms are binned at the
// first grid point at or above them and the bins prefix-summed, so a draw
// costs O(K log G) instead of a sort. Consumes the generator exactly as
// SampleDp does.
class GridDrawer {
 public:
  GridDrawer(const DpPosterior& posterior, std::span<const double> grid)
      : posterior_(posterior), grid_(grid), bins_(grid.size() + 1) {
    for (double y : posterior.data()) data_bins_.push_back(GridBin(grid, y));
  }

  // Writes the CDF of one draw on the grid; returns the truncation residual.
  double Draw(std::size_t truncation, stats::Rng& rng, std::vector<double>& cdf) {
    std::fill(bins_.begin(), bins_.end(), 0.0);
    double remaining = 1.0;
    for (std::size_t k = 0; k < truncation; ++k) {
      const double v = rng.Beta(1.0, posterior_.concentration());
      bins_[AtomBin(rng)] += v * remaining;
      remaining *= 1.0 - v;
    }
    bins_[AtomBin(rng)] += remaining;

    cdf.resize(grid_.size());
    double acc = 0.0;
    for (std::size_t j = 0; j < grid_.size(); ++j) {
      acc += bins_[j];
      cdf[j] = std::min(acc, 1.0);
    }
    return remaining;
  }

 private:
  std::size_t AtomBin(stats::Rng& rng) {
    if (rng.Uniform() < posterior_.base_weight()) {
      return GridBin(grid_, posterior_.base().Draw(rng));
    }
    return data_bins_[rng.UniformIndex(data_bins_.size())];
  }

  const DpPosterior& posterior_;
  std::span<const double> grid_;
  std::vector<std::size_t> data_bins_;
  std::vector<double> bins_;
};

double SupDistance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) d = std::max(d, std::abs(a[j] - b[j]));
  return d;
}

}  // namespace

std::string_view ToString(BandMethod m) {
  return m == BandMethod::kDkw ? "dkw" : "dp";
}

BandMethod ParseBandMethod(std::string_view s) {
  if (s == "dkw") return BandMethod::kDkw;
  if (s == "dp") return BandMethod::kDpPosterior;
  throw std::invalid_argument("unknown band method: " + std::string(s));
}

bool CdfBand::Contains(std::span<const double> cdf_on_grid) const {
  if (cdf_on_grid.size() != grid.size()) {
    throw std::invalid_argument("CDF values do not match the band grid");
  }
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (cdf_on_grid[j] < lower[j] || cdf_on_grid[j] > upper[j]) return false;
  }
  return true;
}

double DkwEpsilon(std::size_t n, Probability alpha) {
  if (n == 0) throw std::domain_error("DKW epsilon needs n >= 1");
  stats::RequireLevel(alpha);
  return std::sqrt(std::log(2.0 / alpha.value()) / (2.0 * static_cast<double>(n)));
}

CdfBand DkwBand(const Sample& sample, Probability alpha, std::span<const double> grid) {
  RequireGrid(grid);
  const stats::EmpiricalCdf ecdf(sample);
  const double eps = DkwEpsilon(sample.size(), alpha);
  CdfBand band;
  band.grid.assign(grid.begin(), grid.end());
  band.alpha = alpha;
  band.method = BandMethod::kDkw;
  for (double x : grid) {
    const double f = ecdf(x);
    band.center.push_back(f);
    band.lower.push_back(std::max(f - eps, 0.0));
    band.upper.push_back(std::min(f + eps, 1.0));
  }
  return band;
}

std::vector<double> DefaultBandGrid(const Sample& sample) {
  if (sample.empty()) throw std::domain_error("band grid needs a non-empty sample");
  const auto [min_it, max_it] = std::minmax_element(sample.begin(), sample.end());
  double sd = 0.0;
  if (sample.size() > 1) {
    double mean = 0.0;
    for (double y : sample) mean += y;
    mean /= static_cast<double>(sample.size());
    double ss = 0.0;
    for (double y : sample) ss += (y - mean) * (y - mean);
    sd = std::sqrt(ss / static_cast<double>(sample.size() - 1));
  }
  if (!(sd > 0.0)) sd = 1.0;

  const double lo = *min_it - 4.0 * sd;
  const double hi = *max_it + 4.0 * sd;
  const double delta = 1e-9 * std::max({1.0, std::abs(lo), std::abs(hi)});

  std::vector<double> grid;
  grid.reserve(kUniformGridPoints + 3 * sample.size());
  for (std::size_t i = 0; i < kUniformGridPoints; ++i) {
    grid.push_back(lo + (hi - lo) * static_cast<double>(i) /
                            static_cast<double>(kUniformGridPoints - 1));
  }
  for (double y : sample) {
    grid.push_back(y - delta);
    grid.push_back(y);
    grid.push_back(y + delta);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

BaseDistribution::BaseDistribution(const Sample& sample)
    : dist_(Empirical{sample, stats::EmpiricalCdf(sample)}) {}

double BaseDistribution::Cdf(double x) const {
  if (const auto* normal = std::get_if<NormalParams>(&dist_)) {
    return stats::NormalCdf(x, *normal);
  }
  return std::get<Empirical>(dist_).cdf(x);
}

double BaseDistribution::Draw(stats::Rng& rng) const {
  if (const auto* normal = std::get_if<NormalParams>(&dist_)) return rng.Normal(*normal);
  const auto& emp = std::get<Empirical>(dist_);
  return emp.sample[rng.UniformIndex(emp.sample.size())];
}

DpPrior::DpPrior(BaseDistribution base_in, double concentration_in)
    : base(std::move(base_in)), concentration(concentration_in) {
  if (!std::isfinite(concentration) || !(concentration > 0.0)) {
    throw std::domain_error("DP concentration must be finite and positive");
  }
}

DpPosterior::DpPosterior(const DpPrior& prior, const Sample& sample)
    : base_(prior.base), data_(sample) {
  const auto n = static_cast<double>(sample.size());
  concentration_ = prior.concentration + n;
  base_weight_ = prior.concentration / concentration_;
  data_weight_ = n / concentration_;
  if (!sample.empty()) data_cdf_.emplace(sample);
}

double DpPosterior::MeanCdf(double x) const {
  double f = base_weight_ * base_.Cdf(x);
  if (data_cdf_) f += data_weight_ * (*data_cdf_)(x);
  return std::min(f, 1.0);
}

std::vector<double> DpPosterior::MeanCdfOn(std::span<const double> grid) const {
  std::vector<double> f(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) f[j] = MeanCdf(grid[j]);
  return f;
}

double DpPosterior::DrawAtom(stats::Rng& rng) const {
  if (rng.Uniform() < base_weight_) return base_.Draw(rng);
  return data_[rng.UniformIndex(data_.size())];
}

DpPosterior UpdateDp(const DpPrior& prior, const Sample& sample) {
  return DpPosterior(prior, sample);
}

double DiscreteCdf::operator()(double x) const {
  double f = 0.0;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    if (atoms[k] <= x) f += weights[k];
  }
  return std::min(f, 1.0);
}

std::vector<double> DiscreteCdf::EvaluateOn(std::span<const double> grid) const {
  RequireGrid(grid);
  std::vector<double> bins(grid.size() + 1, 0.0);
  for (std::size_t k = 0; k < atoms.size(); ++k) bins[GridBin(grid, atoms[k])] += weights[k];
  std::vector<double> cdf(grid.size());
  double acc = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    acc += bins[j];
    cdf[j] = std::min(acc, 1.0);
  }
  return cdf;
}

DiscreteCdf SampleDp(const DpPosterior& posterior, std::size_t truncation,
                     const RngSeed& seed) {
  if (truncation == 0) throw std::domain_error("truncation must be at least 1");
  stats::Rng rng(seed);
  DiscreteCdf draw;
  draw.atoms.reserve(truncation + 1);
  draw.weights.reserve(truncation + 1);
  double remaining = 1.0;
  for (std::size_t k = 0; k < truncation; ++k) {
    const double v = rng.Beta(1.0, posterior.concentration());
    draw.weights.push_back(v * remaining);
    draw.atoms.push_back(posterior.DrawAtom(rng));
    remaining *= 1.0 - v;
  }
  draw.truncation_residual = remaining;
  draw.weights.push_back(remaining);
  draw.atoms.push_back(posterior.DrawAtom(rng));
  return draw;
}

DpBand DpPosteriorBand(const DpPosterior& posterior, Probability alpha, std::size_t draws,
                       std::size_t truncation, std::span<const double> grid,
                       const RngSeed& seed) {
  stats::RequireLevel(alpha);
  RequireGrid(grid);
  if (draws < 100) throw std::domain_error("posterior band needs at least 100 draws");
  if (truncation == 0) throw std::domain_error("truncation must be at least 1");

  DpBand result;
  result.draws = draws;
  result.truncation = truncation;
  const std::vector<double> mean = posterior.MeanCdfOn(grid);

  GridDrawer drawer(posterior, grid);
  std::vector<double> cdf;
  std::vector<double> deviations(draws);
  for (std::size_t m = 0; m < draws; ++m) {
    stats::Rng rng(seed.Child(m));
    const double residual = drawer.Draw(truncation, rng, cdf);
    result.max_truncation_residual = std::max(result.max_truncation_residual, residual);
    deviations[m] = SupDistance(cdf, mean);
  }

  // Smallest r with at least (1 - alpha) of the draws inside.
  const double target = (1.0 - alpha.value()) * static_cast<double>(draws);
  std::size_t rank = static_cast<std::size_t>(std::ceil(target - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, draws);
  std::nth_element(deviations.begin(), deviations.begin() + static_cast<long>(rank - 1),
                   deviations.end());
  result.radius = deviations[rank - 1];

  CdfBand& band = result.band;
  band.grid.assign(grid.begin(), grid.end());
  band.center = mean;
  band.alpha = alpha;
  band.method = BandMethod::kDpPosterior;
  for (double f : mean) {
    band.lower.push_back(std::max(f - result.radius, 0.0));
    band.upper.push_back(std::min(f + result.radius, 1.0));
  }
  return result;
}

ProportionEstimate PosteriorContent(const DpPosterior& posterior, const CdfBand& band,
                                    std::size_t draws, std::size_t truncation,
                                    const RngSeed& seed) {
  GridDrawer drawer(posterior, band.grid);
  std::vector<double> cdf;
  std::size_t inside = 0;
  for (std::size_t m = 0; m < draws; ++m) {
    stats::Rng rng(seed.Child(m));
    drawer.Draw(truncation, rng, cdf);
    if (band.Contains(cdf)) ++inside;
  }
  return EstimateProportion(inside, draws);
}

SimulationReport BandCoverage(BandMethod method, const NormalParams& truth, std::size_t n,
                              Probability alpha, std::size_t replicates,
                              const RngSeed& seed, const std::optional<DpCoverageConfig>& dp) {
  stats::RequireLevel(alpha);
  if (replicates < 100) throw std::domain_error("coverage needs at least 100 replicates");
  if (n == 0) throw std::domain_error("coverage needs n >= 1");
  if (method == BandMethod::kDpPosterior && !dp) {
    throw std::invalid_argument("DP coverage needs a DP configuration");
  }

  struct Outcome {
    bool covered = false;
    double content = 0.0;
    double radius = 0.0;
    double residual = 0.0;
  };
  std::vector<Outcome> outcomes(replicates);

  stats::ParallelFor(replicates, [&](std::size_t r) {
    const RngSeed rep = seed.Child(r);
    const Sample data = stats::SampleNormal(truth, n, rep.Child(0));
    const std::vector<double> grid = DefaultBandGrid(data);
    std::vector<double> truth_cdf(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) truth_cdf[j] = stats::NormalCdf(grid[j], truth);

    Outcome& out = outcomes[r];
    if (method == BandMethod::kDkw) {
      out.covered = DkwBand(data, alpha, grid).Contains(truth_cdf);
      return;
    }
    const DpPosterior posterior(DpPrior(dp->base, dp->beta), data);
    const DpBand band =
        DpPosteriorBand(posterior, alpha, dp->draws, dp->truncation, grid, rep.Child(1));
    out.covered = band.band.Contains(truth_cdf);
    out.radius = band.radius;
    out.residual = band.max_truncation_residual;
    if (dp->content_draws > 0) {
      out.content = PosteriorContent(posterior, band.band, dp->content_draws, dp->truncation,
                                     rep.Child(2))
                        .value;
    }
  });

  SimulationReport report;
  report.replicates = replicates;
  report.seed = seed;
  std::size_t covered = 0;
  for (const auto& o : outcomes) covered += o.covered ? 1 : 0;
  report.Add("coverage", EstimateProportion(covered, replicates));

  if (method == BandMethod::kDkw) {
    report.AddExact("epsilon", DkwEpsilon(n, alpha));
    return report;
  }

  std::vector<double> radii;
  std::vector<double> contents;
  double max_residual = 0.0;
  for (const auto& o : outcomes) {
    radii.push_back(o.radius);
    contents.push_back(o.content);
    max_residual = std::max(max_residual, o.residual);
  }
  const ProportionEstimate radius = EstimateMean(radii);
  report.Add("mean_radius", radius.value, radius.se);
  if (dp->content_draws > 0) {
    const ProportionEstimate content = EstimateMean(contents);
    report.Add("posterior_content", content.value, content.se);
  }
  report.AddExact("max_truncation_residual", max_residual);
  if (max_residual >= kResidualTolerance) {
    report.warnings.push_back("truncation_residual_above_1e-6");
  }
  return report;
}

}  // namespace frasian::bands
