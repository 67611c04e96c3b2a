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

#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "csv.hpp"
#include "frasian/bands/cdf_bands.hpp"
#include "frasian/conformal/conformal.hpp"
#include "frasian/conformal/experiments.hpp"
#include "frasian/mtest/multiple_testing.hpp"
#include "frasian/report.hpp"

namespace frasian::cli {
namespace {

using nlohmann::json;
using stats::NormalParams;
using stats::Probability;
using stats::RngSeed;
using stats::Sample;

namespace fs = std::filesystem;

json SeedJson(const RngSeed& seed) {
  return {{"master", seed.master}, {"path", seed.path}, {"text", seed.ToString()}};
}

json Envelope(const RunConfig& c) {
  json j;
  j["schema"] = kSchemaVersion;
  j["command"] = c.command;
  j["config"] = ToJson(c);
  j["seed"] = SeedJson(RngSeed{c.seed, {}});
  return j;
}

json ReportJson(const SimulationReport& r) {
  json j;
  j["replicates"] = r.replicates;
  j["seed"] = SeedJson(r.seed);
  j["estimates"] = r.estimates;
  j["standard_errors"] = r.standard_errors;
  j["exact"] = r.exact;
  j["warnings"] = r.warnings;
  return j;
}

void WriteArtifact(const RunConfig& c, const std::string& name, const std::string& content,
                   std::ostream& out) {
  const fs::path dir(c.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create output directory " + dir.string() + ": " + ec.message());
  const fs::path path = dir / name;
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw InputError("cannot write " + path.string());
  file << content;
  file.close();
  if (!file) throw InputError("error while writing " + path.string());
  out << "wrote " << path.string() << "\n";
}

void WriteJson(const RunConfig& c, const std::string& name, const json& j, std::ostream& out) {
  WriteArtifact(c, name, j.dump(2) + "\n", out);
}

Sample LoadSample(const RunConfig& c) {
  std::vector<double> values;
  if (c.inline_sample) {
    std::string_view rest = *c.inline_sample;
    while (true) {
      const auto comma = rest.find(',');
      values.push_back(ParseNumber(rest.substr(0, comma), "--sample"));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
  } else if (c.data_path) {
    values = ReadCsvFile(*c.data_path).NumericColumn("y", *c.data_path);
  } else {
    throw InputError("a sample is required: pass --data FILE or --sample v1,v2,...");
  }
  return Sample(std::move(values));
}

std::vector<double> LoadColumn(const std::string& path, std::string_view column) {
  return ReadCsvFile(path).NumericColumn(column, path);
}

json IntervalsJson(const conformal::PredictionRegion& r) {
  json arr = json::array();
  for (const auto& iv : r.intervals) arr.push_back({{"lo", iv.lo}, {"hi", iv.hi}});
  return arr;
}

conformal::ConjugateNormalModel ModelOf(const RunConfig& c) {
  return conformal::ConjugateNormalModel(NormalParams(c.prior_mean, c.prior_var), c.noise_var);
}

// Grid flags override the default grid one field at a time.
conformal::GridSpec ResolveGrid(const RunConfig& c, const conformal::GridSpec& fallback) {
  const double lo = c.grid_lo.value_or(fallback.lo());
  const double hi = c.grid_hi.value_or(fallback.hi());
  const double step = c.grid_step.value_or(c.grid_lo || c.grid_hi ? (hi - lo) / 2000.0
                                                                  : fallback.step());
  return conformal::GridSpec(lo, hi, step);
}

bool AnyGridFlag(const RunConfig& c) { return c.grid_lo || c.grid_hi || c.grid_step; }

}  // namespace

void RunPredict(const RunConfig& c, std::ostream& out) {
  const Probability alpha(c.alpha);
  stats::RequireLevel(alpha);
  const Sample sample = LoadSample(c);
  const auto model = ModelOf(c);
  const auto variant = conformal::ParsePValueVariant(c.variant);
  const conformal::GridSpec grid = ResolveGrid(c, conformal::DefaultGrid(model, sample));

  const std::vector<double> curve = conformal::PValueCurve(model, sample, grid, variant);
  const conformal::PredictionRegion freq = conformal::RegionFromCurve(curve, grid, alpha);
  const conformal::PosteriorState post = conformal::PosteriorUpdate(model, sample);
  const NormalParams predictive = conformal::Predictive(post, model);
  const conformal::PredictionRegion bayes =
      conformal::BayesPredictiveInterval(post, model, alpha);

  json j = Envelope(c);
  j["n"] = sample.size();
  j["alpha"] = c.alpha;
  j["posterior"] = {{"mean", post.mean}, {"variance", post.variance}};
  j["predictive"] = {{"mean", predictive.mean()}, {"variance", predictive.variance()}};
  j["frequentized"] = {
      {"intervals", IntervalsJson(freq)},
      {"length", freq.Length()},
      {"variant", c.variant},
      {"grid", {{"lo", grid.lo()}, {"hi", grid.hi()}, {"step", grid.step()},
                {"points", grid.size()}}},
      {"warnings", freq.warnings},
  };
  j["bayes"] = {{"intervals", IntervalsJson(bayes)}, {"length", bayes.Length()}};
  j["warnings"] = freq.warnings;
  WriteJson(c, "region.json", j, out);

  std::ostringstream csv;
  CsvWriter w(csv, {"z", "pvalue", "in_region"});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    w.Field(grid.At(i)).Field(curve[i]).Field(curve[i] >= alpha.value() ? 1 : 0).EndRow();
  }
  WriteArtifact(c, "pvalues.csv", csv.str(), out);
}

void RunBands(const RunConfig& c, std::ostream& out) {
  const Probability alpha(c.alpha);
  stats::RequireLevel(alpha);
  const bands::BandMethod method = bands::ParseBandMethod(c.method.value_or("dkw"));
  if (method == bands::BandMethod::kDpPosterior && !c.beta) {
    throw InputError("--method dp requires --beta (DP prior concentration)");
  }
  const Sample sample = LoadSample(c);
  std::vector<double> grid;
  if (AnyGridFlag(c)) {
    if (!c.grid_lo || !c.grid_hi) throw InputError("band grid needs both --grid-lo and --grid-hi");
    grid = conformal::GridSpec(*c.grid_lo, *c.grid_hi,
                               c.grid_step.value_or((*c.grid_hi - *c.grid_lo) / 511.0))
               .Points();
  } else {
    grid = bands::DefaultBandGrid(sample);
  }

  json j = Envelope(c);
  j["method"] = std::string(bands::ToString(method));
  j["alpha"] = c.alpha;
  j["n"] = sample.size();
  j["grid_points"] = grid.size();
  json warnings = json::array();

  bands::CdfBand band;
  if (method == bands::BandMethod::kDkw) {
    band = bands::DkwBand(sample, alpha, grid);
    j["epsilon"] = bands::DkwEpsilon(sample.size(), alpha);
  } else {
    const RngSeed root{c.seed, {}};
    const bands::DpPosterior post(
        bands::DpPrior(NormalParams(c.base_mean, c.base_var), *c.beta), sample);
    const bands::DpBand dp =
        bands::DpPosteriorBand(post, alpha, c.draws, c.truncation, grid, root.Child(0));
    const ProportionEstimate content =
        bands::PosteriorContent(post, dp.band, c.content_draws, c.truncation, root.Child(1));
    band = dp.band;
    j["dp"] = {
        {"beta", *c.beta},
        {"concentration", post.concentration()},
        {"base_weight", post.base_weight()},
        {"data_weight", post.data_weight()},
        {"radius", dp.radius},
        {"draws", dp.draws},
        {"truncation", dp.truncation},
        {"max_truncation_residual", dp.max_truncation_residual},
        {"posterior_content", {{"value", content.value}, {"se", content.se},
                               {"draws", content.trials}}},
    };
    if (dp.max_truncation_residual >= bands::kResidualTolerance) {
      warnings.push_back("truncation_residual_above_1e-6");
    }
  }
  j["warnings"] = warnings;

  std::ostringstream csv;
  CsvWriter w(csv, {"x", "lower", "ecdf_or_mean", "upper"});
  for (std::size_t i = 0; i < band.grid.size(); ++i) {
    w.Field(band.grid[i]).Field(band.lower[i]).Field(band.center[i]).Field(band.upper[i]).EndRow();
  }
  WriteArtifact(c, "band.csv", csv.str(), out);
  WriteJson(c, "band_meta.json", j, out);
}

namespace {

// Rows of a means file grouped by their 'draw' id, in order of first appearance.
std::vector<mtest::MeanVector> LoadMeanDraws(const std::string& path) {
  const CsvTable table = ReadCsvFile(path);
  const std::vector<double> theta = table.NumericColumn("theta", path);
  if (!table.ColumnIndex("draw")) return {mtest::MeanVector(theta)};

  const std::vector<double> ids = table.NumericColumn("draw", path);
  std::vector<double> order;
  std::vector<std::vector<double>> groups;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    auto it = std::find(order.begin(), order.end(), ids[i]);
    if (it == order.end()) {
      order.push_back(ids[i]);
      groups.emplace_back();
      it = order.end() - 1;
    }
    groups[static_cast<std::size_t>(it - order.begin())].push_back(theta[i]);
  }
  std::vector<mtest::MeanVector> draws;
  for (auto& g : groups) draws.emplace_back(std::move(g));
  return draws;
}

json SolverJson(const mtest::OptimalWeights& ow, std::size_t draws) {
  return {{"c", ow.c},
          {"residual", ow.residual},
          {"bracket", {ow.bracket_lo, ow.bracket_hi}},
          {"iterations", ow.iterations},
          {"draws", draws}};
}

mtest::OptimalWeights SolveWeights(const std::vector<mtest::MeanVector>& draws,
                                   Probability alpha) {
  if (draws.size() == 1) return mtest::ComputeOptimalWeights(draws.front(), alpha);
  return mtest::ComputeAveragedWeights(draws, alpha);
}

}  // namespace

void RunMtest(const RunConfig& c, std::ostream& out) {
  const Probability alpha(c.alpha);
  stats::RequireLevel(alpha);
  const mtest::PValueVector p(LoadColumn(*c.pvalues_path, "pvalue"));
  const mtest::WeightedRule rule = mtest::ParseWeightedRule(c.rule);

  json j = Envelope(c);
  std::optional<mtest::WeightVector> weights;
  if (c.weights_path) {
    weights = mtest::WeightVector(LoadColumn(*c.weights_path, "weight"));
    j["weight_provenance"] = "supplied";
  } else if (c.means_path) {
    const auto draws = LoadMeanDraws(*c.means_path);
    const mtest::OptimalWeights ow = SolveWeights(draws, alpha);
    weights = ow.weights;
    j["weight_provenance"] = "optimal(theta)";
    j["c"] = ow.c;
    j["solver"] = SolverJson(ow, draws.size());
  } else {
    weights = mtest::WeightVector::Uniform(p.m());
    j["weight_provenance"] = "uniform";
  }
  if (weights->m() != p.m()) {
    throw InputError("weights have " + std::to_string(weights->m()) + " entries but there are " +
                     std::to_string(p.m()) + " p-values");
  }

  const mtest::RejectionSet rejected = mtest::WeightedBonferroni(p, *weights, alpha, rule);
  j["m"] = p.m();
  j["alpha"] = c.alpha;
  j["rule"] = c.rule;
  j["weights"] = std::vector<double>(weights->values().begin(), weights->values().end());
  j["thresholds"] = mtest::Thresholds(*weights, alpha, rule);
  j["rejected"] = rejected;
  j["num_rejected"] = rejected.size();
  WriteJson(c, "rejections.json", j, out);
}

namespace {

struct PresetRun {
  std::string label;
  json params;
  SimulationReport report;
};

std::vector<double> ThetaList(const RunConfig& c) {
  if (c.theta) return {*c.theta};
  return {0.0, 5.0};
}

std::string ThetaLabel(double theta) { return "theta=" + FormatNumber(theta); }

std::vector<PresetRun> Fig1(const RunConfig& c, std::ostream& out) {
  const Probability alpha(c.alpha);
  const auto model = ModelOf(c);
  const std::size_t n = c.n.value_or(2);
  const RngSeed root{c.seed, {}};

  std::ostringstream csv;
  CsvWriter w(csv, {"theta", "kind", "lo", "hi"});
  std::vector<PresetRun> runs;
  const std::vector<double> panels = {0.0, 5.0};
  for (std::size_t i = 0; i < panels.size(); ++i) {
    const conformal::ToyPanel panel =
        conformal::MakeToyPanel(model, panels[i], n, alpha, root.Child(0).Child(i));
    for (double y : panel.data) w.Field(panel.theta).Field("data").Field(y).Field(y).EndRow();
    for (const auto& iv : panel.frequentized.intervals) {
      w.Field(panel.theta).Field("frequentized").Field(iv.lo).Field(iv.hi).EndRow();
    }
    for (const auto& iv : panel.bayes.intervals) {
      w.Field(panel.theta).Field("bayes").Field(iv.lo).Field(iv.hi).EndRow();
    }
  }
  WriteArtifact(c, "fig1_regions.csv", csv.str(), out);

  const std::vector<double> thetas = ThetaList(c);
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    const RngSeed seed = root.Child(1).Child(i);
    runs.push_back({"length_comparison " + ThetaLabel(thetas[i]),
                    {{"theta", thetas[i]}, {"n", n}},
                    conformal::RegionLengthComparison(model,
                                                      NormalParams(thetas[i], c.noise_var), n,
                                                      alpha, c.reps.value_or(1000), seed)});
  }
  return runs;
}

std::vector<PresetRun> ConformalCoverage(const RunConfig& c) {
  const Probability alpha(c.alpha);
  const auto model = ModelOf(c);
  const std::size_t n = c.n.value_or(2);
  const auto variant = conformal::ParsePValueVariant(c.variant);
  const RngSeed root{c.seed, {}};
  std::vector<PresetRun> runs;
  const std::vector<double> thetas = ThetaList(c);
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    runs.push_back({"coverage " + ThetaLabel(thetas[i]),
                    {{"theta", thetas[i]}, {"n", n}, {"variant", c.variant}},
                    conformal::PredictionCoverage(model, NormalParams(thetas[i], c.noise_var), n,
                                                  alpha, c.reps.value_or(10000), root.Child(i),
                                                  variant)});
  }
  return runs;
}

std::vector<PresetRun> DpCoverage(const RunConfig& c) {
  const Probability alpha(c.alpha);
  const std::size_t n = c.n.value_or(200);
  const double theta = c.theta.value_or(5.0);
  const RngSeed root{c.seed, {}};

  bands::DpCoverageConfig dp;
  dp.base = NormalParams(c.base_mean, c.base_var);
  dp.beta = c.beta.value_or(10.0);
  dp.draws = c.draws;
  dp.truncation = c.truncation;
  dp.content_draws = c.content_draws;

  std::vector<std::string> methods = {"dkw", "dp"};
  if (c.method) methods = {*c.method};
  std::vector<PresetRun> runs;
  for (std::size_t i = 0; i < methods.size(); ++i) {
    const bands::BandMethod m = bands::ParseBandMethod(methods[i]);
    json params = {{"method", methods[i]}, {"theta", theta}, {"n", n}};
    if (m == bands::BandMethod::kDpPosterior) {
      params["beta"] = dp.beta;
      params["draws"] = dp.draws;
      params["truncation"] = dp.truncation;
      params["content_draws"] = dp.content_draws;
    }
    runs.push_back({"band_coverage " + methods[i], params,
                    bands::BandCoverage(m, NormalParams(theta, 1.0), n, alpha,
                                        c.reps.value_or(500), root.Child(i), dp)});
  }
  return runs;
}

std::vector<PresetRun> Fwer(const RunConfig& c) {
  const Probability alpha(c.alpha);
  stats::RequireLevel(alpha);
  const mtest::WeightedRule rule = mtest::ParseWeightedRule(c.rule);
  const std::size_t m = c.m.value_or(100);
  const std::size_t k = c.alternatives.value_or(0);
  if (m == 0) throw InputError("--m must be positive");
  if (k > m) throw InputError("--alternatives exceeds --m");
  const double theta = c.theta.value_or(3.0);

  std::vector<mtest::Hypothesis> truth(m, mtest::Hypothesis::Null());
  for (std::size_t j = 0; j < k; ++j) truth[j] = mtest::Hypothesis::Alternative(theta);

  std::vector<std::pair<std::string, mtest::WeightVector>> schemes;
  schemes.emplace_back("uniform", mtest::WeightVector::Uniform(m));
  if (c.weights_path) {
    schemes.emplace_back("supplied", mtest::WeightVector(LoadColumn(*c.weights_path, "weight")));
  }
  if (c.means_path) {
    schemes.emplace_back("optimal(theta)",
                         SolveWeights(LoadMeanDraws(*c.means_path), alpha).weights);
  }

  const RngSeed root{c.seed, {}};
  std::vector<PresetRun> runs;
  for (std::size_t i = 0; i < schemes.size(); ++i) {
    const auto& [name, w] = schemes[i];
    if (w.m() != m) {
      throw InputError(name + " weights have " + std::to_string(w.m()) + " entries, expected " +
                       std::to_string(m));
    }
    runs.push_back({"fwer " + name,
                    {{"weights", name}, {"m", m}, {"alternatives", k}, {"theta", theta},
                     {"rule", c.rule}},
                    mtest::FwerSimulate(truth, w, alpha, c.reps.value_or(10000), root.Child(i),
                                        rule)});
  }
  return runs;
}

}  // namespace

void RunSimulate(const RunConfig& c, std::ostream& out) {
  stats::RequireLevel(Probability(c.alpha));
  const std::string& preset = c.preset.value();
  std::vector<PresetRun> runs;
  if (preset == "fig1") {
    runs = Fig1(c, out);
  } else if (preset == "conformal-coverage") {
    runs = ConformalCoverage(c);
  } else if (preset == "dp-coverage") {
    runs = DpCoverage(c);
  } else if (preset == "fwer") {
    runs = Fwer(c);
  } else {
    std::string known;
    for (auto p : kPresets) known += (known.empty() ? "" : ", ") + std::string(p);
    throw InputError("unknown preset '" + preset + "' (known: " + known + ")");
  }

  json j = Envelope(c);
  j["preset"] = preset;
  j["runs"] = json::array();
  for (const PresetRun& r : runs) {
    json entry = ReportJson(r.report);
    entry["label"] = r.label;
    entry["params"] = r.params;
    j["runs"].push_back(std::move(entry));
  }
  WriteJson(c, "simulate_" + preset + ".json", j, out);
}

}  // namespace frasian::cli
