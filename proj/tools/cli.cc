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

#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <exception>
#include <stdexcept>

#include "CLI11.hpp"
#include "commands.hpp"
#include "csv.hpp"
#include "frasian/mtest/multiple_testing.hpp"

namespace frasian::cli {
namespace {

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
};

std::uint64_t ParseSeed(const std::string& text, const std::string& origin) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw InputError(origin + ": seed must be an unsigned 64-bit integer, got '" + text + "'");
  }
  return v;
}

void ResolveEnvironment(RunConfig& c, const Overrides& o, const Environment& env) {
  if (o.seed) {
    c.seed = *o.seed;
    c.seed_source = "flag";
  } else if (auto it = env.find("FRASIAN_SEED"); it != env.end() && !it->second.empty()) {
    c.seed = ParseSeed(it->second, "FRASIAN_SEED");
    c.seed_source = "env";
  }
  if (o.out) {
    c.out_dir = *o.out;
    c.out_dir_source = "flag";
  } else if (auto it = env.find("FRASIAN_OUT_DIR"); it != env.end() && !it->second.empty()) {
    c.out_dir = it->second;
    c.out_dir_source = "env";
  }
}

void AddCommon(CLI::App* sub, RunConfig& c, Overrides& o) {
  sub->add_option("--alpha", c.alpha, "Level, 0 < alpha < 1")->capture_default_str();
  sub->add_option("--seed", o.seed, "Master seed (env FRASIAN_SEED)");
  sub->add_option("--out", o.out, "Output directory (env FRASIAN_OUT_DIR)");
}

void AddSampleInput(CLI::App* sub, RunConfig& c) {
  auto* data = sub->add_option("--data", c.data_path, "CSV with a 'y' column");
  auto* inline_sample =
      sub->add_option("--sample", c.inline_sample, "Inline values, e.g. 0.1,-0.3");
  data->excludes(inline_sample);
}

void AddModel(CLI::App* sub, RunConfig& c) {
  sub->add_option("--prior-mean", c.prior_mean)->capture_default_str();
  sub->add_option("--prior-var", c.prior_var)->capture_default_str();
  sub->add_option("--noise-var", c.noise_var)->capture_default_str();
  sub->add_option("--variant", c.variant, "P-value variant")
      ->check(CLI::IsMember({"as-printed", "self-inclusive"}))
      ->capture_default_str();
}

void AddGrid(CLI::App* sub, RunConfig& c) {
  sub->add_option("--grid-lo", c.grid_lo);
  sub->add_option("--grid-hi", c.grid_hi);
  sub->add_option("--grid-step", c.grid_step);
}

void AddDp(CLI::App* sub, RunConfig& c) {
  sub->add_option("--beta", c.beta, "DP prior concentration");
  sub->add_option("--base-mean", c.base_mean, "DP base N(mean, var)")->capture_default_str();
  sub->add_option("--base-var", c.base_var)->capture_default_str();
  sub->add_option("--draws", c.draws, "Posterior draws M")->capture_default_str();
  sub->add_option("--truncation", c.truncation, "Stick-breaking sticks K")
      ->capture_default_str();
  sub->add_option("--content-draws", c.content_draws, "Fresh draws for the content check")
      ->capture_default_str();
}

void AddRule(CLI::App* sub, RunConfig& c) {
  sub->add_option("--rule", c.rule, "Weighted rejection rule")
      ->check(CLI::IsMember({"sum-to-one", "literal"}))
      ->capture_default_str();
}

}  // namespace

int ReportFailure(std::exception_ptr failure, std::ostream& err) {
  try {
    std::rethrow_exception(failure);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const mtest::SolverError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "internal failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (...) {
    err << "internal failure\n";
    return kExitNumerical;
  }
}

int Run(const std::vector<std::string>& args, const Environment& env, std::ostream& out,
        std::ostream& err) {
  RunConfig c;
  Overrides o;

  CLI::App app{"Bayesian procedures checked against frequentist guarantees", "frasian"};
  app.require_subcommand(1);

  auto* predict = app.add_subcommand("predict", "Frequentized and Bayes prediction regions");
  AddCommon(predict, c, o);
  AddSampleInput(predict, c);
  AddModel(predict, c);
  AddGrid(predict, c);

  auto* bands = app.add_subcommand("bands", "DKW or DP-posterior CDF band");
  AddCommon(bands, c, o);
  AddSampleInput(bands, c);
  bands->add_option("--method", c.method, "dkw | dp")->check(CLI::IsMember({"dkw", "dp"}));
  AddDp(bands, c);
  AddGrid(bands, c);

  auto* mtest = app.add_subcommand("mtest", "Weighted Bonferroni rejections");
  AddCommon(mtest, c, o);
  mtest->add_option("--pvalues", c.pvalues_path, "CSV with a 'pvalue' column")->required();
  auto* weights = mtest->add_option("--weights", c.weights_path, "CSV with a 'weight' column");
  auto* means = mtest->add_option("--means", c.means_path,
                                  "CSV with a 'theta' column (and optional 'draw')");
  weights->excludes(means);
  AddRule(mtest, c);

  auto* simulate = app.add_subcommand("simulate", "Seeded Monte Carlo presets");
  AddCommon(simulate, c, o);
  std::vector<std::string> presets(kPresets.begin(), kPresets.end());
  simulate
      ->add_option("--preset,preset", c.preset, "fig1 | conformal-coverage | dp-coverage | fwer")
      ->required()
      ->check(CLI::IsMember(presets));
  simulate->add_option("--reps", c.reps, "Replicates (preset default if unset)");
  simulate->add_option("--n", c.n, "Sample size");
  simulate->add_option("--theta", c.theta, "True mean");
  simulate->add_option("--m", c.m, "Number of hypotheses (fwer)");
  simulate->add_option("--alternatives", c.alternatives, "Leading non-null hypotheses (fwer)");
  simulate->add_option("--method", c.method, "dkw | dp (dp-coverage)")
      ->check(CLI::IsMember({"dkw", "dp"}));
  simulate->add_option("--weights", c.weights_path, "CSV with a 'weight' column (fwer)");
  simulate->add_option("--means", c.means_path, "CSV with a 'theta' column (fwer)");
  AddModel(simulate, c);
  AddDp(simulate, c);
  AddRule(simulate, c);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    ResolveEnvironment(c, o, env);
    if (predict->parsed()) {
      c.command = "predict";
      RunPredict(c, out);
    } else if (bands->parsed()) {
      c.command = "bands";
      RunBands(c, out);
    } else if (mtest->parsed()) {
      c.command = "mtest";
      RunMtest(c, out);
    } else {
      c.command = "simulate";
      RunSimulate(c, out);
    }
  } catch (...) {
    return ReportFailure(std::current_exception(), err);
  }
  return kExitOk;
}

}  // namespace frasian::cli
