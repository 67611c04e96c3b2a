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

// The `frasian` command line: predict, bands, mtest and simulate.
//
// Settings resolve as flag, then environment (FRASIAN_SEED, FRASIAN_OUT_DIR),
// then built-in default. Every artifact carries the resolved configuration
// and seed, so rerunning with the same inputs rewrites identical bytes.

#ifndef FRASIAN_TOOLS_CLI_HPP_
#define FRASIAN_TOOLS_CLI_HPP_

#include <cstdint>
#include <exception>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace frasian::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

inline constexpr int kSchemaVersion = 1;
inline constexpr std::uint64_t kDefaultSeed = 2026;

using Environment = std::map<std::string, std::string>;

struct RunConfig {
  std::string command;
  std::optional<std::string> preset;

  std::optional<std::string> data_path;
  std::optional<std::string> inline_sample;
  std::optional<std::string> pvalues_path;
  std::optional<std::string> weights_path;
  std::optional<std::string> means_path;

  double alpha = 0.05;
  double prior_mean = 0.0;
  double prior_var = 1.0;
  double noise_var = 1.0;
  std::optional<double> grid_lo;
  std::optional<double> grid_hi;
  std::optional<double> grid_step;
  std::string variant = "as-printed";

  std::optional<std::string> method;
  std::optional<double> beta;
  double base_mean = 0.0;
  double base_var = 1.0;
  std::size_t draws = 1000;
  std::size_t truncation = 1000;
  std::size_t content_draws = 200;

  std::string rule = "sum-to-one";

  std::optional<std::size_t> reps;
  std::optional<std::size_t> n;
  std::optional<std::size_t> m;
  std::optional<std::size_t> alternatives;
  std::optional<double> theta;

  std::uint64_t seed = kDefaultSeed;
  std::string seed_source = "default";  // flag | env | default

  // Where artifacts go. Not echoed: it locates outputs and does not change them.
  std::string out_dir = ".";
  std::string out_dir_source = "default";
};

nlohmann::json ToJson(const RunConfig& config);
RunConfig RunConfigFromJson(const nlohmann::json& j);

// Prints a diagnostic for an escaped exception and returns its exit status:
// bad input maps to kExitUsage, solver and other failures to kExitNumerical.
int ReportFailure(std::exception_ptr failure, std::ostream& err);

// Entry point with the process environment passed in. `args` excludes the
// program name. Returns the exit status.
int Run(const std::vector<std::string>& args, const Environment& env, std::ostream& out,
        std::ostream& err);

}  // namespace frasian::cli

#endif  // FRASIAN_TOOLS_CLI_HPP_
