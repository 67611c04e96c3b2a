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

namespace frasian::cli {
namespace {

using nlohmann::json;

template <typename T>
json Nullable(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <typename T>
void ReadNullable(const json& j, const char* key, std::optional<T>& v) {
  const json& x = j.at(key);
  if (x.is_null()) {
    v.reset();
  } else {
    v = x.get<T>();
  }
}

}  // namespace

json ToJson(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  j["preset"] = Nullable(c.preset);
  j["data"] = Nullable(c.data_path);
  j["sample"] = Nullable(c.inline_sample);
  j["pvalues"] = Nullable(c.pvalues_path);
  j["weights"] = Nullable(c.weights_path);
  j["means"] = Nullable(c.means_path);
  j["alpha"] = c.alpha;
  j["prior_mean"] = c.prior_mean;
  j["prior_var"] = c.prior_var;
  j["noise_var"] = c.noise_var;
  j["grid_lo"] = Nullable(c.grid_lo);
  j["grid_hi"] = Nullable(c.grid_hi);
  j["grid_step"] = Nullable(c.grid_step);
  j["variant"] = c.variant;
  j["method"] = Nullable(c.method);
  j["beta"] = Nullable(c.beta);
  j["base_mean"] = c.base_mean;
  j["base_var"] = c.base_var;
  j["draws"] = c.draws;
  j["truncation"] = c.truncation;
  j["content_draws"] = c.content_draws;
  j["rule"] = c.rule;
  j["reps"] = Nullable(c.reps);
  j["n"] = Nullable(c.n);
  j["m"] = Nullable(c.m);
  j["alternatives"] = Nullable(c.alternatives);
  j["theta"] = Nullable(c.theta);
  j["seed"] = c.seed;
  j["seed_source"] = c.seed_source;
  return j;
}

RunConfig RunConfigFromJson(const json& j) {
  RunConfig c;
  c.command = j.at("command").get<std::string>();
  ReadNullable(j, "preset", c.preset);
  ReadNullable(j, "data", c.data_path);
  ReadNullable(j, "sample", c.inline_sample);
  ReadNullable(j, "pvalues", c.pvalues_path);
  ReadNullable(j, "weights", c.weights_path);
  ReadNullable(j, "means", c.means_path);
  c.alpha = j.at("alpha").get<double>();
  c.prior_mean = j.at("prior_mean").get<double>();
  c.prior_var = j.at("prior_var").get<double>();
  c.noise_var = j.at("noise_var").get<double>();
  ReadNullable(j, "grid_lo", c.grid_lo);
  ReadNullable(j, "grid_hi", c.grid_hi);
  ReadNullable(j, "grid_step", c.grid_step);
  c.variant = j.at("variant").get<std::string>();
  ReadNullable(j, "method", c.method);
  ReadNullable(j, "beta", c.beta);
  c.base_mean = j.at("base_mean").get<double>();
  c.base_var = j.at("base_var").get<double>();
  c.draws = j.at("draws").get<std::size_t>();
  c.truncation = j.at("truncation").get<std::size_t>();
  c.content_draws = j.at("content_draws").get<std::size_t>();
  c.rule = j.at("rule").get<std::string>();
  ReadNullable(j, "reps", c.reps);
  ReadNullable(j, "n", c.n);
  ReadNullable(j, "m", c.m);
  ReadNullable(j, "alternatives", c.alternatives);
  ReadNullable(j, "theta", c.theta);
  c.seed = j.at("seed").get<std::uint64_t>();
  c.seed_source = j.at("seed_source").get<std::string>();
  return c;
}

}  // namespace frasian::cli
