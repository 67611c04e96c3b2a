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

#ifndef FRASIAN_TOOLS_COMMANDS_HPP_
#define FRASIAN_TOOLS_COMMANDS_HPP_

#include <array>
#include <ostream>
#include <string_view>

#include "cli.hpp"

namespace frasian::cli {

inline constexpr std::array<std::string_view, 4> kPresets = {"fig1", "conformal-coverage",
                                                             "dp-coverage", "fwer"};

// Each writes its artifacts under config.out_dir and lists them on `out`.
void RunPredict(const RunConfig& config, std::ostream& out);
void RunBands(const RunConfig& config, std::ostream& out);
void RunMtest(const RunConfig& config, std::ostream& out);
void RunSimulate(const RunConfig& config, std::ostream& out);

}  // namespace frasian::cli

#endif  // FRASIAN_TOOLS_COMMANDS_HPP_
