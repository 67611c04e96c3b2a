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

#include <cstdlib>
#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  frasian::cli::Environment env;
  for (const char* name : {"FRASIAN_SEED", "FRASIAN_OUT_DIR"}) {
    if (const char* v = std::getenv(name)) env[name] = v;
  }
  return frasian::cli::Run({argv + 1, argv + argc}, env, std::cout, std::cerr);
}
