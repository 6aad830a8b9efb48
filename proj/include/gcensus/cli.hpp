// Copyright 2026 The gcensus Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GCENSUS_CLI_HPP
#define GCENSUS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace gcensus {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitOracle = 2;
inline constexpr int kExitUsage = 64;

/// Entry point of the gcensus tool. `args` excludes the program name.
/// Results go to `out` (or --out), diagnostics and progress to `err`.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

/// Header of the census and table1 CSV output.
inline constexpr const char *kCensusCsvHeader = "k,l,samples,accepted,separable,classical,prob_sep,prob_classical,seed";

}  // namespace gcensus

#endif  // GCENSUS_CLI_HPP
