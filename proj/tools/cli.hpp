// Copyright 2026 The weylmult Authors
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

// Command-line front end. Exit codes: 0 success, 1 internal failure,
// 2 parameter error, 3 resource-guard refusal.

#ifndef WEYLMULT_TOOLS_CLI_HPP
#define WEYLMULT_TOOLS_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace weylmult::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitParameter = 2;
inline constexpr int kExitResource = 3;

/// Runs one invocation; `args` excludes the program name. Results go to the
/// --out file when given, otherwise to `out`; the error line goes to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace weylmult::cli

#endif  // WEYLMULT_TOOLS_CLI_HPP
