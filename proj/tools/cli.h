// Copyright 2026 The gaussrdp Authors
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

#ifndef RDP_TOOLS_CLI_H_
#define RDP_TOOLS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace rdp::cli {

enum ExitCode {
  kExitOk = 0,
  kExitInputError = 1,
  kExitInfeasible = 2,
  kExitConvergence = 3,
  kExitVerifyFailed = 4,
};

// Runs the gaussrdp command line with `args` (program name excluded).
// Results go to `out` unless --output is given; diagnostics go to `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace rdp::cli

#endif  // RDP_TOOLS_CLI_H_
