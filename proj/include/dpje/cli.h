// Copyright 2026 The DPJE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPJE_CLI_H_
#define DPJE_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace dpje {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitCheckFailed = 2;

// Entry point of the `dpje` tool. `args` excludes the program name. JSON and
// CSV go to `out`; diagnostics and one-line summaries go to `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

// Replaces `--config path` by the file's key=value lines rendered as flags.
// Keys already given on the command line are skipped, so flags win.
std::vector<std::string> ExpandConfig(const std::vector<std::string>& args);

}  // namespace dpje

#endif  // DPJE_CLI_H_
