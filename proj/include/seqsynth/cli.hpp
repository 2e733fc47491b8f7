// Copyright 2026 The seqsynth Authors. All rights reserved.
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

#ifndef SEQSYNTH_CLI_HPP_
#define SEQSYNTH_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace seqsynth::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

// Runs one command. Errors are reported on `err` as a single line
// "error: <usage|data|internal>: <message>".
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace seqsynth::cli

#endif  // SEQSYNTH_CLI_HPP_
