// Copyright 2026 The gridclear Authors
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

#ifndef GRIDCLEAR_TOOLS_CLI_H_
#define GRIDCLEAR_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace gridclear::cli {

enum ExitCode {
  kOk = 0,
  kValidationFailure = 1,
  kNotOptimal = 2,  // infeasible, unbounded or numerically unsolved
  kIoOrParseError = 3,
};

// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gridclear::cli

#endif  // GRIDCLEAR_TOOLS_CLI_H_
