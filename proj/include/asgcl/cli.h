// Copyright 2026 The asgcl Authors.
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

#ifndef ASGCL_CLI_H_
#define ASGCL_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace asgcl {

// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitUsage = 2,
  kExitConfig = 3,
  kExitData = 4,
  kExitNumeric = 5,
};

// Runs one CLI invocation; args excludes the program name. Never throws.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace asgcl

#endif  // ASGCL_CLI_H_
