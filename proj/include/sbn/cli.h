// Copyright 2026 The SBN Authors
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

// Experiment runner behind the `sbn` binary. Subcommands: nocount,
// asymmetry, letsplay, reduce, solve-zs.

#ifndef SBN_CLI_H_
#define SBN_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace sbn {

inline constexpr char kToolVersion[] = "0.1.0";

enum ExitCode {
  kExitOk = 0,
  kExitUsage = 2,
  kExitCapacity = 3,
  kExitInternal = 4,
};

// Runs one command line (args[0] is the program name). Results go to `out`
// unless --out names a file; diagnostics go to `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

// Shortest decimal that round-trips through double.
std::string FormatDouble(double x);

// RFC 4180 field quoting.
std::string CsvField(const std::string& field);

}  // namespace sbn

#endif  // SBN_CLI_H_
