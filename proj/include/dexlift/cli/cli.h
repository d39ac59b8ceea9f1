// Copyright 2026 The dexlift Authors
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

// Command-line driver.
//
//   dexlift [--timings] disasm <file.dex>
//   dexlift [--timings] lift <file.dex> [--out DIR] [--no-opt] [--method Class.name]
//   dexlift [--timings] cfg <file.dex> --method Class.name [--out DIR] [--exceptional-edges]
//   dexlift [--timings] callgraph <file.dex> [--out DIR]
//
// Class.name accepts a descriptor (LSnake;), a dotted name (com.x.Snake) or
// a simple name (Snake) for the class part.

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dexlift::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitParse = 1,        // container, parse or structural error
  kExitUnsupported = 2,  // odex or unused opcode
  kExitTyping = 3,
  kExitUsage = 4,
};

// Runs the tool; args excludes the program name. Listings and written file
// paths go to out, diagnostics and timings to err. Failures are isolated
// per method: the remaining methods are still processed, and the most
// severe failure (parse, then unsupported opcode, then typing) decides the
// exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dexlift::cli
