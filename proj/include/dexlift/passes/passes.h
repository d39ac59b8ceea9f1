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

#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "dexlift/ir/ir.h"

namespace dexlift::passes {

// Removes every Nop. Jumps, handlers and address-map entries that pointed
// at a Nop move to the next non-Nop statement; trap bounds shrink inward
// and traps left empty are dropped.
void eliminate_nops(ir::Body& body);

// Drops locals no statement mentions and renumbers the rest in order.
void remove_unused_locals(ir::Body& body);

struct PipelineOptions {
  bool optimize = true;  // run the cleanup passes
  bool validate = true;  // run the validator after every stage
};

struct StageReport {
  std::string stage;
  std::chrono::nanoseconds elapsed{0};
  std::vector<std::string> violations;
};

struct PipelineReport {
  std::vector<StageReport> stages;
  bool clean() const;
};

// infer -> resolve -> rewrite -> fix-comparisons [-> eliminate-nops ->
// remove-unused-locals]. Works on a copy: on a typing error the exception
// propagates and body is left as lifted.
PipelineReport run_pipeline(ir::Body& body, const PipelineOptions& options = {});

}  // namespace dexlift::passes
