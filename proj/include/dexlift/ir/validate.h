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

#include <string>
#include <vector>

#include "dexlift/ir/ir.h"

namespace dexlift::ir {

enum class Stage {
  kLifted,     // structure only
  kTyped,      // plus: every local typed, operations type-consistent
  kOptimized,  // plus: no Nop statements
};

// Returns one message per violation; empty when the body is well formed.
//
// Structural checks: branch and trap targets belong to the body, trap
// ranges are ordered, addr_map points into the body, locals referenced
// exist and have unique names, the parameter Identity statements form a
// contiguous prefix (after an optional leading Nop), caught-exception
// Identity statements open a handler, and control never runs off the end.
std::vector<std::string> validate(const Body& body, Stage stage);

// Type of a value given the body's local types. Unknown when undetermined.
IrType type_of(const Body& body, const Value& value);
IrType type_of(const Body& body, const Immediate& imm);

// Element type stored by an array access, from the array local's type or,
// failing that, from the access variant.
IrType array_element_type(const Body& body, const ArrayAccess& a);

}  // namespace dexlift::ir
