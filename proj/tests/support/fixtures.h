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

// Shared dex fixtures. Every image is produced by DexBuilder, so the bytes
// are reproducible and the tests never depend on checked-in binaries.

#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "dex_builder.h"
#include "dexlift/dex/dex_file.h"
#include "dexlift/ir/ir.h"

namespace dexlift::ir {
// Readable gtest output for types.
inline void PrintTo(const IrType& t, std::ostream* os) { *os << t.to_string(); }
}  // namespace dexlift::ir

namespace dexlift::testing {

// The apple-placement loop: a zero constant that only later turns out to
// be a reference, compared against zero twice.
//
//   00 const/4 v1, #1          0a if-nez v0, 0013
//   01 const/4 v0, #0          0c invoke-static {}, onMissing
//   02 if-eqz v0, 000a         0f..12 nop
//   04 new-instance v0         13 return-void
//   06 invoke-direct {v0, v1, v1}, LCoordinate;.<init>:(II)V
//   09 goto 0002
extern const char kAppleLoopCode[];

// LCoordinate; (two int fields and a constructor) plus LSnake; holding the
// loop above as addRandomApple, an empty `void f()` and an abstract base.
ClassSpec coordinate_class();
ClassSpec snake_class();
std::vector<uint8_t> snake_dex();

// Five-method application LApp; used for graph counts:
//
//   main(String[])  new App; <init>; run; helper(5); System.nanoTime
//   <init>          Object.<init>
//   run             loop calling helper inside a catch-all; handler calls leaf
//   helper(I)I      recursive
//   leaf()I         no calls
std::vector<uint8_t> app_dex();

// One empty class.
std::vector<uint8_t> minimal_dex();

// Single static method wrapped in its own class.
std::vector<uint8_t> single_method_dex(const std::string& signature, uint16_t registers, const std::string& code,
                                       const std::string& name = "run", const std::string& owner = "LT;");

// Looks a method up by class descriptor and name; throws if absent.
const dex::MethodDef& find_method(const dex::DexFile& dex, const std::string& owner, const std::string& name);

// Lifts the named method (which must have code).
ir::Body lift_named(const dex::DexFile& dex, const std::string& owner, const std::string& name);

// Builds a one-method dex and lifts it.
ir::Body lift_snippet(const std::string& signature, uint16_t registers, const std::string& code);

// Writes bytes to a fresh file under the system temp dir and returns its path.
std::string write_temp(const std::vector<uint8_t>& bytes, const std::string& name);

}  // namespace dexlift::testing
