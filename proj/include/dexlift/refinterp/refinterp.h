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

// Reference interpreters used as test oracles: one runs decoded Dalvik code
// over untyped 32-bit registers, the other runs typed IR bodies. Both work
// on the same scripted heap and call out to the same stub methods, so their
// outcomes can be compared directly.
//
// Modeled: arithmetic and conversions, constants, moves, branches and
// switches, arrays, instance and static fields, object allocation, casts,
// invocations of stubbed methods, monitors, and exceptions (thrown
// explicitly, by stubs, or by the runtime: ArithmeticException,
// NullPointerException, ArrayIndexOutOfBoundsException,
// NegativeArraySizeException, ClassCastException). Anything else raises
// UnsupportedForOracle.

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dexlift/dex/dex_file.h"
#include "dexlift/ir/ir.h"

namespace dexlift::refinterp {

// A typed runtime value. kind is 'I' (also boolean, byte, char, short),
// 'J', 'F', 'D' or 'L'; bits holds the raw pattern (a heap handle for 'L',
// 0 being null).
struct RtValue {
  char kind = 'I';
  uint64_t bits = 0;

  static RtValue i(int32_t v) { return {'I', static_cast<uint32_t>(v)}; }
  static RtValue j(int64_t v) { return {'J', static_cast<uint64_t>(v)}; }
  static RtValue f(float v);
  static RtValue d(double v);
  static RtValue null() { return {'L', 0}; }
  static RtValue ref(uint32_t handle) { return {'L', handle}; }

  bool operator==(const RtValue&) const = default;
};

// Kind a value of the given field descriptor has at run time.
char kind_of(std::string_view descriptor);

struct HeapObject {
  std::string type;  // class or array descriptor
  std::map<std::string, uint64_t> fields;  // by FieldRef::to_string()
  std::vector<uint64_t> elements;  // arrays
  std::optional<std::string> text;  // java.lang.String contents, or a Class name
};

class Heap {
 public:
  uint32_t allocate(std::string type);
  uint32_t new_array(const std::string& array_type, size_t length);
  // Strings and class objects are interned by content.
  uint32_t intern_string(const std::string& s);
  uint32_t class_object(const std::string& descriptor);

  HeapObject& at(uint32_t handle);
  const HeapObject& at(uint32_t handle) const;

  std::map<std::string, uint64_t> statics;  // by FieldRef::to_string()

  // Deterministic deep rendering: "5", "1.0F(0x3f800000)", "null",
  // "\"text\"", "[I{1, 2}", "LPoint;#3{LPoint;.x:I=1}".
  std::string render(const RtValue& v) const;

 private:
  std::vector<HeapObject> objects_;
  std::map<std::string, uint32_t> strings_;
  std::map<std::string, uint32_t> classes_;
};

// Result of a stub: a value (absent for void) or an exception to throw.
struct StubResult {
  std::optional<RtValue> value;
  std::optional<std::string> thrown;  // exception class descriptor
};

using Stub = std::function<StubResult(Heap&, const std::vector<RtValue>& args)>;

struct Env {
  // By MethodRef::to_string(). The receiver, if any, is args[0].
  std::map<std::string, Stub> methods;
  // Class -> superclass beyond the built-in exception and String hierarchy.
  std::map<std::string, std::string> superclass;
  // Constructors without a stub behave as empty methods.
  bool lenient_constructors = true;
  // Executed instructions or statements per call of an interpreter.
  uint64_t step_budget = 200000;

  // Object.<init>, String.length, String.concat, String.valueOf(I),
  // String.equals and Integer.parseInt (NumberFormatException on bad input).
  static Env with_defaults();

  bool is_subtype(const std::string& sub, const std::string& super) const;
};

struct Outcome {
  enum class Kind { kReturned, kThrew, kStuck };
  Kind kind = Kind::kReturned;
  std::string value;  // Heap::render of the returned value; empty for void
  std::optional<RtValue> returned;  // raw returned value, not compared
  std::string thrown;  // exception class descriptor
  std::vector<std::string> trace;  // stub calls, "LA;.m:(I)V(5)" in call order
  std::string detail;  // why an IR run got stuck

  bool operator==(const Outcome& o) const {
    return kind == o.kind && value == o.value && thrown == o.thrown && trace == o.trace;
  }
  std::string to_string() const;
};

// Runs a method's Dalvik code. args holds the receiver (for instance
// methods) followed by the parameters. Raises UnsupportedForOracle for
// instructions outside the modeled subset and when the step budget runs out.
Outcome exec_dalvik(const dex::DexFile& dex, const dex::MethodDef& method, const std::vector<RtValue>& args,
                    const Env& env, Heap& heap);

// Runs a typed body. Operations applied to values of the wrong kind (an int
// used as a reference, a float added as an int, ...) end the run with
// Kind::kStuck instead of guessing.
Outcome exec_ir(const ir::Body& body, const std::vector<RtValue>& args, const Env& env, Heap& heap);

}  // namespace dexlift::refinterp
