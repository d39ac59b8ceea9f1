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
#include <string_view>

namespace dexlift::ir {

// Register-level category. Sub-int integral types share the Int category.
enum class Category { kNone, kInt, kFloat, kLong, kDouble, kRef };

class IrType {
 public:
  enum class Tag {
    kUnknown,
    kBoolean,
    kByte,
    kChar,
    kShort,
    kInt,
    kFloat,
    kLong,
    kDouble,
    kNull,
    kRef,
    kArray,
  };

  IrType() = default;

  static IrType unknown() { return IrType(Tag::kUnknown); }
  static IrType boolean() { return IrType(Tag::kBoolean); }
  static IrType byte() { return IrType(Tag::kByte); }
  static IrType char_() { return IrType(Tag::kChar); }
  static IrType short_() { return IrType(Tag::kShort); }
  static IrType int_() { return IrType(Tag::kInt); }
  static IrType float_() { return IrType(Tag::kFloat); }
  static IrType long_() { return IrType(Tag::kLong); }
  static IrType double_() { return IrType(Tag::kDouble); }
  static IrType null() { return IrType(Tag::kNull); }
  static IrType object() { return ref("Ljava/lang/Object;"); }
  // Class type, e.g. "LCoordinate;".
  static IrType ref(std::string descriptor);
  // Array with the given element type.
  static IrType array_of(const IrType& element);

  // Any field descriptor, e.g. "I", "[J", "Lpkg/Cls;". "V" is not a type.
  static IrType from_descriptor(std::string_view descriptor);

  Tag tag() const { return tag_; }
  // Field descriptor for every known type; empty for Unknown and Null.
  const std::string& descriptor() const { return descriptor_; }
  // Array element type; Unknown for non-arrays.
  IrType element() const;

  bool is_unknown() const { return tag_ == Tag::kUnknown; }
  bool is_reference_like() const { return tag_ == Tag::kRef || tag_ == Tag::kArray || tag_ == Tag::kNull; }
  bool is_integral() const { return tag_ >= Tag::kBoolean && tag_ <= Tag::kInt; }
  bool is_wide() const { return tag_ == Tag::kLong || tag_ == Tag::kDouble; }
  Category category() const;

  // "int", "float", "LCoordinate;", "[I", "null_type", "unknown".
  std::string to_string() const;

  bool operator==(const IrType&) const = default;

 private:
  explicit IrType(Tag tag);

  Tag tag_ = Tag::kUnknown;
  std::string descriptor_;
};

// The canonical register type of a category (Int, Float, Long, Double, Object).
IrType category_type(Category c);

std::string_view category_name(Category c);

// Parses IrType::to_string output back. Returns Unknown on unrecognized text.
IrType parse_type(std::string_view text);

}  // namespace dexlift::ir
