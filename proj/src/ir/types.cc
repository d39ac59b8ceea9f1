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

#include "dexlift/ir/types.h"

#include "dexlift/dex/dex_file.h"
#include "dexlift/error.h"

namespace dexlift::ir {
namespace {

const char* primitive_descriptor(IrType::Tag tag) {
  switch (tag) {
    case IrType::Tag::kBoolean: return "Z";
    case IrType::Tag::kByte: return "B";
    case IrType::Tag::kChar: return "C";
    case IrType::Tag::kShort: return "S";
    case IrType::Tag::kInt: return "I";
    case IrType::Tag::kFloat: return "F";
    case IrType::Tag::kLong: return "J";
    case IrType::Tag::kDouble: return "D";
    default: return "";
  }
}

}  // namespace

IrType::IrType(Tag tag) : tag_(tag), descriptor_(primitive_descriptor(tag)) {}

IrType IrType::ref(std::string descriptor) {
  IrType t(Tag::kRef);
  t.descriptor_ = std::move(descriptor);
  return t;
}

IrType IrType::array_of(const IrType& element) {
  IrType t(Tag::kArray);
  t.descriptor_ = "[" + element.descriptor();
  return t;
}

IrType IrType::from_descriptor(std::string_view d) {
  if (!dex::is_valid_descriptor(d)) fail(ErrorCode::kBadString, "not a field descriptor: " + std::string(d));
  switch (d.front()) {
    case 'Z': return boolean();
    case 'B': return byte();
    case 'C': return char_();
    case 'S': return short_();
    case 'I': return int_();
    case 'F': return float_();
    case 'J': return long_();
    case 'D': return double_();
    case 'L': return ref(std::string(d));
    default: {
      IrType t(Tag::kArray);
      t.descriptor_ = std::string(d);
      return t;
    }
  }
}

IrType IrType::element() const {
  if (tag_ != Tag::kArray) return unknown();
  return from_descriptor(std::string_view(descriptor_).substr(1));
}

Category IrType::category() const {
  switch (tag_) {
    case Tag::kBoolean:
    case Tag::kByte:
    case Tag::kChar:
    case Tag::kShort:
    case Tag::kInt: return Category::kInt;
    case Tag::kFloat: return Category::kFloat;
    case Tag::kLong: return Category::kLong;
    case Tag::kDouble: return Category::kDouble;
    case Tag::kNull:
    case Tag::kRef:
    case Tag::kArray: return Category::kRef;
    case Tag::kUnknown: break;
  }
  return Category::kNone;
}

std::string IrType::to_string() const {
  switch (tag_) {
    case Tag::kUnknown: return "unknown";
    case Tag::kBoolean: return "boolean";
    case Tag::kByte: return "byte";
    case Tag::kChar: return "char";
    case Tag::kShort: return "short";
    case Tag::kInt: return "int";
    case Tag::kFloat: return "float";
    case Tag::kLong: return "long";
    case Tag::kDouble: return "double";
    case Tag::kNull: return "null_type";
    case Tag::kRef:
    case Tag::kArray: return descriptor_;
  }
  return "unknown";
}

IrType category_type(Category c) {
  switch (c) {
    case Category::kInt: return IrType::int_();
    case Category::kFloat: return IrType::float_();
    case Category::kLong: return IrType::long_();
    case Category::kDouble: return IrType::double_();
    case Category::kRef: return IrType::object();
    case Category::kNone: break;
  }
  return IrType::unknown();
}

std::string_view category_name(Category c) {
  switch (c) {
    case Category::kInt: return "int";
    case Category::kFloat: return "float";
    case Category::kLong: return "long";
    case Category::kDouble: return "double";
    case Category::kRef: return "reference";
    case Category::kNone: break;
  }
  return "none";
}

IrType parse_type(std::string_view text) {
  if (text == "boolean") return IrType::boolean();
  if (text == "byte") return IrType::byte();
  if (text == "char") return IrType::char_();
  if (text == "short") return IrType::short_();
  if (text == "int") return IrType::int_();
  if (text == "float") return IrType::float_();
  if (text == "long") return IrType::long_();
  if (text == "double") return IrType::double_();
  if (text == "null_type") return IrType::null();
  if (!text.empty() && (text.front() == 'L' || text.front() == '[') && dex::is_valid_descriptor(text)) {
    return IrType::from_descriptor(text);
  }
  return IrType::unknown();
}

}  // namespace dexlift::ir
