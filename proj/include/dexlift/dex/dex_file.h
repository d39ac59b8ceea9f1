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

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dexlift::dex {

inline constexpr uint32_t kNoIndex = 0xffffffff;
inline constexpr uint32_t kEndianConstant = 0x12345678;
inline constexpr uint32_t kHeaderSize = 0x70;

inline constexpr uint32_t kAccStatic = 0x0008;
inline constexpr uint32_t kAccNative = 0x0100;
inline constexpr uint32_t kAccInterface = 0x0200;
inline constexpr uint32_t kAccAbstract = 0x0400;
inline constexpr uint32_t kAccConstructor = 0x10000;

struct SectionRange {
  uint32_t size = 0;
  uint32_t offset = 0;
};

// Fields in file order.
struct DexHeader {
  std::array<uint8_t, 8> magic{};
  uint32_t checksum = 0;
  std::array<uint8_t, 20> signature{};
  uint32_t file_size = 0;
  uint32_t header_size = 0;
  uint32_t endian_tag = 0;
  SectionRange link;
  uint32_t map_off = 0;
  SectionRange string_ids;
  SectionRange type_ids;
  SectionRange proto_ids;
  SectionRange field_ids;
  SectionRange method_ids;
  SectionRange class_defs;
  SectionRange data;
};

struct Proto {
  std::string shorty;
  std::string return_type;
  std::vector<std::string> parameters;

  // "(II)V"
  std::string descriptor() const;
  bool operator==(const Proto&) const = default;
};

struct FieldRef {
  std::string owner;
  std::string name;
  std::string type;

  // "LOwner;.name:I"
  std::string to_string() const;
  bool operator==(const FieldRef&) const = default;
  auto operator<=>(const FieldRef&) const = default;
};

struct MethodRef {
  std::string owner;
  std::string name;
  Proto proto;

  // "LOwner;.name:(II)V"
  std::string to_string() const;
  bool operator==(const MethodRef&) const = default;
  bool operator<(const MethodRef& other) const { return to_string() < other.to_string(); }
};

struct CatchHandler {
  std::optional<std::string> exception_type;  // absent for catch-all
  uint32_t address = 0;

  bool operator==(const CatchHandler&) const = default;
};

struct TryItem {
  uint32_t start_address = 0;
  uint32_t instruction_count = 0;
  std::vector<CatchHandler> handlers;

  bool operator==(const TryItem&) const = default;
};

struct CodeItem {
  uint16_t registers_size = 0;
  uint16_t ins_size = 0;
  uint16_t outs_size = 0;
  std::vector<uint16_t> insns;
  std::vector<TryItem> tries;
  uint32_t debug_info_off = 0;  // opaque, not decoded

  bool operator==(const CodeItem&) const = default;
};

struct FieldDef {
  uint32_t field_idx = 0;
  uint32_t access_flags = 0;

  bool operator==(const FieldDef&) const = default;
};

struct MethodDef {
  uint32_t method_idx = 0;
  uint32_t access_flags = 0;
  std::optional<CodeItem> code;

  bool is_static() const { return (access_flags & kAccStatic) != 0; }
  bool operator==(const MethodDef&) const = default;
};

// Sections this library does not interpret, kept as file offsets.
struct OpaqueSections {
  uint32_t annotations_off = 0;
  uint32_t static_values_off = 0;

  bool operator==(const OpaqueSections&) const = default;
};

struct ClassDef {
  std::string this_type;
  uint32_t access_flags = 0;
  std::optional<std::string> superclass;
  std::vector<std::string> interfaces;
  std::optional<std::string> source_file;
  std::vector<FieldDef> static_fields;
  std::vector<FieldDef> instance_fields;
  std::vector<MethodDef> direct_methods;
  std::vector<MethodDef> virtual_methods;
  OpaqueSections opaque;

  bool operator==(const ClassDef&) const = default;
};

// Immutable parsed container. Every index stored in the model was validated
// at parse time.
class DexFile {
 public:
  const DexHeader& header() const { return header_; }
  const std::vector<std::string>& strings() const { return strings_; }
  const std::vector<std::string>& types() const { return types_; }
  const std::vector<Proto>& protos() const { return protos_; }
  const std::vector<FieldRef>& fields() const { return fields_; }
  const std::vector<MethodRef>& methods() const { return methods_; }
  const std::vector<ClassDef>& class_defs() const { return class_defs_; }

 private:
  friend DexFile parse_dex(std::span<const uint8_t> bytes);

  DexHeader header_;
  std::vector<std::string> strings_;
  std::vector<std::string> types_;
  std::vector<Proto> protos_;
  std::vector<FieldRef> fields_;
  std::vector<MethodRef> methods_;
  std::vector<ClassDef> class_defs_;
};

DexFile parse_dex(std::span<const uint8_t> bytes);
DexFile read_dex_file(const std::string& path);

const std::string& resolve_string(const DexFile& dex, uint32_t idx);
const std::string& resolve_type(const DexFile& dex, uint32_t idx);
const FieldRef& resolve_field(const DexFile& dex, uint32_t idx);
const MethodRef& resolve_method(const DexFile& dex, uint32_t idx);
const Proto& resolve_proto(const DexFile& dex, uint32_t idx);

// Absent for abstract and native methods.
const CodeItem* method_code(const DexFile& dex, const MethodDef& method);

// Converts modified UTF-8 (as stored in dex string data) to standard UTF-8.
// Throws BadString on malformed input.
std::string decode_mutf8(std::span<const uint8_t> bytes, uint32_t expected_utf16_length);

// Descriptor grammar check: "I", "[J", "Lpkg/Cls;", and "V" when allow_void.
bool is_valid_descriptor(std::string_view descriptor, bool allow_void = false);

// "Lpkg/Cls;" -> "pkg.Cls"
std::string descriptor_to_class_name(std::string_view descriptor);

}  // namespace dexlift::dex
