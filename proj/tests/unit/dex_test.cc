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

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "dex_builder.h"
#include "dexlift/dex/dex_file.h"
#include "dexlift/error.h"
#include "dexlift/isa/instruction.h"
#include "fixtures.h"
#include "generators.h"

namespace dexlift::dex {
namespace {

using testing::ClassSpec;
using testing::DexBuilder;
using testing::MethodSpec;

template <typename F>
ErrorCode error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kUnsupportedForOracle;
}

uint32_t read_u32(const std::vector<uint8_t>& b, size_t at) {
  return b[at] | (b[at + 1] << 8) | (b[at + 2] << 16) | (static_cast<uint32_t>(b[at + 3]) << 24);
}

void write_u32(std::vector<uint8_t>& b, size_t at, uint32_t v) {
  for (int i = 0; i < 4; ++i) b[at + i] = static_cast<uint8_t>(v >> (8 * i));
}

const MethodDef* find_method(const DexFile& dex, const std::string& cls, const std::string& name) {
  for (const ClassDef& c : dex.class_defs()) {
    if (c.this_type != cls) continue;
    for (const auto* list : {&c.direct_methods, &c.virtual_methods}) {
      for (const MethodDef& m : *list) {
        if (resolve_method(dex, m.method_idx).name == name) return &m;
      }
    }
  }
  return nullptr;
}

TEST(ParseDex, MinimalFile) {
  const DexFile dex = parse_dex(testing::minimal_dex());
  ASSERT_EQ(dex.class_defs().size(), 1u);
  const ClassDef& c = dex.class_defs()[0];
  EXPECT_EQ(c.this_type, "LMinimal;");
  EXPECT_EQ(c.superclass, "Ljava/lang/Object;");
  EXPECT_TRUE(c.direct_methods.empty());
  EXPECT_TRUE(c.virtual_methods.empty());
  EXPECT_TRUE(dex.methods().empty());
  // Sorted string section: uppercase 'L' descriptors, compared as bytes.
  EXPECT_EQ(resolve_string(dex, 0), "LMinimal;");
  EXPECT_EQ(resolve_string(dex, 1), "Ljava/lang/Object;");
}

TEST(ParseDex, HeaderFields) {
  const auto bytes = testing::minimal_dex();
  const DexFile dex = parse_dex(bytes);
  EXPECT_EQ(dex.header().file_size, bytes.size());
  EXPECT_EQ(dex.header().header_size, kHeaderSize);
  EXPECT_EQ(dex.header().endian_tag, kEndianConstant);
  EXPECT_EQ(dex.header().checksum, read_u32(bytes, 8));
}

TEST(ParseDex, ShortInputIsTruncated) {
  const std::vector<uint8_t> bytes = {'d', 'e', 'x', '\n', '0', '3', '5', 0};
  EXPECT_EQ(error_of([&] { parse_dex(bytes); }), ErrorCode::kTruncated);
  EXPECT_EQ(error_of([&] { parse_dex({}); }), ErrorCode::kTruncated);
}

TEST(ParseDex, OtherVersionsRejected) {
  auto bytes = testing::minimal_dex();
  bytes[6] = '6';
  EXPECT_EQ(error_of([&] { parse_dex(bytes); }), ErrorCode::kBadMagic);
  bytes[6] = '5';
  bytes[0] = 'x';
  EXPECT_EQ(error_of([&] { parse_dex(bytes); }), ErrorCode::kBadMagic);
}

TEST(ParseDex, SwappedEndianRejected) {
  auto bytes = testing::minimal_dex();
  write_u32(bytes, 40, 0x78563412);
  EXPECT_EQ(error_of([&] { parse_dex(bytes); }), ErrorCode::kBadMagic);
}

TEST(ParseDex, SectionOutsideFile) {
  auto bytes = testing::minimal_dex();
  write_u32(bytes, 68, static_cast<uint32_t>(bytes.size()));  // type_ids_off
  EXPECT_EQ(error_of([&] { parse_dex(bytes); }), ErrorCode::kTruncated);
  bytes = testing::minimal_dex();
  write_u32(bytes, 32, static_cast<uint32_t>(bytes.size() + 4));  // file_size
  EXPECT_EQ(error_of([&] { parse_dex(bytes); }), ErrorCode::kTruncated);
}

TEST(ParseDex, CrossPoolIndexChecked) {
  auto bytes = testing::minimal_dex();
  const uint32_t type_ids = read_u32(bytes, 68);
  write_u32(bytes, type_ids, 999);  // descriptor string index
  EXPECT_EQ(error_of([&] { parse_dex(bytes); }), ErrorCode::kBadIndex);
}

TEST(ParseDex, MalformedStringRejected) {
  auto bytes = testing::minimal_dex();
  const uint32_t string_ids = read_u32(bytes, 60);
  const uint32_t data = read_u32(bytes, string_ids);
  bytes[data + 1] = 0xff;  // first byte after the uleb length
  EXPECT_EQ(error_of([&] { parse_dex(bytes); }), ErrorCode::kBadString);
}

TEST(ResolvePools, StringIndexing) {
  DexBuilder b;
  b.add_string("a").add_string("bc");
  const DexFile dex = parse_dex(b.build());
  EXPECT_EQ(resolve_string(dex, 0), "a");
  EXPECT_EQ(resolve_string(dex, 1), "bc");
  EXPECT_EQ(error_of([&] { resolve_string(dex, 2); }), ErrorCode::kBadIndex);
}

TEST(ResolvePools, ConstructorReference) {
  const DexFile dex = parse_dex(testing::snake_dex());
  const MethodDef* init = find_method(dex, "LCoordinate;", "<init>");
  ASSERT_NE(init, nullptr);
  const MethodRef& ref = resolve_method(dex, init->method_idx);
  EXPECT_EQ(ref.owner, "LCoordinate;");
  EXPECT_EQ(ref.name, "<init>");
  EXPECT_EQ(ref.proto.descriptor(), "(II)V");
  EXPECT_EQ(ref.to_string(), "LCoordinate;.<init>:(II)V");
  EXPECT_TRUE(init->access_flags & kAccConstructor);
  EXPECT_EQ(error_of([&] { resolve_method(dex, static_cast<uint32_t>(dex.methods().size())); }),
            ErrorCode::kBadIndex);
  EXPECT_EQ(error_of([&] { resolve_field(dex, static_cast<uint32_t>(dex.fields().size())); }),
            ErrorCode::kBadIndex);
  EXPECT_EQ(error_of([&] { resolve_type(dex, static_cast<uint32_t>(dex.types().size())); }), ErrorCode::kBadIndex);
  const auto it = std::find(dex.types().begin(), dex.types().end(), "I");
  ASSERT_NE(it, dex.types().end());
  EXPECT_EQ(resolve_type(dex, static_cast<uint32_t>(it - dex.types().begin())), "I");
}

TEST(ResolvePools, Fields) {
  const DexFile dex = parse_dex(testing::snake_dex());
  ASSERT_EQ(dex.fields().size(), 2u);
  EXPECT_EQ(resolve_field(dex, 0).to_string(), "LCoordinate;.x:I");
  EXPECT_EQ(resolve_field(dex, 1).to_string(), "LCoordinate;.y:I");
}

TEST(MethodCode, AbstractConstructorAndEmpty) {
  const DexFile dex = parse_dex(testing::snake_dex());
  const MethodDef* area = find_method(dex, "LShape;", "area");
  ASSERT_NE(area, nullptr);
  EXPECT_EQ(method_code(dex, *area), nullptr);
  const MethodDef* init = find_method(dex, "LCoordinate;", "<init>");
  const CodeItem* code = method_code(dex, *init);
  ASSERT_NE(code, nullptr);
  EXPECT_EQ(code->ins_size, 3);
  EXPECT_GE(code->registers_size, code->ins_size);
  const MethodDef* f = find_method(dex, "LSnake;", "f");
  ASSERT_NE(method_code(dex, *f), nullptr);
  EXPECT_EQ(method_code(dex, *f)->insns, std::vector<uint16_t>{0x000e});
  EXPECT_EQ(method_code(dex, *f)->ins_size, 1);  // this
}

TEST(MethodCode, TriesAndHandlers) {
  ClassSpec c;
  c.descriptor = "LT;";
  c.methods.push_back({"div", "(II)I", testing::kAccPublic | kAccStatic, 3, R"(
    :start
    div-int v0, v1, v2
    :end
    return v0
    :handler
    move-exception v0
    const/4 v0, -1
    return v0
    :any
    move-exception v0
    throw v0
    .catch Ljava/lang/ArithmeticException; {:start .. :end} :handler
    .catchall {:start .. :end} :any
  )"});
  DexBuilder b;
  b.add_class(c);
  const DexFile dex = parse_dex(b.build());
  const CodeItem& code = *method_code(dex, dex.class_defs()[0].direct_methods[0]);
  ASSERT_EQ(code.tries.size(), 1u);
  EXPECT_EQ(code.tries[0].start_address, 0u);
  EXPECT_EQ(code.tries[0].instruction_count, 2u);
  ASSERT_EQ(code.tries[0].handlers.size(), 2u);
  EXPECT_EQ(code.tries[0].handlers[0].exception_type, "Ljava/lang/ArithmeticException;");
  EXPECT_EQ(code.tries[0].handlers[0].address, 3u);
  EXPECT_FALSE(code.tries[0].handlers[1].exception_type.has_value());
  EXPECT_EQ(code.tries[0].handlers[1].address, 6u);
}

TEST(Mutf8, Decoding) {
  const uint8_t nul[] = {0xc0, 0x80};
  EXPECT_EQ(decode_mutf8(nul, 1), std::string("\0", 1));
  // U+1F600 as a surrogate pair becomes one 4-byte UTF-8 sequence.
  const uint8_t pair[] = {0xed, 0xa0, 0xbd, 0xed, 0xb8, 0x80};
  EXPECT_EQ(decode_mutf8(pair, 2), "\xf0\x9f\x98\x80");
  const uint8_t e_acute[] = {0xc3, 0xa9};
  EXPECT_EQ(decode_mutf8(e_acute, 1), "\xc3\xa9");
  const uint8_t bad[] = {0x80};
  EXPECT_EQ(error_of([&] { decode_mutf8(bad, 1); }), ErrorCode::kBadString);
  const uint8_t ascii[] = {'a', 'b'};
  EXPECT_EQ(error_of([&] { decode_mutf8(ascii, 3); }), ErrorCode::kBadString);
}

TEST(Mutf8, BuilderRoundtrip) {
  DexBuilder b;
  b.add_string(std::string("nul\0inside", 10)).add_string("caf\xc3\xa9").add_string("\xf0\x9f\x98\x80");
  const DexFile dex = parse_dex(b.build());
  std::vector<std::string> want = {std::string("nul\0inside", 10), "caf\xc3\xa9", "\xf0\x9f\x98\x80"};
  std::sort(want.begin(), want.end());
  EXPECT_EQ(dex.strings(), want);
}

TEST(Descriptors, Grammar) {
  EXPECT_TRUE(is_valid_descriptor("I"));
  EXPECT_TRUE(is_valid_descriptor("[J"));
  EXPECT_TRUE(is_valid_descriptor("Lpkg/Cls;"));
  EXPECT_TRUE(is_valid_descriptor("[[Ljava/lang/String;"));
  EXPECT_FALSE(is_valid_descriptor("V"));
  EXPECT_TRUE(is_valid_descriptor("V", true));
  EXPECT_FALSE(is_valid_descriptor("[V", true));
  EXPECT_FALSE(is_valid_descriptor("L;"));
  EXPECT_FALSE(is_valid_descriptor("Lpkg/Cls"));
  EXPECT_FALSE(is_valid_descriptor("Q"));
  EXPECT_FALSE(is_valid_descriptor(""));
  EXPECT_EQ(descriptor_to_class_name("Lpkg/Cls;"), "pkg.Cls");
}

// Random class models survive build -> parse with pools, structure and
// instruction units intact, and every stored index resolves.
TEST(ParseDex, RandomModelsRoundtrip) {
  std::mt19937_64 rng(35);
  static const char* kTypes[] = {"I", "J", "Z", "D", "F", "Ljava/lang/String;", "[I", "[[LFoo;"};
  for (int iter = 0; iter < 60; ++iter) {
    std::vector<ClassSpec> specs;
    const int classes = 1 + static_cast<int>(rng() % 4);
    for (int ci = 0; ci < classes; ++ci) {
      ClassSpec c;
      c.descriptor = "Lgen/C" + std::to_string(ci) + ";";
      if (ci > 0 && rng() % 2) c.superclass = "Lgen/C" + std::to_string(rng() % ci) + ";";
      if (rng() % 3 == 0) c.interfaces = {"Ljava/lang/Runnable;"};
      for (int f = 0; f < static_cast<int>(rng() % 4); ++f) {
        (rng() % 2 ? c.static_fields : c.instance_fields).push_back({"f" + std::to_string(f), kTypes[rng() % 8]});
      }
      for (int m = 0; m < static_cast<int>(rng() % 5); ++m) {
        MethodSpec ms;
        ms.name = "m" + std::to_string(m);
        std::string sig = "(";
        for (int p = 0; p < static_cast<int>(rng() % 3); ++p) sig += kTypes[rng() % 8];
        ms.signature = sig + ")V";
        ms.access = rng() % 2 ? testing::kAccPublic | kAccStatic : testing::kAccPublic;
        ms.registers = 8;
        ms.raw_units = isa::encode(testing::random_stream(rng, 1 + rng() % 10));
        c.methods.push_back(ms);
      }
      specs.push_back(c);
    }
    DexBuilder b;
    for (const auto& s : specs) b.add_class(s);
    const DexFile dex = parse_dex(b.build());
    ASSERT_EQ(dex.class_defs().size(), specs.size());
    for (const ClassSpec& s : specs) {
      const auto it = std::find_if(dex.class_defs().begin(), dex.class_defs().end(),
                                   [&](const ClassDef& c) { return c.this_type == s.descriptor; });
      ASSERT_NE(it, dex.class_defs().end());
      EXPECT_EQ(it->superclass, s.superclass);
      EXPECT_EQ(it->interfaces, s.interfaces);
      EXPECT_EQ(it->static_fields.size(), s.static_fields.size());
      EXPECT_EQ(it->instance_fields.size(), s.instance_fields.size());
      EXPECT_EQ(it->direct_methods.size() + it->virtual_methods.size(), s.methods.size());
      for (const MethodSpec& m : s.methods) {
        const MethodDef* def = find_method(dex, s.descriptor, m.name);
        ASSERT_NE(def, nullptr);
        EXPECT_EQ(resolve_method(dex, def->method_idx).proto.descriptor(), m.signature);
        EXPECT_EQ(def->is_static(), (m.access & kAccStatic) != 0);
        ASSERT_NE(method_code(dex, *def), nullptr);
        EXPECT_EQ(method_code(dex, *def)->insns, *m.raw_units);
      }
    }
    // Full-model walk: every referenced descriptor is well formed.
    for (const auto& t : dex.types()) EXPECT_TRUE(is_valid_descriptor(t, true)) << t;
    for (const auto& f : dex.fields()) EXPECT_TRUE(is_valid_descriptor(f.type)) << f.to_string();
    for (const auto& m : dex.methods()) {
      EXPECT_TRUE(is_valid_descriptor(m.owner));
      EXPECT_TRUE(is_valid_descriptor(m.proto.return_type, true));
    }
    for (uint32_t i = 0; i < dex.protos().size(); ++i) EXPECT_NO_THROW(resolve_proto(dex, i));
  }
}

TEST(ReadDexFile, MissingPathIsIoError) {
  EXPECT_EQ(error_of([] { read_dex_file("/nonexistent/dir/x.dex"); }), ErrorCode::kIo);
  const std::string path = testing::write_temp(testing::minimal_dex(), "minimal.dex");
  EXPECT_EQ(read_dex_file(path).class_defs().size(), 1u);
}

}  // namespace
}  // namespace dexlift::dex
