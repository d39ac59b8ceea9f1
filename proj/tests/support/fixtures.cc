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

#include "fixtures.h"

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "dexlift/lift/lifter.h"

namespace dexlift::testing {

const char kAppleLoopCode[] = R"(
    const/4 v1, 1
    const/4 v0, 0
    :loop
    if-eqz v0, :check
    new-instance v0, LCoordinate;
    invoke-direct {v0, v1, v1}, LCoordinate;.<init>:(II)V
    goto :loop
    :check
    if-nez v0, :done
    invoke-static {}, LSnake;.onMissing:()V
    nop
    nop
    nop
    nop
    :done
    return-void
)";

ClassSpec coordinate_class() {
  ClassSpec c;
  c.descriptor = "LCoordinate;";
  c.instance_fields = {{"x", "I"}, {"y", "I"}};
  c.methods.push_back({"<init>", "(II)V", kAccPublic, 3, R"(
    invoke-direct {v0}, Ljava/lang/Object;.<init>:()V
    iput v1, v0, LCoordinate;.x:I
    iput v2, v0, LCoordinate;.y:I
    return-void
  )"});
  return c;
}

ClassSpec snake_class() {
  ClassSpec c;
  c.descriptor = "LSnake;";
  c.methods.push_back({"addRandomApple", "()V", kAccPublic | dex::kAccStatic, 2, kAppleLoopCode});
  c.methods.push_back({"onMissing", "()V", kAccPublic | dex::kAccStatic, 0, "return-void\n"});
  c.methods.push_back({"f", "()V", kAccPublic, 1, "return-void\n"});
  return c;
}

std::vector<uint8_t> snake_dex() {
  ClassSpec shape;
  shape.descriptor = "LShape;";
  shape.access = kAccPublic | dex::kAccAbstract;
  shape.methods.push_back({"area", "()I", kAccPublic | dex::kAccAbstract, 0, ""});
  DexBuilder b;
  b.add_class(coordinate_class()).add_class(snake_class()).add_class(shape);
  return b.build();
}

std::vector<uint8_t> app_dex() {
  ClassSpec c;
  c.descriptor = "LApp;";
  c.methods.push_back({"main", "([Ljava/lang/String;)V", kAccPublic | dex::kAccStatic, 3, R"(
    new-instance v0, LApp;
    invoke-direct {v0}, LApp;.<init>:()V
    invoke-virtual {v0}, LApp;.run:()V
    const/4 v1, 5
    invoke-static {v1}, LApp;.helper:(I)I
    move-result v1
    invoke-static {}, Ljava/lang/System;.nanoTime:()J
    return-void
  )"});
  c.methods.push_back({"<init>", "()V", kAccPublic | dex::kAccConstructor, 1, R"(
    invoke-direct {v0}, Ljava/lang/Object;.<init>:()V
    return-void
  )"});
  c.methods.push_back({"run", "()V", kAccPublic, 3, R"(
    const/4 v0, 0
    :loop
    const/4 v1, 3
    if-ge v0, v1, :done
    :try_start
    invoke-static {v0}, LApp;.helper:(I)I
    :try_end
    move-result v1
    add-int/lit8 v0, v0, 1
    goto :loop
    :done
    return-void
    :handler
    move-exception v1
    invoke-static {}, LApp;.leaf:()I
    return-void
    .catchall {:try_start .. :try_end} :handler
  )"});
  c.methods.push_back({"helper", "(I)I", kAccPublic | dex::kAccStatic, 2, R"(
    if-lez v1, :base
    add-int/lit8 v0, v1, -1
    invoke-static {v0}, LApp;.helper:(I)I
    move-result v0
    add-int/2addr v0, v1
    return v0
    :base
    const/4 v0, 0
    return v0
  )"});
  c.methods.push_back({"leaf", "()I", kAccPublic | dex::kAccStatic, 1, "const/16 v0, 42\nreturn v0\n"});
  DexBuilder b;
  b.add_class(c);
  return b.build();
}

std::vector<uint8_t> minimal_dex() {
  ClassSpec c;
  c.descriptor = "LMinimal;";
  DexBuilder b;
  b.add_class(c);
  return b.build();
}

std::vector<uint8_t> single_method_dex(const std::string& signature, uint16_t registers, const std::string& code,
                                       const std::string& name, const std::string& owner) {
  ClassSpec c;
  c.descriptor = owner;
  c.methods.push_back({name, signature, kAccPublic | dex::kAccStatic, registers, code});
  DexBuilder b;
  b.add_class(c);
  return b.build();
}

std::string write_temp(const std::vector<uint8_t>& bytes, const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("dexlift_test_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  return path.string();
}

const dex::MethodDef& find_method(const dex::DexFile& dex, const std::string& owner, const std::string& name) {
  for (const auto& c : dex.class_defs()) {
    if (c.this_type != owner) continue;
    for (const auto* list : {&c.direct_methods, &c.virtual_methods}) {
      for (const auto& m : *list) {
        if (dex::resolve_method(dex, m.method_idx).name == name) return m;
      }
    }
  }
  throw std::runtime_error("no method " + owner + "." + name);
}

ir::Body lift_named(const dex::DexFile& dex, const std::string& owner, const std::string& name) {
  const auto& m = find_method(dex, owner, name);
  return lift::lift_method(dex, m, m.code.value());
}

ir::Body lift_snippet(const std::string& signature, uint16_t registers, const std::string& code) {
  const auto bytes = single_method_dex(signature, registers, code);
  const auto dex = dex::parse_dex(bytes);
  return lift_named(dex, "LT;", "run");
}

}  // namespace dexlift::testing
