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

#include "generators.h"

#include <algorithm>
#include <sstream>
#include <vector>

namespace dexlift::testing {
namespace {

using isa::Format;

int64_t signed_bits(std::mt19937_64& rng, int bits) {
  if (bits >= 64) return static_cast<int64_t>(rng());
  const int64_t lo = -(int64_t{1} << (bits - 1));
  const int64_t hi = (int64_t{1} << (bits - 1)) - 1;
  return std::uniform_int_distribution<int64_t>(lo, hi)(rng);
}

uint32_t reg(std::mt19937_64& rng, int bits) {
  const uint32_t max = bits >= 16 ? 0xffff : (uint32_t{1} << bits) - 1;
  // Bias toward small registers so the common encodings are exercised too.
  if (rng() % 2) return static_cast<uint32_t>(rng() % std::min<uint32_t>(max + 1, 16));
  return static_cast<uint32_t>(rng() % (uint64_t{max} + 1));
}

bool is_payload_owner(uint8_t op) { return op == 0x26 || op == 0x2b || op == 0x2c; }

isa::Payload random_payload(std::mt19937_64& rng, uint8_t owner) {
  if (owner == 0x26) {
    static constexpr uint16_t kWidths[] = {1, 2, 4, 8};
    isa::FillArrayPayload p;
    p.element_width = kWidths[rng() % 4];
    const size_t count = rng() % 6;
    for (size_t i = 0; i < count * p.element_width; ++i) p.data.push_back(static_cast<uint8_t>(rng()));
    return p;
  }
  isa::SwitchPayload p;
  p.packed = owner == 0x2b;
  const size_t count = rng() % 5;
  if (p.packed) {
    p.first_key = static_cast<int32_t>(signed_bits(rng, 16));
  } else {
    int32_t key = static_cast<int32_t>(signed_bits(rng, 20));
    for (size_t i = 0; i < count; ++i) {
      p.keys.push_back(key);
      key += 1 + static_cast<int32_t>(rng() % 1000);
    }
  }
  p.targets.assign(count, 0);
  return p;
}

}  // namespace

std::vector<uint8_t> normal_opcodes() {
  std::vector<uint8_t> out;
  for (int v = 0; v < 256; ++v) {
    if (isa::opcode_info(static_cast<uint8_t>(v)).kind == isa::OpKind::kNormal) out.push_back(static_cast<uint8_t>(v));
  }
  return out;
}

isa::Instruction random_instruction(std::mt19937_64& rng, uint8_t opcode) {
  const isa::Opcode& info = isa::opcode_info(opcode);
  const isa::FormatShape shape = isa::format_shape(info.format);
  isa::Instruction ins;
  ins.opcode = opcode;
  ins.width = static_cast<uint32_t>(isa::format_width(info.format));
  if (info.format == Format::k35c) {
    const size_t n = rng() % 6;
    for (size_t i = 0; i < n; ++i) ins.registers.push_back(reg(rng, 4));
  } else if (info.format == Format::k3rc) {
    const uint32_t n = static_cast<uint32_t>(rng() % 9);
    const uint32_t base = static_cast<uint32_t>(rng() % (0x10000 - n));
    for (uint32_t i = 0; i < n; ++i) ins.registers.push_back(base + i);
  } else {
    for (int i = 0; i < shape.register_count; ++i) {
      ins.registers.push_back(reg(rng, i == 0 ? shape.register_bits : i == 1 ? shape.second_register_bits : 8));
    }
  }
  if (shape.has_literal) {
    switch (info.format) {
      case Format::k11n: ins.literal = signed_bits(rng, 4); break;
      case Format::k22b: ins.literal = signed_bits(rng, 8); break;
      case Format::k21s:
      case Format::k22s: ins.literal = signed_bits(rng, 16); break;
      case Format::k31i: ins.literal = signed_bits(rng, 32); break;
      case Format::k21h: {
        const uint64_t high = rng() & 0xffff;
        ins.literal = opcode == 0x15 ? int64_t{static_cast<int32_t>(static_cast<uint32_t>(high << 16))}
                                     : static_cast<int64_t>(high << 48);
        break;
      }
      default: ins.literal = signed_bits(rng, 64); break;
    }
  }
  if (shape.has_pool_index) {
    const uint32_t idx = info.format == Format::k31c ? static_cast<uint32_t>(rng()) : static_cast<uint32_t>(rng() & 0xffff);
    ins.pool_index = isa::PoolRef{info.pool, idx};
  }
  if (shape.has_branch) ins.branch_offset = 0;
  return ins;
}

std::vector<isa::Instruction> random_stream(std::mt19937_64& rng, size_t count) {
  static const std::vector<uint8_t> kOps = normal_opcodes();
  std::vector<isa::Instruction> code;
  uint32_t address = 0;
  for (size_t i = 0; i < count; ++i) {
    isa::Instruction ins = random_instruction(rng, kOps[rng() % kOps.size()]);
    ins.address = address;
    address += ins.width;
    code.push_back(std::move(ins));
  }
  // Plain branches aim at random instruction starts within field range.
  for (auto& ins : code) {
    if (!ins.branch_offset || is_payload_owner(ins.opcode)) continue;
    const int bits = ins.info().format == Format::k10t ? 8 : ins.info().format == Format::k30t ? 32 : 16;
    const auto& target = code[rng() % code.size()];
    const int64_t off = static_cast<int64_t>(target.address) - ins.address;
    const int64_t lim = int64_t{1} << (bits - 1);
    ins.branch_offset = static_cast<int32_t>((off >= -lim && off < lim) ? off : 0);
  }
  std::vector<isa::Instruction> payloads;
  for (auto& ins : code) {
    if (!is_payload_owner(ins.opcode)) continue;
    if (address % 2) {
      isa::Instruction pad;
      pad.address = address;
      pad.width = 1;
      payloads.push_back(pad);
      ++address;
    }
    isa::Instruction table;
    table.is_payload = true;
    table.address = address;
    table.payload = random_payload(rng, ins.opcode);
    if (auto* sw = std::get_if<isa::SwitchPayload>(&*table.payload)) {
      for (int32_t& t : sw->targets) {
        t = static_cast<int32_t>(static_cast<int64_t>(code[rng() % code.size()].address) - ins.address);
      }
    }
    table.width = isa::encoded_width(table);
    ins.branch_offset = static_cast<int32_t>(static_cast<int64_t>(address) - ins.address);
    address += table.width;
    payloads.push_back(std::move(table));
  }
  for (auto& p : payloads) code.push_back(std::move(p));
  isa::link_payloads(code);
  return code;
}

}  // namespace dexlift::testing

namespace dexlift::testing {
namespace {

template <typename T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& v) {
  return v[rng() % v.size()];
}

}  // namespace

TypedProgram random_typed_program(std::mt19937_64& rng, int blocks, bool acyclic) {
  TypedProgram p;
  std::ostringstream out;
  auto I = [&] { return pick<std::string>(rng, {"v0", "v1", "v11"}); };
  auto Idst = [&] { return pick<std::string>(rng, {"v0", "v1"}); };
  auto F = [&] { return pick<std::string>(rng, {"v2", "v3", "v12"}); };
  auto Fdst = [&] { return pick<std::string>(rng, {"v2", "v3"}); };
  auto R = [&] { return pick<std::string>(rng, {"v4", "v5"}); };
  auto lit4 = [&] { return std::to_string(static_cast<int>(rng() % 16) - 8); };
  auto float_bits = [&] {
    static const std::vector<std::string> bits = {"0x3f800000", "0x40490fdb", "0xbf000000", "0x7fc00000",
                                                  "0x00000001", "0x4b000000"};
    return pick(rng, bits);
  };
  auto double_bits = [&] {
    static const std::vector<std::string> bits = {"0x3ff0000000000000", "0x400921fb54442d18",
                                                  "0xc000000000000000", "0x0000000000000001"};
    return pick(rng, bits);
  };
  auto target = [&](int from) {
    int lo = acyclic ? from + 1 : 0;
    if (lo >= blocks) return std::string(":exit");
    return ":b" + std::to_string(lo + static_cast<int>(rng() % (blocks - lo)));
  };

  out << "const/4 v0, 0\nconst/4 v1, 1\nconst/4 v2, 0\nconst v3, " << float_bits() << "\n"
      << "const/4 v4, 0\nconst-string v5, \"dex\"\nconst-wide/16 v6, 3\nconst-wide v8, " << double_bits() << "\n";
  // Dispatch on the int parameter so that every block is reachable.
  out << "packed-switch v11, :dispatch\n";
  for (int b = 0; b < blocks; ++b) {
    out << ":b" << b << "\n";
    const int n = 1 + static_cast<int>(rng() % 5);
    for (int k = 0; k < n; ++k) {
      switch (rng() % 26) {
        case 0: out << "const/4 " << Idst() << ", " << lit4() << "\n"; break;
        case 1: out << "const/16 " << Idst() << ", " << static_cast<int>(rng() % 2000) - 1000 << "\n"; break;
        case 2: out << "add-int " << Idst() << ", " << I() << ", " << I() << "\n"; break;
        case 3: out << "mul-int/lit8 " << Idst() << ", " << I() << ", " << lit4() << "\n"; break;
        case 4: out << "xor-int/2addr " << Idst() << ", " << I() << "\n"; break;
        case 5: out << "const " << Fdst() << ", " << float_bits() << "\n"; break;
        case 6: out << "const/4 " << Fdst() << ", 0\n"; break;
        case 7: out << "add-float " << Fdst() << ", " << F() << ", " << F() << "\n"; break;
        case 8: out << "neg-float " << Fdst() << ", " << F() << "\n"; break;
        case 9: out << "cmpl-float " << Idst() << ", " << F() << ", " << F() << "\n"; break;
        case 10: out << "int-to-float " << Fdst() << ", " << I() << "\n"; break;
        case 11: out << "float-to-int " << Idst() << ", " << F() << "\n"; break;
        case 12: out << "const/4 " << R() << ", 0\n"; break;
        case 13: out << "const-string " << R() << ", \"s" << rng() % 3 << "\"\n"; break;
        case 14: out << "move-object " << R() << ", " << R() << "\n"; break;
        case 15:
          out << "invoke-virtual {" << R() << "}, Ljava/lang/String;.length:()I\nmove-result " << Idst() << "\n";
          break;
        case 16:
          out << "invoke-static {" << I() << "}, Ljava/lang/String;.valueOf:(I)Ljava/lang/String;\n"
              << "move-result-object " << R() << "\n";
          break;
        case 17: out << "const-wide/16 v6, " << lit4() << "\n"; break;
        case 18: out << "add-long v6, v6, v6\n"; break;
        case 19: out << "cmp-long " << Idst() << ", v6, v6\n"; break;
        case 20: out << "int-to-long v6, " << I() << "\n"; break;
        case 21: out << "const-wide v8, " << double_bits() << "\n"; break;
        case 22: out << "add-double v8, v8, v8\n"; break;
        case 23: out << "cmpg-double " << Idst() << ", v8, v8\n"; break;
        case 24: out << "if-" << pick<std::string>(rng, {"eqz", "nez"}) << " " << R() << ", " << target(b) << "\n"; break;
        case 25:
          if (rng() % 2) {
            out << "if-eq " << R() << ", " << R() << ", " << target(b) << "\n";
          } else {
            out << "if-" << pick<std::string>(rng, {"lt", "ge", "eq"}) << " " << I() << ", " << I() << ", "
                << target(b) << "\n";
          }
          break;
      }
    }
    switch (rng() % 4) {
      case 0: out << "return " << I() << "\n"; break;
      case 1:
        if (!acyclic || b + 1 < blocks) out << "goto " << target(b) << "\n";
        break;
      case 2: out << "if-gez " << I() << ", " << target(b) << "\n"; break;
      default: break;
    }
  }
  out << ":exit\nreturn v0\n";
  out << ":handler\nmove-exception v10\nconst/4 v0, -1\nreturn v0\n";
  out << ":dispatch\n.packed-switch 0\n";
  for (int b = 0; b < blocks; ++b) out << ":b" << b << "\n";
  out << ".end packed-switch\n";
  out << ".catchall {:b0 .. :" << (blocks > 2 ? "b2" : "exit") << "} :handler\n";
  p.code = out.str();
  return p;
}

std::string random_int_program(std::mt19937_64& rng, int blocks) {
  std::ostringstream out;
  auto reg = [&] { return "v" + std::to_string(rng() % 4); };
  auto label = [&] { return ":b" + std::to_string(rng() % blocks); };
  out << "const/4 v0, 0\nconst/4 v1, 1\nconst/4 v2, 2\nconst/4 v3, 3\n";
  bool switch_used = false;
  for (int b = 0; b < blocks; ++b) {
    out << ":b" << b << "\n";
    const int n = 1 + static_cast<int>(rng() % 4);
    for (int k = 0; k < n; ++k) {
      switch (rng() % 7) {
        case 0: out << "const/16 " << reg() << ", " << static_cast<int>(rng() % 200) - 100 << "\n"; break;
        case 1: out << "add-int " << reg() << ", " << reg() << ", " << reg() << "\n"; break;
        case 2: out << "mul-int/lit8 " << reg() << ", " << reg() << ", 3\n"; break;
        case 3: out << "if-lez " << reg() << ", " << label() << "\n"; break;
        case 4: out << "if-ne " << reg() << ", " << reg() << ", " << label() << "\n"; break;
        case 5: out << "invoke-static {" << reg() << "}, LT;.g:(I)V\n"; break;
        case 6: out << "nop\n"; break;
      }
    }
    switch (rng() % 4) {
      case 0: out << "return " << reg() << "\n"; break;
      case 1: out << "goto " << label() << "\n"; break;
      case 2:
        if (!switch_used) {
          out << "packed-switch " << reg() << ", :table\n";
          switch_used = true;
        }
        break;
      default: break;
    }
  }
  out << "return v0\n";
  if (switch_used) {
    out << ":table\n.packed-switch 0\n" << label() << "\n" << label() << "\n.end packed-switch\n";
  }
  out << ".catchall {:b0 .. :b1} " << label() << "\n";
  return out.str();
}

}  // namespace dexlift::testing
