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

#include <random>
#include <set>
#include <sstream>

#include "dexlift/error.h"
#include "dexlift/ir/text.h"
#include "dexlift/ir/validate.h"
#include "dexlift/isa/instruction.h"
#include "dexlift/lift/lifter.h"
#include "coverage.h"
#include "fixtures.h"
#include "generators.h"

namespace dexlift {
namespace {

using ir::StmtKind;
using testing::lift_snippet;

std::vector<StmtKind> kinds_after_prelude(const ir::Body& body) {
  std::vector<StmtKind> out;
  for (size_t i = 1; i < body.statements.size(); ++i) {
    if (body.statements[i]->kind() == StmtKind::kIdentity &&
        body.statements[i]->as<ir::IdentityStmt>()->source != ir::IdentityKind::kCaughtException) {
      continue;
    }
    out.push_back(body.statements[i]->kind());
  }
  return out;
}

size_t index_of(const ir::Body& body, const ir::Statement* s) { return body.index_map().at(s); }

ErrorCode lift_error(const std::string& sig, uint16_t regs, const std::string& code) {
  try {
    lift_snippet(sig, regs, code);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "lifting succeeded";
  return ErrorCode::kIo;
}

TEST(MappingTable, OneRowPerStandardOpcode) {
  const auto& rows = lift::mapping_table();
  EXPECT_EQ(rows.size(), 218u);
  std::set<uint8_t> seen;
  for (const auto& r : rows) {
    EXPECT_TRUE(seen.insert(r.opcode).second);
    EXPECT_EQ(isa::opcode_info(r.opcode).mnemonic, r.mnemonic);
    EXPECT_EQ(isa::opcode_info(r.opcode).kind, isa::OpKind::kNormal);
  }
}

TEST(MappingTable, RejectsOdexAndUnused) {
  try {
    lift::mapping_for(0xf2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnsupportedOpcode);
    EXPECT_EQ(e.opcode, 0xf2);
  }
  try {
    lift::mapping_for(0x3e);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownOpcode);
  }
  EXPECT_EQ(lift::mapping_for(0xd1).op, "rsub");
}

TEST(Lifter, AppleLoopShape) {
  const auto dex = dex::parse_dex(testing::snake_dex());
  const ir::Body body = testing::lift_named(dex, "LSnake;", "addRandomApple");
  using K = StmtKind;
  EXPECT_EQ(kinds_after_prelude(body), (std::vector<K>{K::kAssign, K::kAssign, K::kIf, K::kAssign, K::kInvoke,
                                                       K::kGoto, K::kIf, K::kInvoke, K::kReturnVoid}));
  EXPECT_EQ(body.statements[0]->kind(), K::kNop);
  EXPECT_TRUE(ir::validate(body, ir::Stage::kLifted).empty());

  // goto 0002 reaches the first if; if-eqz reaches the second one.
  const auto* go = body.statements[6]->as<ir::GotoStmt>();
  ASSERT_NE(go, nullptr);
  EXPECT_EQ(index_of(body, go->target), 3u);
  EXPECT_EQ(index_of(body, body.statements[3]->as<ir::IfStmt>()->target), 7u);
  // The trailing nops map onto return-void, the if-nez target.
  EXPECT_EQ(index_of(body, body.statements[7]->as<ir::IfStmt>()->target), 9u);

  // Every instruction address has an entry.
  const std::vector<uint32_t> addresses = {0x0, 0x1, 0x2, 0x4, 0x6, 0x9, 0xa, 0xc, 0xf, 0x10, 0x11, 0x12, 0x13};
  ASSERT_EQ(body.addr_map.size(), addresses.size());
  for (uint32_t a : addresses) EXPECT_TRUE(body.addr_map.count(a)) << a;
  EXPECT_EQ(body.addr_map.at(0xf), body.addr_map.at(0x13));

  // The two constants are provisional.
  EXPECT_TRUE(body.statements[1]->as<ir::AssignStmt>()->provisional);
  EXPECT_TRUE(body.statements[2]->as<ir::AssignStmt>()->provisional);
}

TEST(Lifter, IdentityPrefixFollowsSignature) {
  const auto dex = dex::parse_dex(testing::snake_dex());
  const ir::Body body = testing::lift_named(dex, "LCoordinate;", "<init>");
  ASSERT_GE(body.statements.size(), 4u);
  const auto* self = body.statements[1]->as<ir::IdentityStmt>();
  ASSERT_NE(self, nullptr);
  EXPECT_EQ(self->source, ir::IdentityKind::kThis);
  EXPECT_EQ(body.locals[self->target].type, ir::IrType::ref("LCoordinate;"));
  for (uint32_t p = 0; p < 2; ++p) {
    const auto* id = body.statements[2 + p]->as<ir::IdentityStmt>();
    ASSERT_NE(id, nullptr);
    EXPECT_EQ(id->source, ir::IdentityKind::kParameter);
    EXPECT_EQ(id->parameter, p);
    EXPECT_EQ(body.locals[id->target].type, ir::IrType::int_());
  }
}

TEST(Lifter, UnusedParametersStillBound) {
  const ir::Body body = lift_snippet("(JLjava/lang/String;)V", 3, "return-void\n");
  EXPECT_EQ(body.statements[1]->as<ir::IdentityStmt>()->parameter, 0u);
  EXPECT_EQ(body.statements[2]->as<ir::IdentityStmt>()->parameter, 1u);
  EXPECT_EQ(body.locals[body.statements[1]->as<ir::IdentityStmt>()->target].type, ir::IrType::long_());
}

TEST(Lifter, SplitsIndependentWebs) {
  const ir::Body body = lift_snippet("()Ljava/lang/Object;", 1, R"(
    const/4 v0, 7
    add-int/lit8 v0, v0, 1
    const-string v0, "s"
    return-object v0
  )");
  std::set<std::string> names;
  for (const auto& l : body.locals) names.insert(l.name);
  EXPECT_EQ(names, (std::set<std::string>{"v0", "v0_2", "v0_3"}));
  EXPECT_TRUE(ir::validate(body, ir::Stage::kLifted).empty());
}

TEST(Lifter, MergesDefinitionsMeetingAtAUse) {
  const ir::Body body = lift_snippet("(I)I", 2, R"(
    if-eqz v1, :else
    const/4 v0, 1
    goto :join
    :else
    const/4 v0, 2
    :join
    return v0
  )");
  const auto* a = body.statements[3]->as<ir::AssignStmt>();
  const auto* b = body.statements[5]->as<ir::AssignStmt>();
  ASSERT_NE(a, nullptr);
  ASSERT_NE(b, nullptr);
  EXPECT_EQ(std::get<ir::LocalRef>(a->target), std::get<ir::LocalRef>(b->target));
  EXPECT_EQ(body.locals.size(), 2u);
}

TEST(Lifter, WebsFollowExceptionalEdges) {
  // v0 defined before and inside the try; both reach the handler's use.
  const ir::Body body = lift_snippet("()I", 2, R"(
    const/4 v0, 1
    :start
    invoke-static {}, LT;.g:()V
    const/4 v0, 2
    invoke-static {}, LT;.g:()V
    :end
    return v0
    :handler
    move-exception v1
    return v0
    .catchall {:start .. :end} :handler
  )");
  EXPECT_TRUE(ir::validate(body, ir::Stage::kLifted).empty());
  std::set<ir::LocalId> targets;
  for (const auto& s : body.statements) {
    if (const auto* a = s->as<ir::AssignStmt>()) targets.insert(std::get<ir::LocalRef>(a->target).id);
  }
  EXPECT_EQ(targets.size(), 1u);
}

TEST(Lifter, InvokeBindsMoveResult) {
  const ir::Body body = lift_snippet("()I", 1, R"(
    invoke-static {}, LT;.g:()I
    nop
    move-result v0
    return v0
  )");
  const auto* inv = body.statements[1]->as<ir::InvokeStmt>();
  ASSERT_NE(inv, nullptr);
  ASSERT_TRUE(inv->result.has_value());
  const auto* ret = body.statements[2]->as<ir::ReturnStmt>();
  ASSERT_NE(ret, nullptr);
  EXPECT_EQ(std::get<ir::LocalRef>(ret->value).id, *inv->result);
  EXPECT_EQ(body.addr_map.at(3), body.statements[2].get());
  EXPECT_EQ(body.addr_map.at(4), body.statements[2].get());
}

TEST(Lifter, WideArgumentsUseLowRegister) {
  const ir::Body body = lift_snippet("(JI)V", 3, R"(
    invoke-static {v0, v1, v2}, LT;.h:(JI)V
    return-void
  )");
  const auto* inv = body.statements[3]->as<ir::InvokeStmt>();
  ASSERT_NE(inv, nullptr);
  ASSERT_EQ(inv->args.size(), 2u);
  EXPECT_EQ(body.locals[std::get<ir::LocalRef>(inv->args[0]).id].name, "v0");
  EXPECT_EQ(body.locals[std::get<ir::LocalRef>(inv->args[1]).id].name, "v2");
}

TEST(Lifter, OrphanMoveResult) {
  EXPECT_EQ(lift_error("()I", 1, "const/4 v0, 0\nmove-result v0\nreturn v0\n"), ErrorCode::kOrphanMoveResult);
}

TEST(Lifter, RegisterOutsideFrame) {
  EXPECT_EQ(lift_error("()V", 1, "const/4 v3, 0\nreturn-void\n"), ErrorCode::kBadRegister);
  EXPECT_EQ(lift_error("()J", 1, "const-wide/16 v0, 1\nreturn-wide v0\n"), ErrorCode::kBadRegister);
}

TEST(Lifter, BranchIntoInstructionMiddleDangles) {
  testing::ClassSpec c;
  c.descriptor = "LT;";
  testing::MethodSpec m;
  m.name = "run";
  m.signature = "()V";
  m.access = testing::kAccPublic | dex::kAccStatic;
  m.registers = 1;
  m.raw_units = {0x0228, 0x0013, 0x0005, 0x000e};  // goto +2 lands on const/16's literal
  c.methods.push_back(m);
  testing::DexBuilder b;
  b.add_class(c);
  const auto dex = dex::parse_dex(b.build());
  try {
    testing::lift_named(dex, "LT;", "run");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDanglingTarget);
    EXPECT_EQ(e.method, "LT;.run:()V");
  }
}

TEST(Lifter, OdexOpcodeNamesMethod) {
  testing::ClassSpec c;
  c.descriptor = "LT;";
  testing::MethodSpec m;
  m.name = "run";
  m.signature = "()V";
  m.access = testing::kAccPublic | dex::kAccStatic;
  m.registers = 2;
  m.raw_units = {0x10f2, 0x0008, 0x000e};  // iget-quick v0, v1, [obj+8]
  c.methods.push_back(m);
  testing::DexBuilder b;
  b.add_class(c);
  const auto dex = dex::parse_dex(b.build());
  try {
    testing::lift_named(dex, "LT;", "run");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnsupportedOpcode);
    EXPECT_EQ(e.opcode, 0xf2);
    EXPECT_EQ(e.address, 0u);
    EXPECT_EQ(e.method, "LT;.run:()V");
  }
}

TEST(Lifter, PackedSwitchDefaultsToNextInstruction) {
  const ir::Body body = lift_snippet("(I)I", 1, R"(
    packed-switch v0, :table
    const/4 v0, 0
    return v0
    :a
    const/4 v0, 1
    return v0
    :b
    const/4 v0, 2
    return v0
    :table
    .packed-switch 10
      :a
      :b
    .end packed-switch
  )");
  const auto* sw = body.statements[2]->as<ir::TableSwitchStmt>();
  ASSERT_NE(sw, nullptr);
  EXPECT_EQ(sw->first_key, 10);
  ASSERT_EQ(sw->targets.size(), 2u);
  EXPECT_EQ(index_of(body, sw->targets[0]), 5u);
  EXPECT_EQ(index_of(body, sw->targets[1]), 7u);
  EXPECT_EQ(index_of(body, sw->default_target), 3u);
  EXPECT_TRUE(ir::validate(body, ir::Stage::kLifted).empty());
}

TEST(Lifter, SparseSwitch) {
  const ir::Body body = lift_snippet("(I)V", 1, R"(
    sparse-switch v0, :table
    return-void
    :a
    return-void
    :table
    .sparse-switch
      -5 -> :a
      100 -> :a
    .end sparse-switch
  )");
  const auto* sw = body.statements[2]->as<ir::LookupSwitchStmt>();
  ASSERT_NE(sw, nullptr);
  EXPECT_EQ(sw->keys, (std::vector<int32_t>{-5, 100}));
  EXPECT_EQ(index_of(body, sw->targets[1]), 4u);
}

TEST(Lifter, FillArrayDataStoresRawElements) {
  const ir::Body body = lift_snippet("()V", 2, R"(
    const/4 v1, 3
    new-array v0, v1, [S
    fill-array-data v0, :data
    return-void
    :data
    .array-data 2
      1 -2 3
    .end array-data
  )");
  size_t stores = 0;
  for (const auto& s : body.statements) {
    const auto* a = s->as<ir::AssignStmt>();
    if (a == nullptr || !std::holds_alternative<ir::ArrayAccess>(a->target)) continue;
    EXPECT_TRUE(a->provisional);
    const auto& v = std::get<ir::IntConstant>(std::get<ir::Immediate>(a->value));
    if (stores == 1) EXPECT_EQ(v.value, 0xfffe);
    ++stores;
  }
  EXPECT_EQ(stores, 3u);
}

TEST(Lifter, EmptyFillArrayDataIsNop) {
  const ir::Body body = lift_snippet("()V", 2, R"(
    const/4 v1, 0
    new-array v0, v1, [I
    fill-array-data v0, :data
    return-void
    :data
    .array-data 4
    .end array-data
  )");
  EXPECT_EQ(body.statements[3]->kind(), StmtKind::kNop);
  EXPECT_EQ(body.addr_map.at(3), body.statements[3].get());
}

TEST(Lifter, FilledNewArrayWithAndWithoutResult) {
  const ir::Body bound = lift_snippet("(II)[I", 3, R"(
    filled-new-array {v1, v2}, [I
    move-result-object v0
    return-object v0
  )");
  const auto* alloc = bound.statements[3]->as<ir::AssignStmt>();
  ASSERT_NE(alloc, nullptr);
  EXPECT_TRUE(std::holds_alternative<ir::NewArray>(alloc->value));
  EXPECT_EQ(bound.statements[6]->kind(), StmtKind::kReturn);

  const ir::Body unbound = lift_snippet("(I)V", 1, R"(
    filled-new-array {v0}, [I
    return-void
  )");
  EXPECT_EQ(unbound.locals.back().name.rfind("tmp", 0), 0u);
  EXPECT_TRUE(ir::validate(unbound, ir::Stage::kLifted).empty());
}

TEST(Lifter, NotAndReverseSubtract) {
  const ir::Body body = lift_snippet("(I)I", 2, R"(
    not-int v0, v1
    rsub-int v0, v0, 10
    return v0
  )");
  const auto& x = std::get<ir::BinaryOp>(body.statements[2]->as<ir::AssignStmt>()->value);
  EXPECT_EQ(x.op, ir::BinOp::kXor);
  EXPECT_EQ(std::get<ir::IntConstant>(x.rhs).value, -1);
  const auto& r = std::get<ir::BinaryOp>(body.statements[3]->as<ir::AssignStmt>()->value);
  EXPECT_EQ(r.op, ir::BinOp::kSub);
  EXPECT_EQ(std::get<ir::IntConstant>(r.lhs).value, 10);
}

TEST(Lifter, TrapsAndCaughtException) {
  const ir::Body body = lift_snippet("()V", 1, R"(
    :start
    invoke-static {}, LT;.g:()V
    invoke-static {}, LT;.g:()V
    :end
    return-void
    :handler
    move-exception v0
    throw v0
    .catch Ljava/lang/RuntimeException; {:start .. :end} :handler
  )");
  ASSERT_EQ(body.traps.size(), 1u);
  const auto& t = body.traps[0];
  EXPECT_EQ(index_of(body, t.first), 1u);
  EXPECT_EQ(index_of(body, t.last), 2u);
  EXPECT_EQ(t.exception_type, "Ljava/lang/RuntimeException;");
  const auto* id = t.handler->as<ir::IdentityStmt>();
  ASSERT_NE(id, nullptr);
  EXPECT_EQ(id->source, ir::IdentityKind::kCaughtException);
  EXPECT_TRUE(ir::validate(body, ir::Stage::kLifted).empty());
}

TEST(Lifter, TextRoundTrip) {
  const auto dex = dex::parse_dex(testing::snake_dex());
  for (const auto& [owner, name] : std::vector<std::pair<std::string, std::string>>{
           {"LSnake;", "addRandomApple"}, {"LCoordinate;", "<init>"}, {"LSnake;", "f"}}) {
    const std::string text = ir::emit_text(testing::lift_named(dex, owner, name));
    EXPECT_EQ(ir::emit_text(ir::parse_text(text)), text);
  }
}

TEST(MappingTable, EveryStandardOpcodeLifts) {
  const auto bytes = testing::coverage_dex();
  const auto dex = dex::parse_dex(bytes);
  std::set<uint8_t> lifted;
  for (uint8_t op : testing::normal_opcodes()) {
    char name[16];
    std::snprintf(name, sizeof name, "op_%02x", op);
    SCOPED_TRACE(name);
    const auto& m = testing::find_method(dex, "LCov;", name);
    const ir::Body body = lift::lift_method(dex, m, *m.code);
    EXPECT_TRUE(ir::validate(body, ir::Stage::kLifted).empty());
    for (const auto& ins : isa::decode_stream(m.code->insns)) {
      if (ins.is_payload || ins.opcode != op) continue;
      ASSERT_TRUE(body.addr_map.count(ins.address));
      const ir::Statement* s = body.addr_map.at(ins.address);
      // nop and move-result emit nothing and map to the next statement.
      if (op != 0x00 && !(op >= 0x0a && op <= 0x0c)) EXPECT_EQ(s->address, ins.address);
      lifted.insert(op);
    }
  }
  EXPECT_EQ(lifted.size(), lift::mapping_table().size());
}

TEST(LifterProperty, RandomProgramsLiftToValidBodies) {
  std::mt19937_64 rng(1234);
  for (int iter = 0; iter < 200; ++iter) {
    const std::string code = testing::random_int_program(rng, 2 + static_cast<int>(rng() % 6));
    SCOPED_TRACE(code);
    const auto bytes = testing::single_method_dex("()I", 4, code);
    const auto dex = dex::parse_dex(bytes);
    const auto& m = testing::find_method(dex, "LT;", "run");
    const ir::Body body = lift::lift_method(dex, m, *m.code);

    EXPECT_TRUE(ir::validate(body, ir::Stage::kLifted).empty());
    size_t lifted = 0;
    for (const auto& ins : isa::decode_stream(m.code->insns)) {
      if (ins.is_payload) continue;
      ++lifted;
      ASSERT_TRUE(body.addr_map.count(ins.address)) << ins.address;
      const ir::Statement* s = body.addr_map.at(ins.address);
      // Mapped to its own statement or a later one; trailing statement-less
      // instructions fall back to the last statement.
      if (s->address && *s->address < ins.address) EXPECT_EQ(s, body.statements.back().get());
    }
    EXPECT_EQ(body.addr_map.size(), lifted);
    // Only a real branch to address 0 may target the entry Nop.
    for (const auto& s : body.statements) {
      for (auto* const* t : ir::branch_targets(*s)) EXPECT_NE(*t, body.statements[0].get());
    }
    const std::string text = ir::emit_text(body);
    EXPECT_EQ(ir::emit_text(ir::parse_text(text)), text);
  }
}

}  // namespace
}  // namespace dexlift
