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

#include "dexlift/error.h"
#include "dexlift/ir/cfg.h"
#include "dexlift/ir/text.h"
#include "dexlift/ir/validate.h"
#include "dexlift/lift/lifter.h"
#include "dexlift/passes/passes.h"
#include "fixtures.h"
#include "generators.h"

namespace dexlift::passes {
namespace {

using ir::Body;

TEST(EliminateNops, RetargetsJumpsTrapsAndAddresses) {
  Body b = ir::parse_text(
      "method V LA;.m(I) {\n"
      "  local v0: int\n"
      "  L0: nop\n"
      "  L1: v0 := @parameter0\n"
      "  L2: nop\n"
      "  L3: if v0 == 0 goto L2\n"
      "  L4: nop\n"
      "  L5: v0 = v0 + 1\n"
      "  L6: nop\n"
      "  L7: goto L0\n"
      "  catch * from L2 to L4 with L6\n"
      "  catch * from L4 to L4 with L6\n"
      "}\n");
  b.addr_map[0] = b.statements[2].get();
  b.addr_map[1] = b.statements[4].get();
  eliminate_nops(b);
  EXPECT_EQ(ir::emit_text(b),
            "method V LA;.m(I) {\n"
            "  local v0: int\n"
            "  L0: v0 := @parameter0\n"
            "  L1: if v0 == 0 goto L1\n"
            "  L2: v0 = v0 + 1\n"
            "  L3: goto L0\n"
            "  catch * from L1 to L1 with L3\n"
            "}\n");
  EXPECT_EQ(b.addr_map.at(0), b.statements[1].get());
  EXPECT_EQ(b.addr_map.at(1), b.statements[2].get());
  EXPECT_TRUE(ir::validate(b, ir::Stage::kLifted).empty());
}

TEST(EliminateNops, TrailingNopStays) {
  Body b = ir::parse_text(
      "method V LA;.m() {\n"
      "  L0: goto L1\n"
      "  L1: nop\n"
      "}\n");
  eliminate_nops(b);
  ASSERT_EQ(b.statements.size(), 2u);
  EXPECT_EQ(b.statements[0]->as<ir::GotoStmt>()->target, b.statements[1].get());
}

TEST(RemoveUnusedLocals, DropsAndRenumbers) {
  Body b = ir::parse_text(
      "method I LA;.m() {\n"
      "  local a: int\n"
      "  local dead: float\n"
      "  local b: int\n"
      "  L0: a = 1\n"
      "  L1: b = a * a\n"
      "  L2: return b\n"
      "}\n");
  remove_unused_locals(b);
  EXPECT_EQ(ir::emit_text(b),
            "method I LA;.m() {\n"
            "  local a: int\n"
            "  local b: int\n"
            "  L0: a = 1\n"
            "  L1: b = a * a\n"
            "  L2: return b\n"
            "}\n");
}

TEST(Pipeline, AppleLoopEndToEnd) {
  const auto dex = dex::parse_dex(testing::snake_dex());
  Body b = testing::lift_named(dex, "LSnake;", "addRandomApple");
  const PipelineReport report = run_pipeline(b);
  EXPECT_TRUE(report.clean());
  std::vector<std::string> stages;
  for (const auto& s : report.stages) stages.push_back(s.stage);
  EXPECT_EQ(stages, (std::vector<std::string>{"infer", "resolve", "rewrite", "fix-comparisons", "eliminate-nops",
                                              "remove-unused-locals"}));
  EXPECT_EQ(ir::emit_text(b),
            "method V LSnake;.addRandomApple() {\n"
            "  local v1: int\n"
            "  local v0: LCoordinate;\n"
            "  L0: v1 = 1\n"
            "  L1: v0 = null\n"
            "  L2: if v0 == null goto L6\n"
            "  L3: v0 = new LCoordinate;\n"
            "  L4: specialinvoke v0.<LCoordinate;.<init>:(II)V>(v1, v1)\n"
            "  L5: goto L2\n"
            "  L6: if v0 != null goto L8\n"
            "  L7: staticinvoke <LSnake;.onMissing:()V>()\n"
            "  L8: return\n"
            "}\n");
  EXPECT_TRUE(ir::validate(b, ir::Stage::kOptimized).empty());
}

TEST(Pipeline, WithoutOptimizationNopsRemain) {
  const auto dex = dex::parse_dex(testing::snake_dex());
  Body b = testing::lift_named(dex, "LSnake;", "addRandomApple");
  PipelineOptions opts;
  opts.optimize = false;
  const PipelineReport report = run_pipeline(b, opts);
  EXPECT_EQ(report.stages.size(), 4u);
  EXPECT_EQ(b.statements[0]->kind(), ir::StmtKind::kNop);
  EXPECT_TRUE(ir::validate(b, ir::Stage::kTyped).empty());
}

TEST(Pipeline, FailureLeavesBodyUntouched) {
  Body b = testing::lift_snippet("(I)V", 2, "if-eqz v0, :a\n:a\nreturn-void\n");
  const std::string before = ir::emit_text(b);
  try {
    run_pipeline(b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUntypable);
    EXPECT_EQ(e.method, "LT;.run:(I)V");
  }
  EXPECT_EQ(ir::emit_text(b), before);
}

// Inserts Nops before random statements and points some jumps, handlers
// and trap starts at them. The observable program does not change.
void sprinkle_nops(Body& b, std::mt19937_64& rng) {
  std::vector<std::unique_ptr<ir::Statement>> out;
  std::unordered_map<const ir::Statement*, ir::Statement*> before;
  for (auto& s : b.statements) {
    if (rng() % 3 == 0) {
      auto nop = std::make_unique<ir::Statement>();
      nop->node = ir::NopStmt{};
      before[s.get()] = nop.get();
      out.push_back(std::move(nop));
    }
    out.push_back(std::move(s));
  }
  b.statements = std::move(out);
  auto redirect = [&](ir::Statement*& t) {
    if (auto it = before.find(t); it != before.end() && rng() % 2 == 0) t = it->second;
  };
  for (auto& s : b.statements) {
    for (ir::Statement** t : ir::branch_targets(*s)) redirect(*t);
  }
  for (auto& t : b.traps) {
    redirect(t.handler);
    redirect(t.first);
  }
}

TEST(PassesProperty, NopEliminationPreservesTheProgram) {
  std::mt19937_64 rng(4321);
  for (int iter = 0; iter < 200; ++iter) {
    const std::string code = testing::random_int_program(rng, 2 + static_cast<int>(rng() % 6));
    SCOPED_TRACE(code);
    Body reference = testing::lift_snippet("()I", 4, code);
    Body mutated = reference.clone();
    sprinkle_nops(mutated, rng);
    ASSERT_TRUE(ir::validate(mutated, ir::Stage::kLifted).empty());
    eliminate_nops(reference);
    eliminate_nops(mutated);
    EXPECT_EQ(ir::emit_text(mutated), ir::emit_text(reference));
    const auto ri = reference.index_map();
    const auto mi = mutated.index_map();
    ASSERT_EQ(mutated.addr_map.size(), reference.addr_map.size());
    for (const auto& [addr, s] : reference.addr_map) EXPECT_EQ(mi.at(mutated.addr_map.at(addr)), ri.at(s));
    EXPECT_EQ(ir::build_cfg(mutated, true).edges.size(), ir::build_cfg(reference, true).edges.size());
  }
}

TEST(PassesProperty, RandomProgramsSurviveThePipeline) {
  std::mt19937_64 rng(77);
  int typed = 0;
  for (int iter = 0; iter < 200; ++iter) {
    const std::string code = testing::random_int_program(rng, 2 + static_cast<int>(rng() % 6));
    SCOPED_TRACE(code);
    Body b = testing::lift_snippet("()I", 4, code);
    PipelineReport report;
    try {
      report = run_pipeline(b);
    } catch (const Error& e) {
      // Dead blocks may read registers nothing writes; such reads carry no
      // type. Anything else is a bug.
      ASSERT_EQ(e.code(), ErrorCode::kUntypable) << e.what();
      std::vector<bool> defined(b.locals.size(), false);
      for (const auto& s : b.statements) {
        if (auto d = ir::def(*s)) defined[*d] = true;
      }
      EXPECT_TRUE(std::find(defined.begin(), defined.end(), false) != defined.end());
      continue;
    }
    ++typed;
    EXPECT_TRUE(report.clean());
    for (const auto& s : b.statements) {
      if (&s != &b.statements.back()) EXPECT_NE(s->kind(), ir::StmtKind::kNop);
    }
    const std::string text = ir::emit_text(b);
    EXPECT_EQ(ir::emit_text(ir::parse_text(text)), text);
  }
  EXPECT_GT(typed, 100);
}

}  // namespace
}  // namespace dexlift::passes
