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

// Local type inference for lifted bodies.
//
// Dalvik registers carry no types, and the const family loads raw bit
// patterns: a 32-bit zero may be int 0, float 0.0 or null. Typing runs in
// stages:
//
//   1. propagate_types: dataflow fixpoint over evidence from typed
//      operations, signatures, fields and allocations. Provisional constants
//      contribute nothing.
//   2. find_ambiguous_declarations: provisional constants whose local is
//      still open, or typed differently from the literal's default.
//   3. resolve_ambiguous: depth-first search from each such declaration for
//      the first use that implies a type.
//   4. rewrite_constant: reinterpret the literal bits (null, float, double).
//   5. finalize_types: propagate again and fix the remaining defaults.
//
// fix_zero_comparisons then turns `if r == 0` on reference-typed r into a
// null test.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dexlift/ir/ir.h"

namespace dexlift::typing {

enum class EvidenceKind {
  kDefinition,          // allocation, field/array load, signature, cast, ...
  kComparison,          // compared with a value of known type
  kTypedOperation,      // arithmetic, negation, conversion, switch key, ...
  kReturn,              // non-void return
  kInvocationArgument,  // receiver or argument of a call
  kFieldStore,
  kArrayStore,
};

std::string_view evidence_kind_name(EvidenceKind kind);

struct TypeEvidence {
  const ir::Statement* source = nullptr;
  EvidenceKind kind = EvidenceKind::kDefinition;
  ir::IrType type;  // never Unknown
  bool is_definition = false;  // the local is written, not read
};

// Evidence a single statement gives about one local, given the current
// local types. Used by the fixpoint and by the ambiguity search.
std::vector<TypeEvidence> statement_evidence(const ir::Body& body, const std::vector<ir::IrType>& types,
                                             const ir::Statement& s, ir::LocalId local);

// Stage 1. Writes the fixpoint types into body.locals; locals without
// evidence stay Unknown. Throws TypeConflict when one local collects
// evidence from different categories.
void propagate_types(ir::Body& body);

enum class ConstWidth { k32, k64 };

struct AmbiguousDeclaration {
  ir::Statement* statement = nullptr;  // Assign of a provisional constant
  ir::LocalId local = 0;
  ConstWidth width = ConstWidth::k32;
  uint64_t bits = 0;  // literal bit pattern, zero-extended
  std::vector<ir::IrType> candidates;
};

// Stage 2. Reads the current local types (run propagate_types first).
std::vector<AmbiguousDeclaration> find_ambiguous_declarations(const ir::Body& body);

struct Resolution {
  std::optional<TypeEvidence> evidence;  // first evidence found, if any
  bool deferred = false;  // blocked on a comparison with an unresolved local
};

// Depth-first search from the declaration for evidence about its local.
// Returns the first evidence found and raises ConflictingEvidence when
// another path implies a different category.
Resolution search_evidence(const ir::Body& body, const std::vector<ir::IrType>& types,
                           const AmbiguousDeclaration& decl);

// Stage 3 for one declaration: the type implied by the search, else the
// local's propagated type, else Int (32-bit) or Long (64-bit).
ir::IrType resolve_ambiguous(const ir::Body& body, const AmbiguousDeclaration& decl);

// Stage 3 for all declarations, in rounds: every search of a round sees
// the same local types, so the outcome does not depend on the order of
// decls. Declarations blocked on unresolved comparisons wait for a later
// round (at most |decls| + 1 rounds). Updates the declared local types and
// returns one type per declaration.
std::vector<ir::IrType> resolve_all_ambiguous(ir::Body& body, const std::vector<AmbiguousDeclaration>& decls);

// Stage 4. Throws NonZeroNull for a nonzero literal resolved to a
// reference, ConflictingEvidence when t is outside decl.candidates.
void rewrite_constant(const AmbiguousDeclaration& decl, const ir::IrType& t);

// Stage 5. Re-propagates, types null-only locals as java.lang.Object,
// normalizes array-data element constants to the array's element type and
// clears provisional flags. Throws Untypable when a local is still Unknown.
void finalize_types(ir::Body& body);

// Stages 1-5.
void infer_local_types(ir::Body& body);

// Rewrites comparisons of reference-typed values against IntConstant(0) to
// use NullConstant.
void fix_zero_comparisons(ir::Body& body);

}  // namespace dexlift::typing
