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

#include "dexlift/error.h"

namespace dexlift {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kTruncated: return "Truncated";
    case ErrorCode::kBadIndex: return "BadIndex";
    case ErrorCode::kBadString: return "BadString";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kUnsupportedOpcode: return "UnsupportedOpcode";
    case ErrorCode::kUnknownOpcode: return "UnknownOpcode";
    case ErrorCode::kTruncatedInstruction: return "TruncatedInstruction";
    case ErrorCode::kBadPayload: return "BadPayload";
    case ErrorCode::kFieldOverflow: return "FieldOverflow";
    case ErrorCode::kBadRegister: return "BadRegister";
    case ErrorCode::kDanglingTarget: return "DanglingTarget";
    case ErrorCode::kOrphanMoveResult: return "OrphanMoveResult";
    case ErrorCode::kTypeConflict: return "TypeConflict";
    case ErrorCode::kUntypable: return "Untypable";
    case ErrorCode::kConflictingEvidence: return "ConflictingEvidence";
    case ErrorCode::kNonZeroNull: return "NonZeroNull";
    case ErrorCode::kUnsupportedForOracle: return "UnsupportedForOracle";
  }
  return "Unknown";
}

void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace dexlift
