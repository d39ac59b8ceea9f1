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

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dexlift {

enum class ErrorCode {
  // Container.
  kBadMagic,
  kTruncated,
  kBadIndex,
  kBadString,
  kIo,
  // Instruction stream.
  kUnsupportedOpcode,
  kUnknownOpcode,
  kTruncatedInstruction,
  kBadPayload,
  kFieldOverflow,
  // Lifting.
  kBadRegister,
  kDanglingTarget,
  kOrphanMoveResult,
  // Typing.
  kTypeConflict,
  kUntypable,
  kConflictingEvidence,
  kNonZeroNull,
  // Reference interpreters.
  kUnsupportedForOracle,
};

std::string_view error_code_name(ErrorCode code);

// Every failure in the library is reported as an Error carrying a code, so
// callers (notably the CLI) can map failures to exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

  // Position information, filled in when known.
  std::optional<uint32_t> address;
  std::optional<uint8_t> opcode;
  std::string method;

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace dexlift
