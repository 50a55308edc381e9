// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace admgid {

enum class ErrorCode {
  SelfLoop,
  UnknownVertex,
  DuplicateVertex,
  CyclicGraph,
  InvalidFactorGraph,
  NotAParentSubset,
  NotCycleDecomposable,
  SingularMatrix,
  SizeMismatch,
  TooLarge,
  BindingMismatch,
  InvalidDensity,
  DegenerateParameters,
  UnsupportedOrder,
  LengthMismatch,
  RankDeficientParents,
  NonFiniteObjective,
  ZeroTrueMatrix,
  ParseError,
  NonFiniteData,
  InvalidErrorModel,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Library-wide exception. Every failure path raised by admgid carries a
/// code so callers (and the CLI exit-code mapping) can branch on it.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

}  // namespace admgid
