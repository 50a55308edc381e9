// SPDX-License-Identifier: Apache-2.0

#include "admgid/error.hpp"

namespace admgid {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
  case ErrorCode::SelfLoop: return "SelfLoop";
  case ErrorCode::UnknownVertex: return "UnknownVertex";
  case ErrorCode::DuplicateVertex: return "DuplicateVertex";
  case ErrorCode::CyclicGraph: return "CyclicGraph";
  case ErrorCode::InvalidFactorGraph: return "InvalidFactorGraph";
  case ErrorCode::NotAParentSubset: return "NotAParentSubset";
  case ErrorCode::NotCycleDecomposable: return "NotCycleDecomposable";
  case ErrorCode::SingularMatrix: return "SingularMatrix";
  case ErrorCode::SizeMismatch: return "SizeMismatch";
  case ErrorCode::TooLarge: return "TooLarge";
  case ErrorCode::BindingMismatch: return "BindingMismatch";
  case ErrorCode::InvalidDensity: return "InvalidDensity";
  case ErrorCode::DegenerateParameters: return "DegenerateParameters";
  case ErrorCode::UnsupportedOrder: return "UnsupportedOrder";
  case ErrorCode::LengthMismatch: return "LengthMismatch";
  case ErrorCode::RankDeficientParents: return "RankDeficientParents";
  case ErrorCode::NonFiniteObjective: return "NonFiniteObjective";
  case ErrorCode::ZeroTrueMatrix: return "ZeroTrueMatrix";
  case ErrorCode::ParseError: return "ParseError";
  case ErrorCode::NonFiniteData: return "NonFiniteData";
  case ErrorCode::InvalidErrorModel: return "InvalidErrorModel";
  }
  return "Unknown";
}

}  // namespace admgid
