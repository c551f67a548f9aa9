// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace act {

enum class ErrorCode {
  RoiOutOfBounds,
  InvalidArgument,
  NonMonotonicTimestamp,
  AliasedSample,
  InsufficientSamples,
  InvalidActualAngle,
  MalformedNumeral,
  InvalidConfig,
  ParseError,
  IoError,
  DeviceError,
  HookFailed,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the toolkit carries one of the codes above so
/// callers (and the harness) can route infra failures apart from oracle
/// outcomes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace act
