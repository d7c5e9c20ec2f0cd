#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace designcount {

enum class ErrorCode {
  BadInput,
  // designs
  DuplicatePair,
  UncoveredPair,
  BadVertex,
  ColorClash,
  MissingEdge,
  BadColor,
  SameVertex,
  BadOrder,
  NotLatin,
  // enumeration
  PoolTooLarge,
  EmptyPool,
  // bounds
  ZeroDegree,
  OddN,
  NotDivisibleBy4,
  BadK,
  UnknownBound,
  // entropy lab
  TooLarge,
  EmptyCondition,
  // cli
  CacheMismatch,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace designcount
