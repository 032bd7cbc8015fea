#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hermitk {

enum class ErrorCode {
  NonSquare,
  DimensionMismatch,
  NotAUnit,
  UnknownVariable,
  RingMismatch,
  ParseError,
  FlavorMismatch,
  NotInvertible,
  CongruenceFails,
  NotAlternating,
  NotSymmetric,
  NotUnimodular,
  NoUnitPivot,
  CharacteristicTwo,
  NotAField,
  SearchExhausted,
  OddRank,
  Undecidable,
  OddSize,
  NotSymplectic,
  UnsupportedInput,
  BadPivot,
  NotInMembershipLocus,
  UnsupportedScale,
  NoMatchFound,
  InvariantViolated,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI) can branch on the kind without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hermitk
