#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace womc {

enum class Errc {
  NotStronglyConnected,
  SelfLink,
  DuplicateLink,
  NonPositiveDelay,
  SameAgent,
  InvalidAgent,
  ParseError,
  MissingTableEntry,
  BadDistribution,
  UndefinedPolicyEntry,
  EnumerationCapExceeded,
  NotBeyond,
  DomainMismatch,
  ZeroProbabilityCondition,
  ZeroProbabilityObservation,
  InsufficientState,
  Io,
  InvalidArgument,
};

std::string_view errc_name(Errc code);

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& what);

}  // namespace womc
