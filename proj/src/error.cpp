#include "womc/error.hpp"

namespace womc {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::NotStronglyConnected: return "NotStronglyConnected";
    case Errc::SelfLink: return "SelfLink";
    case Errc::DuplicateLink: return "DuplicateLink";
    case Errc::NonPositiveDelay: return "NonPositiveDelay";
    case Errc::SameAgent: return "SameAgent";
    case Errc::InvalidAgent: return "InvalidAgent";
    case Errc::ParseError: return "ParseError";
    case Errc::MissingTableEntry: return "MissingTableEntry";
    case Errc::BadDistribution: return "BadDistribution";
    case Errc::UndefinedPolicyEntry: return "UndefinedPolicyEntry";
    case Errc::EnumerationCapExceeded: return "EnumerationCapExceeded";
    case Errc::NotBeyond: return "NotBeyond";
    case Errc::DomainMismatch: return "DomainMismatch";
    case Errc::ZeroProbabilityCondition: return "ZeroProbabilityCondition";
    case Errc::ZeroProbabilityObservation: return "ZeroProbabilityObservation";
    case Errc::InsufficientState: return "InsufficientState";
    case Errc::Io: return "Io";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace womc
