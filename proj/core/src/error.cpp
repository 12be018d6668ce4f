#include "kocrs/error.hpp"

namespace kocrs {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SumNotOne: return "SumNotOne";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::WeightsNotOne: return "WeightsNotOne";
    case ErrorCode::RuleDomainMismatch: return "RuleDomainMismatch";
    case ErrorCode::AtomExplosion: return "AtomExplosion";
    case ErrorCode::PolicyPrecondition: return "PolicyPrecondition";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::DeltaOutOfRange: return "DeltaOutOfRange";
    case ErrorCode::DeltaTooLarge: return "DeltaTooLarge";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::RoutingError: return "RoutingError";
    case ErrorCode::TooLargeToBruteForce: return "TooLargeToBruteForce";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace kocrs
