#include "gauge_graph/error.hpp"

namespace gauge_graph {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ParameterOutOfRange: return "ParameterOutOfRange";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::DomainViolation: return "DomainViolation";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotConnected: return "NotConnected";
    case ErrorKind::SeparatorNotSingleton: return "SeparatorNotSingleton";
    case ErrorKind::NotDecomposable: return "NotDecomposable";
    case ErrorKind::SameVertex: return "SameVertex";
    case ErrorKind::UnknownVertex: return "UnknownVertex";
    case ErrorKind::NonFiniteObjective: return "NonFiniteObjective";
    case ErrorKind::TooFewPoints: return "TooFewPoints";
    case ErrorKind::NegativeValue: return "NegativeValue";
    case ErrorKind::MissingCliqueGauge: return "MissingCliqueGauge";
    case ErrorKind::UnknownClique: return "UnknownClique";
    case ErrorKind::MarginMismatch: return "MarginMismatch";
    case ErrorKind::EmptyKeptSet: return "EmptyKeptSet";
    case ErrorKind::ContactValueNotOne: return "ContactValueNotOne";
    case ErrorKind::NotSupported: return "NotSupported";
    case ErrorKind::EmptySubset: return "EmptySubset";
    case ErrorKind::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorKind::SeparatorsIncluded: return "SeparatorsIncluded";
    case ErrorKind::NotATree: return "NotATree";
    case ErrorKind::NotAllAD: return "NotAllAD";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), detail_(message) {}

}  // namespace gauge_graph
