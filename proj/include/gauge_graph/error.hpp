#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gauge_graph {

/// Failure categories raised by the library. Each maps to a stable string
/// used in machine-readable CLI diagnostics.
enum class ErrorKind {
  ParameterOutOfRange,
  NotPositiveDefinite,
  DomainViolation,
  DimensionMismatch,
  NotConnected,
  SeparatorNotSingleton,
  NotDecomposable,
  SameVertex,
  UnknownVertex,
  NonFiniteObjective,
  TooFewPoints,
  NegativeValue,
  MissingCliqueGauge,
  UnknownClique,
  MarginMismatch,
  EmptyKeptSet,
  ContactValueNotOne,
  NotSupported,
  EmptySubset,
  DimensionTooLarge,
  SeparatorsIncluded,
  NotATree,
  NotAllAD,
  InvalidArgument,
  ParseError,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  /// Message without the kind prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace gauge_graph
