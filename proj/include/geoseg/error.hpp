#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace geoseg {

enum class ErrorKind {
  InvalidValue,
  ZeroVariance,
  LengthMismatch,
  TooFewSamples,
  MalformedRow,
  DuplicateSchoolId,
  CoordinateOutOfRange,
  NonPositiveArea,
  EmptyResult,
  TooFewSchools,
  KOutOfRange,
  UnknownSchoolId,
  MismatchedIds,
  TooFewBins,
  DegenerateFit,
  InsufficientNeighbors,
  UncoveredDistance,
  DegenerateNull,
  InvalidConfig,
  Io,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidValue: return "InvalidValue";
    case ErrorKind::ZeroVariance: return "ZeroVariance";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::TooFewSamples: return "TooFewSamples";
    case ErrorKind::MalformedRow: return "MalformedRow";
    case ErrorKind::DuplicateSchoolId: return "DuplicateSchoolId";
    case ErrorKind::CoordinateOutOfRange: return "CoordinateOutOfRange";
    case ErrorKind::NonPositiveArea: return "NonPositiveArea";
    case ErrorKind::EmptyResult: return "EmptyResult";
    case ErrorKind::TooFewSchools: return "TooFewSchools";
    case ErrorKind::KOutOfRange: return "KOutOfRange";
    case ErrorKind::UnknownSchoolId: return "UnknownSchoolId";
    case ErrorKind::MismatchedIds: return "MismatchedIds";
    case ErrorKind::TooFewBins: return "TooFewBins";
    case ErrorKind::DegenerateFit: return "DegenerateFit";
    case ErrorKind::InsufficientNeighbors: return "InsufficientNeighbors";
    case ErrorKind::UncoveredDistance: return "UncoveredDistance";
    case ErrorKind::DegenerateNull: return "DegenerateNull";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a kind so callers (and the
/// CLI exit-code mapping) can dispatch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace geoseg
