#pragma once

#include <stdexcept>
#include <string>

namespace visopt {

enum class ErrorKind {
  InvalidPolygon,
  HoleOutsideOuter,
  OverlappingHoles,
  DegenerateRay,
  ObserverOutsideFreeSpace,
  OutsideFreeSpace,
  ArrangementDegeneracy,
  TooCloseToReflexVertex,
  InfeasibleDirection,
  InfiniteRay,
  DomainError,
  GradientUnavailable,
  InvalidInput,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library carries a machine-readable kind so the
/// CLI can map it onto an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace visopt
