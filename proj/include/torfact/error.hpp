#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace torfact {

// Every failure the library reports carries one of these kinds. The CLI maps
// each kind onto its own exit code.
enum class ErrorKind {
  DimensionMismatch,
  InvalidArgument,
  SpectrumViolation,
  NoConvergence,
  SingularSample,
  GridTooCoarse,
  NearSingular,
  AmbiguousWinding,
  NonzeroWinding,
  PhaseJumpTooLarge,
  IdenticallySingular,
  UnstableSections,
  NotUnitary,
  NotNormalizedOnSubtorus,
  NotOnSphere,
  ApproximationTooCoarse,
  Inconclusive,
  MalformedDocument,
  IndexArityMismatch,
  DuplicateTerm,
  Io,
  Usage,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace torfact
