#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace torf {

enum class ErrorKind {
  DimensionMismatch,
  NotASublattice,
  NotAFace,
  MissingFace,
  BadIntersection,
  EmptyFan,
  ConeNotInFan,
  NotASubfan,
  GenerationFailure,
  CompatibilityFailure,
  NotFiniteExtension,
  GeneratorExtractionIncomplete,
  BadLatticeFamily,
  NotWeaklyNormal,
  DegreeNotInSupport,
  UnknownFixture,
  ParseError,
  InvalidArgument,
  Internal,
};

std::string_view to_string(ErrorKind kind);

// Every failure in the library is reported through this type.  A witness is
// attached whenever the failure can be demonstrated by a single lattice point.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<std::vector<mpz_class>> witness = std::nullopt)
      : std::runtime_error(message), kind_(kind), witness_(std::move(witness)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::optional<std::vector<mpz_class>>& witness() const noexcept { return witness_; }

 private:
  ErrorKind kind_;
  std::optional<std::vector<mpz_class>> witness_;
};

}  // namespace torf
