#pragma once

#include <stdexcept>
#include <string>

namespace qcoin {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  NonHermitianInput,
  NotPSD,
  InvalidDensityMatrix,
  BadIndex,
  MuOutOfRange,
  QuadratureUnderResolved,
  NoSolution,
  NoSolutionBelowOne,
  OutOfDomain,
  VacuumDominated,
  ConfigError,
  IoError,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qcoin
