#include "qcoin/error.hpp"

namespace qcoin {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonHermitianInput: return "NonHermitianInput";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::InvalidDensityMatrix: return "InvalidDensityMatrix";
    case ErrorCode::BadIndex: return "BadIndex";
    case ErrorCode::MuOutOfRange: return "MuOutOfRange";
    case ErrorCode::QuadratureUnderResolved: return "QuadratureUnderResolved";
    case ErrorCode::NoSolution: return "NoSolution";
    case ErrorCode::NoSolutionBelowOne: return "NoSolutionBelowOne";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::VacuumDominated: return "VacuumDominated";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace qcoin
