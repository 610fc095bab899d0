#pragma once

#include <iosfwd>
#include <string>

namespace qcoin::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kAnalysisAbort = 3,
  kIoError = 4,
  kValidationFailed = 5,
};

inline constexpr const char* kKeyRateHeader =
    "distance_km,Q_mu,E_mu,M1_L,Y1_L,E1_U,mu_out_eff,delta,E1_ph,R_per_pulse,R_per_click";

/// Entry point of the qcoin tool; reports go to out, diagnostics to err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Writes to a sibling temp file and renames it over path; throws IoError.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace qcoin::cli
