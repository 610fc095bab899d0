#pragma once

// Run configuration: an INI file with one section per model type. Parsing is
// strict, and the canonical serialization reproduces the run exactly.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qcoin/keyrate.hpp"

namespace qcoin {

struct DistanceRange {
  double start = 0.0;
  double stop = 0.0;
  double step = 0.0;
};

/// Inputs of the stand-alone coin report.
struct CoinInputs {
  double y1 = 1.0;
  double e1_bit = 0.01;
  double m1_lower = 1e12;  // only used in finite mode
};

struct RunConfig {
  PrepModel prep = IdealPrep{};
  TrojanBudget budget;
  bool budget_from_hardware = false;  // mu_out derived from input_intensity/attenuation_db
  ChannelModel channel;
  ProtocolParams protocol;
  std::optional<DistanceRange> range;  // when set, distances is its expansion
  std::vector<double> distances;
  Mode mode = Mode::Asymptotic;
  std::optional<double> delta_override;
  CoinInputs coin;

  KeyRateSetup setup() const;
  /// Throws ConfigError naming section.key of the first invalid field.
  void validate() const;
};

/// start, start + step, ... up to stop (inclusive within 1e-9 step).
std::vector<double> expand_range(const DistanceRange& r);

/// Parses INI text. Unknown sections or keys, malformed numbers and values
/// failing validation all throw ConfigError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Canonical INI text with every value at 17 significant digits.
std::string serialize_config(const RunConfig& cfg);

/// The serialized config with each line prefixed by "# ".
std::string config_comment_block(const RunConfig& cfg);

std::string format_double(double v);
const char* to_string(Mode mode) noexcept;

}  // namespace qcoin
