#include "qcoin/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <unistd.h>

#include "qcoin/config.hpp"
#include "qcoin/error.hpp"
#include "qcoin/keyrate.hpp"
#include "qcoin/stat_bounds.hpp"
#include "qcoin/trojan.hpp"

namespace qcoin::cli {

namespace {

struct Options {
  std::string config_path;
  std::string out_path;
  std::string mode;
  std::uint64_t seed = 42;
  double pulses = 1e7;
  double mean_scale = 1.0;
  double x = 0.0;
  double epsilon = 0.0;
  std::string side = "upper";
};

RunConfig load(const Options& o) {
  RunConfig cfg = o.config_path.empty() ? parse_config("") : load_config(o.config_path);
  if (o.mode == "asymptotic") cfg.mode = Mode::Asymptotic;
  else if (o.mode == "finite") cfg.mode = Mode::Finite;
  return cfg;
}

void emit(const Options& o, std::ostream& out, const std::string& content) {
  if (o.out_path.empty()) out << content;
  else write_file_atomic(o.out_path, content);
}

std::string fmt(double v) { return format_double(v); }

int cmd_coin(const Options& o, std::ostream& out) {
  const RunConfig cfg = load(o);
  const double mu = cfg.budget.mu_out;
  double mu_eff = mu;
  if (cfg.mode == Mode::Finite && mu > 0.0)
    mu_eff = effective_mu_out(cfg.coin.m1_lower, mu, cfg.budget.epsilon);
  const auto a = analyze_coin(alice_states(cfg.prep), mu_eff, cfg.coin.y1, cfg.coin.e1_bit);

  std::ostringstream report;
  report << config_comment_block(cfg)
         << "mode = " << to_string(cfg.mode) << "\n"
         << "mu_out = " << fmt(mu) << "\n"
         << "mu_out_eff = " << fmt(mu_eff) << "\n"
         << "fidelity = " << fmt(a.fidelity) << "\n"
         << "delta = " << fmt(a.delta) << "\n"
         << "y1 = " << fmt(a.y1) << "\n"
         << "delta_prime = " << fmt(a.delta_prime) << "\n"
         << "e1_bit = " << fmt(a.e1_bit) << "\n"
         << "e1_phase = " << fmt(a.e1_phase) << "\n"
         << "phase_bound_vacuous = " << (a.vacuous ? "true" : "false") << "\n";
  out << report.str();

  if (!o.out_path.empty()) {
    std::ostringstream csv;
    csv << config_comment_block(cfg)
        << "mu_out,mu_out_eff,fidelity,delta,y1,delta_prime,e1_bit,e1_phase\n"
        << fmt(mu) << ',' << fmt(mu_eff) << ',' << fmt(a.fidelity) << ',' << fmt(a.delta) << ','
        << fmt(a.y1) << ',' << fmt(a.delta_prime) << ',' << fmt(a.e1_bit) << ','
        << fmt(a.e1_phase) << "\n";
    write_file_atomic(o.out_path, csv.str());
  }
  return kOk;
}

int cmd_keyrate(const Options& o, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = load(o);
  const auto points = sweep(cfg.setup(), cfg.distances);

  std::ostringstream csv;
  csv << config_comment_block(cfg) << kKeyRateHeader << "\n";
  for (const auto& p : points) {
    csv << fmt(p.distance_km) << ',' << fmt(p.gain_signal) << ',' << fmt(p.qber_signal) << ','
        << fmt(p.m1_lower) << ',' << fmt(p.y1) << ',' << fmt(p.e1_bit) << ','
        << fmt(p.mu_out_eff) << ',' << fmt(p.delta) << ',' << fmt(p.e1_phase) << ','
        << fmt(p.rate) << ',' << fmt(p.rate_per_click) << "\n";
  }
  emit(o, out, csv.str());

  // The first zero-rate point usually explains the cutoff.
  for (const auto& p : points) {
    if (p.rate == 0.0 && !p.diagnostic.empty()) {
      err << "note: R = 0 from " << fmt(p.distance_km) << " km (" << p.diagnostic << ")\n";
      break;
    }
  }
  return kOk;
}

int cmd_bounds(const Options& o, std::ostream& out, std::ostream& err) {
  if (!(o.x > 0.0) || !std::isfinite(o.x)) throw Error(ErrorCode::ConfigError, "--x must be positive");
  if (!(o.epsilon > 0.0 && o.epsilon <= 1.0))
    throw Error(ErrorCode::ConfigError, "--epsilon must lie in (0, 1]");
  const Tail side = o.side == "lower" ? Tail::Lower : Tail::Upper;
  const ChernoffQuery q{o.x, o.epsilon, side};

  out << "x = " << fmt(o.x) << "\n"
      << "epsilon = " << fmt(o.epsilon) << "\n"
      << "side = " << o.side << "\n";
  if (side == Tail::Upper) {
    const double numeric = chernoff_delta_numeric(q);
    const double closed = chernoff_delta_closed_form(o.x, o.epsilon);
    const double rel = numeric > 0.0 ? std::abs(closed - numeric) / numeric : std::abs(closed);
    out << "delta_numeric = " << fmt(numeric) << "\n"
        << "delta_closed_form = " << fmt(closed) << "\n"
        << "relative_difference = " << fmt(rel) << "\n";
  } else {
    try {
      const double numeric = chernoff_delta_numeric(q);
      out << "delta_numeric = " << fmt(numeric) << "\n";
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoSolution) throw;
      err << "warning: no lower-tail solution for epsilon < exp(-x); bound clamped to 0\n";
      out << "delta_numeric = none\n";
    }
  }
  out << "bound_value = " << fmt(bound_value(q)) << "\n";
  return kOk;
}

int cmd_validate(const Options& o, std::ostream& out) {
  const RunConfig cfg = load(o);
  if (!(o.pulses >= 1e4) || o.pulses != std::floor(o.pulses))
    throw Error(ErrorCode::ConfigError, "--pulses must be an integer >= 10^4");
  if (!(o.mean_scale > 0.0)) throw Error(ErrorCode::ConfigError, "--mean-scale must be positive");
  const double mu = cfg.budget.mu_out;
  if (!(mu > 0.0)) throw Error(ErrorCode::ConfigError, "budget.mu_out must be positive for validate");
  if (!(mu * o.mean_scale <= 1.0))
    throw Error(ErrorCode::ConfigError, "--mean-scale pushes the probe mean above 1");

  const auto battery =
      run_fill_battery(mu, static_cast<std::uint64_t>(o.pulses), o.seed, o.mean_scale);
  std::ostringstream report;
  report << config_comment_block(cfg)
         << "# pulses = " << static_cast<std::uint64_t>(o.pulses) << ", seed = " << o.seed
         << ", mean_scale = " << fmt(o.mean_scale) << "\n";
  for (const auto& c : battery.checks) {
    report << c.name << ": filled = " << c.result.filled << " fraction = " << fmt(c.result.fraction)
           << " limit = " << fmt(c.limit) << (c.passed ? " PASS" : " FAIL") << "\n";
  }
  report << "saturation: " << (battery.saturation_ok ? "PASS" : "FAIL") << "\n"
         << "overall: " << (battery.passed ? "PASS" : "FAIL") << "\n";
  out << report.str();
  if (!o.out_path.empty()) write_file_atomic(o.out_path, report.str());
  return battery.passed ? kOk : kValidationFailed;
}

}  // namespace

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::IoError, "cannot open '" + tmp + "' for writing");
    f << content;
    f.flush();
    if (!f) {
      std::remove(tmp.c_str());
      throw Error(ErrorCode::IoError, "write to '" + tmp + "' failed");
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw Error(ErrorCode::IoError, "cannot rename output into '" + path + "'");
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Trojan-horse quantum-coin analysis for decoy-state BB84", "qcoin"};
  app.require_subcommand(1);
  Options o;

  auto* coin = app.add_subcommand("coin", "Fidelity, coin imbalance and phase-error bound");
  auto* keyrate = app.add_subcommand("keyrate", "Secret-key rate versus distance as CSV");
  auto* bounds = app.add_subcommand("bounds", "Chernoff corrections for one expectation");
  auto* validate = app.add_subcommand("validate", "Monte Carlo check of the pulse-filling bound");

  for (auto* sub : {coin, keyrate, validate}) {
    sub->add_option("--config", o.config_path, "INI configuration file")->check(CLI::ExistingFile);
    sub->add_option("--mode", o.mode, "Override analysis.mode")
        ->check(CLI::IsMember({"asymptotic", "finite"}));
  }
  for (auto* sub : {coin, keyrate, validate})
    sub->add_option("--out", o.out_path, "Output file (written atomically)");

  bounds->add_option("--x", o.x, "Expectation x > 0")->required();
  bounds->add_option("--epsilon", o.epsilon, "Failure probability in (0, 1]")->required();
  bounds->add_option("--side", o.side, "upper or lower")->check(CLI::IsMember({"upper", "lower"}));

  validate->add_option("--pulses", o.pulses, "Pulses per distribution (>= 1e4)");
  validate->add_option("--seed", o.seed, "Base RNG seed");
  validate->add_option("--mean-scale", o.mean_scale,
                       "Probe mean as a multiple of budget.mu_out (> 1 is a negative control)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    if (coin->parsed()) return cmd_coin(o, out);
    if (keyrate->parsed()) return cmd_keyrate(o, out, err);
    if (bounds->parsed()) return cmd_bounds(o, out, err);
    return cmd_validate(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::ConfigError:
      case ErrorCode::InvalidArgument:
      case ErrorCode::MuOutOfRange:
      case ErrorCode::OutOfDomain: return kConfigError;
      case ErrorCode::IoError: return kIoError;
      default: return kAnalysisAbort;
    }
  }
}

}  // namespace qcoin::cli
