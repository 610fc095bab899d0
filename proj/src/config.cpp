#include "qcoin/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "qcoin/error.hpp"

namespace qcoin {

namespace pt = boost::property_tree;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& why) {
  throw Error(ErrorCode::ConfigError, field + ": " + why);
}

void require(bool ok, const std::string& field, const std::string& why) {
  if (!ok) fail(field, why);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& field, const std::string& raw) {
  const std::string s = trim(raw);
  double v = 0.0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || s.empty()) fail(field, "not a number: '" + s + "'");
  if (!std::isfinite(v)) fail(field, "must be finite");
  return v;
}

std::vector<double> parse_list(const std::string& field, const std::string& raw) {
  std::vector<double> out;
  if (trim(raw).empty()) return out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(field, item));
  return out;
}

std::array<double, 4> parse_four(const std::string& field, const std::string& raw) {
  const auto v = parse_list(field, raw);
  if (v.size() == 1) return {v[0], v[0], v[0], v[0]};
  if (v.size() != 4) fail(field, "expected 1 or 4 comma-separated values");
  return {v[0], v[1], v[2], v[3]};
}

using Setter = std::function<void(RunConfig&, const std::string& field, const std::string& value)>;
using Section = std::map<std::string, Setter>;

template <class F>
Setter scalar(F assign) {
  return [assign](RunConfig& c, const std::string& field, const std::string& value) {
    assign(c, parse_number(field, value));
  };
}

GaussianPrepModel& gaussian(RunConfig& c, const std::string& field) {
  auto* g = std::get_if<GaussianPrepModel>(&c.prep);
  if (!g) fail(field, "only valid with prep.model = gaussian");
  return *g;
}

// Sections are applied in this order so that prep.model is known before its
// parameters are read.
const std::vector<std::pair<std::string, Section>>& schema() {
  static const std::vector<std::pair<std::string, Section>> s = {
      {"prep",
       {
           {"model",
            [](RunConfig& c, const std::string& field, const std::string& value) {
              const auto v = trim(value);
              if (v == "ideal") c.prep = IdealPrep{};
              else if (v == "gaussian") c.prep = GaussianPrepModel{};
              else fail(field, "expected ideal or gaussian, got '" + v + "'");
            }},
           {"phi0",
            [](RunConfig& c, const std::string& field, const std::string& value) {
              auto* ideal = std::get_if<IdealPrep>(&c.prep);
              if (!ideal) fail(field, "only valid with prep.model = ideal");
              ideal->phi0 = parse_number(field, value);
            }},
           {"phi_mean",
            [](RunConfig& c, const std::string& field, const std::string& value) {
              gaussian(c, field).phi_mean = parse_four(field, value);
            }},
           {"phi_sigma",
            [](RunConfig& c, const std::string& field, const std::string& value) {
              gaussian(c, field).phi_sigma = parse_four(field, value);
            }},
           {"theta_mean",
            [](RunConfig& c, const std::string& field, const std::string& value) {
              gaussian(c, field).theta_mean = parse_number(field, value);
            }},
           {"theta_sigma",
            [](RunConfig& c, const std::string& field, const std::string& value) {
              gaussian(c, field).theta_sigma = parse_number(field, value);
            }},
       }},
      {"budget",
       {
           {"mu_out", scalar([](RunConfig& c, double v) { c.budget.mu_out = v; })},
           {"epsilon", scalar([](RunConfig& c, double v) { c.budget.epsilon = v; })},
           {"input_intensity", scalar([](RunConfig& c, double v) {
              c.budget.input_intensity = v;
              c.budget_from_hardware = true;
            })},
           {"attenuation_db", scalar([](RunConfig& c, double v) {
              c.budget.attenuation_db = v;
              c.budget_from_hardware = true;
            })},
       }},
      {"channel",
       {
           {"fiber_loss_db_per_km",
            scalar([](RunConfig& c, double v) { c.channel.fiber_loss_db_per_km = v; })},
           {"detector_efficiency",
            scalar([](RunConfig& c, double v) { c.channel.detector_efficiency = v; })},
           {"dark_count_prob", scalar([](RunConfig& c, double v) { c.channel.dark_count_prob = v; })},
           {"misalignment_error",
            scalar([](RunConfig& c, double v) { c.channel.misalignment_error = v; })},
           {"error_correction_efficiency",
            scalar([](RunConfig& c, double v) { c.channel.error_correction_efficiency = v; })},
       }},
      {"protocol",
       {
           {"signal_intensity", scalar([](RunConfig& c, double v) { c.protocol.signal_intensity = v; })},
           {"decoy_intensity", scalar([](RunConfig& c, double v) { c.protocol.decoy_intensity = v; })},
           {"p_signal", scalar([](RunConfig& c, double v) { c.protocol.p_signal = v; })},
           {"p_decoy", scalar([](RunConfig& c, double v) { c.protocol.p_decoy = v; })},
           {"p_vacuum", scalar([](RunConfig& c, double v) { c.protocol.p_vacuum = v; })},
           {"p_basis_x", scalar([](RunConfig& c, double v) { c.protocol.p_basis_x = v; })},
           {"n_pulses", scalar([](RunConfig& c, double v) { c.protocol.n_pulses = v; })},
       }},
      {"sweep",
       {
           {"distances",
            [](RunConfig& c, const std::string& field, const std::string& value) {
              c.range.reset();
              c.distances = parse_list(field, value);
            }},
           {"start", scalar([](RunConfig& c, double v) { c.range.value().start = v; })},
           {"stop", scalar([](RunConfig& c, double v) { c.range.value().stop = v; })},
           {"step", scalar([](RunConfig& c, double v) { c.range.value().step = v; })},
       }},
      {"analysis",
       {
           {"mode",
            [](RunConfig& c, const std::string& field, const std::string& value) {
              const auto v = trim(value);
              if (v == "asymptotic") c.mode = Mode::Asymptotic;
              else if (v == "finite") c.mode = Mode::Finite;
              else fail(field, "expected asymptotic or finite, got '" + v + "'");
            }},
           {"delta", scalar([](RunConfig& c, double v) { c.delta_override = v; })},
       }},
      {"coin",
       {
           {"y1", scalar([](RunConfig& c, double v) { c.coin.y1 = v; })},
           {"e1_bit", scalar([](RunConfig& c, double v) { c.coin.e1_bit = v; })},
           {"m1_lower", scalar([](RunConfig& c, double v) { c.coin.m1_lower = v; })},
       }},
  };
  return s;
}

const DistanceRange kDefaultRange{0.0, 200.0, 5.0};

}  // namespace

const char* to_string(Mode mode) noexcept {
  return mode == Mode::Asymptotic ? "asymptotic" : "finite";
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> expand_range(const DistanceRange& r) {
  require(r.step > 0.0, "sweep.step", "must be positive");
  require(r.start >= 0.0, "sweep.start", "must be >= 0");
  require(r.stop >= r.start, "sweep.stop", "must be >= sweep.start");
  const auto n = static_cast<std::size_t>(std::floor((r.stop - r.start) / r.step + 1e-9)) + 1;
  require(n <= 1000000, "sweep.step", "range has more than 10^6 points");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = r.start + static_cast<double>(i) * r.step;
  return out;
}

KeyRateSetup RunConfig::setup() const {
  KeyRateSetup s;
  s.channel = channel;
  s.protocol = protocol;
  s.budget = budget;
  s.prep = prep;
  s.options.mode = mode;
  s.options.delta_override = delta_override;
  return s;
}

void RunConfig::validate() const {
  if (const auto* g = std::get_if<GaussianPrepModel>(&prep)) {
    for (double s : g->phi_sigma)
      require(s >= 0.0 && s <= GaussianPrepModel::kMaxSigma, "prep.phi_sigma", "must lie in [0, 0.3]");
    require(g->theta_sigma >= 0.0 && g->theta_sigma <= GaussianPrepModel::kMaxSigma,
            "prep.theta_sigma", "must lie in [0, 0.3]");
    require(g->theta_mean >= 0.0 && g->theta_mean <= kPi, "prep.theta_mean", "must lie in [0, pi]");
  }

  require(budget.mu_out >= 0.0 && budget.mu_out < 1.0, "budget.mu_out", "must satisfy 0 <= mu_out < 1");
  require(budget.epsilon >= 0.0 && budget.epsilon < 1.0, "budget.epsilon", "must lie in [0, 1)");
  require(budget.input_intensity >= 0.0, "budget.input_intensity", "must be >= 0");

  require(channel.fiber_loss_db_per_km >= 0.0, "channel.fiber_loss_db_per_km", "must be >= 0");
  require(channel.detector_efficiency > 0.0 && channel.detector_efficiency <= 1.0,
          "channel.detector_efficiency", "must lie in (0, 1]");
  require(channel.dark_count_prob >= 0.0 && channel.dark_count_prob <= 1.0,
          "channel.dark_count_prob", "must lie in [0, 1]");
  require(channel.misalignment_error >= 0.0 && channel.misalignment_error <= 0.5,
          "channel.misalignment_error", "must lie in [0, 1/2]");
  require(channel.error_correction_efficiency >= 1.0, "channel.error_correction_efficiency",
          "must be >= 1");

  require(protocol.decoy_intensity > 0.0, "protocol.decoy_intensity", "must be > 0");
  require(protocol.decoy_intensity < protocol.signal_intensity, "protocol.decoy_intensity",
          "must be below protocol.signal_intensity");
  for (auto [name, v] : {std::pair{"protocol.p_signal", protocol.p_signal},
                         std::pair{"protocol.p_decoy", protocol.p_decoy},
                         std::pair{"protocol.p_vacuum", protocol.p_vacuum},
                         std::pair{"protocol.p_basis_x", protocol.p_basis_x}})
    require(v >= 0.0 && v <= 1.0, name, "must lie in [0, 1]");
  require(std::abs(protocol.p_signal + protocol.p_decoy + protocol.p_vacuum - 1.0) <= 1e-12,
          "protocol.p_signal", "p_signal + p_decoy + p_vacuum must equal 1");
  require(protocol.n_pulses > 0.0, "protocol.n_pulses", "must be positive");

  for (std::size_t i = 0; i < distances.size(); ++i) {
    require(distances[i] >= 0.0, "sweep.distances", "must be >= 0");
    if (i > 0) require(distances[i] >= distances[i - 1], "sweep.distances", "must be ascending");
  }

  if (delta_override)
    require(*delta_override >= 0.0 && *delta_override <= 0.5, "analysis.delta", "must lie in [0, 1/2]");

  require(coin.y1 > 0.0 && coin.y1 <= 1.0, "coin.y1", "must lie in (0, 1]");
  require(coin.e1_bit >= 0.0 && coin.e1_bit <= 0.5, "coin.e1_bit", "must lie in [0, 1/2]");
  require(coin.m1_lower > 0.0, "coin.m1_lower", "must be positive");

  // Anything the modules reject that the checks above missed.
  try {
    setup().validate();
  } catch (const Error& e) {
    fail("config", e.what());
  }
}

RunConfig parse_config(const std::string& text) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCode::ConfigError, std::string("malformed config: ") + e.message() +
                                            " at line " + std::to_string(e.line()));
  }

  for (const auto& [name, node] : tree) {
    if (node.empty()) fail(name, "key outside any section");
    bool known = false;
    for (const auto& [section, keys] : schema()) known = known || section == name;
    if (!known) fail(name, "unknown section");
  }

  RunConfig cfg;
  bool sweep_given = false;
  for (const auto& [section, keys] : schema()) {
    const auto it = tree.find(section);
    if (it == tree.not_found()) continue;
    const auto& node = it->second;

    if (section == "sweep") {
      sweep_given = true;
      const bool has_list = node.count("distances") > 0;
      const bool has_range = node.count("start") + node.count("stop") + node.count("step") > 0;
      if (has_list && has_range) fail("sweep", "give either distances or start/stop/step, not both");
      if (has_range) {
        for (const char* k : {"start", "stop", "step"})
          if (node.count(k) == 0) fail(std::string("sweep.") + k, "missing");
        cfg.range = DistanceRange{};
      }
    }
    if (section == "budget" && node.count("mu_out") > 0 &&
        (node.count("input_intensity") > 0 || node.count("attenuation_db") > 0))
      fail("budget.mu_out", "give either mu_out or input_intensity/attenuation_db, not both");

    // prep.model first, so the remaining prep keys see the chosen model.
    std::vector<std::pair<std::string, std::string>> entries;
    for (const auto& [key, child] : node) {
      const std::string field = section + "." + key;
      if (!child.empty()) fail(field, "nested keys are not allowed");
      if (keys.count(key) == 0) fail(field, "unknown key");
      if (key == "model") entries.insert(entries.begin(), {key, child.data()});
      else entries.emplace_back(key, child.data());
    }
    for (const auto& [key, value] : entries) keys.at(key)(cfg, section + "." + key, value);
  }

  if (cfg.budget_from_hardware) {
    cfg.budget = TrojanBudget::from_hardware(cfg.budget.input_intensity, cfg.budget.attenuation_db,
                                             cfg.budget.epsilon);
  }
  if (!sweep_given) cfg.range = kDefaultRange;
  if (cfg.range) cfg.distances = expand_range(*cfg.range);

  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream o;
  auto list = [](auto first, auto last) {
    std::string s;
    for (auto it = first; it != last; ++it) s += (it == first ? "" : ", ") + format_double(*it);
    return s;
  };

  o << "[prep]\n";
  if (const auto* g = std::get_if<GaussianPrepModel>(&cfg.prep)) {
    o << "model = gaussian\n"
      << "phi_mean = " << list(g->phi_mean.begin(), g->phi_mean.end()) << "\n"
      << "phi_sigma = " << list(g->phi_sigma.begin(), g->phi_sigma.end()) << "\n"
      << "theta_mean = " << format_double(g->theta_mean) << "\n"
      << "theta_sigma = " << format_double(g->theta_sigma) << "\n";
  } else {
    o << "model = ideal\n"
      << "phi0 = " << format_double(std::get<IdealPrep>(cfg.prep).phi0) << "\n";
  }

  o << "\n[budget]\n";
  if (cfg.budget_from_hardware) {
    o << "input_intensity = " << format_double(cfg.budget.input_intensity) << "\n"
      << "attenuation_db = " << format_double(cfg.budget.attenuation_db) << "\n";
  } else {
    o << "mu_out = " << format_double(cfg.budget.mu_out) << "\n";
  }
  o << "epsilon = " << format_double(cfg.budget.epsilon) << "\n";

  const auto& ch = cfg.channel;
  o << "\n[channel]\n"
    << "fiber_loss_db_per_km = " << format_double(ch.fiber_loss_db_per_km) << "\n"
    << "detector_efficiency = " << format_double(ch.detector_efficiency) << "\n"
    << "dark_count_prob = " << format_double(ch.dark_count_prob) << "\n"
    << "misalignment_error = " << format_double(ch.misalignment_error) << "\n"
    << "error_correction_efficiency = " << format_double(ch.error_correction_efficiency) << "\n";

  const auto& p = cfg.protocol;
  o << "\n[protocol]\n"
    << "signal_intensity = " << format_double(p.signal_intensity) << "\n"
    << "decoy_intensity = " << format_double(p.decoy_intensity) << "\n"
    << "p_signal = " << format_double(p.p_signal) << "\n"
    << "p_decoy = " << format_double(p.p_decoy) << "\n"
    << "p_vacuum = " << format_double(p.p_vacuum) << "\n"
    << "p_basis_x = " << format_double(p.p_basis_x) << "\n"
    << "n_pulses = " << format_double(p.n_pulses) << "\n";

  o << "\n[sweep]\n";
  if (cfg.range) {
    o << "start = " << format_double(cfg.range->start) << "\n"
      << "stop = " << format_double(cfg.range->stop) << "\n"
      << "step = " << format_double(cfg.range->step) << "\n";
  } else {
    o << "distances = " << list(cfg.distances.begin(), cfg.distances.end()) << "\n";
  }

  o << "\n[analysis]\n"
    << "mode = " << to_string(cfg.mode) << "\n";
  if (cfg.delta_override) o << "delta = " << format_double(*cfg.delta_override) << "\n";

  o << "\n[coin]\n"
    << "y1 = " << format_double(cfg.coin.y1) << "\n"
    << "e1_bit = " << format_double(cfg.coin.e1_bit) << "\n"
    << "m1_lower = " << format_double(cfg.coin.m1_lower) << "\n";
  return o.str();
}

std::string config_comment_block(const RunConfig& cfg) {
  std::istringstream in(serialize_config(cfg));
  std::string out, line;
  while (std::getline(in, line)) out += line.empty() ? "#\n" : "# " + line + "\n";
  return out;
}

}  // namespace qcoin
