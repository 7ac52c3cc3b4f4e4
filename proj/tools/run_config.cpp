#include "run_config.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <utility>

#include "macrospin/closed_forms.hpp"

namespace macrospin::cli {

namespace {

constexpr std::array<std::pair<Backend, std::string_view>, 7> kBackends{{
    {Backend::Classical, "classical"},
    {Backend::Ed, "ed"},
    {Backend::SpinHalf, "spin_half"},
    {Backend::EffSmallJ, "eff_small_j"},
    {Backend::EffLargeJ1Sphere, "eff_large_j_1sphere"},
    {Backend::EffLargeJ2Sphere, "eff_large_j_2sphere"},
    {Backend::All, "all"},
}};

template <class T>
T read_as(const nlohmann::json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

SpinSize spin_from_json(const nlohmann::json& v) {
  try {
    if (v.is_string()) return SpinSize::parse(v.get<std::string>());
    if (v.is_number()) {
      const double s = v.get<double>();
      const double two_s = 2.0 * s;
      if (std::abs(two_s - std::round(two_s)) > 1e-12) {
        throw std::invalid_argument("not a multiple of 1/2");
      }
      return SpinSize(static_cast<int>(std::lround(two_s)));
    }
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config field 'spin': ") + e.what());
  }
  throw ConfigError("config field 'spin': expected a string or number");
}

void merge_thresholds(AnalysisThresholds& th, const nlohmann::json& j) {
  static const std::array<std::pair<const char*, double AnalysisThresholds::*>, 6> kFields{{
      {"eps_c", &AnalysisThresholds::critical_band},
      {"eps_e", &AnalysisThresholds::collapse},
      {"eps_r", &AnalysisThresholds::recurrence},
      {"initial_decay", &AnalysisThresholds::initial_decay},
      {"turning_fraction", &AnalysisThresholds::turning_fraction},
      {"oscillation_envelope", &AnalysisThresholds::oscillation_envelope},
  }};
  if (!j.is_object()) throw ConfigError("config field 'thresholds': expected an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const auto& [name, member] : kFields) {
      if (key == name) {
        th.*member = read_as<double>(j, name);
        known = true;
      }
    }
    if (!known) throw ConfigError("config field 'thresholds." + key + "': unknown key");
  }
}

}  // namespace

std::string_view to_string(Backend b) noexcept {
  for (const auto& [value, name] : kBackends) {
    if (value == b) return name;
  }
  return "unknown";
}

Backend parse_backend(std::string_view name) {
  for (const auto& [value, n] : kBackends) {
    if (n == name) return value;
  }
  throw ConfigError("config field 'backend': unknown backend '" + std::string(name) + "'");
}

std::string_view to_string(OutputFormat f) noexcept {
  return f == OutputFormat::Csv ? "csv" : "json";
}

OutputFormat parse_format(std::string_view name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw ConfigError("config field 'format': expected csv or json, got '" + std::string(name) +
                    "'");
}

void validate(const RunConfig& cfg) {
  if (cfg.spins.empty()) throw ConfigError("config field 'spin': empty list");
  if (cfg.j_over_delta.empty()) throw ConfigError("config field 'j_over_delta': empty list");
  if (!(cfg.delta > 0.0) || !std::isfinite(cfg.delta)) {
    throw ConfigError("config field 'delta': must be positive and finite");
  }
  for (double r : cfg.j_over_delta) {
    if (!(r >= 0.0) || !std::isfinite(r)) {
      throw ConfigError("config field 'j_over_delta': values must be finite and >= 0");
    }
  }
  if (cfg.t_max && (!(*cfg.t_max > 0.0) || !std::isfinite(*cfg.t_max))) {
    throw ConfigError("config field 't_max': must be positive and finite");
  }
  if (cfg.samples && *cfg.samples < 2) throw ConfigError("config field 'samples': need >= 2");
  if (cfg.backend == Backend::SpinHalf) {
    for (const auto& s : cfg.spins) {
      if (s.two_s() != 1) {
        throw ConfigError("config field 'backend': spin_half needs S = 1/2, got S = " +
                          s.to_string());
      }
    }
  }
  const auto& th = cfg.thresholds;
  if (!(th.critical_band >= 0.0 && th.critical_band < 1.0)) {
    throw ConfigError("config field 'thresholds.eps_c': must lie in [0, 1)");
  }
  if (!(th.collapse > 0.0 && th.collapse < th.recurrence && th.recurrence < 1.0)) {
    throw ConfigError("config field 'thresholds': need 0 < eps_e < eps_r < 1");
  }
  if (!(th.initial_decay > 0.0 && th.initial_decay < 1.0) ||
      !(th.turning_fraction > 0.0 && th.turning_fraction <= 1.0) ||
      !(th.oscillation_envelope >= 0.0 && th.oscillation_envelope < 1.0)) {
    throw ConfigError("config field 'thresholds': fit window parameters out of range");
  }
}

void merge_config(RunConfig& cfg, const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "backend") {
      cfg.backend = parse_backend(read_as<std::string>(j, "backend"));
    } else if (key == "spin") {
      cfg.spins.clear();
      if (value.is_array()) {
        for (const auto& v : value) cfg.spins.push_back(spin_from_json(v));
      } else {
        cfg.spins.push_back(spin_from_json(value));
      }
    } else if (key == "j_over_delta") {
      cfg.j_over_delta = value.is_array() ? read_as<std::vector<double>>(j, "j_over_delta")
                                          : std::vector<double>{read_as<double>(j, "j_over_delta")};
    } else if (key == "delta") {
      cfg.delta = read_as<double>(j, "delta");
    } else if (key == "t_max") {
      if (value.is_null() || value == "auto") {
        cfg.t_max.reset();
      } else {
        cfg.t_max = read_as<double>(j, "t_max");
      }
    } else if (key == "samples") {
      if (value.is_null() || value == "auto") {
        cfg.samples.reset();
      } else {
        cfg.samples = read_as<std::size_t>(j, "samples");
      }
    } else if (key == "thresholds") {
      merge_thresholds(cfg.thresholds, value);
    } else if (key == "out") {
      cfg.out_dir = read_as<std::string>(j, "out");
    } else if (key == "format") {
      cfg.format = parse_format(read_as<std::string>(j, "format"));
    } else if (key == "threads") {
      cfg.threads = read_as<unsigned>(j, "threads");
    } else if (key == "strict") {
      cfg.strict = read_as<bool>(j, "strict");
    } else {
      throw ConfigError("config field '" + key + "': unknown key");
    }
  }
}

RunConfig config_from_json(const nlohmann::json& j) {
  RunConfig cfg;
  merge_config(cfg, j);
  return cfg;
}

nlohmann::ordered_json to_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["backend"] = to_string(cfg.backend);
  auto spins = nlohmann::ordered_json::array();
  for (const auto& s : cfg.spins) spins.push_back(s.to_string());
  j["spin"] = spins;
  j["j_over_delta"] = cfg.j_over_delta;
  j["delta"] = cfg.delta;
  j["t_max"] = cfg.t_max ? nlohmann::ordered_json(*cfg.t_max) : nlohmann::ordered_json("auto");
  j["samples"] =
      cfg.samples ? nlohmann::ordered_json(*cfg.samples) : nlohmann::ordered_json("auto");
  j["thresholds"] = {
      {"eps_c", cfg.thresholds.critical_band},
      {"eps_e", cfg.thresholds.collapse},
      {"eps_r", cfg.thresholds.recurrence},
      {"initial_decay", cfg.thresholds.initial_decay},
      {"turning_fraction", cfg.thresholds.turning_fraction},
      {"oscillation_envelope", cfg.thresholds.oscillation_envelope},
  };
  j["out"] = cfg.out_dir;
  j["format"] = to_string(cfg.format);
  j["threads"] = cfg.threads;
  j["strict"] = cfg.strict;
  return j;
}

std::vector<Backend> expand_backend(Backend b, const ModelParams& params, double band) {
  if (b != Backend::All) return {b};
  std::vector<Backend> out{Backend::Classical, Backend::Ed};
  if (params.spin.two_s() == 1) out.push_back(Backend::SpinHalf);
  if (in_validity_domain(ClosedFormKind::SmallJEffective, params, band)) {
    out.push_back(Backend::EffSmallJ);
  }
  if (in_validity_domain(ClosedFormKind::LargeJTwoSphere, params, band)) {
    out.push_back(Backend::EffLargeJ1Sphere);
    out.push_back(Backend::EffLargeJ2Sphere);
  }
  return out;
}

double auto_t_max(const ModelParams& params, double band) {
  const double fallback = 20.0 * std::numbers::pi / params.delta;
  auto finite_or = [&](double t) { return std::isfinite(t) && t > 0.0 ? t : fallback; };
  switch (classify_regime(params, band)) {
    case Regime::Dephased:
      return 1.5 * finite_or(recurrence_time_small_j(params));
    case Regime::Synchronized:
      return 1.5 * finite_or(recurrence_time_large_j(params));
    case Regime::Critical:
      return 1.5 * std::max(finite_or(recurrence_time_small_j(params)),
                            finite_or(recurrence_time_large_j(params)));
  }
  return fallback;
}

}  // namespace macrospin::cli
