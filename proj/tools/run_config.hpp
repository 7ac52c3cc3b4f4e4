#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "macrospin/analysis.hpp"
#include "macrospin/model.hpp"

namespace macrospin::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIntegrity = 3;
inline constexpr int kExitIo = 4;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Backend {
  Classical,
  Ed,
  SpinHalf,
  EffSmallJ,
  EffLargeJ1Sphere,
  EffLargeJ2Sphere,
  All,
};

std::string_view to_string(Backend b) noexcept;
Backend parse_backend(std::string_view name);

enum class OutputFormat { Csv, Json };

std::string_view to_string(OutputFormat f) noexcept;
OutputFormat parse_format(std::string_view name);

struct RunConfig {
  Backend backend = Backend::All;
  std::vector<SpinSize> spins;
  std::vector<double> j_over_delta;
  double delta = 1.0;
  std::optional<double> t_max;        ///< auto: 1.5 x predicted t_ar
  std::optional<std::size_t> samples;  ///< auto: smallest grid obeying the guard
  AnalysisThresholds thresholds;
  std::string out_dir = "out";
  OutputFormat format = OutputFormat::Csv;
  unsigned threads = 1;
  bool strict = false;
};

/// Throws ConfigError naming the offending field.
void validate(const RunConfig& cfg);

/// Reads the keys written by to_json; unknown keys are an error.
RunConfig config_from_json(const nlohmann::json& j);
/// Merges keys present in `j` over `base`.
void merge_config(RunConfig& base, const nlohmann::json& j);
nlohmann::ordered_json to_json(const RunConfig& cfg);

/// Backends a point actually runs for a requested backend.  `all` keeps
/// classical and ED, spin_half at S = 1/2, and the closed forms whose
/// validity domain holds the point.
std::vector<Backend> expand_backend(Backend b, const ModelParams& params, double band);

/// Regime-appropriate auto t_max: 1.5 t_ar from the small-J formula when
/// dephased, the large-J one when synchronized, the larger of the two in the
/// critical band.  If the formula is infinite (J = 0) falls back to
/// 20 pi / Delta.
double auto_t_max(const ModelParams& params, double band);

}  // namespace macrospin::cli
