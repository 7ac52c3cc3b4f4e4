#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "macrospin/analysis.hpp"
#include "macrospin/exact_dynamics.hpp"
#include "macrospin/series_io.hpp"
#include "run_config.hpp"

namespace macrospin::cli {

enum class Command { Run, Sweep };

struct PointSpec {
  Backend backend = Backend::Ed;
  ModelParams params;
  double j_over_delta = 0.0;
  TimeGrid grid;
};

struct PointResult {
  PointSpec spec;
  std::vector<Column> columns;
  ObservableSeries series;
  TimescaleReport report;
  std::vector<std::string> warnings;
};

/// Envelope the extractor uses for a backend's series.
EnvelopeSource envelope_source(Backend b);

/// Columns a backend fills.
std::vector<Column> backend_columns(Backend b);

/// Observables of one backend at the given rescaled times.  The ED backend
/// checks conservation laws and the per-record identities and throws
/// IntegrityError on failure.
ObservableSeries sample_backend(Backend b, const ModelParams& params,
                                std::span<const double> t_tilde, unsigned threads = 1);

/// Expands a config into points sorted by S, then J/Delta, then backend.
std::vector<PointSpec> plan_points(const RunConfig& cfg, Command command = Command::Run);

/// Runs every point on a pool of cfg.threads workers.  Output order is the
/// plan order whatever the worker count.
std::vector<PointResult> execute(const RunConfig& cfg, const std::vector<PointSpec>& plan);

std::string series_file_name(const PointSpec& p, OutputFormat format);

nlohmann::ordered_json report_json(const RunConfig& cfg, Command command,
                                   const std::vector<PointResult>& results);
nlohmann::ordered_json metadata_json(const RunConfig& cfg, Command command,
                                     const std::vector<PointResult>& results);

struct ScalingEntry {
  Backend backend = Backend::Ed;
  double j_over_delta = 0.0;
  std::optional<ScalingFit> fit;
  std::string error;
};

std::vector<ScalingEntry> fit_scaling(const std::vector<PointResult>& results);
nlohmann::ordered_json scaling_json(const std::vector<ScalingEntry>& fits);

/// Writes series files, report.json, metadata.json and, for sweeps,
/// scaling.json.  Throws IoError.
void write_outputs(const RunConfig& cfg, Command command, const std::vector<PointResult>& results,
                   const std::vector<ScalingEntry>* scaling);

/// Reads a series file in either format back through the schema parser.
SeriesTable read_series_file(const std::filesystem::path& path);
SeriesTable read_series_json(std::istream& is);

/// Whole pipeline; returns the process exit code and reports errors on
/// stderr.
int run_pipeline(const RunConfig& cfg, Command command);

std::string version();

}  // namespace macrospin::cli
