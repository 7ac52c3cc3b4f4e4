#include "runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>

#include "macrospin/classical.hpp"
#include "macrospin/closed_forms.hpp"
#include "macrospin/jacobi_eigensolver.hpp"
#include "macrospin/parallel.hpp"
#include "macrospin/spin_algebra.hpp"

#ifndef MACROSPIN_VERSION
#define MACROSPIN_VERSION "0.0.0"
#endif

namespace macrospin::cli {

namespace {

using ojson = nlohmann::ordered_json;

// Dense window for the initial-decay fit, in units of 1/Delta.
constexpr double kInitialWindow = 0.3;
constexpr std::size_t kInitialSamples = 3001;

// Identity tolerance applied to every ED record.
constexpr double kIdentityTolerance = 1e-9;

ojson optional_number(const std::optional<double>& v) {
  return v ? ojson(*v) : ojson(nullptr);
}

std::vector<double> linspace(double t_max, std::size_t n) {
  return TimeGrid{t_max, n}.times();
}

ObservableRecord mirrored(double t, double c, double c1, const Vec3& n1) {
  ObservableRecord r;
  r.t_tilde = t;
  r.c = c;
  r.c1 = c1;
  r.n1 = n1;
  r.n2 = Vec3(n1.x(), -n1.y(), -n1.z());
  return r;
}

std::optional<ClosedFormKind> closed_form_of(Backend b) {
  switch (b) {
    case Backend::SpinHalf: return ClosedFormKind::SpinHalfExact;
    case Backend::EffSmallJ: return ClosedFormKind::SmallJEffective;
    case Backend::EffLargeJ1Sphere: return ClosedFormKind::LargeJSingleSphere;
    case Backend::EffLargeJ2Sphere: return ClosedFormKind::LargeJTwoSphere;
    default: return std::nullopt;
  }
}

ojson timescales_json(const TimescaleReport& r) {
  ojson j;
  j["regime"] = to_string(r.regime);
  j["t_i"] = optional_number(r.t_i);
  j["t_o"] = optional_number(r.t_o);
  j["t_e"] = optional_number(r.t_e);
  j["t_ar"] = optional_number(r.t_ar);
  j["t_i_rms_residual"] = r.t_i_rms_residual;
  j["t_i_points"] = r.t_i_points;
  j["oscillation_extrema"] = r.oscillation_extrema;
  j["oscillation_from_zeros"] = r.oscillation_from_zeros;
  j["envelope_given"] = r.envelope_given;
  j["ordered"] = r.ordered();
  j["thresholds"] = {
      {"eps_c", r.thresholds.critical_band},
      {"eps_e", r.thresholds.collapse},
      {"eps_r", r.thresholds.recurrence},
      {"initial_decay", r.thresholds.initial_decay},
      {"turning_fraction", r.thresholds.turning_fraction},
      {"oscillation_envelope", r.thresholds.oscillation_envelope},
  };
  j["flags"] = r.flags;
  return j;
}

ojson predicted_json(Backend b, const ModelParams& p, double band) {
  ojson j;
  j["t_i"] = std::numbers::sqrt2 / p.delta;
  std::optional<double> t_o, t_ar;
  const Regime regime = classify_regime(p, band);
  if (b == Backend::Classical) {
    if (regime != Regime::Critical) t_o = classical_period(p);
    j["t_o"] = optional_number(t_o);
    j["t_ar"] = nullptr;
    return j;
  }
  switch (regime) {
    case Regime::Dephased:
      t_o = std::numbers::pi / p.delta;
      if (p.j > 0.0) t_ar = recurrence_time_small_j(p);
      break;
    case Regime::Synchronized:
      t_o = oscillation_period_large_j(p);
      t_ar = recurrence_time_large_j(p);
      break;
    case Regime::Critical:
      break;
  }
  j["t_o"] = optional_number(t_o);
  j["t_ar"] = optional_number(t_ar);
  return j;
}

std::string spin_tag(SpinSize s) {
  std::string out = s.to_string();
  std::replace(out.begin(), out.end(), '/', '_');
  return out;
}

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

std::string version() { return MACROSPIN_VERSION; }

EnvelopeSource envelope_source(Backend b) {
  switch (b) {
    case Backend::Classical:
    case Backend::Ed:
    case Backend::EffSmallJ:
      return EnvelopeSource::Transverse;
    case Backend::EffLargeJ1Sphere:
    case Backend::EffLargeJ2Sphere:
      return EnvelopeSource::C1;
    default:
      return EnvelopeSource::None;
  }
}

std::vector<Column> backend_columns(Backend b) {
  using C = Column;
  switch (b) {
    case Backend::Classical:
      return {C::TTilde, C::C, C::C1, C::N1x, C::N1y, C::N1z,
              C::N2x,    C::N2y, C::N2z, C::Energy, C::DirectionValid};
    case Backend::Ed:
      return all_columns();
    case Backend::SpinHalf:
      return {C::TTilde, C::C};
    case Backend::EffSmallJ:
      return {C::TTilde, C::C,   C::C1,  C::N1x, C::N1y,
              C::N1z,    C::N2x, C::N2y, C::N2z, C::DirectionValid};
    case Backend::EffLargeJ1Sphere:
    case Backend::EffLargeJ2Sphere:
      return {C::TTilde, C::C, C::C1};
    case Backend::All:
      break;
  }
  throw ConfigError("backend 'all' has no single column set");
}

ObservableSeries sample_backend(Backend b, const ModelParams& params,
                                std::span<const double> t_tilde, unsigned threads) {
  ObservableSeries out;
  out.reserve(t_tilde.size());
  switch (b) {
    case Backend::Classical: {
      return to_observables(params, classical_trajectory(params, t_tilde));
    }
    case Backend::Ed: {
      const auto spectrum = eigensolve(build_hamiltonian(params), threads);
      EvolveOptions opts;
      opts.threads = threads;
      out = evolve_at(spectrum, build_coherent_state(params.spin), t_tilde, opts);
      for (const auto& r : out) check_identities(r, params.spin, kIdentityTolerance);
      return out;
    }
    case Backend::SpinHalf: {
      if (params.spin.two_s() != 1) throw ConfigError("spin_half needs S = 1/2");
      for (double t : t_tilde) {
        ObservableRecord r;
        r.t_tilde = t;
        r.c = contrast_spin_half_exact(params.j, params.delta, t);
        out.push_back(r);
      }
      return out;
    }
    case Backend::EffSmallJ: {
      for (double t : t_tilde) {
        const auto f = contrast_small_j_effective(params, t);
        out.push_back(mirrored(t, f.c, f.c1, f.n1));
      }
      return out;
    }
    case Backend::EffLargeJ1Sphere:
    case Backend::EffLargeJ2Sphere: {
      for (double t : t_tilde) {
        ObservableRecord r;
        r.t_tilde = t;
        r.c1 = contrast_large_j_single_sphere(params, t);
        r.c = b == Backend::EffLargeJ1Sphere ? r.c1 : contrast_large_j_two_sphere(params, t);
        out.push_back(r);
      }
      return out;
    }
    case Backend::All:
      break;
  }
  throw ConfigError("backend 'all' must be expanded before sampling");
}

std::vector<PointSpec> plan_points(const RunConfig& cfg, Command command) {
  validate(cfg);
  auto spins = cfg.spins;
  std::sort(spins.begin(), spins.end());
  spins.erase(std::unique(spins.begin(), spins.end()), spins.end());
  auto ratios = cfg.j_over_delta;
  std::sort(ratios.begin(), ratios.end());
  ratios.erase(std::unique(ratios.begin(), ratios.end()), ratios.end());

  if (command == Command::Sweep) {
    if (spins.size() < kMinScalingPoints) {
      throw ConfigError("config field 'spin': a scaling sweep needs at least " +
                        std::to_string(kMinScalingPoints) + " distinct spin sizes, got " +
                        std::to_string(spins.size()));
    }
    if (cfg.backend == Backend::All || cfg.backend == Backend::Classical ||
        cfg.backend == Backend::SpinHalf) {
      throw ConfigError("config field 'backend': a scaling sweep needs one quantum backend "
                        "(ed, eff_small_j, eff_large_j_1sphere, eff_large_j_2sphere)");
    }
  }

  const double band = cfg.thresholds.critical_band;
  std::vector<PointSpec> plan;
  for (const auto& spin : spins) {
    for (double r : ratios) {
      ModelParams p{r * cfg.delta, cfg.delta, spin, Frame::Quantum};
      const double t_max = cfg.t_max.value_or(auto_t_max(p, band));
      TimeGrid grid = cfg.samples ? TimeGrid{t_max, *cfg.samples} : TimeGrid::guarded(p, t_max);
      if (!grid.satisfies_guard(p)) {
        throw ConfigError("config field 'samples': " + std::to_string(grid.n_samples) +
                          " samples on [0, " + short_number(t_max) +
                          "] undersample the fast oscillation (need dt <= " +
                          short_number(TimeGrid::max_step(p)) + ")");
      }
      for (Backend b : expand_backend(cfg.backend, p, band)) {
        plan.push_back({b, p, r, grid});
      }
    }
  }
  return plan;
}

std::vector<PointResult> execute(const RunConfig& cfg, const std::vector<PointSpec>& plan) {
  std::vector<PointResult> results(plan.size());
  const unsigned threads = resolve_threads(cfg.threads);
  const bool outer = threads > 1 && plan.size() > 1;
  const unsigned inner = outer ? 1 : threads;
  const double band = cfg.thresholds.critical_band;

  parallel_for(plan.size(), outer ? threads : 1, [&](std::size_t i) {
    const PointSpec& spec = plan[i];
    PointResult& res = results[i];
    res.spec = spec;
    res.columns = backend_columns(spec.backend);
    if (auto kind = closed_form_of(spec.backend)) {
      if (!check_validity(*kind, spec.params, false, band)) {
        if (cfg.strict) {
          throw ConfigError("backend '" + std::string(to_string(spec.backend)) +
                            "' outside its validity domain at S=" + spec.params.spin.to_string() +
                            ", J/Delta=" + short_number(spec.j_over_delta));
        }
        res.warnings.push_back(std::string(to_string(spec.backend)) +
                               " evaluated outside its validity domain");
      }
    }
    const auto times = spec.grid.times();
    res.series = sample_backend(spec.backend, spec.params, times, inner);
    const auto initial_series = sample_backend(
        spec.backend, spec.params, linspace(kInitialWindow / spec.params.delta, kInitialSamples),
        inner);

    const auto main = contrast_series(res.series, envelope_source(spec.backend));
    const auto initial = contrast_series(initial_series, EnvelopeSource::None);
    res.report = extract_timescales(main, spec.params, cfg.thresholds, &initial);
  });
  return results;
}

std::string series_file_name(const PointSpec& p, OutputFormat format) {
  return "series_" + std::string(to_string(p.backend)) + "_S" + spin_tag(p.params.spin) + "_jd" +
         short_number(p.j_over_delta) + (format == OutputFormat::Csv ? ".csv" : ".json");
}

ojson report_json(const RunConfig& cfg, Command command, const std::vector<PointResult>& results) {
  ojson j;
  j["artifact"] = "macrospin";
  j["version"] = version();
  j["command"] = command == Command::Run ? "run" : "sweep";
  auto points = ojson::array();
  for (const auto& r : results) {
    const auto& p = r.spec.params;
    ojson e;
    e["backend"] = to_string(r.spec.backend);
    e["spin"] = p.spin.to_string();
    e["j_over_delta"] = r.spec.j_over_delta;
    e["j"] = p.j;
    e["delta"] = p.delta;
    e["lambda"] = p.lambda();
    e["t_max"] = r.spec.grid.t_max;
    e["samples"] = r.spec.grid.n_samples;
    e["file"] = series_file_name(r.spec, cfg.format);
    e["envelope"] = to_string(envelope_source(r.spec.backend));
    e["timescales"] = timescales_json(r.report);
    e["predicted"] = predicted_json(r.spec.backend, p, cfg.thresholds.critical_band);
    e["warnings"] = r.warnings;
    points.push_back(std::move(e));
  }
  j["points"] = std::move(points);
  return j;
}

ojson metadata_json(const RunConfig& cfg, Command command, const std::vector<PointResult>& results) {
  ojson j;
  j["artifact"] = "macrospin";
  j["version"] = version();
  j["command"] = command == Command::Run ? "run" : "sweep";
  j["config"] = to_json(cfg);
  std::vector<std::string> backends;
  std::map<std::string, ojson> columns;
  std::vector<SpinSize> spins;
  for (const auto& r : results) {
    const std::string name(to_string(r.spec.backend));
    if (std::find(backends.begin(), backends.end(), name) == backends.end()) {
      backends.push_back(name);
      auto cols = ojson::array();
      for (auto c : r.columns) cols.push_back(column_name(c));
      columns[name] = cols;
    }
    if (std::find(spins.begin(), spins.end(), r.spec.params.spin) == spins.end()) {
      spins.push_back(r.spec.params.spin);
    }
  }
  j["backends"] = backends;
  auto lambdas = ojson::array();
  for (const auto& s : spins) {
    lambdas.push_back({{"spin", s.to_string()},
                       {"quantum", rescaling_length(s, Frame::Quantum)},
                       {"classical", rescaling_length(s, Frame::Classical)}});
  }
  j["lambda"] = lambdas;
  j["thresholds"] = to_json(cfg)["thresholds"];
  ojson cols;
  for (const auto& [k, v] : columns) cols[k] = v;
  j["columns"] = cols;
  j["number_format"] = "%.17g";
  return j;
}

std::vector<ScalingEntry> fit_scaling(const std::vector<PointResult>& results) {
  std::map<std::pair<int, double>, std::vector<SpinReport>> groups;
  for (const auto& r : results) {
    groups[{static_cast<int>(r.spec.backend), r.spec.j_over_delta}].push_back(
        {r.spec.params.spin, r.report});
  }
  std::vector<ScalingEntry> out;
  for (const auto& [key, reports] : groups) {
    ScalingEntry e;
    e.backend = static_cast<Backend>(key.first);
    e.j_over_delta = key.second;
    try {
      e.fit = fit_envelope_scaling(reports);
    } catch (const std::invalid_argument& err) {
      e.error = err.what();
    }
    out.push_back(std::move(e));
  }
  return out;
}

ojson scaling_json(const std::vector<ScalingEntry>& fits) {
  ojson j;
  j["artifact"] = "macrospin";
  j["version"] = version();
  auto arr = ojson::array();
  for (const auto& e : fits) {
    ojson f;
    f["backend"] = to_string(e.backend);
    f["j_over_delta"] = e.j_over_delta;
    if (e.fit) {
      f["exponent"] = e.fit->exponent;
      f["exponent_stderr"] = e.fit->exponent_stderr;
      f["prefactor"] = e.fit->prefactor;
      auto pts = ojson::array();
      for (const auto& p : e.fit->points) pts.push_back({{"s", p.s}, {"t_e", p.value}});
      f["points"] = pts;
      f["excluded_spins"] = e.fit->excluded_spins;
      f["error"] = nullptr;
    } else {
      f["exponent"] = nullptr;
      f["error"] = e.error;
    }
    arr.push_back(std::move(f));
  }
  j["fits"] = std::move(arr);
  return j;
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  os << text;
  os.flush();
  if (!os) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace

void write_outputs(const RunConfig& cfg, Command command, const std::vector<PointResult>& results,
                   const std::vector<ScalingEntry>* scaling) {
  const std::filesystem::path dir(cfg.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
  for (const auto& r : results) {
    std::ostringstream ss;
    if (cfg.format == OutputFormat::Csv) {
      write_series_csv(ss, r.columns, r.series);
    } else {
      write_series_json(ss, r.columns, r.series);
    }
    write_text(dir / series_file_name(r.spec, cfg.format), ss.str());
  }
  write_text(dir / "report.json", report_json(cfg, command, results).dump(2) + "\n");
  write_text(dir / "metadata.json", metadata_json(cfg, command, results).dump(2) + "\n");
  if (scaling) write_text(dir / "scaling.json", scaling_json(*scaling).dump(2) + "\n");
}

SeriesTable read_series_json(std::istream& is) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("column 't_tilde': JSON parse error: ") + e.what());
  }
  if (!j.contains("columns") || !j["columns"].is_array()) {
    throw SchemaError("column 't_tilde': missing 'columns' array");
  }
  std::vector<std::string> names;
  for (const auto& c : j["columns"]) {
    if (!c.is_string()) throw SchemaError("column name is not a string");
    names.push_back(c.get<std::string>());
  }
  SeriesTable table;
  table.columns = columns_from_names(names);
  if (!j.contains("rows") || !j["rows"].is_array()) {
    throw SchemaError("column 't_tilde': missing 'rows' array");
  }
  std::size_t row = 0;
  for (const auto& r : j["rows"]) {
    if (!r.is_array() || r.size() != table.columns.size()) {
      throw SchemaError("column '" + std::string(column_name(table.columns.back())) + "' row " +
                        std::to_string(row) + ": wrong field count");
    }
    ObservableRecord rec;
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (!r[i].is_number()) {
        throw SchemaError("column '" + std::string(column_name(table.columns[i])) + "' row " +
                          std::to_string(row) + ": not a number");
      }
      set_column_value(rec, table.columns[i], r[i].get<double>());
    }
    table.records.push_back(rec);
    ++row;
  }
  return table;
}

SeriesTable read_series_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path.string() + "'");
  if (path.extension() == ".json") return read_series_json(is);
  return read_series_csv(is);
}

int run_pipeline(const RunConfig& cfg, Command command) {
  try {
    const auto plan = plan_points(cfg, command);
    const auto results = execute(cfg, plan);
    for (const auto& r : results) {
      for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
    }
    std::optional<std::vector<ScalingEntry>> scaling;
    int code = kExitOk;
    if (command == Command::Sweep) {
      scaling = fit_scaling(results);
      for (const auto& e : *scaling) {
        if (!e.fit) {
          std::cerr << "warning: scaling fit at J/Delta=" << short_number(e.j_over_delta)
                    << " failed: " << e.error << "\n";
          if (cfg.strict) code = kExitIntegrity;
        }
      }
    }
    write_outputs(cfg, command, results, scaling ? &*scaling : nullptr);
    std::cout << "wrote " << results.size() << " series to " << cfg.out_dir << "\n";
    return code;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IntegrityError& e) {
    std::cerr << "integrity failure: " << e.what() << "\n";
    return kExitIntegrity;
  } catch (const ConvergenceError& e) {
    std::cerr << "integrity failure: " << e.what() << "\n";
    return kExitIntegrity;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace macrospin::cli
