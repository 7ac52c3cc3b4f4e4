// macrospin: batch runs, scaling sweeps and order-of-magnitude estimates for
// two coupled macrospins.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "runner.hpp"

namespace {

using namespace macrospin;
using namespace macrospin::cli;

struct Flags {
  std::string config_file;
  std::string backend;
  std::vector<std::string> spins;
  std::vector<double> j_over_delta;
  double delta = 1.0;
  std::string t_max;
  std::string samples;
  double eps_c = 0.0, eps_e = 0.0, eps_r = 0.0;
  std::string out;
  std::string format;
  unsigned threads = 1;
  bool strict = false;
};

void add_run_flags(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config_file, "JSON run configuration; flags override it");
  app->add_option("--backend", f.backend,
                  "classical, ed, spin_half, eff_small_j, eff_large_j_1sphere, "
                  "eff_large_j_2sphere or all");
  app->add_option("--spin", f.spins, "spin sizes, e.g. 1/2,1,10")->delimiter(',');
  app->add_option("--j-over-delta", f.j_over_delta, "coupling ratios J/Delta")->delimiter(',');
  app->add_option("--delta", f.delta, "rescaled inhomogeneity Delta (default 1)");
  app->add_option("--t-max", f.t_max, "end of the time window, or 'auto'");
  app->add_option("--samples", f.samples, "number of samples, or 'auto'");
  app->add_option("--eps-c", f.eps_c, "critical band half-width");
  app->add_option("--eps-e", f.eps_e, "collapse threshold on C1");
  app->add_option("--eps-r", f.eps_r, "recurrence threshold on C1");
  app->add_option("--out", f.out, "output directory");
  app->add_option("--format", f.format, "csv or json");
  app->add_option("--threads", f.threads, "worker threads (0 = all cores)");
  app->add_flag("--strict", f.strict, "closed forms outside their domain are errors");
}

RunConfig build_config(CLI::App* app, const Flags& f) {
  RunConfig cfg;
  if (!f.config_file.empty()) {
    std::ifstream is(f.config_file);
    if (!is) throw IoError("cannot open config '" + f.config_file + "'");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(is);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("config file: ") + e.what());
    }
    merge_config(cfg, j);
  }
  nlohmann::json over = nlohmann::json::object();
  auto given = [&](const char* name) { return app->count(name) > 0; };
  if (given("--backend")) over["backend"] = f.backend;
  if (given("--spin")) over["spin"] = f.spins;
  if (given("--j-over-delta")) over["j_over_delta"] = f.j_over_delta;
  if (given("--delta")) over["delta"] = f.delta;
  auto auto_or_number = [](const std::string& v, const char* field) -> nlohmann::json {
    if (v == "auto") return "auto";
    try {
      std::size_t used = 0;
      const double d = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
      return d;
    } catch (const std::exception&) {
      throw ConfigError(std::string("config field '") + field + "': cannot parse '" + v + "'");
    }
  };
  if (given("--t-max")) over["t_max"] = auto_or_number(f.t_max, "t_max");
  if (given("--samples")) {
    auto v = auto_or_number(f.samples, "samples");
    if (v.is_number()) {
      const double d = v.get<double>();
      if (d < 0 || d != static_cast<double>(static_cast<std::size_t>(d))) {
        throw ConfigError("config field 'samples': expected a non-negative integer");
      }
      v = static_cast<std::size_t>(d);
    }
    over["samples"] = v;
  }
  nlohmann::json th = nlohmann::json::object();
  if (given("--eps-c")) th["eps_c"] = f.eps_c;
  if (given("--eps-e")) th["eps_e"] = f.eps_e;
  if (given("--eps-r")) th["eps_r"] = f.eps_r;
  if (!th.empty()) over["thresholds"] = th;
  if (given("--out")) over["out"] = f.out;
  if (given("--format")) over["format"] = f.format;
  if (given("--threads")) over["threads"] = f.threads;
  if (given("--strict")) over["strict"] = f.strict;
  merge_config(cfg, over);
  return cfg;
}

int run_estimate(double delta_rad_s, const std::string& spin, double j_over_delta,
                 const std::string& frame_name) {
  try {
    Frame frame;
    if (frame_name == "classical") {
      frame = Frame::Classical;
    } else if (frame_name == "quantum") {
      frame = Frame::Quantum;
    } else {
      throw ConfigError("config field 'frame': expected classical or quantum");
    }
    const auto est = estimate_physical_timescales(delta_rad_s, SpinSize::parse(spin), j_over_delta,
                                                  frame);
    nlohmann::ordered_json j;
    j["spin"] = spin;
    j["frame"] = frame_name;
    j["regime"] = to_string(est.regime);
    j["lambda"] = est.lambda;
    j["j_rad_s"] = est.j_rad_s;
    j["delta_rad_s"] = est.delta_rad_s;
    j["t_i_s"] = est.t_i;
    j["t_o_s"] = est.t_o;
    j["t_e_s"] = est.t_e;
    j["t_ar_s"] = est.t_ar;
    std::cout << j.dump(2) << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two coupled macrospins: exact, classical and closed-form contrast dynamics"};
  app.set_version_flag("--version", macrospin::cli::version());
  app.require_subcommand(1);

  Flags run_flags;
  auto* run = app.add_subcommand("run", "one series per (backend, S, J/Delta) plus a report");
  add_run_flags(run, run_flags);

  Flags sweep_flags;
  auto* sweep = app.add_subcommand("sweep", "fit t_e against S for each J/Delta");
  add_run_flags(sweep, sweep_flags);

  double est_delta = 1e5;
  std::string est_spin = "10000";
  double est_ratio = 10.0;
  std::string est_frame = "classical";
  auto* estimate = app.add_subcommand("estimate", "timescales in seconds for an experiment");
  estimate->add_option("--delta-rad-s", est_delta, "collective inhomogeneity Delta in rad/s");
  estimate->add_option("--spin", est_spin, "macrospin size S");
  estimate->add_option("--j-over-delta", est_ratio, "coupling ratio J/Delta");
  estimate->add_option("--frame", est_frame, "classical (lambda = S) or quantum");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (*estimate) return run_estimate(est_delta, est_spin, est_ratio, est_frame);

  const bool is_sweep = static_cast<bool>(*sweep);
  CLI::App* sub = is_sweep ? sweep : run;
  RunConfig cfg;
  try {
    cfg = build_config(sub, is_sweep ? sweep_flags : run_flags);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  }
  return run_pipeline(cfg, is_sweep ? Command::Sweep : Command::Run);
}
