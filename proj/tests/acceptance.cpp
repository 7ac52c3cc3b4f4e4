// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "macrospin/analysis.hpp"
#include "macrospin/classical.hpp"
#include "macrospin/closed_forms.hpp"
#include "macrospin/exact_dynamics.hpp"
#include "macrospin/spin_algebra.hpp"
#include "runner.hpp"

namespace {

using namespace macrospin;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

ModelParams params(double ratio, SpinSize spin, double delta = 1.0) {
  return ModelParams{ratio * delta, delta, spin, Frame::Quantum};
}

std::vector<double> grid(double t_max, std::size_t n) { return TimeGrid{t_max, n}.times(); }

SpinSize half() { return SpinSize(1); }
SpinSize spin_of(int s) { return SpinSize(2 * s); }

Outcome classical_oracle() {
  double worst = 0.0;
  std::string per;
  for (double r : {0.2, 1.0, 10.0}) {
    const auto p = params(r, spin_of(1));
    const auto t = grid(20.0 / p.delta, 2001);
    const auto exact = classical_contrast(p, t);
    // A quarter of the maximal step keeps the truncation error well under
    // the tolerance even where J = Delta amplifies it.
    const auto path = integrate_eom_rk4(p, t, Rk4Options{Rk4Options::max_step(p) / 4, true});
    double dev = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
      dev = std::max(dev, std::abs(exact[k] - path[k].contrast()));
    }
    worst = std::max(worst, dev);
    per += " J/D=" + fmt("%g", r) + ":" + fmt("%.2e", dev);
  }
  return {worst < 1e-6, "max |C_cn - C_rk4| =" + per + " (tol 1e-6)"};
}

Outcome critical_sech() {
  const auto p = params(1.0, spin_of(1));
  const auto t = grid(20.0, 4001);
  double dev = 0.0;
  for (double x : t) dev = std::max(dev, std::abs(classical_contrast(p, x) - 1.0 / std::cosh(x)));
  return {dev < 1e-8, "max |C - sech| = " + fmt("%.2e", dev) + " (tol 1e-8)"};
}

Outcome synchronized_minimum() {
  double worst = 0.0;
  std::string per;
  for (double r : {2.0, 10.0}) {
    const auto p = params(r, spin_of(1));
    const double dev =
        std::abs(find_contrast_minimum(p).value - std::sqrt(1.0 - 1.0 / (r * r)));
    worst = std::max(worst, dev);
    per += " J/D=" + fmt("%g", r) + ":" + fmt("%.2e", dev);
  }
  return {worst < 1e-8, "|min C - sqrt(1 - D^2/J^2)| =" + per + " (tol 1e-8)"};
}

Outcome spin_half_exactness() {
  double worst = 0.0;
  std::string per;
  for (double r : {0.2, 1.0, 10.0}) {
    const auto p = params(r, half());
    const auto g = TimeGrid::guarded(p, 60.0);
    const auto series = evolve(eigensolve(build_hamiltonian(p)), build_coherent_state(p.spin), g);
    double dev = 0.0;
    for (const auto& rec : series) {
      dev = std::max(dev, std::abs(rec.c - contrast_spin_half_exact(p.j, p.delta, rec.t_tilde)));
    }
    worst = std::max(worst, dev);
    per += " J/D=" + fmt("%g", r) + ":" + fmt("%.2e", dev);
  }
  return {worst < 1e-10, "max |C_ED - C_exact| =" + per + " (tol 1e-10)"};
}

Outcome spin_half_reductions() {
  double dev_small = 0.0;
  double dev_large = 0.0;
  for (double r : {0.05, 0.2, 1.0, 10.0, 50.0}) {
    const auto p = params(r, half());
    for (double t : grid(200.0, 20001)) {
      dev_small = std::max(dev_small, std::abs(contrast_small_j_effective(p, t).c -
                                               contrast_spin_half_small_j(p.j, p.delta, t)));
      dev_large = std::max(dev_large, std::abs(contrast_large_j_two_sphere(p, t) -
                                               contrast_spin_half_large_j(p.j, p.delta, t)));
    }
  }
  const bool ok = dev_small < 1e-14 && dev_large < 1e-14;
  return {ok, "small-J->spin-half " + fmt("%.2e", dev_small) + ", large-J->spin-half " + fmt("%.2e", dev_large) +
                  " (tol 1e-14)"};
}

Outcome effective_operator() {
  double worst = 0.0;
  std::string per;
  for (int two_s : {1, 2, 10, 20}) {
    const auto p = params(0.2, SpinSize(two_s));
    const double t_max = recurrence_time_small_j(p);
    const auto g = TimeGrid::guarded(p, t_max);
    const auto series = evolve(eigensolve(build_small_j_effective_hamiltonian(p)),
                               build_coherent_state(p.spin), g);
    double dev = 0.0;
    for (const auto& rec : series) {
      dev = std::max(dev, std::abs(rec.c - contrast_small_j_effective(p, rec.t_tilde).c));
    }
    worst = std::max(worst, dev);
    per += " S=" + p.spin.to_string() + ":" + fmt("%.2e", dev);
  }
  return {worst < 1e-10, "max |C_eff - C_smallJ| =" + per + " (tol 1e-10)"};
}

Outcome closed_form_vs_ed() {
  const SpinSize s = spin_of(10);
  const auto small = params(0.2, s);
  const auto large = params(10.0, s);
  auto deviation = [](const ModelParams& p, double t_ar, auto&& formula) {
    const auto g = TimeGrid::guarded(p, t_ar);
    const auto series = evolve(eigensolve(build_hamiltonian(p)), build_coherent_state(p.spin), g);
    double dev = 0.0;
    for (const auto& rec : series) dev = std::max(dev, std::abs(rec.c - formula(rec.t_tilde)));
    return dev;
  };
  const double d4 = deviation(small, recurrence_time_small_j(small),
                              [&](double t) { return contrast_small_j_effective(small, t).c; });
  const double d5 = deviation(large, recurrence_time_large_j(large),
                              [&](double t) { return contrast_large_j_two_sphere(large, t); });
  return {d4 < 0.1 && d5 < 0.1, "S=10 J/D=0.2 max |C_ED - C_smallJ| = " + fmt("%.3f", d4) +
                                    ", J/D=10 max |C_ED - C_largeJ| = " + fmt("%.3f", d5) +
                                    " on t <= t_ar (tol 0.1)"};
}

Outcome short_time_universality() {
  double worst = 0.0;
  std::string per;
  const auto t = grid(0.3, 3001);
  for (auto backend : {cli::Backend::Classical, cli::Backend::Ed}) {
    for (int two_s : {1, 20}) {
      for (double r : {0.2, 1.0, 10.0}) {
        const auto p = params(r, SpinSize(two_s));
        const auto series = cli::sample_backend(backend, p, t);
        const auto cs = contrast_series(series, EnvelopeSource::None);
        const auto fit = fit_initial_decay(cs.t, cs.c);
        const double rel = fit.valid ? std::abs(fit.t_i / std::numbers::sqrt2 - 1.0) : 1.0;
        worst = std::max(worst, rel);
      }
    }
  }
  per = fmt("%.2e", worst);
  return {worst < 0.05, "worst |t_i / sqrt2 - 1| over {classical, ED} x {1/2, 10} x "
                        "{0.2, 1, 10} = " + per + " (tol 0.05)"};
}

Outcome extraction_oracle() {
  double worst = 0.0;
  std::string per;
  for (int two_s : {1, 20}) {
    const SpinSize s(two_s);
    {
      const auto p = params(0.2, s);
      const double t_ar = recurrence_time_small_j(p);
      const auto g = TimeGrid::guarded(p, 1.5 * t_ar);
      const auto series = cli::sample_backend(cli::Backend::EffSmallJ, p, g.times());
      const auto rep = extract_timescales(contrast_series(series, EnvelopeSource::C1), p);
      const double eo = rep.t_o ? std::abs(*rep.t_o / std::numbers::pi - 1.0) : 1.0;
      const double ear = rep.t_ar ? std::abs(*rep.t_ar / t_ar - 1.0) : 1.0;
      worst = std::max({worst, eo, ear});
      per += " small-J S=" + s.to_string() + " t_o:" + fmt("%.1e", eo) + " t_ar:" + fmt("%.1e", ear);
    }
    {
      const auto p = params(10.0, s);
      const double t_ar = recurrence_time_large_j(p);
      const double t_o = oscillation_period_large_j(p);
      const auto g = TimeGrid::guarded(p, 1.5 * t_ar);
      const auto series = cli::sample_backend(cli::Backend::EffLargeJ2Sphere, p, g.times());
      const auto rep = extract_timescales(contrast_series(series, EnvelopeSource::C1), p);
      const double eo = rep.t_o ? std::abs(*rep.t_o / t_o - 1.0) : 1.0;
      const double ear = rep.t_ar ? std::abs(*rep.t_ar / t_ar - 1.0) : 1.0;
      worst = std::max({worst, eo, ear});
      per += " large-J S=" + s.to_string() + " t_o:" + fmt("%.1e", eo) + " t_ar:" + fmt("%.1e", ear);
    }
  }
  return {worst < 0.02, "relative errors" + per + " (tol 0.02)"};
}

Outcome scaling_law() {
  const std::vector<int> spins{2, 4, 8, 12, 16, 20};
  std::string per;
  bool ok = true;
  for (double r : {0.1, 10.0}) {
    std::vector<SpinReport> reports;
    for (int s : spins) {
      const auto p = params(r, spin_of(s));
      const double t_ar = r < 1.0 ? recurrence_time_small_j(p) : recurrence_time_large_j(p);
      const auto g = TimeGrid::guarded(p, 0.5 * t_ar);
      const auto series = cli::sample_backend(cli::Backend::Ed, p, g.times());
      reports.push_back({p.spin, extract_timescales(contrast_series(series), p)});
    }
    try {
      const auto fit = fit_envelope_scaling(reports);
      const bool in = fit.exponent >= 0.4 && fit.exponent <= 0.6 && fit.excluded_spins.empty();
      ok = ok && in;
      per += " J/D=" + fmt("%g", r) + ": alpha=" + fmt("%.3f", fit.exponent) + " +- " +
             fmt("%.3f", fit.exponent_stderr);
      if (!fit.excluded_spins.empty()) per += " (spins without t_e excluded)";
      const auto& a = reports[reports.size() - 2];
      const auto& b = reports.back();
      if (a.report.t_e && b.report.t_e) {
        const double local = std::log(*b.report.t_e / *a.report.t_e) /
                             std::log(b.spin.s() / a.spin.s());
        per += " [S=" + a.spin.to_string() + "->" + b.spin.to_string() +
               " local slope " + fmt("%.3f", local) + "]";
      }
    } catch (const std::exception& e) {
      ok = false;
      per += " J/D=" + fmt("%g", r) + ": " + e.what();
    }
  }
  return {ok, "log-log fit of t_e vs S over {2,4,8,12,16,20}" + per + " (range [0.4, 0.6])"};
}

Outcome invariant_suite() {
  double norm = 0.0, energy = 0.0, sz = 0.0, casimir = 0.0, cx = 0.0, mirror = 0.0;
  std::size_t samples = 0;
  for (int two_s : {1, 2, 10, 20}) {
    for (double r : {0.2, 1.0, 10.0}) {
      const auto p = params(r, SpinSize(two_s));
      const Regime regime = classify_regime(p);
      const double t_max = regime == Regime::Dephased       ? recurrence_time_small_j(p)
                           : regime == Regime::Synchronized ? recurrence_time_large_j(p)
                                                            : 40.0;
      const auto times = TimeGrid::guarded(p, t_max).times();
      const auto spectrum = eigensolve(build_hamiltonian(p));
      const auto moments = moments_at(spectrum, build_coherent_state(p.spin), times);
      const auto& c = spectrum.couplings;
      const double e0 = moments.front().energy(c);
      const double scale = std::abs(e0) > 1e-12 ? std::abs(e0) : spectrum.spectral_radius();
      const double z0 = moments.front().total_z();
      for (const auto& m : moments) {
        norm = std::max(norm, std::abs(std::sqrt(m.norm_sq) - 1.0));
        energy = std::max(energy, std::abs(m.energy(c) - e0) / scale);
        sz = std::max(sz, std::abs(m.total_z() - z0));
        const auto rec = observables_from_moments(m.s1, m.s2, p.spin, m.s1_sq);
        const auto res = identity_residuals(rec, p.spin);
        casimir = std::max(casimir, res.casimir);
        cx = std::max(cx, res.contrast_x);
        mirror = std::max(mirror, res.mirror);
        ++samples;
      }
    }
  }
  const bool ok = norm < 1e-11 && energy < 1e-10 && sz < 1e-11 && casimir < 1e-9 && cx < 1e-9 &&
                  mirror < 1e-9;
  return {ok, std::to_string(samples) + " samples: norm " + fmt("%.1e", norm) + ", <H> rel " +
                  fmt("%.1e", energy) + ", Sz " + fmt("%.1e", sz) + ", C1^2+D1 " +
                  fmt("%.1e", casimir) + ", C=C1|n1x| " + fmt("%.1e", cx) + ", mirror " +
                  fmt("%.1e", mirror) + " (tol 1e-11/1e-10/1e-11/1e-9/1e-9/1e-9)"};
}

Outcome critical_fluctuations() {
  auto rms_at = [](int s) {
    const auto p = params(1.0, spin_of(s));
    const auto g = TimeGrid::guarded(p, 20.0);
    const auto series = cli::sample_backend(cli::Backend::Ed, p, g.times());
    const auto cs = contrast_series(series, EnvelopeSource::None);
    return rms_fluctuation(cs.t, cs.c, 5.0, 20.0);
  };
  const double r2 = rms_at(2);
  const double r20 = rms_at(20);
  return {r20 < r2, "RMS of C on [5, 20]/Delta at J = Delta: S=2 " + fmt("%.4f", r2) + ", S=20 " +
                        fmt("%.4f", r20)};
}

Outcome physical_estimator() {
  const auto est = estimate_physical_timescales(1e5, SpinSize(20000), 10.0);
  const double lo = 10.0 * (1.0 - 1e-12);
  const double hi = 100.0 * (1.0 + 1e-12);
  return {est.t_e >= lo && est.t_e <= hi,
          "Delta=1e5 rad/s, S=1e4, J/Delta=10: t_e = " + fmt("%.6g", est.t_e) + " s (window [10, 100] s)"};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "macrospin_acceptance_determinism";
  fs::remove_all(root);
  cli::RunConfig cfg;
  cfg.backend = cli::Backend::All;
  cfg.spins = {SpinSize(1), SpinSize(6)};
  cfg.j_over_delta = {0.2, 1.0, 10.0};
  cfg.t_max = 30.0;
  std::vector<fs::path> dirs;
  for (auto [name, threads] : {std::pair{"serial_a", 1u}, {"serial_b", 1u}, {"parallel", 4u}}) {
    cfg.out_dir = (root / name).string();
    cfg.threads = threads;
    if (cli::run_pipeline(cfg, cli::Command::Run) != 0) return {false, "run failed"};
    dirs.push_back(root / name);
  }
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(dirs[0])) {
    const auto name = entry.path().filename();
    // The sidecar echoes the worker count, so it is the one file allowed to differ.
    if (name == "metadata.json") continue;
    const auto ref = slurp(entry.path());
    for (std::size_t d = 1; d < dirs.size(); ++d) {
      if (!fs::exists(dirs[d] / name) || slurp(dirs[d] / name) != ref) {
        return {false, name.string() + " differs in " + dirs[d].filename().string()};
      }
    }
    ++files;
  }
  fs::remove_all(root);
  return {files > 0, std::to_string(files) +
                         " data files byte-identical across two serial runs and a 4-thread run"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"classical-oracle", classical_oracle},
      {"critical-sech", critical_sech},
      {"synchronized-minimum", synchronized_minimum},
      {"spin-half-exactness", spin_half_exactness},
      {"spin-half-reductions", spin_half_reductions},
      {"effective-operator", effective_operator},
      {"closed-form-vs-ed", closed_form_vs_ed},
      {"short-time-universality", short_time_universality},
      {"extraction-oracle", extraction_oracle},
      {"scaling-law", scaling_law},
      {"invariant-suite", invariant_suite},
      {"critical-fluctuations", critical_fluctuations},
      {"physical-estimator", physical_estimator},
      {"determinism", determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
