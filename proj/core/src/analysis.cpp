#include "macrospin/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace macrospin {

namespace {

void require_same_size(std::span<const double> a, std::span<const double> b, const char* who) {
  if (a.size() != b.size()) {
    throw std::invalid_argument(std::string(who) + ": column lengths differ");
  }
}

// Vertex of the parabola through (t[k-1], y[k-1]), (t[k], y[k]), (t[k+1], y[k+1]).
double parabolic_vertex(std::span<const double> t, std::span<const double> y, std::size_t k) {
  if (k == 0 || k + 1 >= t.size()) return t[k];
  const double h = 0.5 * (t[k + 1] - t[k - 1]);
  const double denom = y[k - 1] - 2.0 * y[k] + y[k + 1];
  if (denom == 0.0) return t[k];
  const double offset = 0.5 * (y[k - 1] - y[k + 1]) / denom;
  return t[k] + std::clamp(offset, -1.0, 1.0) * h;
}

std::optional<std::size_t> first_local_min(std::span<const double> c) {
  for (std::size_t k = 1; k + 1 < c.size(); ++k) {
    if (c[k] < c[k - 1] && c[k] <= c[k + 1]) return k;
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(EnvelopeSource source) noexcept {
  switch (source) {
    case EnvelopeSource::None: return "peaks";
    case EnvelopeSource::C1: return "c1";
    case EnvelopeSource::Transverse: return "transverse_c1";
  }
  return "unknown";
}

ContrastSeries contrast_series(const ObservableSeries& series, EnvelopeSource source) {
  ContrastSeries out;
  out.t.reserve(series.size());
  out.c.reserve(series.size());
  for (const auto& r : series) {
    out.t.push_back(r.t_tilde);
    out.c.push_back(r.c);
    if (source == EnvelopeSource::C1) {
      out.envelope.push_back(r.c1);
    } else if (source == EnvelopeSource::Transverse) {
      out.envelope.push_back(r.c1 * std::hypot(r.n1.x(), r.n1.y()));
    }
  }
  return out;
}

InitialDecayFit fit_initial_decay(std::span<const double> t, std::span<const double> c,
                                  const AnalysisThresholds& th) {
  require_same_size(t, c, "fit_initial_decay");
  InitialDecayFit fit;
  if (t.size() < 2) return fit;

  double t_stop = std::numeric_limits<double>::infinity();
  if (auto k = first_local_min(c)) t_stop = th.turning_fraction * t[*k];

  std::size_t end = 0;
  while (end < t.size() && 1.0 - c[end] <= th.initial_decay && t[end] <= t_stop) ++end;

  // y = a x + b x^2 with x = t^2, y = 1 - C; x scaled to [0, 1] for conditioning.
  double x_scale = 0.0;
  for (std::size_t k = 0; k < end; ++k) x_scale = std::max(x_scale, t[k] * t[k]);
  if (x_scale == 0.0) return fit;
  double s2 = 0, s3 = 0, s4 = 0, sy1 = 0, sy2 = 0;
  std::size_t used = 0;
  for (std::size_t k = 0; k < end; ++k) {
    if (t[k] <= 0.0) continue;
    const double x = t[k] * t[k] / x_scale;
    const double y = 1.0 - c[k];
    s2 += x * x;
    s3 += x * x * x;
    s4 += x * x * x * x;
    sy1 += x * y;
    sy2 += x * x * y;
    ++used;
  }
  fit.points = used;
  fit.window_end = end > 0 ? t[end - 1] : 0.0;
  if (used < 4) return fit;
  const double det = s2 * s4 - s3 * s3;
  if (det <= 0.0) return fit;
  const double a = (sy1 * s4 - sy2 * s3) / det;
  const double b = (s2 * sy2 - s3 * sy1) / det;
  double ssr = 0.0;
  for (std::size_t k = 0; k < end; ++k) {
    if (t[k] <= 0.0) continue;
    const double x = t[k] * t[k] / x_scale;
    const double r = (1.0 - c[k]) - (a * x + b * x * x);
    ssr += r * r;
  }
  fit.rms_residual = std::sqrt(ssr / static_cast<double>(used));
  const double curvature = a / x_scale;
  fit.quartic = b / (x_scale * x_scale);
  // A flat series gives a curvature at rounding level; demand a decay that
  // is visible over the window.
  if (!(curvature > 0.0) || a < 1e-9) return fit;
  fit.t_i = 1.0 / std::sqrt(curvature);
  fit.valid = true;
  return fit;
}

std::vector<double> envelope_from_peaks(std::span<const double> t, std::span<const double> c) {
  require_same_size(t, c, "envelope_from_peaks");
  const std::size_t n = t.size();
  std::vector<double> out(n);
  if (n == 0) return out;
  std::vector<std::size_t> peaks{0};
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (c[k] > c[k - 1] && c[k] >= c[k + 1]) peaks.push_back(k);
  }
  if (peaks.back() != n - 1) peaks.push_back(n - 1);
  for (std::size_t p = 0; p + 1 < peaks.size(); ++p) {
    const std::size_t a = peaks[p];
    const std::size_t b = peaks[p + 1];
    for (std::size_t k = a; k <= b; ++k) {
      const double w = t[b] > t[a] ? (t[k] - t[a]) / (t[b] - t[a]) : 0.0;
      out[k] = (1.0 - w) * c[a] + w * c[b];
    }
  }
  if (peaks.size() == 1) out[0] = c[0];
  return out;
}

OscillationEstimate detect_oscillation_period(std::span<const double> t,
                                              std::span<const double> c,
                                              std::span<const double> envelope,
                                              const AnalysisThresholds& th) {
  require_same_size(t, c, "detect_oscillation_period");
  OscillationEstimate est;
  std::vector<double> fallback;
  if (envelope.empty()) {
    fallback = envelope_from_peaks(t, c);
    envelope = fallback;
  }
  require_same_size(t, envelope, "detect_oscillation_period");

  std::size_t end = 0;
  while (end < t.size() && envelope[end] >= th.oscillation_envelope) ++end;
  if (end < 3) return est;
  est.window_end = t[end - 1];

  std::vector<std::size_t> maxima;
  std::vector<std::size_t> minima;
  for (std::size_t k = 1; k + 1 < end; ++k) {
    if (c[k] > c[k - 1] && c[k] >= c[k + 1]) maxima.push_back(k);
    if (c[k] < c[k - 1] && c[k] <= c[k + 1]) minima.push_back(k);
  }

  // C touches zero when its minima sit far below the envelope.
  bool zeros = false;
  if (!minima.empty()) {
    std::vector<double> depth;
    depth.reserve(minima.size());
    for (auto k : minima) depth.push_back(envelope[k] > 0.0 ? c[k] / envelope[k] : 0.0);
    std::nth_element(depth.begin(), depth.begin() + depth.size() / 2, depth.end());
    zeros = depth[depth.size() / 2] < 0.5;
  }
  const auto& extrema = zeros ? minima : maxima;
  est.from_zeros = zeros;
  est.extrema = extrema.size();
  if (extrema.size() < 3) return est;
  const double first = parabolic_vertex(t, c, extrema.front());
  const double last = parabolic_vertex(t, c, extrema.back());
  est.period = (last - first) / static_cast<double>(extrema.size() - 1);
  est.valid = est.period > 0.0;
  return est;
}

std::optional<double> first_collapse(std::span<const double> t, std::span<const double> env,
                                     double threshold) {
  require_same_size(t, env, "first_collapse");
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (env[k] < threshold) {
      if (k == 0) return t[0];
      const double w = (env[k - 1] - threshold) / (env[k - 1] - env[k]);
      return t[k - 1] + w * (t[k] - t[k - 1]);
    }
  }
  return std::nullopt;
}

std::optional<double> first_recurrence(std::span<const double> t, std::span<const double> env,
                                       double t_collapse, double threshold) {
  require_same_size(t, env, "first_recurrence");
  std::size_t k = 0;
  while (k < t.size() && t[k] <= t_collapse) ++k;
  while (k < t.size() && env[k] <= threshold) ++k;
  if (k >= t.size()) return std::nullopt;
  std::size_t best = k;
  while (k < t.size() && env[k] > threshold) {
    if (env[k] > env[best]) best = k;
    ++k;
  }
  // A peak cut off by the end of the grid is not a resolved maximum.
  if (best + 1 >= t.size()) return std::nullopt;
  return parabolic_vertex(t, env, best);
}

bool TimescaleReport::has_flag(std::string_view flag) const {
  return std::find(flags.begin(), flags.end(), flag) != flags.end();
}

bool TimescaleReport::ordered() const {
  double prev = 0.0;
  for (const auto& v : {t_i, t_o, t_e, t_ar}) {
    if (!v) continue;
    if (*v < prev) return false;
    prev = *v;
  }
  return true;
}

TimescaleReport extract_timescales(const ContrastSeries& series, const ModelParams& params,
                                   const AnalysisThresholds& th, const ContrastSeries* initial) {
  TimescaleReport rep;
  rep.thresholds = th;
  rep.regime = classify_regime(params, th.critical_band);

  const ContrastSeries& head = initial ? *initial : series;
  const auto decay = fit_initial_decay(head.t, head.c, th);
  rep.t_i_points = decay.points;
  rep.t_i_rms_residual = decay.rms_residual;
  if (decay.valid) {
    rep.t_i = decay.t_i;
  } else {
    rep.flags.emplace_back(flags::kNoDecay);
  }

  if (rep.regime == Regime::Critical) {
    rep.flags.emplace_back(flags::kCriticalUnresolvable);
    return rep;
  }

  std::vector<double> fallback;
  std::span<const double> envelope = series.envelope;
  rep.envelope_given = series.has_envelope();
  if (!series.has_envelope()) {
    fallback = envelope_from_peaks(series.t, series.c);
    envelope = fallback;
  }

  const auto osc = detect_oscillation_period(series.t, series.c, envelope, th);
  rep.oscillation_extrema = osc.extrema;
  rep.oscillation_from_zeros = osc.from_zeros;
  if (osc.valid) {
    rep.t_o = osc.period;
  } else {
    rep.flags.emplace_back(flags::kOscillationUnresolved);
  }

  rep.t_e = first_collapse(series.t, envelope, th.collapse);
  if (!rep.t_e) {
    rep.flags.emplace_back(flags::kNoCollapse);
    return rep;
  }
  rep.t_ar = first_recurrence(series.t, envelope, *rep.t_e, th.recurrence);
  if (!rep.t_ar) rep.flags.emplace_back(flags::kNoRecurrence);
  return rep;
}

ScalingFit fit_power_law(std::span<const ScalingPoint> points) {
  if (points.size() < kMinScalingPoints) {
    throw std::invalid_argument("scaling fit needs at least " +
                                std::to_string(kMinScalingPoints) + " points (got " +
                                std::to_string(points.size()) + ")");
  }
  const double n = static_cast<double>(points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& p : points) {
    if (!(p.s > 0.0) || !(p.value > 0.0)) {
      throw std::invalid_argument("scaling fit needs positive data");
    }
    mx += std::log(p.s);
    my += std::log(p.value);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& p : points) {
    const double dx = std::log(p.s) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(p.value) - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("scaling fit needs distinct spin sizes");
  ScalingFit fit;
  fit.exponent = sxy / sxx;
  const double intercept = my - fit.exponent * mx;
  fit.prefactor = std::exp(intercept);
  double ssr = 0.0;
  for (const auto& p : points) {
    const double r = std::log(p.value) - (intercept + fit.exponent * std::log(p.s));
    ssr += r * r;
  }
  fit.exponent_stderr = std::sqrt(ssr / (n - 2.0) / sxx);
  fit.points.assign(points.begin(), points.end());
  return fit;
}

ScalingFit fit_envelope_scaling(std::span<const SpinReport> reports) {
  std::vector<ScalingPoint> pts;
  std::vector<double> excluded;
  for (const auto& r : reports) {
    if (r.report.t_e) {
      pts.push_back({r.spin.s(), *r.report.t_e});
    } else {
      excluded.push_back(r.spin.s());
    }
  }
  ScalingFit fit = fit_power_law(pts);
  fit.excluded_spins = std::move(excluded);
  return fit;
}

double rms_fluctuation(std::span<const double> t, std::span<const double> c, double t_lo,
                       double t_hi) {
  require_same_size(t, c, "rms_fluctuation");
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] < t_lo || t[k] > t_hi) continue;
    sum += c[k];
    ++n;
  }
  if (n == 0) throw std::invalid_argument("rms_fluctuation: empty window");
  const double mean = sum / static_cast<double>(n);
  double var = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] < t_lo || t[k] > t_hi) continue;
    var += (c[k] - mean) * (c[k] - mean);
  }
  return std::sqrt(var / static_cast<double>(n));
}

PhysicalEstimate estimate_physical_timescales(double delta_rad_s, SpinSize spin,
                                              double j_over_delta, Frame frame, double band) {
  if (!(delta_rad_s > 0.0) || !(j_over_delta >= 0.0)) {
    throw std::invalid_argument("estimate_physical_timescales: need Delta > 0 and J/Delta >= 0");
  }
  PhysicalEstimate est;
  est.delta_rad_s = delta_rad_s;
  est.j_rad_s = j_over_delta * delta_rad_s;
  est.lambda = rescaling_length(spin, frame);
  est.regime = classify_regime(ModelParams{est.j_rad_s, delta_rad_s, spin, frame}, band);

  const double j = est.j_rad_s;
  const double d = delta_rad_s;
  const double slow = j > 0.0 ? std::max(1.0 / j, j / (d * d)) : std::numeric_limits<double>::infinity();
  est.t_i_tilde = std::numbers::sqrt2 / d;
  est.t_o_tilde = j > 0.0 ? std::min(std::numbers::pi / d, std::numbers::pi / j) : std::numbers::pi / d;
  est.t_e_tilde = std::sqrt(spin.s()) * slow;
  est.t_ar_tilde = spin.s() * slow;
  est.t_i = est.lambda * est.t_i_tilde;
  est.t_o = est.lambda * est.t_o_tilde;
  est.t_e = est.lambda * est.t_e_tilde;
  est.t_ar = est.lambda * est.t_ar_tilde;
  return est;
}

PhysicalEstimate estimate_physical_timescales(const PhysicalParams& phys, Frame frame,
                                              double band) {
  const ModelParams p = rescale(phys, frame);
  return estimate_physical_timescales(p.delta, p.spin, p.j_over_delta(), frame, band);
}

}  // namespace macrospin
