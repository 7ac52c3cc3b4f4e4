#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "macrospin/model.hpp"
#include "macrospin/observables.hpp"

namespace macrospin {

/// Thresholds used by the timescale extractor.  Every report echoes them.
struct AnalysisThresholds {
  double critical_band = kDefaultCriticalBand;  ///< eps_c
  double collapse = 0.05;       ///< eps_e: envelope below this counts as collapsed
  double recurrence = 0.9;      ///< eps_r: envelope above this counts as recovered
  double initial_decay = 0.05;  ///< initial-decay fit uses samples with 1 - C below this
  /// ... and stops at this fraction of the first turning point of C.
  double turning_fraction = 0.25;
  /// Oscillation extrema are only collected while the envelope stays above this.
  double oscillation_envelope = 0.2;
};

/// Column view of a contrast trajectory.  `envelope` may be empty for
/// contrast-only inputs; the extractor then builds one from the peaks of C.
struct ContrastSeries {
  std::vector<double> t;
  std::vector<double> c;
  std::vector<double> envelope;

  bool has_envelope() const noexcept { return !envelope.empty(); }
};

/// Which single-spin quantity serves as the envelope of C.
///   C1:         |<S1>| / S.
///   Transverse: C1 sqrt(n1x^2 + n1y^2), the part of <S1> that the fast
///               precession carries into C.  In the dephased regime <S1z>
///               keeps a plateau of order J/2Delta while the transverse part
///               collapses, so only this one vanishes.
enum class EnvelopeSource { None, C1, Transverse };

std::string_view to_string(EnvelopeSource source) noexcept;

ContrastSeries contrast_series(const ObservableSeries& series,
                               EnvelopeSource source = EnvelopeSource::Transverse);

struct InitialDecayFit {
  bool valid = false;
  double t_i = 0.0;
  double quartic = 0.0;  ///< b in 1 - C = t^2 / t_i^2 + b t^4
  double rms_residual = 0.0;
  std::size_t points = 0;
  double window_end = 0.0;
};

/// Least-squares fit of 1 - C = t^2/t_i^2 + b t^4 on the leading window where
/// 1 - C <= initial_decay, truncated at turning_fraction times the first local
/// minimum of C.  The quartic term soaks up curvature so the window can stay
/// wide.  Needs at least 4 samples with t > 0 and a positive curvature.
InitialDecayFit fit_initial_decay(std::span<const double> t, std::span<const double> c,
                                  const AnalysisThresholds& thresholds = {});

struct OscillationEstimate {
  bool valid = false;
  double period = 0.0;
  std::size_t extrema = 0;
  bool from_zeros = false;  ///< true when minima (contrast zeros) were used
  double window_end = 0.0;
};

/// Fast-oscillation period from the mean spacing of successive extrema of C,
/// each refined by a parabola through its three samples.  Minima are used
/// when C touches zero between maxima, maxima otherwise.  Fewer than three
/// usable extrema leaves the estimate invalid.
OscillationEstimate detect_oscillation_period(std::span<const double> t, std::span<const double> c,
                                              std::span<const double> envelope,
                                              const AnalysisThresholds& thresholds = {});

/// Piecewise-linear envelope through the local maxima of C (endpoints
/// included).  Only needed when no C1 column is available.
std::vector<double> envelope_from_peaks(std::span<const double> t, std::span<const double> c);

/// First time the envelope drops below `threshold` (linear interpolation).
std::optional<double> first_collapse(std::span<const double> t, std::span<const double> envelope,
                                     double threshold);

/// After `t_collapse`, the first excursion of the envelope above `threshold`;
/// returns the time of its peak, refined parabolically.
std::optional<double> first_recurrence(std::span<const double> t,
                                       std::span<const double> envelope, double t_collapse,
                                       double threshold);

struct TimescaleReport {
  AnalysisThresholds thresholds;
  Regime regime = Regime::Dephased;
  std::optional<double> t_i;
  std::optional<double> t_o;
  std::optional<double> t_e;
  std::optional<double> t_ar;
  double t_i_rms_residual = 0.0;
  std::size_t t_i_points = 0;
  std::size_t oscillation_extrema = 0;
  bool oscillation_from_zeros = false;
  bool envelope_given = true;  ///< false when built from the peaks of C
  std::vector<std::string> flags;

  bool has_flag(std::string_view flag) const;
  /// t_i <= t_o <= t_e <= t_ar over the values present.
  bool ordered() const;
};

namespace flags {
inline constexpr const char* kNoDecay = "no_initial_decay";
inline constexpr const char* kOscillationUnresolved = "oscillation_unresolved";
inline constexpr const char* kCriticalUnresolvable = "t_o/t_e unresolvable";
inline constexpr const char* kNoCollapse = "no collapse observed";
inline constexpr const char* kNoRecurrence = "no recurrence observed";
}  // namespace flags

/// Runs every extractor on one trajectory.  `initial`, when given, is a
/// densely sampled [0, ~0.3/Delta] run used for the initial-decay fit
/// instead of the main series.  In the critical band t_o, t_e and t_ar are
/// withheld and flagged rather than reported.
TimescaleReport extract_timescales(const ContrastSeries& series, const ModelParams& params,
                                   const AnalysisThresholds& thresholds = {},
                                   const ContrastSeries* initial = nullptr);

struct ScalingPoint {
  double s = 0.0;
  double value = 0.0;
};

struct ScalingFit {
  double exponent = 0.0;
  double exponent_stderr = 0.0;
  double prefactor = 0.0;
  std::vector<ScalingPoint> points;
  std::vector<double> excluded_spins;
};

inline constexpr std::size_t kMinScalingPoints = 5;

/// OLS fit of log(value) = log(prefactor) + exponent log(s).  Throws
/// std::invalid_argument with fewer than kMinScalingPoints points.
ScalingFit fit_power_law(std::span<const ScalingPoint> points);

struct SpinReport {
  SpinSize spin{1};
  TimescaleReport report;
};

/// Power-law fit of t_e against S; reports without t_e are excluded and
/// listed.
ScalingFit fit_envelope_scaling(std::span<const SpinReport> reports);

/// Standard deviation of C over samples with t in [t_lo, t_hi].
double rms_fluctuation(std::span<const double> t, std::span<const double> c, double t_lo,
                       double t_hi);

/// Order-of-magnitude timescales for an experiment, in seconds.
struct PhysicalEstimate {
  Regime regime = Regime::Dephased;
  double lambda = 1.0;
  double j_rad_s = 0.0;
  double delta_rad_s = 0.0;
  double t_i_tilde = 0.0, t_o_tilde = 0.0, t_e_tilde = 0.0, t_ar_tilde = 0.0;
  double t_i = 0.0, t_o = 0.0, t_e = 0.0, t_ar = 0.0;
};

/// `delta_rad_s` is the collective inhomogeneity rate Delta = lambda Delta_s,
/// the quantity experiments quote.  Uses t_i = sqrt2/Delta,
/// t_o = min(pi/Delta, pi/J), t_e = sqrt(S) max(1/J, J/Delta^2),
/// t_ar = S max(1/J, J/Delta^2); physical times are lambda * t_tilde.  The
/// default frame takes lambda = S, the large-S reading of the rescaling.
PhysicalEstimate estimate_physical_timescales(double delta_rad_s, SpinSize spin,
                                              double j_over_delta,
                                              Frame frame = Frame::Classical,
                                              double band = kDefaultCriticalBand);

/// Same estimate starting from per-spin couplings (J_s, Delta_s).
PhysicalEstimate estimate_physical_timescales(const PhysicalParams& phys,
                                              Frame frame = Frame::Classical,
                                              double band = kDefaultCriticalBand);

}  // namespace macrospin
