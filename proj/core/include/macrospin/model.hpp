#pragma once

#include <compare>
#include <stdexcept>
#include <string>
#include <string_view>

namespace macrospin {

/// Spin length S stored exactly as the integer 2S, so half-integer sizes
/// never go through floating point when indexing.
class SpinSize {
 public:
  explicit SpinSize(int two_s);

  /// Accepts "1/2", "3/2", "0.5", "10", "2.5".
  static SpinSize parse(std::string_view text);

  int two_s() const noexcept { return two_s_; }
  double s() const noexcept { return 0.5 * two_s_; }
  int dim_single() const noexcept { return two_s_ + 1; }
  int dim_pair() const noexcept { return (two_s_ + 1) * (two_s_ + 1); }
  /// S(S+1), the eigenvalue of the single-spin Casimir.
  double casimir() const noexcept { return s() * (s() + 1.0); }

  /// "1/2", "3/2", "10", ...
  std::string to_string() const;

  auto operator<=>(const SpinSize&) const = default;

 private:
  int two_s_;
};

/// Selects the rescaling length: S for classical spins, sqrt(S(S+1)) for
/// quantum spins.
enum class Frame { Classical, Quantum };

double rescaling_length(SpinSize spin, Frame frame) noexcept;

/// Rescaled, dimensionless couplings.  Time is measured in units of 1/delta
/// unless stated otherwise.
struct ModelParams {
  double j = 0.0;
  double delta = 1.0;
  SpinSize spin{1};
  Frame frame = Frame::Quantum;

  double lambda() const noexcept { return rescaling_length(spin, frame); }
  /// J/delta; +inf when delta == 0 and j > 0.
  double j_over_delta() const noexcept;
  bool frozen() const noexcept { return j == 0.0 && delta == 0.0; }
};

/// Throws std::invalid_argument on negative or non-finite couplings.
void validate(const ModelParams& params);

/// Couplings in rad/s as they enter H = J_s S1.S2 + Delta_s (S1z - S2z).
struct PhysicalParams {
  double j_s = 0.0;
  double delta_s = 0.0;
  SpinSize spin{1};
};

/// (j, delta) = (lambda^2 j_s, lambda delta_s).
ModelParams rescale(const PhysicalParams& phys, Frame frame);
/// Inverse of rescale for the frame stored in params.
PhysicalParams unscale(const ModelParams& params);

enum class Regime { Dephased, Critical, Synchronized };

std::string_view to_string(Regime regime) noexcept;

inline constexpr double kDefaultCriticalBand = 0.05;

/// Dephased for J/delta < 1 - band, Synchronized above 1 + band, Critical in
/// between.  delta == 0 counts as Synchronized: without inhomogeneity the
/// contrast never decays.
Regime classify_regime(const ModelParams& params,
                       double band = kDefaultCriticalBand);

}  // namespace macrospin
