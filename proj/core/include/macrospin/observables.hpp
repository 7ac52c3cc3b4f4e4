#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "macrospin/model.hpp"

namespace macrospin {

using Vec3 = Eigen::Vector3d;

/// Raised when a conservation law or exact identity is violated beyond its
/// tolerance.  The message names the failing invariant.
class IntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One sample of the observables tracked along a trajectory.  Fields a given
/// backend cannot provide are left at their defaults.
struct ObservableRecord {
  double t_tilde = 0.0;
  double c = 1.0;   ///< |<S1+S2>| / 2S
  double c1 = 1.0;  ///< |<S1>| / S
  double d1 = 0.0;  ///< <(S1 - <S1>)^2> / S^2
  Vec3 n1 = Vec3::UnitX();
  Vec3 n2 = Vec3::UnitX();
  double energy = 0.0;
  double st2 = 0.0;  ///< <(S1+S2)^2>
  double norm = 1.0;
  bool direction_valid = true;
};

using ObservableSeries = std::vector<ObservableRecord>;

/// |<S1>| below this fraction of S leaves the direction undefined.
inline constexpr double kDirectionThreshold = 1e-6;

/// Builds c, c1, d1, n1, n2 from the single-spin moments.
///
/// `s1_sq` is <S1.S1>; it defaults to the operator value S(S+1).  When the
/// direction is undefined, n1/n2 fall back to `last_n1`/`last_n2` (or +x) and
/// direction_valid is cleared, so the record never carries NaN.
ObservableRecord observables_from_moments(const Vec3& s1, const Vec3& s2,
                                          SpinSize spin,
                                          std::optional<double> s1_sq = {},
                                          const Vec3& last_n1 = Vec3::UnitX(),
                                          const Vec3& last_n2 = Vec3::UnitX());

/// Residuals of the exact identities every record must satisfy.
struct IdentityResiduals {
  double casimir = 0.0;        ///< |c1^2 + d1 - (1 + 1/S)|
  double contrast_pair = 0.0;  ///< |c - c1 sqrt((1 + n1.n2)/2)|
  double contrast_x = 0.0;     ///< |c - c1 |n1x||
  double mirror = 0.0;         ///< max |n2 - (n1x, -n1y, -n1z)|
  double bounds = 0.0;         ///< distance of c, c1 outside [0, 1]
  double unit_norm = 0.0;      ///< max(| |n1| - 1 |, | |n2| - 1 |) when valid

  double worst() const noexcept;
};

IdentityResiduals identity_residuals(const ObservableRecord& record,
                                     SpinSize spin);

/// Throws IntegrityError naming the first identity above `tolerance`.
void check_identities(const ObservableRecord& record, SpinSize spin,
                      double tolerance = 1e-9);

}  // namespace macrospin
