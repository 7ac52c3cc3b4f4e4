#include "macrospin/observables.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace macrospin {

ObservableRecord observables_from_moments(const Vec3& s1, const Vec3& s2,
                                          SpinSize spin,
                                          std::optional<double> s1_sq,
                                          const Vec3& last_n1,
                                          const Vec3& last_n2) {
  const double s = spin.s();
  ObservableRecord rec;
  const double len1 = s1.norm();
  const double len2 = s2.norm();
  rec.c = (s1 + s2).norm() / (2.0 * s);
  rec.c1 = len1 / s;
  rec.d1 = (s1_sq.value_or(spin.casimir()) - len1 * len1) / (s * s);

  const double floor = kDirectionThreshold * s;
  rec.direction_valid = len1 >= floor && len2 >= floor;
  if (rec.direction_valid) {
    rec.n1 = s1 / len1;
    rec.n2 = s2 / len2;
  } else {
    rec.n1 = last_n1;
    rec.n2 = last_n2;
  }
  return rec;
}

double IdentityResiduals::worst() const noexcept {
  return std::max({casimir, contrast_pair, contrast_x, mirror, bounds, unit_norm});
}

IdentityResiduals identity_residuals(const ObservableRecord& r, SpinSize spin) {
  IdentityResiduals out;
  const double s = spin.s();
  out.casimir = std::abs(r.c1 * r.c1 + r.d1 - (1.0 + 1.0 / s));
  out.bounds = std::max({0.0, -r.c, r.c - 1.0, -r.c1, r.c1 - 1.0});
  // The direction-based identities only carry information when n1 is
  // defined; otherwise c and c1 are both below the direction floor.
  if (r.direction_valid) {
    // sqrt((1 + n1.n2)/2) written as |n1 + n2|/2, which stays accurate when
    // the spins are nearly antiparallel.
    out.contrast_pair = std::abs(r.c - r.c1 * 0.5 * (r.n1 + r.n2).norm());
    out.contrast_x = std::abs(r.c - r.c1 * std::abs(r.n1.x()));
    const Vec3 mirrored(r.n1.x(), -r.n1.y(), -r.n1.z());
    out.mirror = (r.n2 - mirrored).cwiseAbs().maxCoeff();
    out.unit_norm = std::max(std::abs(r.n1.norm() - 1.0), std::abs(r.n2.norm() - 1.0));
  } else {
    out.contrast_x = std::max(0.0, r.c - r.c1);
  }
  return out;
}

void check_identities(const ObservableRecord& record, SpinSize spin,
                      double tolerance) {
  const auto res = identity_residuals(record, spin);
  auto fail = [&](const char* name, double value) {
    std::ostringstream msg;
    msg.precision(3);
    msg << "identity '" << name << "' violated at t_tilde=" << record.t_tilde
        << ": residual " << value << " > " << tolerance;
    throw IntegrityError(msg.str());
  };
  if (res.bounds > tolerance) fail("contrast bounds [0,1]", res.bounds);
  if (res.casimir > tolerance) fail("c1^2 + d1 = 1 + 1/S", res.casimir);
  if (res.contrast_pair > tolerance) fail("c = c1 sqrt((1+n1.n2)/2)", res.contrast_pair);
  if (res.contrast_x > tolerance) fail("c = c1 |n1x|", res.contrast_x);
  if (res.mirror > tolerance) fail("n2 = (n1x, -n1y, -n1z)", res.mirror);
  if (res.unit_norm > tolerance) fail("|n1| = |n2| = 1", res.unit_norm);
}

}  // namespace macrospin
