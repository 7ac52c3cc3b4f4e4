#include "macrospin/closed_forms.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace macrospin {

namespace {

constexpr double kSqrt3 = std::numbers::sqrt3;

double inf() { return std::numeric_limits<double>::infinity(); }

}  // namespace

std::string_view to_string(ClosedFormKind kind) noexcept {
  switch (kind) {
    case ClosedFormKind::SpinHalfExact:
      return "spin_half_exact";
    case ClosedFormKind::SpinHalfSmallJ:
      return "spin_half_small_j";
    case ClosedFormKind::SpinHalfLargeJ:
      return "spin_half_large_j";
    case ClosedFormKind::SmallJEffective:
      return "small_j_effective";
    case ClosedFormKind::LargeJSingleSphere:
      return "large_j_single_sphere";
    case ClosedFormKind::LargeJTwoSphere:
      return "large_j_two_sphere";
  }
  return "unknown";
}

bool in_validity_domain(ClosedFormKind kind, const ModelParams& params, double band) {
  const bool half = params.spin.two_s() == 1;
  const Regime regime = classify_regime(params, band);
  switch (kind) {
    case ClosedFormKind::SpinHalfExact:
      return half;
    case ClosedFormKind::SpinHalfSmallJ:
      return half && regime == Regime::Dephased;
    case ClosedFormKind::SpinHalfLargeJ:
      return half && regime == Regime::Synchronized;
    case ClosedFormKind::SmallJEffective:
      return regime == Regime::Dephased;
    case ClosedFormKind::LargeJSingleSphere:
    case ClosedFormKind::LargeJTwoSphere:
      return regime == Regime::Synchronized;
  }
  return false;
}

bool check_validity(ClosedFormKind kind, const ModelParams& params, bool strict, double band) {
  if (in_validity_domain(kind, params, band)) return true;
  if (strict) {
    throw std::domain_error(std::string(to_string(kind)) + " evaluated outside its domain (S=" +
                            params.spin.to_string() +
                            ", J/Delta=" + std::to_string(params.j_over_delta()) + ")");
  }
  return false;
}

double signed_power(double base, int exponent) noexcept {
  if (exponent == 0) return 1.0;
  if (exponent == 1) return base;
  if (base == 0.0) return 0.0;
  const double magnitude = std::exp(exponent * std::log(std::abs(base)));
  return (base < 0.0 && (exponent % 2 != 0)) ? -magnitude : magnitude;
}

double contrast_spin_half_exact(double j, double delta, double t) {
  const double omega = std::sqrt(j * j + 3.0 * delta * delta);
  const double a = j * t / kSqrt3;
  const double b = omega * t / kSqrt3;
  const double ratio = omega > 0.0 ? j / omega : 0.0;
  return std::abs(std::cos(a) * std::cos(b) + ratio * std::sin(a) * std::sin(b));
}

double contrast_spin_half_small_j(double j, double delta, double t) {
  return std::abs(std::cos(delta * t) * std::cos(j * t / kSqrt3));
}

double contrast_spin_half_large_j(double j, double delta, double t) {
  if (j == 0.0) return 0.0;
  const double slow = std::cos(kSqrt3 * delta * delta * t / (2.0 * j));
  const double fast = std::sin(j * t / kSqrt3);
  return std::abs(slow * (1.0 - 3.0 * delta * delta / (2.0 * j * j) * fast * fast));
}

EnvelopeAndDirection contrast_small_j_effective(const ModelParams& params, double t) {
  const double lambda = std::sqrt(params.spin.casimir());
  const double envelope =
      std::abs(signed_power(std::cos(params.j * t / (2.0 * lambda)), params.spin.two_s()));
  EnvelopeAndDirection out;
  out.c1 = envelope;
  out.n1 = Vec3(std::cos(params.delta * t), std::sin(params.delta * t), 0.0);
  out.c = envelope * std::abs(out.n1.x());
  return out;
}

namespace {

// cos^{4S-1} envelope shared by both large-J forms.  The argument
// Delta^2 t sqrt(S(S+1)) / (2 J S (4S-1)) equals
// Delta^2 t sqrt(1+1/S) / (2 J (4S-1)).
double large_j_envelope(const ModelParams& params, double t) {
  if (params.j == 0.0) return 0.0;
  const int power = 2 * params.spin.two_s() - 1;  // 4S - 1
  const double root = std::sqrt(1.0 + 1.0 / params.spin.s());
  const double arg = params.delta * params.delta * t * root / (2.0 * params.j * power);
  return signed_power(std::cos(arg), power);
}

}  // namespace

double contrast_large_j_single_sphere(const ModelParams& params, double t) {
  return std::abs(large_j_envelope(params, t));
}

double contrast_large_j_two_sphere(const ModelParams& params, double t) {
  if (params.j == 0.0) return 0.0;
  const double q = 1.0 + 1.0 / params.spin.s();
  const double root = std::sqrt(q);
  const double fast = std::sin(params.j * t / root);
  const double amplitude = params.delta * params.delta * q / (2.0 * params.j * params.j);
  return std::abs(large_j_envelope(params, t) * (1.0 - amplitude * fast * fast));
}

EnvelopeAndDirection direction_spin_half(double j, double delta, double t,
                                         SpinHalfBranch branch) {
  EnvelopeAndDirection out;
  if (branch == SpinHalfBranch::SmallJ) {
    out.c1 = std::abs(std::cos(j * t / kSqrt3));
    out.n1 = Vec3(std::cos(delta * t), std::sin(delta * t), 0.0);
  } else {
    if (j == 0.0) throw std::domain_error("direction_spin_half: large-J branch needs J > 0");
    const double slow = std::cos(kSqrt3 * delta * delta * t / (2.0 * j));
    const double sign = slow < 0.0 ? -1.0 : 1.0;
    const double s = std::sin(j * t / kSqrt3);
    const double c = std::cos(j * t / kSqrt3);
    const double tilt = kSqrt3 * delta / (2.0 * j);
    out.c1 = std::abs(slow);
    out.n1 = sign * Vec3(1.0 - 3.0 * delta * delta / (2.0 * j * j) * s * s, tilt * s * c,
                         tilt * s * s);
  }
  out.c = out.c1 * std::abs(out.n1.x());
  return out;
}

double recurrence_time_small_j(const ModelParams& params) {
  if (params.j == 0.0) return inf();
  return 2.0 * std::numbers::pi * std::sqrt(params.spin.casimir()) / params.j;
}

double recurrence_time_large_j(const ModelParams& params) {
  if (params.delta == 0.0) return inf();
  const double s = params.spin.s();
  return 2.0 * std::numbers::pi * params.j * s * (4.0 * s - 1.0) /
         (params.delta * params.delta * std::sqrt(params.spin.casimir()));
}

double oscillation_period_large_j(const ModelParams& params) {
  if (params.j == 0.0) return inf();
  return std::numbers::pi * std::sqrt(1.0 + 1.0 / params.spin.s()) / params.j;
}

double envelope_time_spin_half_small_j(double j) {
  return j == 0.0 ? inf() : std::numbers::pi * kSqrt3 / (2.0 * j);
}

double envelope_time_spin_half_large_j(double j, double delta) {
  return delta == 0.0 ? inf() : std::numbers::pi * j / (kSqrt3 * delta * delta);
}

}  // namespace macrospin
