#include "macrospin/elliptic.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace macrospin {

namespace {

constexpr double kLandenFloor = 1e-13;
constexpr double kCriticalBand = 1e-9;
constexpr int kMaxLanden = 40;

// sqrt(1 - k^2) without cancellation near k = 1.
double complementary(double k) { return std::sqrt((1.0 - k) * (1.0 + k)); }

JacobiElliptic landen(double u, double k) {
  std::array<double, kMaxLanden + 1> a{};
  std::array<double, kMaxLanden + 1> c{};
  a[0] = 1.0;
  c[0] = k;
  double b = complementary(k);
  int n = 0;
  while (std::abs(c[n]) > kLandenFloor) {
    if (n == kMaxLanden) throw std::runtime_error("jacobi_elliptic: Landen recursion diverged");
    a[n + 1] = 0.5 * (a[n] + b);
    c[n + 1] = 0.5 * (a[n] - b);
    b = std::sqrt(a[n] * b);
    ++n;
  }
  double phi = std::ldexp(a[n] * u, n);
  double phi_prev = phi;
  for (int j = n; j >= 1; --j) {
    phi_prev = phi;
    phi = 0.5 * (phi + std::asin(c[j] / a[j] * std::sin(phi)));
  }
  JacobiElliptic out;
  out.sn = std::sin(phi);
  out.cn = std::cos(phi);
  out.dn = n == 0 ? 1.0 : out.cn / std::cos(phi_prev - phi);
  return out;
}

}  // namespace

double complete_elliptic_k(double k) {
  if (!(k >= 0.0) || !(k < 1.0)) {
    throw std::domain_error("complete_elliptic_k: modulus must satisfy 0 <= k < 1 (got " +
                            std::to_string(k) + ")");
  }
  double a = 1.0;
  double b = complementary(k);
  while (std::abs(a - b) > 1e-15 * a) {
    const double next = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = next;
  }
  return std::numbers::pi / (a + b);
}

JacobiElliptic jacobi_elliptic(double u, double k) {
  if (!(k >= 0.0)) throw std::domain_error("jacobi_elliptic: modulus must be non-negative");
  if (k == 0.0) return {std::sin(u), std::cos(u), 1.0};
  if (std::abs(k - 1.0) < kCriticalBand) {
    const double sech = 1.0 / std::cosh(u);
    return {std::tanh(u), sech, sech};
  }
  if (k > 1.0) {
    // sn(u,k) = sn(ku,1/k)/k, cn(u,k) = dn(ku,1/k), dn(u,k) = cn(ku,1/k).
    const JacobiElliptic r = landen(k * u, 1.0 / k);
    return {r.sn / k, r.dn, r.cn};
  }
  return landen(u, k);
}

}  // namespace macrospin
