#include "macrospin/classical.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>

#include "macrospin/elliptic.hpp"

namespace macrospin {

namespace {

constexpr double kCriticalBand = 1e-9;

bool is_critical(const ModelParams& p) {
  return p.delta > 0.0 && std::abs(p.j / p.delta - 1.0) < kCriticalBand;
}

}  // namespace

double classical_contrast(const ModelParams& params, double t_tilde) {
  if (params.delta == 0.0) return 1.0;
  // cn(u, k) for k > 1 is dn(k u, 1/k), handled inside jacobi_elliptic.
  return std::abs(jacobi_cn(params.delta * t_tilde, params.j / params.delta));
}

std::vector<double> classical_contrast(const ModelParams& params,
                                       std::span<const double> t_tilde) {
  validate(params);
  std::vector<double> out;
  out.reserve(t_tilde.size());
  for (double t : t_tilde) out.push_back(classical_contrast(params, t));
  return out;
}

ClassicalPoint classical_point(const ModelParams& params, double t_tilde) {
  ClassicalPoint pt;
  pt.t_tilde = t_tilde;
  if (params.delta == 0.0) return pt;
  const double k = params.j / params.delta;
  const JacobiElliptic f = jacobi_elliptic(params.delta * t_tilde, k);
  pt.n1 = Vec3(f.cn, f.sn * f.dn, k * f.sn * f.sn);
  pt.n2 = Vec3(pt.n1.x(), -pt.n1.y(), -pt.n1.z());
  return pt;
}

ClassicalPath classical_trajectory(const ModelParams& params, std::span<const double> t_tilde) {
  validate(params);
  ClassicalPath out;
  out.reserve(t_tilde.size());
  for (double t : t_tilde) out.push_back(classical_point(params, t));
  return out;
}

double classical_period(const ModelParams& params) {
  validate(params);
  if (params.delta == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  if (is_critical(params)) return std::numeric_limits<double>::infinity();
  if (params.j < params.delta) {
    return 2.0 / params.delta * complete_elliptic_k(params.j / params.delta);
  }
  return 2.0 / params.j * complete_elliptic_k(params.delta / params.j);
}

double classical_min_contrast(const ModelParams& params) {
  validate(params);
  if (params.j <= params.delta) return 0.0;
  const double r = params.delta / params.j;
  return std::sqrt((1.0 - r) * (1.0 + r));
}

ContrastMinimum find_contrast_minimum(const ModelParams& params) {
  const double period = classical_period(params);
  if (!std::isfinite(period)) {
    throw std::invalid_argument("find_contrast_minimum: classical period is not finite");
  }
  constexpr int kScan = 2000;
  auto f = [&](double t) { return classical_contrast(params, t); };
  int best = 0;
  double best_value = f(0.0);
  for (int i = 1; i <= kScan; ++i) {
    const double v = f(period * i / kScan);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  double lo = period * std::max(0, best - 1) / kScan;
  double hi = period * std::min(kScan, best + 1) / kScan;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, period); ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
  }
  ContrastMinimum out{0.5 * (lo + hi), f(0.5 * (lo + hi))};
  if (best_value < out.value) out = {period * best / kScan, best_value};
  return out;
}

double classical_energy(const ModelParams& params, const Vec3& n1, const Vec3& n2) {
  return params.j * n1.dot(n2) + params.delta * (n1.z() - n2.z());
}

double Rk4Options::max_step(const ModelParams& params) noexcept {
  const double rate = std::max(params.j, params.delta);
  if (rate <= 0.0) return std::numeric_limits<double>::infinity();
  return 1e-3 / rate;
}

namespace {

using Real = long double;
using State = std::array<Real, 6>;

State rhs(const State& y, Real j, Real delta) {
  // Field acting on spin 1: (J n2x, J n2y, J n2z + Delta); on spin 2 the
  // inhomogeneity enters with the opposite sign.
  const Real b1x = j * y[3], b1y = j * y[4], b1z = j * y[5] + delta;
  const Real b2x = j * y[0], b2y = j * y[1], b2z = j * y[2] - delta;
  return State{b1y * y[2] - b1z * y[1], b1z * y[0] - b1x * y[2], b1x * y[1] - b1y * y[0],
               b2y * y[5] - b2z * y[4], b2z * y[3] - b2x * y[5], b2x * y[4] - b2y * y[3]};
}

void rk4_step(State& y, Real h, Real j, Real delta) {
  auto axpy = [](const State& a, Real s, const State& b) {
    State r;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] + s * b[i];
    return r;
  };
  const State k1 = rhs(y, j, delta);
  const State k2 = rhs(axpy(y, h / 2, k1), j, delta);
  const State k3 = rhs(axpy(y, h / 2, k2), j, delta);
  const State k4 = rhs(axpy(y, h, k3), j, delta);
  for (std::size_t i = 0; i < y.size(); ++i) {
    y[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  }
}

}  // namespace

ClassicalPath integrate_eom_rk4(const ModelParams& params, std::span<const double> t_tilde,
                                const Rk4Options& options) {
  validate(params);
  const double limit = Rk4Options::max_step(params);
  double step = options.step > 0.0 ? options.step : limit;
  if (!std::isfinite(step)) step = 1e-3;
  if (step > limit * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "RK4 step " << step << " exceeds 1e-3 min(1/Delta, 1/J) = " << limit;
    if (options.strict) throw std::invalid_argument(msg.str());
    std::cerr << "warning: " << msg.str() << "\n";
  }

  State y{1, 0, 0, 1, 0, 0};
  const Real j = params.j;
  const Real delta = params.delta;
  Real t = 0;
  ClassicalPath out;
  out.reserve(t_tilde.size());
  for (double target : t_tilde) {
    if (target < static_cast<double>(t)) {
      throw std::invalid_argument("integrate_eom_rk4: output times must be ascending and >= 0");
    }
    const Real span = static_cast<Real>(target) - t;
    if (span > 0) {
      const auto substeps = static_cast<long long>(std::ceil(static_cast<double>(span) / step));
      const Real h = span / static_cast<Real>(substeps);
      for (long long s = 0; s < substeps; ++s) rk4_step(y, h, j, delta);
      t = target;
    }
    ClassicalPoint pt;
    pt.t_tilde = target;
    pt.n1 = Vec3(static_cast<double>(y[0]), static_cast<double>(y[1]), static_cast<double>(y[2]));
    pt.n2 = Vec3(static_cast<double>(y[3]), static_cast<double>(y[4]), static_cast<double>(y[5]));
    out.push_back(pt);
  }
  return out;
}

ObservableSeries to_observables(const ModelParams& params, const ClassicalPath& path) {
  ObservableSeries out;
  out.reserve(path.size());
  for (const auto& pt : path) {
    ObservableRecord rec;
    rec.t_tilde = pt.t_tilde;
    rec.c = pt.contrast();
    rec.c1 = 1.0;
    rec.d1 = 0.0;
    rec.n1 = pt.n1;
    rec.n2 = pt.n2;
    rec.energy = classical_energy(params, pt.n1, pt.n2);
    rec.norm = 1.0;
    rec.direction_valid = true;
    out.push_back(rec);
  }
  return out;
}

}  // namespace macrospin
