#pragma once

#include <span>
#include <vector>

#include "macrospin/exact_dynamics.hpp"
#include "macrospin/model.hpp"
#include "macrospin/observables.hpp"

namespace macrospin {

// Classical limit in the classical frame (lambda = S).  With k = J/Delta the
// reduced angle obeys the pendulum equation d(theta)/dt = Delta sqrt(1 -
// k^2 sin^2 theta), so theta = am(Delta t; k) and
//   n1 = [cn, sn dn, k sn^2](Delta t; k),  n2 = (n1x, -n1y, -n1z),
//   C  = |n1x| = |cn(Delta t; k)|.

struct ClassicalPoint {
  double t_tilde = 0.0;
  Vec3 n1 = Vec3::UnitX();
  Vec3 n2 = Vec3::UnitX();

  double contrast() const noexcept { return 0.5 * (n1 + n2).norm(); }
};

using ClassicalPath = std::vector<ClassicalPoint>;

/// |cn(Delta t; J/Delta)|.  With Delta = 0 the spins stay locked (C = 1).
double classical_contrast(const ModelParams& params, double t_tilde);
std::vector<double> classical_contrast(const ModelParams& params, std::span<const double> t_tilde);

/// Closed-form direction on the pendulum solution.
ClassicalPoint classical_point(const ModelParams& params, double t_tilde);
ClassicalPath classical_trajectory(const ModelParams& params, std::span<const double> t_tilde);

/// Period of C: (2/Delta) K(J/Delta) below the critical point,
/// (2/J) K(Delta/J) above it, +inf at J = Delta.
double classical_period(const ModelParams& params);

/// sqrt(1 - Delta^2/J^2) for J > Delta, 0 otherwise.
double classical_min_contrast(const ModelParams& params);

struct ContrastMinimum {
  double t_tilde = 0.0;
  double value = 1.0;
};

/// Numerical minimum of the closed-form C over its first period: dense scan
/// followed by golden-section refinement.  Requires a finite period.
ContrastMinimum find_contrast_minimum(const ModelParams& params);

/// E = J n1.n2 + Delta (n1z - n2z).
double classical_energy(const ModelParams& params, const Vec3& n1, const Vec3& n2);

struct Rk4Options {
  /// Integration step; 0 selects the largest step allowed by max_step().
  double step = 0.0;
  /// Raise instead of warning when step exceeds max_step().
  bool strict = false;

  /// 1e-3 min(1/Delta, 1/J).
  static double max_step(const ModelParams& params) noexcept;
};

/// Fixed-step fourth-order Runge-Kutta on
///   dn1/dt = [ Delta e_z + J n2] x n1,
///   dn2/dt = [-Delta e_z + J n1] x n2,
/// from n1 = n2 = e_x, in extended precision.  Output is reported at the
/// requested (ascending) times; each interval is split into equal substeps
/// no longer than the step.  A step above max_step() prints a warning, or
/// throws std::invalid_argument in strict mode.
ClassicalPath integrate_eom_rk4(const ModelParams& params, std::span<const double> t_tilde,
                                const Rk4Options& options = {});

/// Classical path as observable records (C1 = 1, D1 = 0, classical energy).
ObservableSeries to_observables(const ModelParams& params, const ClassicalPath& path);

}  // namespace macrospin
