#pragma once

#include <string_view>

#include "macrospin/model.hpp"
#include "macrospin/observables.hpp"

namespace macrospin {

/// Analytic contrast formulas, all in rescaled (quantum-frame) units.
enum class ClosedFormKind {
  SpinHalfExact,
  SpinHalfSmallJ,
  SpinHalfLargeJ,
  SmallJEffective,
  LargeJSingleSphere,
  LargeJTwoSphere,
};

std::string_view to_string(ClosedFormKind kind) noexcept;

/// Whether params fall inside the domain a formula was derived for: S = 1/2
/// for the spin-1/2 forms, the dephased side for small-J forms and the
/// synchronized side for large-J forms.
bool in_validity_domain(ClosedFormKind kind, const ModelParams& params,
                        double band = kDefaultCriticalBand);

/// In strict mode throws std::domain_error outside the validity domain;
/// otherwise returns false so the caller can warn.
bool check_validity(ClosedFormKind kind, const ModelParams& params, bool strict,
                    double band = kDefaultCriticalBand);

/// base^n for integer n computed as exp(n log|base|) with the sign tracked
/// separately, exact zero at base == 0.  Stays finite for n in the hundreds.
double signed_power(double base, int exponent) noexcept;

// Exact two-spin-1/2 contrast, with omega = sqrt(J^2 + 3 Delta^2):
//   |cos(J t/sqrt3) cos(omega t/sqrt3) + (J/omega) sin(J t/sqrt3) sin(omega t/sqrt3)|
double contrast_spin_half_exact(double j, double delta, double t_tilde);
/// |cos(Delta t) cos(J t / sqrt3)|, J << Delta.
double contrast_spin_half_small_j(double j, double delta, double t_tilde);
/// |cos(sqrt3 Delta^2 t / 2J) [1 - (3 Delta^2 / 2J^2) sin^2(J t / sqrt3)]|, J >> Delta.
double contrast_spin_half_large_j(double j, double delta, double t_tilde);

struct EnvelopeAndDirection {
  double c = 1.0;
  double c1 = 1.0;
  Vec3 n1 = Vec3::UnitX();
};

/// Small-J effective model for any S:
///   C1 = |cos^{2S}(J t / 2 sqrt(S(S+1)))|,  n1 = (cos Delta t, sin Delta t, 0),
///   C  = C1 |cos Delta t|.
EnvelopeAndDirection contrast_small_j_effective(const ModelParams& params, double t_tilde);

/// Largest-Bloch-sphere envelope |cos^{4S-1}(Delta^2 t sqrt(S(S+1)) / (2J S (4S-1)))|;
/// C = C1 on this subspace.
double contrast_large_j_single_sphere(const ModelParams& params, double t_tilde);

/// Two-largest-sphere form: the single-sphere envelope times the fast factor
/// [1 - (Delta^2 (1+1/S) / 2J^2) sin^2(J t / sqrt(1+1/S))].
double contrast_large_j_two_sphere(const ModelParams& params, double t_tilde);

/// C1 and n1 of the spin-1/2 asymptotic regimes.  The large-J branch carries
/// the global sign(cos(sqrt3 Delta^2 t / 2J)); its transverse components use
/// Delta where the printed formula shows a lower-case delta.
enum class SpinHalfBranch { SmallJ, LargeJ };
EnvelopeAndDirection direction_spin_half(double j, double delta, double t_tilde,
                                         SpinHalfBranch branch);

// Characteristic times predicted by the closed forms.

/// Small-J envelope recurrence 2 pi sqrt(S(S+1)) / J.
double recurrence_time_small_j(const ModelParams& params);
/// Large-J envelope recurrence 2 pi J S (4S-1) / (Delta^2 sqrt(S(S+1))).
double recurrence_time_large_j(const ModelParams& params);
/// Fast period of the two-sphere form, pi sqrt(1+1/S) / J.
double oscillation_period_large_j(const ModelParams& params);
/// First zero of the spin-1/2 small-J envelope, pi sqrt3 / (2J).
double envelope_time_spin_half_small_j(double j);
/// First zero of the spin-1/2 large-J envelope, pi J / (sqrt3 Delta^2).
double envelope_time_spin_half_large_j(double j, double delta);

}  // namespace macrospin
