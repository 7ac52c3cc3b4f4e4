#pragma once

namespace macrospin {

// All routines take the modulus k (not the parameter m = k^2).

/// Complete elliptic integral of the first kind, K(k) = pi / (2 AGM(1, k')).
/// Requires 0 <= k < 1; throws std::domain_error otherwise.
double complete_elliptic_k(double k);

struct JacobiElliptic {
  double sn = 0.0;
  double cn = 1.0;
  double dn = 1.0;
};

/// sn, cn, dn for any real u and k >= 0.  Uses the descending Landen (AGM)
/// recursion for 0 < k < 1, the reciprocal-modulus identities for k > 1 and
/// the hyperbolic limit when |k - 1| < 1e-9.
JacobiElliptic jacobi_elliptic(double u, double k);

inline double jacobi_cn(double u, double k) { return jacobi_elliptic(u, k).cn; }
inline double jacobi_dn(double u, double k) { return jacobi_elliptic(u, k).dn; }

}  // namespace macrospin
