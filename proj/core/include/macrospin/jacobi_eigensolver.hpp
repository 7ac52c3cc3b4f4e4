#pragma once

#include <stdexcept>

#include <Eigen/Core>

namespace macrospin {

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SymmetricEigen {
  Eigen::VectorXd values;   ///< ascending
  Eigen::MatrixXd vectors;  ///< columns are orthonormal eigenvectors
  int sweeps = 0;
};

struct JacobiOptions {
  int max_sweeps = 60;
  /// Stop once the off-diagonal Frobenius norm falls below
  /// tolerance * ||A||_F.
  double tolerance = 1e-14;
};

/// Cyclic Jacobi rotations on a dense real symmetric matrix.  Deterministic:
/// the sweep order is fixed row by row and eigenpairs are sorted ascending
/// (stable on ties).  Throws ConvergenceError when max_sweeps is exhausted.
SymmetricEigen jacobi_eigensolve(const Eigen::MatrixXd& a,
                                 const JacobiOptions& options = {});

}  // namespace macrospin
