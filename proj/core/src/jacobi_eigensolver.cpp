#include "macrospin/jacobi_eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace macrospin {

namespace {

double off_diagonal_norm(const Eigen::MatrixXd& a) {
  double sum = 0.0;
  const auto n = a.rows();
  for (Eigen::Index p = 0; p < n; ++p) {
    for (Eigen::Index q = p + 1; q < n; ++q) sum += 2.0 * a(p, q) * a(p, q);
  }
  return std::sqrt(sum);
}

}  // namespace

SymmetricEigen jacobi_eigensolve(const Eigen::MatrixXd& input,
                                 const JacobiOptions& options) {
  if (input.rows() != input.cols()) {
    throw std::invalid_argument("jacobi_eigensolve: matrix must be square");
  }
  const Eigen::Index n = input.rows();
  Eigen::MatrixXd a = 0.5 * (input + input.transpose());
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);

  const double scale = a.norm();
  int sweep = 0;
  if (scale > 0.0 && n > 1) {
    while (off_diagonal_norm(a) > options.tolerance * scale) {
      if (sweep == options.max_sweeps) {
        throw ConvergenceError("jacobi_eigensolve: no convergence after " +
                               std::to_string(sweep) + " sweeps (n = " +
                               std::to_string(n) + ")");
      }
      ++sweep;
      for (Eigen::Index p = 0; p < n - 1; ++p) {
        for (Eigen::Index q = p + 1; q < n; ++q) {
          const double apq = a(p, q);
          if (apq == 0.0) continue;
          // Rotation angle from the 2x2 subproblem (Rutishauser form).
          const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
          const double t = std::abs(theta) > 1e150
                               ? 0.5 / theta
                               : std::copysign(1.0, theta) /
                                     (std::abs(theta) + std::sqrt(theta * theta + 1.0));
          const double c = 1.0 / std::sqrt(t * t + 1.0);
          const double s = t * c;
          const double tau = s / (1.0 + c);

          a(p, p) -= t * apq;
          a(q, q) += t * apq;
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          for (Eigen::Index r = 0; r < n; ++r) {
            if (r == p || r == q) continue;
            const double arp = a(r, p);
            const double arq = a(r, q);
            a(r, p) = arp - s * (arq + tau * arp);
            a(p, r) = a(r, p);
            a(r, q) = arq + s * (arp - tau * arq);
            a(q, r) = a(r, q);
          }
          for (Eigen::Index r = 0; r < n; ++r) {
            const double vrp = v(r, p);
            const double vrq = v(r, q);
            v(r, p) = vrp - s * (vrq + tau * vrp);
            v(r, q) = vrq + s * (vrp - tau * vrq);
          }
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return a(x, x) < a(y, y); });

  SymmetricEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  out.sweeps = sweep;
  for (Eigen::Index j = 0; j < n; ++j) {
    out.values(j) = a(order[j], order[j]);
    out.vectors.col(j) = v.col(order[j]);
  }
  return out;
}

}  // namespace macrospin
