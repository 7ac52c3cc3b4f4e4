#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "macrospin/model.hpp"
#include "macrospin/observables.hpp"
#include "macrospin/spin_algebra.hpp"

namespace macrospin {

struct BlockSpectrum {
  int k = 0;
  Eigen::VectorXd energies;  ///< ascending
  Eigen::MatrixXd vectors;   ///< orthonormal columns
};

/// Eigendecomposition of every conserved-M block.
struct SpectralDecomposition {
  SpinSize spin{1};
  PairCouplings couplings;
  /// Physical time per unit of rescaled time, sqrt(S(S+1)).
  double time_scale = 1.0;
  std::vector<BlockSpectrum> blocks;

  /// max over blocks of ||H_M - V diag(E) V^T||_F / ||H_M||_F.
  double reconstruction_residual(const PairHamiltonian& h) const;
  /// max over blocks of ||V^T V - I||_max.
  double orthonormality_residual() const;
  /// Largest |E| over all blocks.
  double spectral_radius() const;
};

/// Diagonalizes each block with cyclic Jacobi.  Blocks are independent and
/// run on `threads` workers; the result does not depend on the worker count.
/// A block that fails to converge raises ConvergenceError naming it.
SpectralDecomposition eigensolve(const PairHamiltonian& h, unsigned threads = 1);

/// Uniform grid t_k = k t_max / (n - 1), k = 0..n-1.
struct TimeGrid {
  double t_max = 0.0;
  std::size_t n_samples = 1;

  double dt() const noexcept {
    return n_samples > 1 ? t_max / static_cast<double>(n_samples - 1) : 0.0;
  }
  double at(std::size_t k) const noexcept {
    return n_samples > 1 ? t_max * static_cast<double>(k) / static_cast<double>(n_samples - 1)
                         : 0.0;
  }
  std::vector<double> times() const;

  /// Largest step resolving the fast oscillation: (pi / max(J, Delta)) / 20.
  static double max_step(const ModelParams& params) noexcept;
  /// Smallest uniform grid on [0, t_max] obeying max_step.
  static TimeGrid guarded(const ModelParams& params, double t_max);
  bool satisfies_guard(const ModelParams& params) const noexcept;
};

/// Evolves an initial product state through the stored decomposition.  The
/// initial state is projected on every eigenbasis once; each sample then
/// costs two real matrix-vector products per block, with phases computed
/// directly from t (no incremental accumulation).
class Propagator {
 public:
  Propagator(SpectralDecomposition spectrum, const CoherentProductState& psi0);

  const SpectralDecomposition& spectrum() const noexcept { return spectrum_; }

  /// State at physical time t (phase exp(-i E t)).
  BlockState state_at_physical(double t) const;
  /// State at rescaled time t_tilde, i.e. physical time time_scale * t_tilde.
  BlockState state_at(double t_tilde) const {
    return state_at_physical(spectrum_.time_scale * t_tilde);
  }

 private:
  SpectralDecomposition spectrum_;
  std::vector<Eigen::VectorXd> overlaps_;  ///< V_M^T psi0_M per block
};

struct EvolveOptions {
  unsigned threads = 1;
  bool check_conservation = true;
  /// Conservation tolerances for ||psi|| - 1, <H> (relative), <S1z + S2z>.
  double norm_tolerance = 1e-11;
  double energy_tolerance = 1e-10;
  double sz_tolerance = 1e-11;
};

/// Observable series at the given rescaled times.  Throws IntegrityError
/// when a conservation law fails at any sample.
ObservableSeries evolve_at(const SpectralDecomposition& spectrum,
                           const CoherentProductState& psi0,
                           std::span<const double> t_tilde,
                           const EvolveOptions& options = {});

/// Raw pair moments at the given rescaled times, without conservation
/// checks.
std::vector<PairMoments> moments_at(const SpectralDecomposition& spectrum,
                                    const CoherentProductState& psi0,
                                    std::span<const double> t_tilde, unsigned threads = 1);

/// Series on a grid; the grid must satisfy the oscillation guard for the
/// rescaled couplings implied by the spectrum (std::invalid_argument
/// otherwise).
ObservableSeries evolve(const SpectralDecomposition& spectrum,
                        const CoherentProductState& psi0, const TimeGrid& grid,
                        const EvolveOptions& options = {});

/// Single record at physical time t (seconds when the couplings are in
/// rad/s); t_tilde of the record is t / sqrt(S(S+1)).
ObservableRecord evolve_physical_time(const SpectralDecomposition& spectrum,
                                      const CoherentProductState& psi0,
                                      double t_seconds);

/// Rescaled couplings (J, Delta) implied by a spectrum's physical couplings.
ModelParams rescaled_params(const SpectralDecomposition& spectrum);

}  // namespace macrospin
