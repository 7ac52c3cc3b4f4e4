#pragma once

#include <complex>
#include <vector>

#include <Eigen/Core>

#include "macrospin/model.hpp"
#include "macrospin/observables.hpp"

namespace macrospin {

// Basis conventions used throughout: single-spin index i = 0..2S labels
// m = S - i (so m runs S, S-1, ..., -S), and the pair basis is row-major in
// (i1, i2) with i1 outer.  All integer arithmetic is done in units of 2S.

/// <m+1| S+ |m> for the state with single-spin index i (i >= 1), i.e.
/// sqrt(S(S+1) - m(m+1)) = sqrt(i (2S - i + 1)).
double raising_element(SpinSize spin, int index) noexcept;

/// m for single-spin index i.
inline double m_value(SpinSize spin, int index) noexcept {
  return 0.5 * (spin.two_s() - 2 * index);
}

/// Dense single-spin matrices in the m = S..-S ordering.
struct SpinOperators {
  SpinSize spin;
  Eigen::MatrixXd sz;
  Eigen::MatrixXd sp;
  Eigen::MatrixXd sm;
  Eigen::MatrixXd sx;
  Eigen::MatrixXcd sy;
};

SpinOperators build_operators(SpinSize spin);

/// Index bookkeeping for the decomposition of the pair space by conserved
/// M = m1 + m2.  Blocks are keyed by K = i1 + i2 = 2S - M, K = 0..4S; block K
/// holds the states with i1 in [first(K), first(K) + dim(K)).
class BlockLayout {
 public:
  explicit BlockLayout(SpinSize spin);

  SpinSize spin() const noexcept { return spin_; }
  int block_count() const noexcept { return 2 * spin_.two_s() + 1; }
  int first_i1(int k) const noexcept { return k > spin_.two_s() ? k - spin_.two_s() : 0; }
  int dim(int k) const noexcept;
  /// Total magnetization M of block K (always an integer).
  int total_m(int k) const noexcept { return spin_.two_s() - k; }
  int largest_block() const noexcept { return spin_.two_s() + 1; }

 private:
  SpinSize spin_;
};

/// H = zz S1z S2z + flip (S1+ S2- + S1- S2+)/2 + field (S1z - S2z), in
/// physical units.  The full model has zz = flip = J_s, field = Delta_s.
struct PairCouplings {
  double zz = 0.0;
  double flip = 0.0;
  double field = 0.0;

  static PairCouplings exchange(double j_s, double delta_s) {
    return {j_s, j_s, delta_s};
  }
};

/// Internal couplings for rescaled params in the quantum frame:
/// J_s = J / (S(S+1)), Delta_s = Delta / sqrt(S(S+1)).
PairCouplings physical_couplings(const ModelParams& params);

struct HamiltonianBlock {
  int k = 0;
  int total_m = 0;
  Eigen::MatrixXd matrix;
};

/// The pair Hamiltonian stored as its conserved-M blocks.
struct PairHamiltonian {
  SpinSize spin{1};
  PairCouplings couplings;
  std::vector<HamiltonianBlock> blocks;

  BlockLayout layout() const { return BlockLayout(spin); }
  /// Reassembles the (2S+1)^2 dense matrix from the blocks.
  Eigen::MatrixXd dense() const;
};

PairHamiltonian build_hamiltonian(SpinSize spin, const PairCouplings& couplings);
/// Full model for rescaled params (taken in the quantum frame).
PairHamiltonian build_hamiltonian(const ModelParams& params);
/// Diagonal small-J effective model Delta_s (S1z - S2z) + J_s S1z S2z.
PairHamiltonian build_small_j_effective_hamiltonian(const ModelParams& params);

/// Amplitudes 2^-S sqrt(binom(2S, S+m)) of the single-spin Sx = S
/// eigenstate, built from the binomial ratios and normalized.
Eigen::VectorXd coherent_x_amplitudes(SpinSize spin);

/// |S1x = S, S2x = S>.
struct CoherentProductState {
  SpinSize spin{1};
  Eigen::VectorXd single;  ///< per-spin amplitudes, m = S..-S

  Eigen::VectorXd dense() const;
  /// Per-block real amplitude vectors in BlockLayout order.
  std::vector<Eigen::VectorXd> blocks() const;
};

CoherentProductState build_coherent_state(SpinSize spin);

/// A pair state stored blockwise by conserved M.
struct BlockState {
  SpinSize spin{1};
  std::vector<Eigen::VectorXcd> blocks;

  static BlockState from_dense(SpinSize spin, const Eigen::VectorXcd& dense);
  static BlockState from_coherent(const CoherentProductState& psi);
  Eigen::VectorXcd dense() const;
};

/// Raw expectation values of a pair state.
struct PairMoments {
  Vec3 s1 = Vec3::Zero();
  Vec3 s2 = Vec3::Zero();
  double norm_sq = 0.0;
  double s1_sq = 0.0;       ///< <S1.S1>
  double s1z_s2z = 0.0;     ///< <S1z S2z>
  double flip_flop = 0.0;   ///< <(S1+ S2- + S1- S2+)/2>

  double s1_dot_s2() const noexcept { return s1z_s2z + flip_flop; }
  double total_z() const noexcept { return s1.z() + s2.z(); }
  double energy(const PairCouplings& c) const noexcept {
    return c.zz * s1z_s2z + c.flip * flip_flop + c.field * (s1.z() - s2.z());
  }
  /// <(S1 + S2)^2>
  double total_spin_sq(SpinSize spin) const noexcept {
    return 2.0 * spin.casimir() * norm_sq + 2.0 * s1_dot_s2();
  }
};

/// Moments computed blockwise: diagonal terms and the flip-flop term stay
/// inside a block, <S1+> and <S2+> couple block K with block K-1.
PairMoments measure(const BlockState& state);

/// Same moments from a dense amplitude vector, by direct index arithmetic.
PairMoments measure(SpinSize spin, const Eigen::VectorXcd& dense);

inline constexpr double kNormTolerance = 1e-9;

/// Full observable record for a state; throws IntegrityError when the state
/// norm deviates from 1 by more than kNormTolerance.
ObservableRecord observe(const BlockState& state, const PairCouplings& couplings,
                         const Vec3& last_n1 = Vec3::UnitX(),
                         const Vec3& last_n2 = Vec3::UnitX());

}  // namespace macrospin
