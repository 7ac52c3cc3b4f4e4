#include "macrospin/spin_algebra.hpp"

#include <cmath>
#include <sstream>

namespace macrospin {

double raising_element(SpinSize spin, int index) noexcept {
  const int upper = spin.two_s() - index + 1;
  return std::sqrt(static_cast<double>(index) * static_cast<double>(upper));
}

SpinOperators build_operators(SpinSize spin) {
  const int d = spin.dim_single();
  SpinOperators ops{spin,
                    Eigen::MatrixXd::Zero(d, d),
                    Eigen::MatrixXd::Zero(d, d),
                    Eigen::MatrixXd::Zero(d, d),
                    Eigen::MatrixXd::Zero(d, d),
                    Eigen::MatrixXcd::Zero(d, d)};
  for (int i = 0; i < d; ++i) {
    ops.sz(i, i) = m_value(spin, i);
    if (i >= 1) ops.sp(i - 1, i) = raising_element(spin, i);
  }
  ops.sm = ops.sp.transpose();
  ops.sx = 0.5 * (ops.sp + ops.sm);
  ops.sy = std::complex<double>(0.0, -0.5) * (ops.sp - ops.sm).cast<std::complex<double>>();
  return ops;
}

BlockLayout::BlockLayout(SpinSize spin) : spin_(spin) {}

int BlockLayout::dim(int k) const noexcept {
  const int two_s = spin_.two_s();
  return two_s + 1 - std::abs(k - two_s);
}

PairCouplings physical_couplings(const ModelParams& params) {
  validate(params);
  const double casimir = params.spin.casimir();
  return PairCouplings::exchange(params.j / casimir, params.delta / std::sqrt(casimir));
}

PairHamiltonian build_hamiltonian(SpinSize spin, const PairCouplings& couplings) {
  PairHamiltonian h{spin, couplings, {}};
  const BlockLayout layout(spin);
  h.blocks.reserve(layout.block_count());
  for (int k = 0; k < layout.block_count(); ++k) {
    const int n = layout.dim(k);
    const int lo = layout.first_i1(k);
    HamiltonianBlock block{k, layout.total_m(k), Eigen::MatrixXd::Zero(n, n)};
    for (int p = 0; p < n; ++p) {
      const int i1 = lo + p;
      const int i2 = k - i1;
      const double m1 = m_value(spin, i1);
      const double m2 = m_value(spin, i2);
      // m1 * m2 first: the product is then invariant under (m1, m2) -> (-m2, -m1).
      block.matrix(p, p) = couplings.zz * (m1 * m2) + couplings.field * (m1 - m2);
      if (p >= 1) {
        // S1+ S2- takes (i1, i2) to (i1 - 1, i2 + 1), the previous position.
        const double amp = 0.5 * couplings.flip *
                           (raising_element(spin, i1) * raising_element(spin, i2 + 1));
        block.matrix(p - 1, p) = amp;
        block.matrix(p, p - 1) = amp;
      }
    }
    h.blocks.push_back(std::move(block));
  }
  return h;
}

PairHamiltonian build_hamiltonian(const ModelParams& params) {
  return build_hamiltonian(params.spin, physical_couplings(params));
}

PairHamiltonian build_small_j_effective_hamiltonian(const ModelParams& params) {
  auto couplings = physical_couplings(params);
  couplings.flip = 0.0;
  return build_hamiltonian(params.spin, couplings);
}

Eigen::MatrixXd PairHamiltonian::dense() const {
  const int d = spin.dim_single();
  const BlockLayout layout(spin);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d * d, d * d);
  for (const auto& block : blocks) {
    const int lo = layout.first_i1(block.k);
    const int n = static_cast<int>(block.matrix.rows());
    for (int p = 0; p < n; ++p) {
      const int row = (lo + p) * d + (block.k - lo - p);
      for (int q = 0; q < n; ++q) {
        const int col = (lo + q) * d + (block.k - lo - q);
        out(row, col) = block.matrix(p, q);
      }
    }
  }
  return out;
}

Eigen::VectorXd coherent_x_amplitudes(SpinSize spin) {
  // binom(2S, i+1) / binom(2S, i) = (2S - i) / (i + 1); the unnormalized
  // square roots stay finite for 2S up to ~1000.  lgamma would cost ~1e-14
  // relative per element at S = 50.
  const int two_s = spin.two_s();
  Eigen::VectorXd amp(two_s + 1);
  amp(0) = 1.0;
  for (int i = 0; i < two_s; ++i) {
    amp(i + 1) = amp(i) * std::sqrt(static_cast<double>(two_s - i) / static_cast<double>(i + 1));
  }
  // binom(2S, i) = binom(2S, 2S - i) exactly, not just to rounding.
  for (int i = 0; 2 * i < two_s; ++i) amp(two_s - i) = amp(i);
  return amp / amp.norm();
}

CoherentProductState build_coherent_state(SpinSize spin) {
  return CoherentProductState{spin, coherent_x_amplitudes(spin)};
}

Eigen::VectorXd CoherentProductState::dense() const {
  const int d = spin.dim_single();
  Eigen::VectorXd out(d * d);
  for (int i1 = 0; i1 < d; ++i1) {
    for (int i2 = 0; i2 < d; ++i2) out(i1 * d + i2) = single(i1) * single(i2);
  }
  return out;
}

std::vector<Eigen::VectorXd> CoherentProductState::blocks() const {
  const BlockLayout layout(spin);
  std::vector<Eigen::VectorXd> out;
  out.reserve(layout.block_count());
  for (int k = 0; k < layout.block_count(); ++k) {
    const int lo = layout.first_i1(k);
    Eigen::VectorXd v(layout.dim(k));
    for (int p = 0; p < v.size(); ++p) v(p) = single(lo + p) * single(k - lo - p);
    out.push_back(std::move(v));
  }
  return out;
}

BlockState BlockState::from_dense(SpinSize spin, const Eigen::VectorXcd& dense) {
  const int d = spin.dim_single();
  if (dense.size() != d * d) {
    throw std::invalid_argument("dense state has wrong dimension");
  }
  const BlockLayout layout(spin);
  BlockState out{spin, {}};
  out.blocks.reserve(layout.block_count());
  for (int k = 0; k < layout.block_count(); ++k) {
    const int lo = layout.first_i1(k);
    Eigen::VectorXcd v(layout.dim(k));
    for (int p = 0; p < v.size(); ++p) v(p) = dense((lo + p) * d + (k - lo - p));
    out.blocks.push_back(std::move(v));
  }
  return out;
}

BlockState BlockState::from_coherent(const CoherentProductState& psi) {
  BlockState out{psi.spin, {}};
  for (auto& block : psi.blocks()) out.blocks.push_back(block.cast<std::complex<double>>());
  return out;
}

Eigen::VectorXcd BlockState::dense() const {
  const int d = spin.dim_single();
  const BlockLayout layout(spin);
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(d * d);
  for (int k = 0; k < layout.block_count(); ++k) {
    const int lo = layout.first_i1(k);
    for (int p = 0; p < layout.dim(k); ++p) out((lo + p) * d + (k - lo - p)) = blocks[k](p);
  }
  return out;
}

PairMoments measure(const BlockState& state) {
  // Sums run in long double: near the envelope collapse |<S1>| is ~1e-6 S
  // and the direction s1/|s1| would otherwise inherit the cancellation error.
  using Real = long double;
  using Complex = std::complex<Real>;
  const SpinSize spin = state.spin;
  const BlockLayout layout(spin);
  Real norm_sq = 0, s1z = 0, s2z = 0, zz = 0, flip = 0;
  Complex s1_plus{0, 0};
  Complex s2_plus{0, 0};
  auto widen = [](const std::complex<double>& z) { return Complex(z.real(), z.imag()); };

  for (int k = 0; k < layout.block_count(); ++k) {
    const auto& psi = state.blocks[k];
    const int lo = layout.first_i1(k);
    const int n = layout.dim(k);
    const int prev_lo = k > 0 ? layout.first_i1(k - 1) : 0;
    const int prev_n = k > 0 ? layout.dim(k - 1) : 0;
    for (int p = 0; p < n; ++p) {
      const int i1 = lo + p;
      const int i2 = k - i1;
      const Real m1 = m_value(spin, i1);
      const Real m2 = m_value(spin, i2);
      const Complex a = widen(psi(p));
      const Real w = std::norm(a);
      norm_sq += w;
      s1z += m1 * w;
      s2z += m2 * w;
      zz += m1 * m2 * w;
      if (p >= 1) {
        const Real amp = static_cast<Real>(raising_element(spin, i1)) *
                         static_cast<Real>(raising_element(spin, i2 + 1));
        flip += amp * (std::conj(widen(psi(p - 1))) * a).real();
      }
      if (k == 0) continue;
      // S1+ : (i1, i2) -> (i1 - 1, i2), S2+ : (i1, i2) -> (i1, i2 - 1); both
      // land in block k - 1.
      if (i1 >= 1) {
        const int q = i1 - 1 - prev_lo;
        if (q >= 0 && q < prev_n) {
          s1_plus += std::conj(widen(state.blocks[k - 1](q))) *
                     static_cast<Real>(raising_element(spin, i1)) * a;
        }
      }
      if (i2 >= 1) {
        const int q = i1 - prev_lo;
        if (q >= 0 && q < prev_n) {
          s2_plus += std::conj(widen(state.blocks[k - 1](q))) *
                     static_cast<Real>(raising_element(spin, i2)) * a;
        }
      }
    }
  }
  PairMoments mom;
  mom.norm_sq = static_cast<double>(norm_sq);
  mom.s1z_s2z = static_cast<double>(zz);
  mom.flip_flop = static_cast<double>(flip);
  mom.s1 = Vec3(static_cast<double>(s1_plus.real()), static_cast<double>(s1_plus.imag()),
                static_cast<double>(s1z));
  mom.s2 = Vec3(static_cast<double>(s2_plus.real()), static_cast<double>(s2_plus.imag()),
                static_cast<double>(s2z));
  // (S1+S1- + S1-S1+)/2 + S1z^2 = S(S+1) on every basis state.
  mom.s1_sq = spin.casimir() * mom.norm_sq;
  return mom;
}

PairMoments measure(SpinSize spin, const Eigen::VectorXcd& dense) {
  const int d = spin.dim_single();
  PairMoments mom;
  std::complex<double> s1_plus{0.0, 0.0};
  std::complex<double> s2_plus{0.0, 0.0};
  double s1z = 0.0;
  double s2z = 0.0;
  for (int i1 = 0; i1 < d; ++i1) {
    for (int i2 = 0; i2 < d; ++i2) {
      const auto a = dense(i1 * d + i2);
      const double m1 = m_value(spin, i1);
      const double m2 = m_value(spin, i2);
      const double w = std::norm(a);
      mom.norm_sq += w;
      s1z += m1 * w;
      s2z += m2 * w;
      mom.s1z_s2z += m1 * m2 * w;
      if (i1 >= 1) s1_plus += std::conj(dense((i1 - 1) * d + i2)) * raising_element(spin, i1) * a;
      if (i2 >= 1) s2_plus += std::conj(dense(i1 * d + i2 - 1)) * raising_element(spin, i2) * a;
      if (i1 >= 1 && i2 + 1 < d) {
        const double amp = raising_element(spin, i1) * raising_element(spin, i2 + 1);
        mom.flip_flop += amp * (std::conj(dense((i1 - 1) * d + i2 + 1)) * a).real();
      }
    }
  }
  mom.s1 = Vec3(s1_plus.real(), s1_plus.imag(), s1z);
  mom.s2 = Vec3(s2_plus.real(), s2_plus.imag(), s2z);
  mom.s1_sq = spin.casimir() * mom.norm_sq;
  return mom;
}

ObservableRecord observe(const BlockState& state, const PairCouplings& couplings,
                         const Vec3& last_n1, const Vec3& last_n2) {
  const PairMoments mom = measure(state);
  if (std::abs(mom.norm_sq - 1.0) > kNormTolerance) {
    std::ostringstream msg;
    msg << "state norm deviates from 1: |psi|^2 = " << mom.norm_sq;
    throw IntegrityError(msg.str());
  }
  ObservableRecord rec =
      observables_from_moments(mom.s1, mom.s2, state.spin, mom.s1_sq, last_n1, last_n2);
  rec.energy = mom.energy(couplings);
  rec.st2 = mom.total_spin_sq(state.spin);
  rec.norm = std::sqrt(mom.norm_sq);
  return rec;
}

}  // namespace macrospin
