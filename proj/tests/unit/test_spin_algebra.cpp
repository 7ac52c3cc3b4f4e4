#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "macrospin/spin_algebra.hpp"
#include "oracles.hpp"

using namespace macrospin;

namespace {

Eigen::VectorXcd random_state(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = {g(rng), g(rng)};
  return v / v.norm();
}

}  // namespace

TEST_SUITE("spin_algebra") {

TEST_CASE("single-spin operators") {
  const auto half = build_operators(SpinSize(1));
  CHECK(half.sx(0, 1) == doctest::Approx(0.5));
  CHECK(half.sx(1, 0) == doctest::Approx(0.5));
  CHECK(half.sx(0, 0) == 0.0);
  const auto one = build_operators(SpinSize(2));
  CHECK(one.sz(0, 0) == 1.0);
  CHECK(one.sz(1, 1) == 0.0);
  CHECK(one.sz(2, 2) == -1.0);

  for (int two_s = 1; two_s <= 40; ++two_s) {
    const SpinSize spin(two_s);
    const auto ops = build_operators(spin);
    const Eigen::MatrixXcd x = ops.sx.cast<std::complex<double>>();
    const Eigen::MatrixXcd z = ops.sz.cast<std::complex<double>>();
    const Eigen::MatrixXcd comm = x * ops.sy - ops.sy * x - std::complex<double>(0, 1) * z;
    CHECK(comm.cwiseAbs().maxCoeff() < 1e-12);
    const Eigen::MatrixXcd cas = x * x + ops.sy * ops.sy + z * z;
    const auto d = spin.dim_single();
    CHECK((cas - spin.casimir() * Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-12);
    // Independent construction agrees.
    const auto o = oracle::single_ops(spin);
    CHECK((o.x - x).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((o.y - ops.sy).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("block layout covers the pair space") {
  for (int two_s = 1; two_s <= 40; ++two_s) {
    const BlockLayout layout{SpinSize(two_s)};
    int total = 0;
    for (int k = 0; k < layout.block_count(); ++k) {
      CHECK(layout.dim(k) == two_s + 1 - std::abs(layout.total_m(k)));
      total += layout.dim(k);
    }
    CHECK(total == (two_s + 1) * (two_s + 1));
  }
}

TEST_CASE("spin-1/2 M=0 block by hand") {
  const double js = 0.7, ds = 0.3;
  const auto h = build_hamiltonian(SpinSize(1), PairCouplings::exchange(js, ds));
  REQUIRE(h.blocks.size() == 3);
  const auto& m0 = h.blocks[1].matrix;
  CHECK(h.blocks[1].total_m == 0);
  // Basis (up,down), (down,up).
  CHECK(m0(0, 0) == doctest::Approx(-js / 4 + ds).epsilon(1e-15));
  CHECK(m0(1, 1) == doctest::Approx(-js / 4 - ds).epsilon(1e-15));
  CHECK(m0(0, 1) == doctest::Approx(js / 2).epsilon(1e-15));
  CHECK(m0(1, 0) == doctest::Approx(js / 2).epsilon(1e-15));
  CHECK(h.blocks[0].matrix(0, 0) == doctest::Approx(js / 4));
  CHECK(h.blocks[2].matrix(0, 0) == doctest::Approx(js / 4));
}

TEST_CASE("blocked Hamiltonian equals the Kronecker construction") {
  for (int two_s : {1, 2, 3, 6, 10}) {
    const SpinSize spin(two_s);
    const PairCouplings c{0.37, 0.37, 1.3};
    const auto h = build_hamiltonian(spin, c);
    const Eigen::MatrixXd dense = h.dense();
    CHECK((dense - dense.transpose()).cwiseAbs().maxCoeff() == 0.0);
    const Eigen::MatrixXcd ref = oracle::dense_hamiltonian(spin, c);
    CHECK((dense.cast<std::complex<double>>() - ref).cwiseAbs().maxCoeff() < 1e-13);
    // Anisotropic couplings go through the same path.
    const PairCouplings aniso{0.2, 0.9, -0.4};
    CHECK((build_hamiltonian(spin, aniso).dense().cast<std::complex<double>>() -
           oracle::dense_hamiltonian(spin, aniso))
              .cwiseAbs()
              .maxCoeff() < 1e-13);
  }
}

TEST_CASE("limits of the Hamiltonian") {
  const SpinSize spin(4);
  const auto field_only = build_hamiltonian(spin, PairCouplings::exchange(0.0, 0.8)).dense();
  const int d = spin.dim_single();
  for (int i1 = 0; i1 < d; ++i1) {
    for (int i2 = 0; i2 < d; ++i2) {
      const int r = i1 * d + i2;
      CHECK(field_only(r, r) == doctest::Approx(0.8 * (m_value(spin, i1) - m_value(spin, i2))));
    }
  }
  CHECK((field_only - Eigen::MatrixXd(field_only.diagonal().asDiagonal())).norm() == 0.0);

  // Pure exchange: J_s/2 [St(St+1) - 2S(S+1)] with degeneracy 2St+1.
  const double js = 0.6;
  const auto ex = build_hamiltonian(spin, PairCouplings::exchange(js, 0.0)).dense();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ex);
  std::vector<double> expected;
  for (int st = 0; st <= spin.two_s(); ++st) {
    for (int k = 0; k < 2 * st + 1; ++k) {
      expected.push_back(0.5 * js * (st * (st + 1.0) - 2.0 * spin.casimir()));
    }
  }
  std::sort(expected.begin(), expected.end());
  REQUIRE(expected.size() == static_cast<std::size_t>(es.eigenvalues().size()));
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(es.eigenvalues()(static_cast<Eigen::Index>(i)) == doctest::Approx(expected[i]).epsilon(1e-12));
  }
}

TEST_CASE("internal couplings from rescaled params") {
  const auto c = physical_couplings(ModelParams{0.2, 1.0, SpinSize(20), Frame::Quantum});
  CHECK(c.zz == doctest::Approx(0.2 / 110.0).epsilon(1e-15));
  CHECK(c.flip == c.zz);
  CHECK(c.field == doctest::Approx(1.0 / std::sqrt(110.0)).epsilon(1e-15));
}

TEST_CASE("coherent x state") {
  const auto half = coherent_x_amplitudes(SpinSize(1));
  CHECK(half(0) == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(half(1) == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-15));
  const auto one = coherent_x_amplitudes(SpinSize(2));
  CHECK(one(0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(one(1) == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(one(2) == doctest::Approx(0.5).epsilon(1e-15));

  for (int two_s = 1; two_s <= 100; ++two_s) {
    const SpinSize spin(two_s);
    const auto a = coherent_x_amplitudes(spin);
    CHECK(a.allFinite());
    CHECK(std::abs(a.norm() - 1.0) < 1e-14);
    if (two_s <= 40) {
      const auto ops = build_operators(spin);
      CHECK((ops.sx * a - spin.s() * a).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("coherent state moments at t=0") {
  for (int two_s : {1, 2, 5, 20}) {
    const SpinSize spin(two_s);
    const auto psi = build_coherent_state(spin);
    const auto mom = measure(BlockState::from_coherent(psi));
    CHECK(mom.s1.x() == doctest::Approx(spin.s()).epsilon(1e-13));
    CHECK(std::abs(mom.s1.y()) < 1e-14);
    CHECK(std::abs(mom.s1.z()) < 1e-13);
    CHECK((mom.s1 - mom.s2).norm() < 1e-13);
    CHECK(std::abs(mom.norm_sq - 1.0) < 1e-14);
    // Dense and block forms of the state are the same vector.
    CHECK((BlockState::from_coherent(psi).dense() - psi.dense().cast<std::complex<double>>())
              .norm() == 0.0);
  }
}

TEST_CASE("basis state moments") {
  const SpinSize spin(6);
  const int d = spin.dim_single();
  Eigen::VectorXcd top = Eigen::VectorXcd::Zero(d * d);
  top(0) = 1.0;  // m1 = m2 = S
  const auto mom = measure(BlockState::from_dense(spin, top));
  CHECK((mom.s1 - Vec3(0, 0, spin.s())).norm() < 1e-15);
  CHECK((mom.s2 - Vec3(0, 0, spin.s())).norm() < 1e-15);
}

TEST_CASE("blockwise moments equal dense operator expectations") {
  std::mt19937_64 rng(20240611);
  for (int two_s : {1, 2, 3, 4, 7, 10}) {
    const SpinSize spin(two_s);
    const auto o = oracle::single_ops(spin);
    const Eigen::MatrixXcd s1x = oracle::kron(o.x, o.id), s1y = oracle::kron(o.y, o.id),
                           s1z = oracle::kron(o.z, o.id);
    const Eigen::MatrixXcd s2x = oracle::kron(o.id, o.x), s2y = oracle::kron(o.id, o.y),
                           s2z = oracle::kron(o.id, o.z);
    const PairCouplings c{0.45, 0.45, 0.8};
    const Eigen::MatrixXcd h = oracle::dense_hamiltonian(spin, c);
    const Eigen::MatrixXcd st = s1x + s2x, sty = s1y + s2y, stz = s1z + s2z;
    const Eigen::MatrixXcd st2 = st * st + sty * sty + stz * stz;
    for (int trial = 0; trial < 5; ++trial) {
      const auto psi = random_state(spin.dim_pair(), rng);
      const auto blk = measure(BlockState::from_dense(spin, psi));
      const auto dns = measure(spin, psi);
      const Vec3 ref1(oracle::expect(psi, s1x), oracle::expect(psi, s1y), oracle::expect(psi, s1z));
      const Vec3 ref2(oracle::expect(psi, s2x), oracle::expect(psi, s2y), oracle::expect(psi, s2z));
      CHECK((blk.s1 - ref1).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((blk.s2 - ref2).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((dns.s1 - ref1).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((dns.s2 - ref2).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(std::abs(blk.energy(c) - oracle::expect(psi, h)) < 1e-12);
      CHECK(std::abs(dns.energy(c) - oracle::expect(psi, h)) < 1e-12);
      CHECK(std::abs(blk.total_spin_sq(spin) - oracle::expect(psi, st2)) < 1e-11);
      CHECK(std::abs(blk.flip_flop - dns.flip_flop) < 1e-12);
    }
  }
}

TEST_CASE("observe rejects unnormalized states") {
  const SpinSize spin(2);
  auto state = BlockState::from_coherent(build_coherent_state(spin));
  CHECK_NOTHROW(observe(state, PairCouplings::exchange(0.1, 1.0)));
  state.blocks[2] *= 1.001;
  CHECK_THROWS_AS(observe(state, PairCouplings::exchange(0.1, 1.0)), IntegrityError);
}

}  // TEST_SUITE
