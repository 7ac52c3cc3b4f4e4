#include "macrospin/exact_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "macrospin/jacobi_eigensolver.hpp"
#include "macrospin/parallel.hpp"

namespace macrospin {

double SpectralDecomposition::reconstruction_residual(const PairHamiltonian& h) const {
  double worst = 0.0;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& blk = blocks[b];
    const Eigen::MatrixXd& hm = h.blocks.at(b).matrix;
    const Eigen::MatrixXd rebuilt =
        blk.vectors * blk.energies.asDiagonal() * blk.vectors.transpose();
    const double scale = hm.norm();
    const double err = (hm - rebuilt).norm();
    worst = std::max(worst, scale > 0.0 ? err / scale : err);
  }
  return worst;
}

double SpectralDecomposition::orthonormality_residual() const {
  double worst = 0.0;
  for (const auto& blk : blocks) {
    const auto n = blk.vectors.cols();
    const Eigen::MatrixXd gram = blk.vectors.transpose() * blk.vectors;
    worst = std::max(worst, (gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff());
  }
  return worst;
}

double SpectralDecomposition::spectral_radius() const {
  double r = 0.0;
  for (const auto& blk : blocks) r = std::max(r, blk.energies.cwiseAbs().maxCoeff());
  return r;
}

SpectralDecomposition eigensolve(const PairHamiltonian& h, unsigned threads) {
  SpectralDecomposition out;
  out.spin = h.spin;
  out.couplings = h.couplings;
  out.time_scale = std::sqrt(h.spin.casimir());
  const std::size_t n = h.blocks.size();
  out.blocks.resize(n);
  // The exchange-plus-pi-rotation symmetry maps block K onto block 4S-K with
  // the same basis order; when the two matrices agree bit for bit only one is
  // diagonalized, so both blocks carry identical phases at every time.
  std::vector<std::size_t> todo;
  std::vector<bool> copied(n, false);
  for (std::size_t b = 0; b < n; ++b) {
    const std::size_t m = n - 1 - b;
    if (m < b && h.blocks[m].matrix == h.blocks[b].matrix) {
      copied[b] = true;
    } else {
      todo.push_back(b);
    }
  }
  parallel_for(todo.size(), threads, [&](std::size_t i) {
    const std::size_t b = todo[i];
    SymmetricEigen eig;
    try {
      eig = jacobi_eigensolve(h.blocks[b].matrix);
    } catch (const ConvergenceError& e) {
      throw ConvergenceError("block K=" + std::to_string(h.blocks[b].k) + " (M=" +
                             std::to_string(h.blocks[b].total_m) + "): " + e.what());
    }
    out.blocks[b] = BlockSpectrum{h.blocks[b].k, std::move(eig.values), std::move(eig.vectors)};
  });
  for (std::size_t b = 0; b < n; ++b) {
    if (!copied[b]) continue;
    out.blocks[b] = out.blocks[n - 1 - b];
    out.blocks[b].k = h.blocks[b].k;
  }
  return out;
}

std::vector<double> TimeGrid::times() const {
  std::vector<double> out(n_samples);
  for (std::size_t k = 0; k < n_samples; ++k) out[k] = at(k);
  return out;
}

double TimeGrid::max_step(const ModelParams& params) noexcept {
  const double rate = std::max(params.j, params.delta);
  if (rate <= 0.0) return std::numeric_limits<double>::infinity();
  return std::numbers::pi / rate / 20.0;
}

TimeGrid TimeGrid::guarded(const ModelParams& params, double t_max) {
  if (!(t_max > 0.0) || !std::isfinite(t_max)) {
    throw std::invalid_argument("time grid needs a finite t_max > 0");
  }
  const double step = max_step(params);
  const double intervals = std::isfinite(step) ? std::ceil(t_max / step * (1.0 - 1e-12)) : 1.0;
  return TimeGrid{t_max, static_cast<std::size_t>(std::max(1.0, intervals)) + 1};
}

bool TimeGrid::satisfies_guard(const ModelParams& params) const noexcept {
  if (n_samples <= 1) return true;
  return dt() <= max_step(params) * (1.0 + 1e-12);
}

Propagator::Propagator(SpectralDecomposition spectrum, const CoherentProductState& psi0)
    : spectrum_(std::move(spectrum)) {
  if (psi0.spin != spectrum_.spin) {
    throw std::invalid_argument("initial state and Hamiltonian have different spin sizes");
  }
  const auto init = psi0.blocks();
  overlaps_.reserve(spectrum_.blocks.size());
  for (std::size_t b = 0; b < spectrum_.blocks.size(); ++b) {
    overlaps_.push_back(spectrum_.blocks[b].vectors.transpose() * init[b]);
  }
}

BlockState Propagator::state_at_physical(double t) const {
  BlockState out{spectrum_.spin, {}};
  out.blocks.reserve(spectrum_.blocks.size());
  Eigen::VectorXd re;
  Eigen::VectorXd im;
  for (std::size_t b = 0; b < spectrum_.blocks.size(); ++b) {
    const auto& blk = spectrum_.blocks[b];
    const auto& a = overlaps_[b];
    const auto n = a.size();
    re.resize(n);
    im.resize(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const double phase = blk.energies(j) * t;
      re(j) = a(j) * std::cos(phase);
      im(j) = -a(j) * std::sin(phase);
    }
    Eigen::VectorXcd psi(n);
    psi.real() = blk.vectors * re;
    psi.imag() = blk.vectors * im;
    out.blocks.push_back(std::move(psi));
  }
  return out;
}

ModelParams rescaled_params(const SpectralDecomposition& spectrum) {
  const double lambda = spectrum.time_scale;
  const double j_s = std::max(spectrum.couplings.zz, spectrum.couplings.flip);
  return ModelParams{j_s * lambda * lambda, spectrum.couplings.field * lambda, spectrum.spin,
                     Frame::Quantum};
}

namespace {

void check_conservation(const PairMoments& mom, const PairMoments& initial, double t_tilde,
                        double energy_scale, const PairCouplings& couplings,
                        const EvolveOptions& opt) {
  auto fail = [&](const std::string& what, double value, double tol) {
    std::ostringstream msg;
    msg.precision(3);
    msg << "conservation of " << what << " violated at t_tilde=" << t_tilde << ": deviation "
        << value << " > " << tol;
    throw IntegrityError(msg.str());
  };
  const double norm_dev = std::abs(std::sqrt(mom.norm_sq) - 1.0);
  if (norm_dev > opt.norm_tolerance) fail("norm", norm_dev, opt.norm_tolerance);
  const double e_dev = std::abs(mom.energy(couplings) - initial.energy(couplings));
  const double e_tol = opt.energy_tolerance * energy_scale;
  if (e_dev > e_tol) fail("energy <H>", e_dev, e_tol);
  const double sz_dev = std::abs(mom.total_z() - initial.total_z());
  if (sz_dev > opt.sz_tolerance) fail("<S1z + S2z>", sz_dev, opt.sz_tolerance);
}

ObservableSeries evolve_physical_times(const Propagator& prop, std::span<const double> t_phys,
                                       const EvolveOptions& options) {
  const auto& spectrum = prop.spectrum();
  std::vector<PairMoments> moments(t_phys.size());
  parallel_for(t_phys.size(), options.threads,
               [&](std::size_t k) { moments[k] = measure(prop.state_at_physical(t_phys[k])); });

  const PairMoments initial = measure(prop.state_at_physical(0.0));
  const double e0 = std::abs(initial.energy(spectrum.couplings));
  const double energy_scale = e0 > 1e-12 * spectrum.spectral_radius()
                                  ? e0
                                  : std::max(spectrum.spectral_radius(), 1e-300);

  ObservableSeries series;
  series.reserve(t_phys.size());
  Vec3 last_n1 = Vec3::UnitX();
  Vec3 last_n2 = Vec3::UnitX();
  for (std::size_t k = 0; k < t_phys.size(); ++k) {
    const auto& mom = moments[k];
    const double t_tilde = t_phys[k] / spectrum.time_scale;
    if (options.check_conservation) {
      check_conservation(mom, initial, t_tilde, energy_scale, spectrum.couplings, options);
    }
    ObservableRecord rec =
        observables_from_moments(mom.s1, mom.s2, spectrum.spin, mom.s1_sq, last_n1, last_n2);
    rec.t_tilde = t_tilde;
    rec.energy = mom.energy(spectrum.couplings);
    rec.st2 = mom.total_spin_sq(spectrum.spin);
    rec.norm = std::sqrt(mom.norm_sq);
    if (rec.direction_valid) {
      last_n1 = rec.n1;
      last_n2 = rec.n2;
    }
    series.push_back(rec);
  }
  return series;
}

}  // namespace

ObservableSeries evolve_at(const SpectralDecomposition& spectrum,
                           const CoherentProductState& psi0, std::span<const double> t_tilde,
                           const EvolveOptions& options) {
  const Propagator prop(spectrum, psi0);
  std::vector<double> t_phys(t_tilde.begin(), t_tilde.end());
  for (auto& t : t_phys) t *= spectrum.time_scale;
  auto series = evolve_physical_times(prop, t_phys, options);
  // Keep the caller's rescaled times bit-exact.
  for (std::size_t k = 0; k < series.size(); ++k) series[k].t_tilde = t_tilde[k];
  return series;
}

std::vector<PairMoments> moments_at(const SpectralDecomposition& spectrum,
                                    const CoherentProductState& psi0,
                                    std::span<const double> t_tilde, unsigned threads) {
  const Propagator prop(spectrum, psi0);
  std::vector<PairMoments> out(t_tilde.size());
  parallel_for(t_tilde.size(), threads, [&](std::size_t k) {
    out[k] = measure(prop.state_at_physical(spectrum.time_scale * t_tilde[k]));
  });
  return out;
}

ObservableSeries evolve(const SpectralDecomposition& spectrum, const CoherentProductState& psi0,
                        const TimeGrid& grid, const EvolveOptions& options) {
  const ModelParams params = rescaled_params(spectrum);
  if (!grid.satisfies_guard(params)) {
    std::ostringstream msg;
    msg << "time grid step " << grid.dt() << " exceeds the oscillation guard "
        << TimeGrid::max_step(params);
    throw std::invalid_argument(msg.str());
  }
  const auto times = grid.times();
  return evolve_at(spectrum, psi0, times, options);
}

ObservableRecord evolve_physical_time(const SpectralDecomposition& spectrum,
                                      const CoherentProductState& psi0, double t_seconds) {
  const Propagator prop(spectrum, psi0);
  const double t[] = {t_seconds};
  return evolve_physical_times(prop, t, EvolveOptions{}).front();
}

}  // namespace macrospin
