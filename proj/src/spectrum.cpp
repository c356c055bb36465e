#include "topowalk/spectrum.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <exception>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "topowalk/evolution.hpp"

namespace topowalk {

std::vector<complex> sector_basis_vector(int L, int n, int r, int s1, int s2) {
  const double p = 2 * kPi * n / L;
  const double scale = 1.0 / std::sqrt(static_cast<double>(L));
  std::vector<complex> v(dimension(L));
  const auto sites = static_cast<std::size_t>(L);
  for (int X = 0; X < L; ++X) {
    const auto p1 = static_cast<std::size_t>(X);
    const auto p2 = static_cast<std::size_t>((X + r) % L);
    v[((p1 * 2 + s1) * sites + p2) * 2 + s2] = std::polar(scale, p * X);
  }
  return v;
}

MomentumSector build_sector_operator(const WalkConfig& config, int n) {
  if (!config.homogeneous()) {
    throw std::invalid_argument("momentum sectors require a homogeneous walk (no interface)");
  }
  const int L = config.L;
  const Eigen::Index full = static_cast<Eigen::Index>(dimension(L));
  const Eigen::Index dim = 4 * L;

  Eigen::MatrixXcd basis(full, dim);
  for (int r = 0; r < L; ++r) {
    for (int s1 = 0; s1 < 2; ++s1) {
      for (int s2 = 0; s2 < 2; ++s2) {
        const Eigen::Index j = (r * 2 + s1) * 2 + s2;
        const auto v = sector_basis_vector(L, n, r, s1, s2);
        basis.col(j) = Eigen::Map<const Eigen::VectorXcd>(v.data(), full);
      }
    }
  }

  Eigen::MatrixXcd image(full, dim);
  Stepper stepper(StepPlan::from_config(config));
  StateVector psi(L);
  for (Eigen::Index j = 0; j < dim; ++j) {
    Eigen::Map<Eigen::VectorXcd>(psi.amplitudes.data(), full) = basis.col(j);
    stepper.advance(psi);
    image.col(j) = Eigen::Map<const Eigen::VectorXcd>(psi.amplitudes.data(), full);
  }

  MomentumSector sector;
  sector.n = n;
  sector.momentum = 2 * kPi * n / L;
  sector.op = basis.adjoint() * image;
  sector.leakage = (image - basis * sector.op).colwise().norm().maxCoeff();
  sector.unitarity_error =
      (sector.op.adjoint() * sector.op - Eigen::MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff();
  return sector;
}

namespace {

SectorSpectrum diagonalize(const MomentumSector& sector) {
  if (sector.unitarity_error > 1e-10 || sector.leakage > 1e-10) {
    throw std::runtime_error("sector " + std::to_string(sector.n) +
                             " operator is not unitary (construction error)");
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(sector.op, true);
  if (solver.info() != Eigen::Success) throw std::runtime_error("sector diagonalization failed");
  const auto& values = solver.eigenvalues();
  const auto& vectors = solver.eigenvectors();
  const Eigen::Index dim = values.size();

  std::vector<double> energy(static_cast<std::size_t>(dim));
  std::vector<double> weight(static_cast<std::size_t>(dim));
  for (Eigen::Index j = 0; j < dim; ++j) {
    // U|E> = e^{-iE}|E>
    energy[j] = reduce_angle(-std::arg(values[j]));
    const double total = vectors.col(j).squaredNorm();
    // Relative coordinate r = 0 occupies the first four sector basis vectors.
    weight[j] = vectors.col(j).head(4).squaredNorm() / total;
  }
  std::vector<std::size_t> order(energy.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return energy[a] < energy[b]; });

  SectorSpectrum out;
  out.n = sector.n;
  out.momentum = sector.momentum;
  for (std::size_t k : order) {
    out.energies.push_back(energy[k]);
    out.diagonal_weight.push_back(weight[k]);
  }
  return out;
}

}  // namespace

std::vector<double> TwoBodySpectrum::all_energies() const {
  std::vector<double> all;
  for (const auto& s : sectors) all.insert(all.end(), s.energies.begin(), s.energies.end());
  return all;
}

std::size_t TwoBodySpectrum::size() const {
  std::size_t total = 0;
  for (const auto& s : sectors) total += s.energies.size();
  return total;
}

TwoBodySpectrum band_structure(const WalkConfig& config) {
  if (!config.homogeneous()) {
    throw std::invalid_argument("band structure requires a homogeneous walk (no interface)");
  }
  TwoBodySpectrum spectrum;
  spectrum.L = config.L;
  spectrum.sectors.resize(static_cast<std::size_t>(config.L));
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (int n = 0; n < config.L; ++n) {
    try {
      spectrum.sectors[static_cast<std::size_t>(n)] =
          diagonalize(build_sector_operator(config, n));
    } catch (...) {
#pragma omp critical(topowalk_spectrum_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return spectrum;
}

bool SpectralGap::contains(double energy) const {
  double e = energy;
  while (e <= lower) e += 2 * kPi;
  return e < upper;
}

std::vector<SpectralGap> find_gaps(const std::vector<double>& energies, double min_width) {
  std::vector<SpectralGap> gaps;
  if (energies.empty()) return gaps;
  std::vector<double> e(energies);
  std::sort(e.begin(), e.end());
  for (std::size_t k = 0; k < e.size(); ++k) {
    const double next = k + 1 < e.size() ? e[k + 1] : e.front() + 2 * kPi;
    if (next - e[k] > min_width) gaps.push_back({e[k], next});
  }
  return gaps;
}

std::vector<BoundState> find_gap_bound_states(const TwoBodySpectrum& interacting,
                                              const TwoBodySpectrum& reference,
                                              const BoundStateParams& params) {
  const auto gaps = find_gaps(reference.all_energies(), params.gap_min);
  std::vector<BoundState> found;
  for (const auto& sector : interacting.sectors) {
    for (std::size_t k = 0; k < sector.energies.size(); ++k) {
      const double e = sector.energies[k];
      const double w = sector.diagonal_weight[k];
      if (w < params.weight_min) continue;
      const bool in_gap =
          std::any_of(gaps.begin(), gaps.end(), [e](const SpectralGap& g) { return g.contains(e); });
      if (in_gap) found.push_back({sector.n, sector.momentum, e, w});
    }
  }
  return found;
}

}  // namespace topowalk
