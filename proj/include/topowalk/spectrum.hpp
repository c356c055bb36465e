#pragma once

#include <Eigen/Dense>
#include <vector>

#include "topowalk/hilbert.hpp"

namespace topowalk {

/// Restriction of the one-step operator to the total-quasimomentum sector
/// p_n = 2 pi n / L. Basis vectors are
///   |n; r s1 s2> = L^{-1/2} sum_X e^{i p_n X} |X s1, X + r s2>
/// ordered by (r, s1, s2), with r the relative position mod L.
struct MomentumSector {
  int n = 0;
  double momentum = 0.0;
  Eigen::MatrixXcd op;        // 4L x 4L
  double leakage = 0.0;       // max norm of U b outside the sector
  double unitarity_error = 0.0;  // max |op^H op - 1|
};

/// Builds the sector operator by applying the step kernel to each sector
/// basis vector. Throws if the configuration has an interface.
MomentumSector build_sector_operator(const WalkConfig& config, int n);

/// Amplitudes of sector basis vector (n; r s1 s2) in the full basis.
std::vector<complex> sector_basis_vector(int L, int n, int r, int s1, int s2);

struct SectorSpectrum {
  int n = 0;
  double momentum = 0.0;
  std::vector<double> energies;         // ascending, in (-pi, pi]
  std::vector<double> diagonal_weight;  // weight on x1 == x2 of each eigenvector
};

struct TwoBodySpectrum {
  int L = 0;
  std::vector<SectorSpectrum> sectors;  // ordered by n

  std::vector<double> all_energies() const;
  std::size_t size() const;
};

/// Quasienergies E = -arg(lambda) of every sector. Sectors are diagonalized
/// concurrently; the result is ordered by n. Throws std::runtime_error if a
/// sector operator is not unitary to 1e-10.
TwoBodySpectrum band_structure(const WalkConfig& config);

/// Arc (lower, upper) of the unit circle free of eigenphases; upper may
/// exceed pi when the arc wraps through the branch cut.
struct SpectralGap {
  double lower = 0.0;
  double upper = 0.0;
  double width() const { return upper - lower; }
  bool contains(double energy) const;
};

/// Maximal eigenphase-free arcs wider than `min_width`, sorted by lower edge.
std::vector<SpectralGap> find_gaps(const std::vector<double>& energies, double min_width);

struct BoundStateParams {
  double gap_min = 0.05;
  double weight_min = 0.5;
};

struct BoundState {
  int n = 0;
  double momentum = 0.0;
  double energy = 0.0;
  double weight = 0.0;
};

/// Eigenstates of `interacting` lying in the gaps of the full (all-sector)
/// spectrum of `reference` with diagonal weight >= weight_min.
std::vector<BoundState> find_gap_bound_states(const TwoBodySpectrum& interacting,
                                              const TwoBodySpectrum& reference,
                                              const BoundStateParams& params = {});

}  // namespace topowalk
