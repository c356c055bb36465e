#pragma once

#include <Eigen/Dense>
#include <optional>

#include "topowalk/grid.hpp"
#include "topowalk/hilbert.hpp"

namespace topowalk {

/// One-particle step T-(k) R(theta-) T+(k) R(theta+) at quasimomentum k, with
/// T+(k) = diag(e^{-ik}, 1) and T-(k) = diag(1, e^{ik}).
Eigen::Matrix2cd bloch_operator(double k, double theta_plus, double theta_minus);

/// U_k = cos(E) 1 - i sin(E) n.sigma with E in [0, pi].
struct BlochSample {
  double k = 0.0;
  Eigen::Matrix2cd U;
  double energy = 0.0;
  Eigen::Vector3d axis = Eigen::Vector3d::Zero();  // n_k, zero when the gap closes
  double gap = 0.0;                                 // |sin E|

  /// max |U - (cos E - i sin E n.sigma)|
  double reconstruction_error() const;
};

BlochSample bloch_sample(double k, double theta_plus, double theta_minus, double eps_gap = 1e-3);

struct ChargeOptions {
  int k_points = 1024;
  double eps_gap = 1e-3;
  double planar_tolerance = 0.05;
  double residual_tolerance = 0.1;
  /// The k-grid is doubled (up to max_refinements times) while n_k turns by
  /// more than this between neighbouring samples.
  double max_turn = kPi / 4;
  int max_refinements = 4;
};

struct ChargeResult {
  std::optional<int> charge;
  Eigen::Vector3d plane_normal = Eigen::Vector3d::Zero();
  double min_gap = 0.0;   // min_k |sin E_k|
  double gap_zero = 0.0;  // min_k E_k, distance of the band from E = 0
  double gap_pi = 0.0;    // min_k (pi - E_k)
  double winding = 0.0;   // unrounded
  double residual = 0.0;
  int k_points = 0;
};

/// Winding of n_k around the normal of the plane it sweeps. The normal is
/// oriented along (cos theta+, 0, -sin theta+), the chiral axis of the walk,
/// and the sign is fixed so that (3pi/8, pi/4) has charge +1. Undefined when
/// the gap closes, n_k leaves the plane or the winding is not near an integer.
ChargeResult winding_number(double theta_plus, double theta_minus, const ChargeOptions& options = {});

struct ChargeCell {
  double theta_plus = 0.0;
  double theta_minus = 0.0;
  std::optional<int> charge;
  double min_gap = 0.0;
};

ScalarMap<ChargeCell> charge_map(const Grid2D& grid, const ChargeOptions& options = {},
                                 const ProgressFn& progress = {});

}  // namespace topowalk
