#pragma once

#include <Eigen/Dense>
#include <span>
#include <string_view>
#include <vector>

#include "topowalk/grid.hpp"
#include "topowalk/hilbert.hpp"

namespace topowalk {

/// P(x1, x2) summed over spins; row/column index is x + (L-1)/2.
struct JointDistribution {
  int t = 0;
  Eigen::MatrixXd P;
};

JointDistribution joint_probability(const StateVector& psi);

/// Weight on the diagonal x1 == x2 restricted to |x| > radius.
double diagonal_weight_beyond(const JointDistribution& joint, int radius);

/// Return probabilities: P(t) for particle 1 at the origin, P0(t) for both.
struct ReturnPoint {
  int t = 0;
  double P = 0.0;
  double P0 = 0.0;
};

ReturnPoint return_probabilities(const StateVector& psi);

/// rho_x(x, x') = sum_{s1 x2 s2} psi(x s1 x2 s2) conj(psi(x' s1 x2 s2)).
Eigen::MatrixXcd reduced_density_x(const StateVector& psi);

/// Eigenvalues below this are dropped before taking logarithms.
inline constexpr double kEntropyFloor = 1e-14;

/// Von Neumann entropy in nats. Throws std::domain_error if an eigenvalue is
/// below -1e-8 (not a density matrix).
double entropy_x(const Eigen::MatrixXcd& rho);

struct EntropyPoint {
  int t = 0;
  double S = 0.0;
  double min_eigenvalue = 0.0;
};

/// Per-step record produced while evolving.
struct Trajectory {
  std::vector<ReturnPoint> returns;
  std::vector<EntropyPoint> entropy;
  StateVector final_state;
};

/// Runs the walk from `initial` for config.steps steps, recording return
/// probabilities and (if requested) the position entropy at every step.
Trajectory run_trajectory(const WalkConfig& config, InitialState initial, bool with_entropy);

enum class GrowthModel { Log, LogLog };

std::string_view growth_model_name(GrowthModel model);
GrowthModel parse_growth_model(std::string_view name);

struct GrowthFit {
  GrowthModel model = GrowthModel::Log;
  double alpha = 0.0;  // slope against log t (or log log t)
  double S0 = 0.0;
  double r2 = 0.0;
  double t_min = 0.0;
  double t_max = 0.0;
  int points = 0;
};

/// Least-squares fit S = S0 + alpha X with X = log t or log log t, over the
/// samples with t_min <= t <= t_max. Needs at least 10 points, and t > 1 for
/// the log-log model. Throws std::invalid_argument on a degenerate window.
GrowthFit fit_growth(std::span<const double> t, std::span<const double> S, GrowthModel model,
                     double t_min, double t_max);

struct LocalizationCell {
  double theta = 0.0;
  double phi = 0.0;
  double P = 0.0;
  double P0 = 0.0;
  bool localized = false;  // P(N) > 1/N
};

struct LocalizationMapParams {
  Grid2D grid;  // first axis: right angle theta, second axis: phi
  double theta_left = -kPi / 16;
  double theta_minus = kPi / 4;
  InitialState initial = InitialState::PhiPlus;
  int steps = 65;
  int L = 0;  // 0 selects the smallest wrap-safe lattice
};

/// Return probability after `steps` steps at every (theta, phi) node.
ScalarMap<LocalizationCell> localization_map(const LocalizationMapParams& params,
                                             const ProgressFn& progress = {});

}  // namespace topowalk
