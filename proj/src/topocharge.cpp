#include "topowalk/topocharge.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace topowalk {

namespace {

Eigen::Matrix2cd rotation(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Eigen::Matrix2cd r;
  r << c, s, -s, c;
  return r;
}

const Eigen::Matrix2cd& pauli(int j) {
  static const Eigen::Matrix2cd sx = (Eigen::Matrix2cd() << 0, 1, 1, 0).finished();
  static const Eigen::Matrix2cd sy =
      (Eigen::Matrix2cd() << 0, complex(0, -1), complex(0, 1), 0).finished();
  static const Eigen::Matrix2cd sz = (Eigen::Matrix2cd() << 1, 0, 0, -1).finished();
  return j == 0 ? sx : (j == 1 ? sy : sz);
}

}  // namespace

Eigen::Matrix2cd bloch_operator(double k, double theta_plus, double theta_minus) {
  Eigen::Matrix2cd shift_plus = Eigen::Matrix2cd::Zero();
  shift_plus(0, 0) = std::polar(1.0, -k);
  shift_plus(1, 1) = 1.0;
  Eigen::Matrix2cd shift_minus = Eigen::Matrix2cd::Zero();
  shift_minus(0, 0) = 1.0;
  shift_minus(1, 1) = std::polar(1.0, k);
  return shift_minus * rotation(theta_minus) * shift_plus * rotation(theta_plus);
}

double BlochSample::reconstruction_error() const {
  Eigen::Matrix2cd model = std::cos(energy) * Eigen::Matrix2cd::Identity();
  for (int j = 0; j < 3; ++j) model -= complex(0, std::sin(energy) * axis[j]) * pauli(j);
  return (U - model).cwiseAbs().maxCoeff();
}

BlochSample bloch_sample(double k, double theta_plus, double theta_minus, double eps_gap) {
  BlochSample s;
  s.k = k;
  s.U = bloch_operator(k, theta_plus, theta_minus);
  // sin(E) n_j = (i/2) Tr(U sigma_j), real because det U = 1.
  Eigen::Vector3d v;
  for (int j = 0; j < 3; ++j) v[j] = std::real(complex(0, 0.5) * (s.U * pauli(j)).trace());
  s.gap = v.norm();
  s.energy = std::atan2(s.gap, 0.5 * std::real(s.U.trace()));
  if (s.gap > eps_gap) s.axis = v / s.gap;
  return s;
}

namespace {

struct Sweep {
  double total = 0.0;
  double max_turn = 0.0;
};

Sweep sweep_angle(const std::vector<Eigen::Vector3d>& n, const Eigen::Vector3d& normal) {
  Eigen::Vector3d e1 = Eigen::Vector3d::UnitY() - normal.y() * normal;
  if (e1.norm() < 0.5) e1 = Eigen::Vector3d::UnitX() - normal.x() * normal;
  e1.normalize();
  const Eigen::Vector3d e2 = normal.cross(e1);
  Sweep sweep;
  const std::size_t count = n.size();
  double previous = std::atan2(n[count - 1].dot(e2), n[count - 1].dot(e1));
  for (std::size_t j = 0; j < count; ++j) {
    const double angle = std::atan2(n[j].dot(e2), n[j].dot(e1));
    const double turn = std::remainder(angle - previous, 2 * kPi);
    sweep.total += turn;
    sweep.max_turn = std::max(sweep.max_turn, std::abs(turn));
    previous = angle;
  }
  return sweep;
}

}  // namespace

ChargeResult winding_number(double theta_plus, double theta_minus, const ChargeOptions& options) {
  ChargeResult result;
  int points = options.k_points;
  for (int attempt = 0;; ++attempt) {
    result.k_points = points;
    result.min_gap = std::numeric_limits<double>::infinity();
    result.gap_zero = std::numeric_limits<double>::infinity();
    result.gap_pi = std::numeric_limits<double>::infinity();
    std::vector<Eigen::Vector3d> n;
    n.reserve(static_cast<std::size_t>(points));
    for (int j = 0; j < points; ++j) {
      const double k = -kPi + 2 * kPi * j / points;
      const BlochSample s = bloch_sample(k, theta_plus, theta_minus, options.eps_gap);
      result.min_gap = std::min(result.min_gap, s.gap);
      result.gap_zero = std::min(result.gap_zero, s.energy);
      result.gap_pi = std::min(result.gap_pi, kPi - s.energy);
      n.push_back(s.axis);
    }
    if (result.min_gap <= options.eps_gap) return result;

    // Plane of the n_k sweep: smallest principal direction of sum n n^T.
    Eigen::Matrix3d scatter = Eigen::Matrix3d::Zero();
    for (const auto& v : n) scatter += v * v.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> pca(scatter);
    Eigen::Vector3d normal = pca.eigenvectors().col(0);
    const Eigen::Vector3d chiral(std::cos(theta_plus), 0.0, -std::sin(theta_plus));
    const double alignment = normal.dot(chiral);
    // A sweep confined to a line leaves the normal undetermined.
    if (std::abs(alignment) < 0.9) normal = chiral;
    else if (alignment < 0) normal = -normal;
    result.plane_normal = normal;

    double off_plane = 0.0;
    for (const auto& v : n) off_plane = std::max(off_plane, std::abs(v.dot(normal)));
    if (off_plane >= options.planar_tolerance) return result;

    const Sweep sweep = sweep_angle(n, normal);
    if (sweep.max_turn > options.max_turn) {
      if (attempt >= options.max_refinements) return result;
      points *= 2;
      continue;
    }
    result.winding = -sweep.total / (2 * kPi);
    const double rounded = std::round(result.winding);
    result.residual = std::abs(result.winding - rounded);
    if (result.residual < options.residual_tolerance) result.charge = static_cast<int>(rounded);
    return result;
  }
}

ScalarMap<ChargeCell> charge_map(const Grid2D& grid, const ChargeOptions& options,
                                 const ProgressFn& progress) {
  return fill_map<ChargeCell>(
      grid,
      [&](double tp, double tm) {
        const ChargeResult r = winding_number(tp, tm, options);
        return ChargeCell{tp, tm, r.charge, r.min_gap};
      },
      progress);
}

}  // namespace topowalk
