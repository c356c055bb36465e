#include "topowalk/observables.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>
#include <string>

#include "topowalk/evolution.hpp"

namespace topowalk {

JointDistribution joint_probability(const StateVector& psi) {
  const int L = psi.L;
  JointDistribution joint;
  joint.t = psi.time;
  joint.P = Eigen::MatrixXd::Zero(L, L);
  const auto sites = static_cast<std::size_t>(L);
  for (std::size_t p1 = 0; p1 < sites; ++p1) {
    for (std::size_t s1 = 0; s1 < 2; ++s1) {
      const complex* row = psi.amplitudes.data() + (p1 * 2 + s1) * 2 * sites;
      for (std::size_t p2 = 0; p2 < sites; ++p2) {
        joint.P(static_cast<Eigen::Index>(p1), static_cast<Eigen::Index>(p2)) +=
            std::norm(row[2 * p2]) + std::norm(row[2 * p2 + 1]);
      }
    }
  }
  return joint;
}

double diagonal_weight_beyond(const JointDistribution& joint, int radius) {
  const auto L = joint.P.rows();
  const auto h = (L - 1) / 2;
  double sum = 0.0;
  for (Eigen::Index p = 0; p < L; ++p) {
    if (std::abs(p - h) > radius) sum += joint.P(p, p);
  }
  return sum;
}

ReturnPoint return_probabilities(const StateVector& psi) {
  const auto sites = static_cast<std::size_t>(psi.L);
  const std::size_t origin = (sites - 1) / 2;
  ReturnPoint point;
  point.t = psi.time;
  for (std::size_t s1 = 0; s1 < 2; ++s1) {
    const complex* row = psi.amplitudes.data() + (origin * 2 + s1) * 2 * sites;
    for (std::size_t k = 0; k < 2 * sites; ++k) point.P += std::norm(row[k]);
    point.P0 += std::norm(row[2 * origin]) + std::norm(row[2 * origin + 1]);
  }
  return point;
}

Eigen::MatrixXcd reduced_density_x(const StateVector& psi) {
  using RowMajor = Eigen::Matrix<complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  // Each particle-1 position owns a contiguous block of 4L amplitudes.
  const Eigen::Map<const RowMajor> blocks(psi.amplitudes.data(), psi.L, 4 * psi.L);
  Eigen::MatrixXcd rho = blocks * blocks.adjoint();
  return 0.5 * (rho + rho.adjoint());
}

namespace {

EntropyPoint entropy_point(const Eigen::MatrixXcd& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("density matrix diagonalization failed");
  const Eigen::VectorXd& w = solver.eigenvalues();
  EntropyPoint point;
  point.min_eigenvalue = w.minCoeff();
  if (point.min_eigenvalue < -1e-8) {
    throw std::domain_error("density matrix has eigenvalue " + std::to_string(point.min_eigenvalue));
  }
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    if (w[k] > kEntropyFloor) point.S -= w[k] * std::log(w[k]);
  }
  return point;
}

}  // namespace

double entropy_x(const Eigen::MatrixXcd& rho) { return entropy_point(rho).S; }

Trajectory run_trajectory(const WalkConfig& config, InitialState initial, bool with_entropy) {
  Trajectory traj;
  traj.final_state = evolve(make_initial(initial, config.L), config, [&](const StateVector& psi) {
    traj.returns.push_back(return_probabilities(psi));
    if (with_entropy) {
      EntropyPoint point = entropy_point(reduced_density_x(psi));
      point.t = psi.time;
      traj.entropy.push_back(point);
    }
  });
  return traj;
}

std::string_view growth_model_name(GrowthModel model) {
  return model == GrowthModel::Log ? "log" : "loglog";
}

GrowthModel parse_growth_model(std::string_view name) {
  if (name == "log") return GrowthModel::Log;
  if (name == "loglog") return GrowthModel::LogLog;
  throw std::invalid_argument("growth model must be 'log' or 'loglog'");
}

GrowthFit fit_growth(std::span<const double> t, std::span<const double> S, GrowthModel model,
                     double t_min, double t_max) {
  if (t.size() != S.size()) throw std::invalid_argument("time and entropy series differ in length");
  const double t_floor = model == GrowthModel::Log ? 0.0 : 1.0;
  std::vector<double> x, y;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] < t_min || t[k] > t_max) continue;
    if (t[k] <= t_floor) {
      throw std::invalid_argument("fit window must exclude t <= " + std::to_string(t_floor) +
                                  " for the " + std::string(growth_model_name(model)) + " model");
    }
    x.push_back(model == GrowthModel::Log ? std::log(t[k]) : std::log(std::log(t[k])));
    y.push_back(S[k]);
  }
  if (x.size() < 10) throw std::invalid_argument("fit window holds fewer than 10 points");

  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
    syy += (y[k] - my) * (y[k] - my);
  }
  if (sxx <= 0.0) throw std::invalid_argument("fit window has no spread in time");

  GrowthFit fit;
  fit.model = model;
  fit.alpha = sxy / sxx;
  fit.S0 = my - fit.alpha * mx;
  double residual = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double e = y[k] - (fit.S0 + fit.alpha * x[k]);
    residual += e * e;
  }
  fit.r2 = syy > 0.0 ? 1.0 - residual / syy : 1.0;
  fit.t_min = t_min;
  fit.t_max = t_max;
  fit.points = static_cast<int>(x.size());
  return fit;
}

ScalarMap<LocalizationCell> localization_map(const LocalizationMapParams& params,
                                             const ProgressFn& progress) {
  if (params.steps < 1) throw std::invalid_argument("localization map needs at least one step");
  const int L = params.L > 0 ? params.L : WalkConfig::dynamics_size(params.steps);
  return fill_map<LocalizationCell>(
      params.grid,
      [&](double theta, double phi) {
        WalkConfig config;
        config.L = L;
        config.steps = params.steps;
        config.theta_minus = params.theta_minus;
        config.theta_left = params.theta_left;
        config.theta_right = theta;
        config.phi = phi;
        config.validate();
        const StateVector psi = evolve(make_initial(params.initial, L), config);
        const ReturnPoint r = return_probabilities(psi);
        return LocalizationCell{theta, phi, r.P, r.P0, r.P > 1.0 / params.steps};
      },
      progress);
}

}  // namespace topowalk
