#include "topowalk/transfer.hpp"

#include <algorithm>
#include <cmath>

namespace topowalk {

std::optional<Eigen::Matrix2cd> transfer_block(double energy, double theta_plus, double theta_minus,
                                               double phi, double eps) {
  const double cp = std::cos(theta_plus);
  const double sp = std::sin(theta_plus);
  const double cm = std::cos(theta_minus);
  const double sm = std::sin(theta_minus);
  const double denom = cp * cm;
  if (std::abs(denom) <= eps) return std::nullopt;

  const complex forward = std::polar(1.0, energy + phi);
  const complex backward = std::conj(forward);
  Eigen::Matrix2cd m;
  m(0, 0) = backward + 2 * sp * sm + forward * sp * sp;
  m(0, 1) = forward * cp * sp + cp * sm;
  m(1, 0) = m(0, 1);
  m(1, 1) = forward * cp * cp;
  return m / denom;
}

std::optional<TransferEigen> lyapunov(double energy, double theta_plus, double theta_minus, double phi,
                                      double eps) {
  const auto m = transfer_block(energy, theta_plus, theta_minus, phi, eps);
  if (!m) return std::nullopt;
  const complex tr = m->trace();
  const complex det = m->determinant();
  const complex root = std::sqrt(tr * tr - 4.0 * det);
  // Pick the sign that avoids cancellation; the partner follows from det.
  const complex big = (std::real(std::conj(tr) * root) >= 0 ? tr + root : tr - root) / 2.0;
  TransferEigen out;
  out.energy = energy;
  out.lambda_plus = big;
  out.lambda_minus = det / big;
  out.Lambda = std::max(0.0, std::log(std::abs(big)));
  return out;
}

std::optional<std::pair<complex, complex>> closed_form_lambda(BandCenter center, double theta_plus,
                                                              double theta_minus, double phi,
                                                              double eps) {
  const double cp = std::cos(theta_plus);
  const double sp = std::sin(theta_plus);
  const double cm = std::cos(theta_minus);
  const double sm = std::sin(theta_minus);
  if (std::abs(cp * cm) <= eps) return std::nullopt;

  const complex e1 = std::polar(1.0, phi);
  const complex e2 = e1 * e1;
  const complex prefactor = std::conj(e1) / (2 * cp * cm);
  const complex coupling = 4.0 * e2 * (cp * cp * cm * cm);
  if (center == BandCenter::Zero) {
    const complex a = e2 + 2.0 * e1 * (sp * sm) + 1.0;
    const complex root = std::sqrt(a * a - coupling);
    return std::pair{prefactor * (a + root), prefactor * (a - root)};
  }
  const complex b = e2 - 2.0 * e1 * (sp * sm) + 1.0;
  const complex root = std::sqrt(b * b - coupling);
  return std::pair{prefactor * (-b + root), prefactor * (-b - root)};
}

ScalarMap<LambdaCell> loc_length_map(double energy, double phi, const Grid2D& grid) {
  return fill_map<LambdaCell>(grid, [&](double tp, double tm) {
    LambdaCell cell{tp, tm, 0.0, 0.0, false};
    if (const auto eig = lyapunov(energy, tp, tm, phi)) {
      cell.lambda_abs_max = std::abs(eig->lambda_plus);
      cell.Lambda = eig->Lambda;
      cell.defined = true;
    }
    return cell;
  });
}

}  // namespace topowalk
