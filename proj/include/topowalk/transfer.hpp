#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>

#include "topowalk/grid.hpp"
#include "topowalk/hilbert.hpp"

namespace topowalk {

/// Rotation angles closer than this to a zero of cos(theta+) cos(theta-)
/// make the transfer matrix undefined.
inline constexpr double kTransferSingular = 1e-6;

/// 2x2 transfer block m of the molecular (x1 == x2) walk at quasienergy E:
///
///   m = 1/(c+ c-) [[ e^{-i(E+phi)} + 2 s+ s- + e^{i(E+phi)} s+^2,  e^{i(E+phi)} c+ s+ + c+ s- ],
///                  [ e^{i(E+phi)} c+ s+ + c+ s-,                  e^{i(E+phi)} c+^2         ]]
///
/// with c+- = cos(theta+-), s+- = sin(theta+-). det m = 1 and m is symmetric.
/// Returns nullopt when |c+ c-| <= eps.
std::optional<Eigen::Matrix2cd> transfer_block(double energy, double theta_plus, double theta_minus,
                                               double phi, double eps = kTransferSingular);

struct TransferEigen {
  double energy = 0.0;
  complex lambda_plus;   // larger modulus
  complex lambda_minus;
  double Lambda = 0.0;   // inverse localization length, log max |lambda|
};

/// Eigenvalues of the transfer block and the Lyapunov exponent
/// Lambda(E) = log max(|lambda+|, |lambda-|) >= 0.
std::optional<TransferEigen> lyapunov(double energy, double theta_plus, double theta_minus, double phi,
                                      double eps = kTransferSingular);

enum class BandCenter { Zero, Pi };

/// Radical closed forms of the transfer eigenvalues at E = 0 and E = pi:
///
///   lambda(0)  = e^{-i phi}/(2 c+ c-) [  A ± sqrt(A^2 - 4 e^{2i phi} c+^2 c-^2) ],
///                A = e^{2i phi} + 2 e^{i phi} s+ s- + 1
///   lambda(pi) = e^{-i phi}/(2 c+ c-) [ -B ± sqrt(B^2 - 4 e^{2i phi} c+^2 c-^2) ],
///                B = e^{2i phi} - 2 e^{i phi} s+ s- + 1
///
/// using the principal square root. First element takes the + sign.
std::optional<std::pair<complex, complex>> closed_form_lambda(BandCenter center, double theta_plus,
                                                              double theta_minus, double phi,
                                                              double eps = kTransferSingular);

struct LambdaCell {
  double theta_plus = 0.0;
  double theta_minus = 0.0;
  double lambda_abs_max = 0.0;
  double Lambda = 0.0;
  bool defined = false;
};

/// Lambda(E) over a (theta+, theta-) grid; cells on the singular lines are
/// marked undefined. Values are not clipped.
ScalarMap<LambdaCell> loc_length_map(double energy, double phi, const Grid2D& grid);

}  // namespace topowalk
