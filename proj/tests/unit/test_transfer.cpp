#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "topowalk/transfer.hpp"

using namespace topowalk;

namespace {

struct Sample {
  double E, tp, tm, phi;
};

Sample random_sample(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-kPi, kPi);
  Sample s{u(rng), u(rng), u(rng), u(rng)};
  return s;
}

bool regular(const Sample& s) { return std::abs(std::cos(s.tp) * std::cos(s.tm)) > 0.05; }

// Eigenvalues from the general 2x2 eigensolver, sorted by modulus (largest first).
std::pair<complex, complex> solver_pair(const Eigen::Matrix2cd& m) {
  Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(m, false);
  complex a = es.eigenvalues()[0], b = es.eigenvalues()[1];
  if (std::abs(a) < std::abs(b)) std::swap(a, b);
  return {a, b};
}

double pair_distance(std::pair<complex, complex> x, std::pair<complex, complex> y) {
  const double direct = std::max(std::abs(x.first - y.first), std::abs(x.second - y.second));
  const double swapped = std::max(std::abs(x.first - y.second), std::abs(x.second - y.first));
  return std::min(direct, swapped);
}

}  // namespace

TEST_CASE("transfer block is unimodular and symmetric") {
  std::mt19937_64 rng(17);
  for (int k = 0; k < 200; ++k) {
    const Sample s = random_sample(rng);
    if (!regular(s)) continue;
    const auto m = transfer_block(s.E, s.tp, s.tm, s.phi);
    REQUIRE(m);
    CHECK(std::abs(m->determinant() - 1.0) < 1e-10);
    CHECK(std::abs((*m)(0, 1) - (*m)(1, 0)) == 0.0);
    // The trace is real: 2 (cos(E + phi) + s+ s-) / (c+ c-).
    const double expected = 2 * (std::cos(s.E + s.phi) + std::sin(s.tp) * std::sin(s.tm)) /
                            (std::cos(s.tp) * std::cos(s.tm));
    CHECK(std::abs(m->trace() - expected) < 1e-10 * std::max(1.0, std::abs(expected)));
  }
}

TEST_CASE("lyapunov eigenvalues match the general eigensolver") {
  std::mt19937_64 rng(29);
  for (int k = 0; k < 200; ++k) {
    const Sample s = random_sample(rng);
    if (!regular(s)) continue;
    const auto eig = lyapunov(s.E, s.tp, s.tm, s.phi);
    const auto m = transfer_block(s.E, s.tp, s.tm, s.phi);
    REQUIRE(eig);
    const auto ref = solver_pair(*m);
    CHECK(pair_distance({eig->lambda_plus, eig->lambda_minus}, ref) < 1e-10 * std::abs(ref.first));
    CHECK(std::abs(eig->lambda_plus) >= std::abs(eig->lambda_minus) - 1e-12);
    CHECK(std::abs(eig->lambda_plus * eig->lambda_minus - 1.0) < 1e-10);
    CHECK(eig->Lambda == doctest::Approx(std::log(std::abs(ref.first))).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("closed forms at E = 0 and E = pi match the eigensolver") {
  std::mt19937_64 rng(31);
  for (int k = 0; k < 200; ++k) {
    Sample s = random_sample(rng);
    if (!regular(s)) continue;
    for (BandCenter center : {BandCenter::Zero, BandCenter::Pi}) {
      const double E = center == BandCenter::Zero ? 0.0 : kPi;
      const auto closed = closed_form_lambda(center, s.tp, s.tm, s.phi);
      REQUIRE(closed);
      const auto ref = solver_pair(*transfer_block(E, s.tp, s.tm, s.phi));
      CHECK(pair_distance(*closed, ref) < 1e-10 * std::abs(ref.first));
    }
  }
}

TEST_CASE("worked value at theta+- = pi/4, phi = 0, E = 0") {
  const auto eig = lyapunov(0.0, kPi / 4, kPi / 4, 0.0);
  REQUIRE(eig);
  CHECK(std::abs(eig->lambda_plus - (3 + 2 * std::sqrt(2.0))) < 1e-9);
  CHECK(std::abs(eig->lambda_minus - (3 - 2 * std::sqrt(2.0))) < 1e-9);
  CHECK(std::abs(eig->Lambda - std::log(3 + 2 * std::sqrt(2.0))) < 1e-9);
  CHECK(eig->Lambda == doctest::Approx(1.76275).epsilon(1e-5));
}

TEST_CASE("inside the band the eigenvalues are e^{+-ik}") {
  const double tp = 0.7, tm = -0.3, phi = 0.4;
  for (double k : {0.2, 1.0, 2.5}) {
    const double omega = std::acos(std::cos(tp) * std::cos(tm) * std::cos(k) - std::sin(tp) * std::sin(tm));
    const auto eig = lyapunov(omega - phi, tp, tm, phi);
    REQUIRE(eig);
    CHECK(eig->Lambda < 1e-8);
    CHECK(pair_distance({eig->lambda_plus, eig->lambda_minus},
                        {std::polar(1.0, k), std::polar(1.0, -k)}) < 1e-7);
  }
}

TEST_CASE("the exponent is even in E + phi") {
  for (double w : {0.3, 1.4, 2.9}) {
    const auto a = lyapunov(w - 0.5, 1.1, 0.2, 0.5);
    const auto b = lyapunov(-w - 0.5, 1.1, 0.2, 0.5);
    CHECK(a->Lambda == doctest::Approx(b->Lambda).epsilon(1e-12));
  }
}

TEST_CASE("singular lines are undefined") {
  CHECK_FALSE(transfer_block(0.0, kPi / 2, 0.3, 0.0));
  CHECK_FALSE(lyapunov(0.0, 0.3, -kPi / 2, 0.0));
  CHECK_FALSE(closed_form_lambda(BandCenter::Pi, kPi / 2, 0.3, 0.0));

  const Grid2D grid{{-kPi, kPi, 4}, {-kPi, kPi, 4}};  // nodes at +-pi/4, +-3pi/4
  const auto map = loc_length_map(0.0, 0.0, grid);
  CHECK(map.cells.size() == 16);
  for (const auto& cell : map.cells) CHECK(cell.defined);
  CHECK(map.at(2, 2).theta_plus == doctest::Approx(kPi / 4));
  CHECK(map.at(2, 2).Lambda == doctest::Approx(std::log(3 + 2 * std::sqrt(2.0))));

  const Grid2D singular{{0.0, kPi, 1}, {0.0, 1.0, 1}};  // theta+ = pi/2
  CHECK_FALSE(loc_length_map(0.0, 0.0, singular).cells[0].defined);
}
