#include <doctest.h>

#include <cmath>

#include "dense_oracle.hpp"
#include "topowalk/topocharge.hpp"

using namespace topowalk;

TEST_CASE("Bloch operator is the plane-wave block of the lattice step") {
  const int L = 9;
  const double tp = 0.8, tm = -0.45;
  const auto U0 = oracle::single_step(L, tm, tp, tp);
  for (int n = 0; n < L; ++n) {
    const double k = 2 * kPi * n / L;
    Eigen::MatrixXcd W = Eigen::MatrixXcd::Zero(2 * L, 2);
    for (int p = 0; p < L; ++p) {
      const complex wave = std::polar(1.0 / std::sqrt(L), k * p);
      W(2 * p, 0) = wave;
      W(2 * p + 1, 1) = wave;
    }
    const Eigen::MatrixXcd block = W.adjoint() * U0 * W;
    CHECK((block - bloch_operator(k, tp, tm)).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("Bloch samples lie in SU(2) and reconstruct U") {
  for (double k : {-3.0, -1.0, 0.0, 0.5, 2.2}) {
    const BlochSample s = bloch_sample(k, 1.1, 0.3);
    CHECK(std::abs(s.U.determinant() - 1.0) < 1e-14);
    CHECK((s.U.adjoint() * s.U - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(s.energy >= 0.0);
    CHECK(s.energy <= kPi);
    CHECK(s.axis.norm() == doctest::Approx(1.0));
    CHECK(s.reconstruction_error() < 1e-14);
  }
}

TEST_CASE("labelled points carry their charges") {
  struct Point {
    double tp, tm;
    int charge;
  };
  const Point points[] = {{-kPi / 3, kPi / 4, -1},
                          {kPi / 16, kPi / 4, 0},
                          {3 * kPi / 8, kPi / 4, 1},
                          {-kPi / 16, kPi / 4, 0},
                          {9 * kPi / 16, kPi / 4, 1}};
  for (const auto& p : points) {
    CAPTURE(p.tp);
    const ChargeResult r = winding_number(p.tp, p.tm);
    REQUIRE(r.charge.has_value());
    CHECK(*r.charge == p.charge);
    CHECK(r.residual < 0.1);
    ChargeOptions fine;
    fine.k_points = 2048;
    CHECK(winding_number(p.tp, p.tm, fine).charge == r.charge);
  }
}

TEST_CASE("winding is undefined when the gap closes") {
  // theta+ = theta- closes the gap at E = 0 for some k.
  const ChargeResult r = winding_number(kPi / 4 + 1e-9, kPi / 4);
  CHECK_FALSE(r.charge.has_value());
  CHECK(r.min_gap < 1e-3);
}

TEST_CASE("charge is constant along a gapped path") {
  // From (3pi/8, pi/4) towards (pi/2 - 0.05, pi/4) without crossing a closing.
  for (double tp = 3 * kPi / 8; tp < kPi / 2 - 0.05; tp += 0.02) {
    const ChargeResult r = winding_number(tp, kPi / 4);
    CHECK(r.charge == 1);
  }
}

TEST_CASE("charge map uses cell-centred nodes") {
  const Grid2D grid{{-kPi, kPi, 8}, {-kPi, kPi, 8}};
  const auto map = charge_map(grid);
  CHECK(map.cells.size() == 64);
  CHECK(map.at(0, 0).theta_plus == doctest::Approx(-7 * kPi / 8));
  for (const auto& cell : map.cells) {
    if (cell.charge) CHECK(std::abs(*cell.charge) <= 1);
  }
  // Diagonal cells sit on the closing line theta+ = theta-.
  for (int i = 0; i < 8; ++i) CHECK_FALSE(map.at(i, i).charge.has_value());
}
