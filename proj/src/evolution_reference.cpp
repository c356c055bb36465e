#include <cmath>
#include <stdexcept>

#include "topowalk/evolution.hpp"

namespace topowalk::reference {

namespace {

// Amplitude offset of (position, spin) for the chosen particle, relative to
// the start of the state (particle 1) or of a particle-1 row (particle 2).
struct Layout {
  std::size_t rows;     // number of independent lines to process
  std::size_t stride;   // distance between consecutive lines
  std::size_t site;     // distance between consecutive positions
  std::size_t spin;     // distance between spin 0 and spin 1
  std::size_t lanes;    // contiguous amplitudes sharing (position, spin)
};

Layout layout_for(int L, Particle particle) {
  const auto row = static_cast<std::size_t>(2 * L);
  if (particle == Particle::One) return {1, 0, 2 * row, row, row};
  return {row, row, 2, 1, 1};
}

}  // namespace

void apply_rotation(StateVector& psi, std::span<const double> theta, Particle particle) {
  if (theta.size() != static_cast<std::size_t>(psi.L)) {
    throw std::invalid_argument("one rotation angle per site is required");
  }
  const Layout lay = layout_for(psi.L, particle);
  for (std::size_t r = 0; r < lay.rows; ++r) {
    complex* line = psi.amplitudes.data() + r * lay.stride;
    for (std::size_t p = 0; p < theta.size(); ++p) {
      const double c = std::cos(theta[p]);
      const double s = std::sin(theta[p]);
      complex* up = line + p * lay.site;
      complex* down = up + lay.spin;
      for (std::size_t k = 0; k < lay.lanes; ++k) {
        const complex a0 = up[k];
        const complex a1 = down[k];
        up[k] = c * a0 + s * a1;
        down[k] = -s * a0 + c * a1;
      }
    }
  }
}

void apply_shift(StateVector& psi, Shift direction, Particle particle) {
  const Layout lay = layout_for(psi.L, particle);
  const auto sites = static_cast<std::size_t>(psi.L);
  const std::size_t moving_spin = direction == Shift::Plus ? 0 : 1;
  const StateVector before = psi;
  for (std::size_t r = 0; r < lay.rows; ++r) {
    const complex* src = before.amplitudes.data() + r * lay.stride + moving_spin * lay.spin;
    complex* dst = psi.amplitudes.data() + r * lay.stride + moving_spin * lay.spin;
    for (std::size_t p = 0; p < sites; ++p) {
      // T+: new(x) = old(x - 1); T-: new(x) = old(x + 1)
      const std::size_t from = direction == Shift::Plus ? (p + sites - 1) % sites : (p + 1) % sites;
      for (std::size_t k = 0; k < lay.lanes; ++k) {
        dst[p * lay.site + k] = src[from * lay.site + k];
      }
    }
  }
}

namespace {

void multiply_diagonal(StateVector& psi, complex phase) {
  const int h = (psi.L - 1) / 2;
  for (int x = -h; x <= h; ++x) {
    for (int s1 = 0; s1 < 2; ++s1) {
      for (int s2 = 0; s2 < 2; ++s2) psi[{x, s1, x, s2}] *= phase;
    }
  }
}

}  // namespace

void apply_interaction(StateVector& psi, double phi) { multiply_diagonal(psi, std::polar(1.0, phi)); }

void step(StateVector& psi, const StepPlan& plan) {
  if (plan.L != psi.L) throw std::invalid_argument("plan and state sizes differ");
  const std::vector<double> minus(static_cast<std::size_t>(plan.L), plan.theta_minus);
  for (Particle particle : {Particle::One, Particle::Two}) {
    apply_rotation(psi, plan.theta_plus, particle);
    apply_shift(psi, Shift::Plus, particle);
    apply_rotation(psi, minus, particle);
    apply_shift(psi, Shift::Minus, particle);
  }
  multiply_diagonal(psi, plan.phase);
  ++psi.time;
}

}  // namespace topowalk::reference
