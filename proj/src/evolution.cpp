#include "topowalk/evolution.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace topowalk {

StepPlan StepPlan::from_config(const WalkConfig& config) {
  StepPlan plan;
  plan.L = config.L;
  plan.theta_minus = config.theta_minus;
  plan.phase = std::polar(1.0, config.phi);
  plan.theta_plus.resize(static_cast<std::size_t>(config.L));
  const int h = config.half_width();
  for (int x = -h; x <= h; ++x) {
    // Heaviside with H(0) = 1: the origin belongs to the right region.
    plan.theta_plus[static_cast<std::size_t>(x + h)] = x < 0 ? config.theta_left : config.theta_right;
  }
  return plan;
}

namespace {

// U0 written as a gather: the new spin-0 amplitude at p reads sites p-1 and p,
// the new spin-1 amplitude reads sites p and p+1.
//   up(p)   = w[0] a0(p-1) + w[1] a1(p-1) + w[2] a0(p) + w[3] a1(p)
//   down(p) = w[4] a0(p)   + w[5] a1(p)   + w[6] a0(p+1) + w[7] a1(p+1)
using SiteWeights = std::array<double, 8>;

std::vector<SiteWeights> site_weights(const StepPlan& plan) {
  const auto n = static_cast<std::size_t>(plan.L);
  const double cm = std::cos(plan.theta_minus);
  const double sm = std::sin(plan.theta_minus);
  std::vector<double> cp(n), sp(n);
  for (std::size_t p = 0; p < n; ++p) {
    cp[p] = std::cos(plan.theta_plus[p]);
    sp[p] = std::sin(plan.theta_plus[p]);
  }
  std::vector<SiteWeights> w(n);
  for (std::size_t p = 0; p < n; ++p) {
    const std::size_t left = (p + n - 1) % n;
    const std::size_t right = (p + 1) % n;
    w[p] = {cm * cp[left], cm * sp[left], -sm * sp[p], sm * cp[p],
            -sm * cp[p],   -sm * sp[p],   -cm * sp[right], cm * cp[right]};
  }
  return w;
}

}  // namespace

void step(StateVector& psi, const StepPlan& plan, std::vector<complex>& scratch) {
  if (plan.L != psi.L || plan.theta_plus.size() != static_cast<std::size_t>(plan.L)) {
    throw std::invalid_argument("plan and state sizes differ");
  }
  const int L = plan.L;
  const auto n = static_cast<std::size_t>(L);
  const std::size_t row = 2 * n;  // amplitudes per (x1, s1)
  const std::size_t block = 2 * row;  // amplitudes per x1
  scratch.resize(psi.amplitudes.size());
  const std::vector<SiteWeights> w = site_weights(plan);
  const complex phase = plan.phase;
  complex* a = psi.amplitudes.data();
  complex* b = scratch.data();

#pragma omp parallel if (L >= 33)
  {
    // Particle 1: whole rows of 2L amplitudes move together.
#pragma omp for schedule(static)
    for (int ip = 0; ip < L; ++ip) {
      const auto p = static_cast<std::size_t>(ip);
      const std::size_t left = (p + n - 1) % n;
      const std::size_t right = (p + 1) % n;
      const SiteWeights& c = w[p];
      const complex* l0 = a + left * block;
      const complex* l1 = l0 + row;
      const complex* h0 = a + p * block;
      const complex* h1 = h0 + row;
      const complex* r0 = a + right * block;
      const complex* r1 = r0 + row;
      complex* up = b + p * block;
      complex* down = up + row;
      for (std::size_t k = 0; k < row; ++k) {
        up[k] = c[0] * l0[k] + c[1] * l1[k] + c[2] * h0[k] + c[3] * h1[k];
        down[k] = c[4] * h0[k] + c[5] * h1[k] + c[6] * r0[k] + c[7] * r1[k];
      }
    }

    // Particle 2 inside each (x1, s1) row, then the on-site phase.
#pragma omp for schedule(static)
    for (int ir = 0; ir < 2 * L; ++ir) {
      const auto r = static_cast<std::size_t>(ir);
      const complex* src = b + r * row;
      complex* dst = a + r * row;
      for (std::size_t p = 0; p < n; ++p) {
        const std::size_t left = (p + n - 1) % n;
        const std::size_t right = (p + 1) % n;
        const SiteWeights& c = w[p];
        dst[2 * p] = c[0] * src[2 * left] + c[1] * src[2 * left + 1] + c[2] * src[2 * p] +
                     c[3] * src[2 * p + 1];
        dst[2 * p + 1] = c[4] * src[2 * p] + c[5] * src[2 * p + 1] + c[6] * src[2 * right] +
                         c[7] * src[2 * right + 1];
      }
      const std::size_t x1 = r / 2;
      dst[2 * x1] *= phase;
      dst[2 * x1 + 1] *= phase;
    }
  }
  ++psi.time;
}

StateVector evolve(StateVector psi, const WalkConfig& config, const StepObserver& observer) {
  config.validate_for_dynamics();
  if (psi.L != config.L) throw std::invalid_argument("state and config sizes differ");
  Stepper stepper(StepPlan::from_config(config));
  if (observer) observer(psi);
  for (int t = 0; t < config.steps; ++t) {
    stepper.advance(psi);
    if (observer) observer(psi);
  }
  return psi;
}

double seam_probability(const StateVector& psi, int margin) {
  const int h = (psi.L - 1) / 2;
  const auto near_seam = [&](int x) { return x > h - margin || x < -h + margin; };
  double total = 0.0;
  for (std::size_t k = 0; k < psi.amplitudes.size(); ++k) {
    const BasisState ket = decode(k, psi.L);
    if (near_seam(ket.x1) || near_seam(ket.x2)) total += std::norm(psi.amplitudes[k]);
  }
  return total;
}

}  // namespace topowalk
