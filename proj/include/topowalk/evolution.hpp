#pragma once

#include <functional>
#include <span>
#include <vector>

#include "topowalk/hilbert.hpp"

namespace topowalk {

/// Coefficients of one walk step U = V (U0 x U0), U0 = T- R(theta-) T+ R(theta+(x)).
struct StepPlan {
  int L = 0;
  std::vector<double> theta_plus;  // per site, indexed by x + (L-1)/2
  double theta_minus = 0.0;
  complex phase{1.0, 0.0};         // e^{i phi}

  static StepPlan from_config(const WalkConfig& config);
};

enum class Particle { One, Two };
enum class Shift { Plus, Minus };

/// Serial reference kernels. Each applies exactly one factor of the step
/// operator and is kept for testing the fused kernel below.
namespace reference {

/// Multiplies the spin pair of `particle` at each site x by
/// exp(i sigma_y theta(x)) = [[cos, sin], [-sin, cos]].
void apply_rotation(StateVector& psi, std::span<const double> theta, Particle particle);

/// T+ moves spin 0 one site right, T- moves spin 1 one site left (periodic).
void apply_shift(StateVector& psi, Shift direction, Particle particle);

/// Multiplies amplitudes with x1 == x2 by e^{i phi}.
void apply_interaction(StateVector& psi, double phi);

void step(StateVector& psi, const StepPlan& plan);

}  // namespace reference

/// Fused OpenMP kernel for one step. Two out-of-place passes (particle 1,
/// then particle 2 with the interaction folded in) using `scratch`, which is
/// resized as needed. The result does not depend on the thread count.
void step(StateVector& psi, const StepPlan& plan, std::vector<complex>& scratch);

/// Applies one step at a time and keeps its scratch buffer between calls.
class Stepper {
 public:
  explicit Stepper(StepPlan plan) : plan_(std::move(plan)) {}

  void advance(StateVector& psi) { step(psi, plan_, scratch_); }
  const StepPlan& plan() const { return plan_; }

 private:
  StepPlan plan_;
  std::vector<complex> scratch_;
};

using StepObserver = std::function<void(const StateVector&)>;

/// Evolves `psi` for config.steps steps, calling `observer` on the state at
/// t = 0, 1, ..., steps. Throws if the lattice is too small for the run.
StateVector evolve(StateVector psi, const WalkConfig& config, const StepObserver& observer = {});

/// Total probability within `margin` sites of the periodic seam (both particles).
double seam_probability(const StateVector& psi, int margin = 2);

}  // namespace topowalk
