#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace topowalk {

using complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

/// Reduces an angle to (-pi, pi].
double reduce_angle(double theta);

/// Parameters of a two-particle walk on a periodic chain of L sites.
///
/// Positions run over -(L-1)/2 ... (L-1)/2. The right rotation angle applies
/// for x >= 0 and the left one for x < 0.
struct WalkConfig {
  int L = 0;
  double theta_minus = kPi / 4;
  double theta_left = 0.0;
  double theta_right = 0.0;
  double phi = 0.0;
  int steps = 0;

  int half_width() const { return (L - 1) / 2; }
  bool homogeneous() const { return theta_left == theta_right; }

  /// Throws std::invalid_argument if L is not odd and >= 3 or steps < 0.
  /// Angles are reduced in place.
  void validate();

  /// Throws if the lattice is too small for the wavefront to stay away from
  /// the periodic seam during `steps` steps (L >= 2 * steps + 5).
  void validate_for_dynamics() const;

  /// Smallest admissible lattice for a dynamics run of n steps.
  static int dynamics_size(int n) { return 2 * n + 5; }
};

/// One basis ket |x1 s1 x2 s2>.
struct BasisState {
  int x1 = 0;
  int s1 = 0;
  int x2 = 0;
  int s2 = 0;

  friend bool operator==(const BasisState&, const BasisState&) = default;
};

/// Flat index of |x1 s1 x2 s2>: particle 1 position is the slowest axis, so
/// each site of particle 1 owns a contiguous block of 4L amplitudes.
std::size_t encode(const BasisState& ket, int L);
BasisState decode(std::size_t flat, int L);

inline std::size_t dimension(int L) {
  return static_cast<std::size_t>(2 * L) * static_cast<std::size_t>(2 * L);
}

/// Two-particle state. `time` counts applied steps.
struct StateVector {
  int L = 0;
  int time = 0;
  std::vector<complex> amplitudes;

  StateVector() = default;
  explicit StateVector(int sites) : L(sites), amplitudes(dimension(sites)) {}

  complex& operator[](const BasisState& ket) { return amplitudes[encode(ket, L)]; }
  complex operator[](const BasisState& ket) const { return amplitudes[encode(ket, L)]; }

  double norm() const;
};

/// Initial states: the four Bell states at the origin followed by the
/// product state |0000>. Values match the digit `b` of a parameter code.
enum class InitialState : int {
  PhiPlus = 0,
  PhiMinus = 1,
  PsiPlus = 2,
  PsiMinus = 3,
  Product = 4,
};

InitialState initial_state_from_label(int b);
std::string_view initial_state_name(InitialState b);

StateVector make_initial(InitialState b, int L);

/// Four-digit experiment label (c b g i).
///   c: left angle, 0 -> -pi/16, 1 -> 9pi/16
///   b: initial state
///   g: interaction phase, 0, pi/3, pi/2, 3pi/4, pi
///   i: right angle, 0 -> -pi/3, 1 -> pi/16, 2 -> 3pi/8
struct ParamCode {
  int c = 0;
  int b = 0;
  int g = 0;
  int i = 0;

  /// Parses a string like "0321"; throws std::invalid_argument otherwise.
  static ParamCode parse(std::string_view text);
  std::string str() const;
};

double theta_left_for(int c);
double theta_right_for(int i);
double phi_for(int g);

struct CodedRun {
  WalkConfig config;
  InitialState initial = InitialState::PhiPlus;
};

CodedRun config_from_code(const ParamCode& code, int L, int steps);

/// Swaps the two particles: psi(x1 s1 x2 s2) -> psi(x2 s2 x1 s1).
std::vector<complex> exchange_particles(std::span<const complex> amplitudes, int L);

}  // namespace topowalk
