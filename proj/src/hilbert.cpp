#include "topowalk/hilbert.hpp"

#include <cmath>
#include <stdexcept>

namespace topowalk {

double reduce_angle(double theta) {
  if (theta > -kPi && theta <= kPi) return theta;
  double r = std::remainder(theta, 2 * kPi);
  if (r <= -kPi) r += 2 * kPi;
  return r;
}

void WalkConfig::validate() {
  if (L < 3 || L % 2 == 0) {
    throw std::invalid_argument("lattice size must be odd and >= 3, got " + std::to_string(L));
  }
  if (steps < 0) throw std::invalid_argument("step count must be non-negative");
  theta_minus = reduce_angle(theta_minus);
  theta_left = reduce_angle(theta_left);
  theta_right = reduce_angle(theta_right);
  phi = reduce_angle(phi);
}

void WalkConfig::validate_for_dynamics() const {
  if (L < dynamics_size(steps)) {
    throw std::invalid_argument("lattice of " + std::to_string(L) + " sites is too small for " +
                                std::to_string(steps) + " steps (need L >= " +
                                std::to_string(dynamics_size(steps)) + ")");
  }
}

std::size_t encode(const BasisState& ket, int L) {
  const int h = (L - 1) / 2;
  if (ket.x1 < -h || ket.x1 > h || ket.x2 < -h || ket.x2 > h) {
    throw std::out_of_range("position outside the lattice");
  }
  if ((ket.s1 & ~1) != 0 || (ket.s2 & ~1) != 0) throw std::out_of_range("spin must be 0 or 1");
  const auto p1 = static_cast<std::size_t>(ket.x1 + h);
  const auto p2 = static_cast<std::size_t>(ket.x2 + h);
  const auto sites = static_cast<std::size_t>(L);
  return ((p1 * 2 + ket.s1) * sites + p2) * 2 + ket.s2;
}

BasisState decode(std::size_t flat, int L) {
  if (flat >= dimension(L)) throw std::out_of_range("flat index outside the basis");
  const int h = (L - 1) / 2;
  const auto sites = static_cast<std::size_t>(L);
  BasisState ket;
  ket.s2 = static_cast<int>(flat % 2);
  flat /= 2;
  ket.x2 = static_cast<int>(flat % sites) - h;
  flat /= sites;
  ket.s1 = static_cast<int>(flat % 2);
  ket.x1 = static_cast<int>(flat / 2) - h;
  return ket;
}

double StateVector::norm() const {
  double sum = 0.0;
  for (const auto& a : amplitudes) sum += std::norm(a);
  return std::sqrt(sum);
}

InitialState initial_state_from_label(int b) {
  if (b < 0 || b > 4) throw std::invalid_argument("initial state label must be in 0..4");
  return static_cast<InitialState>(b);
}

std::string_view initial_state_name(InitialState b) {
  switch (b) {
    case InitialState::PhiPlus: return "phi+";
    case InitialState::PhiMinus: return "phi-";
    case InitialState::PsiPlus: return "psi+";
    case InitialState::PsiMinus: return "psi-";
    case InitialState::Product: return "product";
  }
  return "?";
}

StateVector make_initial(InitialState b, int L) {
  if (L < 3 || L % 2 == 0) throw std::invalid_argument("lattice size must be odd and >= 3");
  StateVector psi(L);
  const double r = 1.0 / std::sqrt(2.0);
  switch (b) {
    case InitialState::PhiPlus:
      psi[{0, 0, 0, 0}] = r;
      psi[{0, 1, 0, 1}] = r;
      break;
    case InitialState::PhiMinus:
      psi[{0, 0, 0, 0}] = r;
      psi[{0, 1, 0, 1}] = -r;
      break;
    case InitialState::PsiPlus:
      psi[{0, 0, 0, 1}] = r;
      psi[{0, 1, 0, 0}] = r;
      break;
    case InitialState::PsiMinus:
      psi[{0, 0, 0, 1}] = r;
      psi[{0, 1, 0, 0}] = -r;
      break;
    case InitialState::Product:
      psi[{0, 0, 0, 0}] = 1.0;
      break;
    default:
      throw std::invalid_argument("unknown initial state");
  }
  return psi;
}

ParamCode ParamCode::parse(std::string_view text) {
  if (text.size() != 4) throw std::invalid_argument("parameter code must have 4 digits");
  int d[4];
  for (int k = 0; k < 4; ++k) {
    if (text[k] < '0' || text[k] > '9') {
      throw std::invalid_argument("parameter code must contain digits only");
    }
    d[k] = text[k] - '0';
  }
  ParamCode code{d[0], d[1], d[2], d[3]};
  if (code.c > 1) throw std::invalid_argument("code digit c must be 0 or 1");
  if (code.b > 4) throw std::invalid_argument("code digit b must be in 0..4");
  if (code.g > 4) throw std::invalid_argument("code digit g must be in 0..4");
  if (code.i > 2) throw std::invalid_argument("code digit i must be in 0..2");
  return code;
}

std::string ParamCode::str() const {
  return {static_cast<char>('0' + c), static_cast<char>('0' + b), static_cast<char>('0' + g),
          static_cast<char>('0' + i)};
}

double theta_left_for(int c) {
  switch (c) {
    case 0: return -kPi / 16;
    case 1: return 9 * kPi / 16;
  }
  throw std::invalid_argument("left charge label must be 0 or 1");
}

double theta_right_for(int i) {
  switch (i) {
    case 0: return -kPi / 3;
    case 1: return kPi / 16;
    case 2: return 3 * kPi / 8;
  }
  throw std::invalid_argument("right charge label must be in 0..2");
}

double phi_for(int g) {
  switch (g) {
    case 0: return 0.0;
    case 1: return kPi / 3;
    case 2: return kPi / 2;
    case 3: return 3 * kPi / 4;
    case 4: return kPi;
  }
  throw std::invalid_argument("interaction label must be in 0..4");
}

CodedRun config_from_code(const ParamCode& code, int L, int steps) {
  CodedRun run;
  run.config.L = L;
  run.config.steps = steps;
  run.config.theta_minus = kPi / 4;
  run.config.theta_left = theta_left_for(code.c);
  run.config.theta_right = theta_right_for(code.i);
  run.config.phi = phi_for(code.g);
  run.config.validate();
  run.initial = initial_state_from_label(code.b);
  return run;
}

std::vector<complex> exchange_particles(std::span<const complex> amplitudes, int L) {
  const auto block = static_cast<std::size_t>(2 * L);
  if (amplitudes.size() != block * block) throw std::invalid_argument("state size mismatch");
  std::vector<complex> out(amplitudes.size());
  for (std::size_t a = 0; a < block; ++a) {
    for (std::size_t b = 0; b < block; ++b) out[b * block + a] = amplitudes[a * block + b];
  }
  return out;
}

}  // namespace topowalk
