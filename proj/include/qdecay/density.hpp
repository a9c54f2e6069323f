#ifndef QDECAY_DENSITY_HPP
#define QDECAY_DENSITY_HPP

// Energy density of an unstable state built from its pole expansion:
//   rho(E) = (1/pi) Im[ sum_p (gamma_p / k_p) sqrt(E) / (k_p^2 - E) ]

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qdecay/errors.hpp"
#include "qdecay/poles.hpp"

namespace qdecay {

struct DensitySample {
  double energy;
  double rho;
};

namespace detail {

inline void check_energy(double energy) {
  if (!std::isfinite(energy) || energy < 0.0)
    throw qdecay::domain_error("density: energy must be finite and >= 0");
}

// sqrt(E) / (k (k^2 - E))
inline complex resonant_kernel(complex k, double energy) {
  return std::sqrt(energy) / (k * (k * k - energy));
}

}  // namespace detail

inline double rho(const PoleExpansion& expansion, double energy) {
  detail::check_energy(energy);
  if (energy == 0.0) return 0.0;
  complex sum = 0.0;
  for (std::size_t p = 0; p < expansion.size(); ++p) {
    const complex k = expansion.poles[p].value();
    const complex gap = k * k - energy;
    if (gap.imag() == 0.0 && std::abs(gap.real()) <= 1e-14 * std::max(1.0, energy))
      throw qdecay::domain_error("density: pole " + std::to_string(p) + " lies on the real axis");
    sum += expansion.coefficients[p] / k * (std::sqrt(energy) / gap);
  }
  return sum.imag() / std::numbers::pi;
}

/// Beth-Uhlenbeck density (1/pi) d(delta_0)/dE for an s-wave resonance.
inline double rho_bu(const ResonanceSpec& spec, double energy) {
  detail::check_energy(energy);
  if (energy == 0.0) return 0.0;
  return detail::resonant_kernel(spec.k_r.value(), energy).imag() / std::numbers::pi;
}

/// Term that the isolated-resonance density adds to the Beth-Uhlenbeck form.
inline double rho_correction(const ResonanceSpec& spec, double energy) {
  detail::check_energy(energy);
  if (energy == 0.0) return 0.0;
  const complex k = spec.k_r.value();
  const complex weight(0.0, k.imag() / k.real());
  return (weight * detail::resonant_kernel(k, energy)).imag() / std::numbers::pi;
}

}  // namespace qdecay

#endif  // QDECAY_DENSITY_HPP
