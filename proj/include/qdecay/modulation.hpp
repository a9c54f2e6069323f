#ifndef QDECAY_MODULATION_HPP
#define QDECAY_MODULATION_HPP

// Interference between the exponential and power-law parts of an isolated
// resonance: P = I (P_e + P_p), with I oscillating about 1 at frequency
// omega_r inside an envelope D m(tau) that peaks at the critical time.

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "qdecay/critical.hpp"
#include "qdecay/errors.hpp"
#include "qdecay/poles.hpp"
#include "qdecay/survival.hpp"

namespace qdecay {

/// Above this x_r the leading-power-law modulation is not expected to hold.
constexpr double kModulationValidityLimit = 0.3;

struct ModulationSample {
  double tau;
  double I_exact;
  double I_approx;
  double m;
  double envelope_plus;
  double envelope_minus;
};

struct MSeries {
  double m2;
  double m3;
  double m4;
};

namespace detail {

inline void check_tau(double tau) {
  if (!std::isfinite(tau) || !(tau > 0.0)) throw qdecay::domain_error("tau must be finite and > 0");
}

inline double modulation_ratio(complex exponential, complex power_law) {
  const double denominator = std::norm(exponential) + std::norm(power_law);
  if (!(denominator > 0.0))
    throw qdecay::degenerate_error("modulating function: |A_e|^2 + |A_p|^2 underflows to 0");
  return 1.0 + 2.0 * (exponential * std::conj(power_law)).real() / denominator;
}

// omega_r tau + pi/4 - arg k_r
inline double modulation_phase(const ResonanceSpec& spec, double tau) {
  return spec.omega_r * tau + 0.25 * std::numbers::pi - std::arg(spec.k_r.value());
}

}  // namespace detail

/// I(t) = 1 + 2 Re(A_e A_p*) / (|A_e|^2 + |A_p|^2) from the full amplitude parts.
inline double modulating_exact(const ResonanceSpec& spec, double t) {
  if (!std::isfinite(t) || !(t > 0.0)) throw qdecay::domain_error("modulating_exact needs t > 0");
  return detail::modulation_ratio(amplitude_exponential(spec, t), amplitude_powerlaw(spec, t));
}

/// D = -(2/|k_r|) sqrt(Gamma_r^3 / 4pi) Im(1/k_r^2).
///
/// Im(1/k_r^2) is positive for a fourth-quadrant pole, so D = -2 sqrt(C) < 0.
inline double modulation_d(const ResonanceSpec& spec) {
  const complex k = spec.k_r.value();
  const double g = spec.gamma_r;
  return -2.0 / std::abs(k) * std::sqrt(g * g * g / (4.0 * std::numbers::pi)) *
         (1.0 / (k * k)).imag();
}

/// m(tau) = e^{-tau/2} tau^{-3/2} / (e^{-tau} + C tau^{-3}), evaluated as
/// 1 / (2 sqrt(C) cosh L) with L = -tau/2 + (3/2) ln tau - ln sqrt(C).
inline double envelope_m(const ResonanceSpec& spec, double tau) {
  detail::check_tau(tau);
  const double log_c = log_constant_c(spec.x_r);
  const double l = std::abs(-0.5 * tau + 1.5 * std::log(tau) - 0.5 * log_c);
  const double log_cosh = l + std::log1p(std::exp(-2.0 * l)) - std::numbers::ln2;
  return std::exp(-std::numbers::ln2 - 0.5 * log_c - log_cosh);
}

/// Leading-power-law modulating function 1 + D m(tau) cos(omega_r tau + pi/4 - arg k_r).
inline double modulating_approx(const ResonanceSpec& spec, double tau) {
  return 1.0 + modulation_d(spec) * envelope_m(spec, tau) *
                   std::cos(detail::modulation_phase(spec, tau));
}

/// False where modulating_approx and envelopes are not expected to be reliable:
/// x_r > 0.3 or tau < 1.
inline bool modulation_approx_reliable(const ResonanceSpec& spec, double tau) {
  return spec.x_r <= kModulationValidityLimit && tau >= 1.0;
}

/// Coefficients of 1/(2 sqrt(C) m) = 1 + m2 D^2 + m3 D^3 + m4 D^4 + ..., D = tau - tau_c.
inline MSeries m_series_coefficients(double tau_c) {
  const double u = 1.0 / tau_c;
  const double a = 1.0 - 3.0 * u;
  return {a * a / 8.0, (36.0 * u * u - 108.0 * u * u * u) / 96.0,
          (1.0 - 12.0 * u + 54.0 * u * u - 204.0 * u * u * u + 477.0 * u * u * u * u) / 384.0};
}

inline MSeries m_series_coefficients(const ResonanceSpec& spec) {
  return m_series_coefficients(critical_time_lambert(spec));
}

namespace detail {

inline double series_denominator(const ResonanceSpec& spec, double tau, int order) {
  if (order < 2 || order > 4)
    throw qdecay::domain_error("series order must be 2, 3 or 4, got " + std::to_string(order));
  const double tau_c = critical_time_lambert(spec);
  const MSeries s = m_series_coefficients(tau_c);
  const double delta = tau - tau_c;
  double sum = 1.0 + s.m2 * delta * delta;
  if (order >= 3) sum += s.m3 * delta * delta * delta;
  if (order >= 4) sum += s.m4 * delta * delta * delta * delta;
  return sum;
}

}  // namespace detail

/// Truncated series estimate of m(tau) about tau_c.
inline double m_series_envelope(const ResonanceSpec& spec, double tau, int order = 4) {
  detail::check_tau(tau);
  const double sqrt_c = std::exp(0.5 * log_constant_c(spec.x_r));
  return 1.0 / (2.0 * sqrt_c * detail::series_denominator(spec, tau, order));
}

/// 1 + (D / 2 sqrt(C)) cos(omega_r tau + pi/4 - arg k_r) / (1 + m2 D^2 + m3 D^3 + m4 D^4).
inline double modulating_series(const ResonanceSpec& spec, double tau, int order = 4) {
  detail::check_tau(tau);
  const double scale = modulation_d(spec) / (2.0 * std::sqrt(constant_c_from_pole(spec)));
  return 1.0 + scale * std::cos(detail::modulation_phase(spec, tau)) /
                   detail::series_denominator(spec, tau, order);
}

struct EnvelopePair {
  double P_plus;
  double P_minus;
};

/// P_pm = (1 pm |D| m(tau)) (P_e + P_p) at tau = Gamma_r t.
inline EnvelopePair envelopes(const ResonanceSpec& spec, double tau) {
  detail::check_tau(tau);
  const double t = tau / spec.gamma_r;
  const double base =
      std::norm(amplitude_exponential(spec, t)) + std::norm(amplitude_powerlaw(spec, t));
  const double swing = std::abs(modulation_d(spec)) * envelope_m(spec, tau);
  return {(1.0 + swing) * base, (1.0 - swing) * base};
}

inline ModulationSample modulation_sample(const ResonanceSpec& spec, double tau) {
  detail::check_tau(tau);
  const EnvelopePair pair = envelopes(spec, tau);
  return {tau,
          modulating_exact(spec, tau / spec.gamma_r),
          modulating_approx(spec, tau),
          envelope_m(spec, tau),
          pair.P_plus,
          pair.P_minus};
}

}  // namespace qdecay

#endif  // QDECAY_MODULATION_HPP
