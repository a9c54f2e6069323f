#ifndef QDECAY_CRITICAL_HPP
#define QDECAY_CRITICAL_HPP

// Critical time tau_c = Gamma_r t_c at which the exponential survival
// probability e^{-tau} meets the power law C tau^{-3}.

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "qdecay/errors.hpp"
#include "qdecay/poles.hpp"
#include "qdecay/specfun.hpp"

namespace qdecay {

enum class CrossingCase { NoCrossing, Tangent, TwoRoots };

inline const char* to_string(CrossingCase c) {
  switch (c) {
    case CrossingCase::NoCrossing: return "no-crossing";
    case CrossingCase::Tangent: return "tangent";
    case CrossingCase::TwoRoots: return "two-roots";
  }
  return "?";
}

/// 27 e^{-3}, the maximum of tau^3 e^{-tau}.
inline const double kTangentConstant = 27.0 * std::exp(-3.0);
/// Fit of the transition time against R = eps/Gamma: A ln R + B.
constexpr double kFitSlope = 5.41;
constexpr double kFitOffset = 12.25;
/// Below this R = eps/Gamma the decay has been reported non-exponential at all times.
constexpr double kTransitionRatioFloor = 0.3;

struct CrossingRoots {
  CrossingCase crossing;
  std::optional<double> tau_c1;
  std::optional<double> tau_c2;
};

struct CriticalTimeReport {
  double C;
  CrossingCase crossing;
  std::optional<double> tau_c1;
  std::optional<double> tau_c2;
  double tau_lambert;
  std::optional<double> tau_bw;  ///< empty when the Breit-Wigner equation has no real root
  double tau_fit;
  double ratio_R;                ///< eps_r / Gamma_r
  bool below_ratio_floor;        ///< R < 0.3
};

/// C = (2/pi) (x_r / sqrt(1 + x_r^2))^5.
inline double constant_c(const ResonanceSpec& spec) {
  const double x = spec.x_r;
  return 2.0 / std::numbers::pi * std::pow(x / std::sqrt(1.0 + x * x), 5);
}

/// C from the pole: (Gamma^3 / 4pi) |Im(1/k_r^2) / k_r|^2.
inline double constant_c_from_pole(const ResonanceSpec& spec) {
  const complex k = spec.k_r.value();
  const double im = (1.0 / (k * k)).imag();
  const double g = spec.gamma_r;
  return g * g * g / (4.0 * std::numbers::pi) * (im * im / std::norm(k));
}

/// ln C, finite even where C itself underflows.
inline double log_constant_c(double x_r) {
  return std::log(2.0 / std::numbers::pi) + 5.0 * std::log(x_r) - 2.5 * std::log1p(x_r * x_r);
}

namespace detail {

// h(tau) = ln(tau^3 e^{-tau}) - ln C has the sign of g(tau) = tau^3 e^{-tau} - C.
inline double log_crossing(double tau, double log_c) { return 3.0 * std::log(tau) - tau - log_c; }

inline double bisect_crossing(double lo, double hi, double log_c) {
  const bool rising = log_crossing(lo, log_c) < 0.0;
  for (int i = 0; i < 400; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi || hi - lo <= 1e-15 * mid) break;
    if ((log_crossing(mid, log_c) < 0.0) == rising) lo = mid;
    else hi = mid;
  }
  double tau = 0.5 * (lo + hi);
  for (int i = 0; i < 3; ++i) {
    const double slope = 3.0 / tau - 1.0;
    if (slope == 0.0) break;
    const double next = tau - log_crossing(tau, log_c) / slope;
    if (!(next > lo && next < hi)) break;
    tau = next;
  }
  return tau;
}

inline CrossingRoots crossing_roots_log(double log_c) {
  const double log_tangent = std::log(kTangentConstant);
  const double gap = log_tangent - log_c;  // ln(g(3) + C) - ln C
  if (std::abs(gap) <= 8.0 * std::numeric_limits<double>::epsilon())
    return {CrossingCase::Tangent, 3.0, 3.0};
  if (gap < 0.0) return {CrossingCase::NoCrossing, std::nullopt, std::nullopt};

  const double early = bisect_crossing(std::exp(log_c / 3.0 - 1.0), 3.0, log_c);

  const double l1 = -(log_c / 3.0 - std::log(3.0));
  double hi = 3.0 * (l1 + std::log(l1) + 2.0);
  const double limit = 1e4 * 3.0 * l1;
  while (log_crossing(hi, log_c) >= 0.0) {
    hi *= 2.0;
    if (hi > limit)
      throw std::runtime_error("critical_roots: no sign change below tau = " +
                               std::to_string(limit) + "; C is corrupted");
  }
  const double late = bisect_crossing(3.0, hi, log_c);
  return {CrossingCase::TwoRoots, early, late};
}

}  // namespace detail

/// Roots of tau^3 e^{-tau} = C for an arbitrary constant C > 0.
inline CrossingRoots crossing_roots(double c) {
  if (!std::isfinite(c) || !(c > 0.0)) throw qdecay::domain_error("crossing constant must be > 0");
  return detail::crossing_roots_log(std::log(c));
}

/// tau_c = -3 W_{-1}(-C^{1/3}/3), the late crossing.
inline double critical_time_lambert(const ResonanceSpec& spec) {
  const double arg = -std::exp(log_constant_c(spec.x_r) / 3.0) / 3.0;
  return -3.0 * specfun::lambert_w(specfun::LambertBranch::MinusOne, arg);
}

/// -3 W_0(-C^{1/3}/3), the early crossing discarded as a transition time.
inline double early_crossing_lambert(const ResonanceSpec& spec) {
  const double arg = -std::exp(log_constant_c(spec.x_r) / 3.0) / 3.0;
  return -3.0 * specfun::lambert_w(specfun::LambertBranch::Principal, arg);
}

/// Breit-Wigner crossing without threshold factor, e^{-tau} = (4 x_r^4/pi^2) tau^{-2}:
/// tau = -2 W_{-1}(-x_r^2/pi).
inline double critical_time_bw(const ResonanceSpec& spec) {
  const double arg = -spec.x_r * spec.x_r / std::numbers::pi;
  if (arg < -std::exp(-1.0))
    throw qdecay::domain_error("critical_time_bw: x_r = " + std::to_string(spec.x_r) +
                               " exceeds sqrt(pi/e); the Breit-Wigner crossing has no real root");
  return -2.0 * specfun::lambert_w(specfun::LambertBranch::MinusOne, arg);
}

/// 5.41 ln(eps/Gamma) + 12.25; negative for very broad resonances.
inline double critical_time_fit(const ResonanceSpec& spec) {
  return kFitSlope * std::log(spec.omega_r) + kFitOffset;
}

inline CriticalTimeReport critical_roots(const ResonanceSpec& spec) {
  const CrossingRoots roots = detail::crossing_roots_log(log_constant_c(spec.x_r));
  CriticalTimeReport report{constant_c(spec),
                            roots.crossing,
                            roots.tau_c1,
                            roots.tau_c2,
                            critical_time_lambert(spec),
                            std::nullopt,
                            critical_time_fit(spec),
                            spec.omega_r,
                            spec.omega_r < kTransitionRatioFloor};
  if (spec.x_r * spec.x_r / std::numbers::pi <= std::exp(-1.0))
    report.tau_bw = critical_time_bw(spec);
  return report;
}

}  // namespace qdecay

#endif  // QDECAY_CRITICAL_HPP
