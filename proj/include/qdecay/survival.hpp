#ifndef QDECAY_SURVIVAL_HPP
#define QDECAY_SURVIVAL_HPP

// Survival amplitude A(t) = int_0^inf rho(E) e^{-iEt} dE of a state with a
// pole-expansion density, in closed form through incomplete gamma functions,
// its exponential and power-law parts, and an independent quadrature oracle.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qdecay/density.hpp"
#include "qdecay/errors.hpp"
#include "qdecay/grid.hpp"
#include "qdecay/poles.hpp"
#include "qdecay/specfun.hpp"

namespace qdecay {

namespace detail {

constexpr double kSqrtPi = specfun::detail::kSqrtPi;
// e^{i pi/4} / sqrt(4 pi)
inline const complex kPowerLawPhase =
    std::polar(1.0 / std::sqrt(4.0 * std::numbers::pi), 0.25 * std::numbers::pi);

inline void check_time(double t) {
  if (!std::isfinite(t) || t < 0.0) throw qdecay::domain_error("time must be finite and >= 0");
}

// e^{-ik^2 t} Gamma(1/2, -ik^2 t), evaluated as one scaled quantity.
inline complex fused_gamma(complex k, double t) {
  const complex z = complex(0.0, -t) * (k * k);
  return specfun::upper_incomplete_gamma_scaled(0.5, z);
}

inline complex power_law_prefactor(double im_sum) { return -kPowerLawPhase * im_sum; }

}  // namespace detail

/// Partial amplitude of pole p; the full amplitude is the sum over poles.
inline complex amplitude_partial(const PoleExpansion& expansion, std::size_t p, double t) {
  detail::check_time(t);
  const complex k = expansion.poles.at(p).value();
  const complex g = expansion.coefficients.at(p);
  const complex k2 = k * k;
  try {
    const complex bracket =
        g * detail::fused_gamma(k, t) - std::conj(g) * detail::fused_gamma(std::conj(k), t);
    return g * std::exp(complex(0.0, -t) * k2) - bracket / (2.0 * detail::kSqrtPi);
  } catch (const qdecay::convergence_error& e) {
    throw qdecay::convergence_error(std::string(e.what()) + " at t = " + std::to_string(t),
                                    e.achieved());
  }
}

/// Closed-form survival amplitude of a validated pole expansion at time t.
inline complex amplitude_exact(const PoleExpansion& expansion, double t) {
  require_valid(expansion);
  complex sum = 0.0;
  for (std::size_t p = 0; p < expansion.size(); ++p) sum += amplitude_partial(expansion, p, t);
  return sum;
}

inline complex amplitude_exact(const ResonanceSpec& spec, double t) {
  return amplitude_exact(single_pole(spec), t);
}

/// Exponential part (k_r / Re k_r) e^{-i k_r^2 t} of an isolated resonance.
inline complex amplitude_exponential(const ResonanceSpec& spec, double t) {
  detail::check_time(t);
  return spec.gamma_coef * std::exp(complex(-0.5 * spec.gamma_r * t, -spec.epsilon_r * t));
}

/// Incomplete-gamma (power-law) part of an isolated resonance's amplitude.
inline complex amplitude_powerlaw(const ResonanceSpec& spec, double t) {
  detail::check_time(t);
  const complex k = spec.k_r.value();
  const complex bracket = k * detail::fused_gamma(k, t) - std::conj(k) * detail::fused_gamma(std::conj(k), t);
  return -bracket / (2.0 * detail::kSqrtPi * k.real());
}

/// Coefficient of t^{-3/2} from the large-argument expansion of Gamma(1/2, z).
inline complex power_law_coefficient(const PoleExpansion& expansion) {
  complex sum = 0.0;
  for (std::size_t p = 0; p < expansion.size(); ++p) {
    const complex k = expansion.poles[p].value();
    sum += expansion.coefficients[p] / (k * k * k);
  }
  return detail::power_law_prefactor(sum.imag());
}

/// Same coefficient from the steepest-descent evaluation, which sums the
/// fourth-quadrant poles together with their third-quadrant mirrors -k_p*
/// (weights gamma_p*): sum_all = 2i Im(sum gamma_p / k_p^3).
inline complex steepest_descent_coefficient(const PoleExpansion& expansion) {
  complex mirrored = 0.0;
  for (std::size_t p = 0; p < expansion.size(); ++p) {
    const complex k = expansion.poles[p].value();
    const complex g = expansion.coefficients[p];
    const complex mk = -std::conj(k);
    mirrored += g / (k * k * k) + std::conj(g) / (mk * mk * mk);
  }
  return detail::power_law_prefactor(0.5 * mirrored.imag());
}

/// Leading large-time term -(e^{i pi/4}/sqrt(4 pi)) Im(sum gamma_p/k_p^3) t^{-3/2}.
inline complex asymptotic_amplitude(const PoleExpansion& expansion, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw qdecay::domain_error("asymptotic amplitude needs t > 0");
  return power_law_coefficient(expansion) * std::pow(t, -1.5);
}

/// Isolated-resonance form -(e^{i pi/4}/(sqrt(4 pi) Re k_r)) Im(1/k_r^2) t^{-3/2}.
inline complex asymptotic_amplitude(const ResonanceSpec& spec, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw qdecay::domain_error("asymptotic amplitude needs t > 0");
  const complex k = spec.k_r.value();
  return -detail::kPowerLawPhase * ((1.0 / (k * k)).imag() / k.real()) * std::pow(t, -1.5);
}

// ---------------------------------------------------------------------------
// Quadrature oracle.

struct OracleResult {
  complex value;
  double error_estimate;
  double e_cut;
};

namespace detail {

// j-th energy derivative (j <= 2) of rho at E > 0.
inline double rho_derivative(const PoleExpansion& expansion, double energy, int order) {
  const double root = std::sqrt(energy);
  complex sum = 0.0;
  for (std::size_t p = 0; p < expansion.size(); ++p) {
    const complex k = expansion.poles[p].value();
    const complex q = 1.0 / (k * k - energy);
    complex h;
    if (order == 0) {
      h = root * q;
    } else if (order == 1) {
      h = 0.5 / root * q + root * q * q;
    } else {
      h = -0.25 / (energy * root) * q + q * q / root + 2.0 * root * q * q * q;
    }
    sum += expansion.coefficients[p] / k * h;
  }
  return sum.imag() / std::numbers::pi;
}

// int_{E_cut}^inf rho(E) dE from rho = -(1/pi) sum_n Im(sum_p gamma_p k_p^{2n-1}) E^{-n-1/2},
// skipping n = 0, whose coefficient vanishes for a valid expansion.
inline std::pair<double, double> static_tail(const PoleExpansion& expansion, double e_cut) {
  double total = 0.0;
  double last = 0.0;
  for (int n = 1; n <= 12; ++n) {
    complex coef = 0.0;
    for (std::size_t p = 0; p < expansion.size(); ++p) {
      const complex k = expansion.poles[p].value();
      coef += expansion.coefficients[p] * std::pow(k, 2 * n - 1);
    }
    last = -coef.imag() / std::numbers::pi * std::pow(e_cut, 0.5 - n) / (n - 0.5);
    total += last;
    if (std::abs(last) < 1e-18) break;
  }
  return {total, std::abs(last)};
}

inline std::vector<double> oracle_breakpoints(const PoleExpansion& expansion, double e_cut,
                                              double max_width) {
  std::set<double> marks{0.0, e_cut};
  for (const MomentumPole& pole : expansion.poles) {
    const complex e = pole.energy();
    const double half_width = -e.imag();
    for (double j : {0.0, 1.0, 4.0, 16.0, 64.0}) {
      for (double sign : {-1.0, 1.0}) {
        const double mark = e.real() + sign * j * half_width;
        if (mark > 0.0 && mark < e_cut) marks.insert(mark);
      }
    }
  }
  // geometric growth beyond the resonances, then cap the width
  std::vector<double> coarse(marks.begin(), marks.end());
  std::vector<double> refined{0.0};
  for (std::size_t i = 1; i < coarse.size(); ++i) {
    double a = refined.back();
    const double b = coarse[i];
    while (a > 0.0 && b > 2.0 * a) {
      a *= 2.0;
      refined.push_back(a);
    }
    refined.push_back(b);
  }
  std::vector<double> out{0.0};
  for (std::size_t i = 1; i < refined.size(); ++i) {
    const double a = out.back();
    const double b = refined[i];
    const auto pieces = static_cast<std::size_t>(std::ceil((b - a) / max_width));
    for (std::size_t j = 1; j < pieces; ++j) out.push_back(a + (b - a) * j / pieces);
    out.push_back(b);
  }
  return out;
}

}  // namespace detail

/// Numerical Fourier integral of rho(E) e^{-iEt}.
///
/// The range [0, E_cut] is split into panels no wider than pi/(4t) in E
/// (with extra breakpoints around every resonance) and integrated in
/// k = sqrt(E) by adaptive Gauss-Kronrod. The tail beyond E_cut is added
/// analytically: by repeated integration by parts for t > 0, from the
/// large-E expansion of rho for t = 0. Pass e_cut <= 0 to pick E_cut
/// automatically so that the tail remainder is below the tolerance.
inline OracleResult amplitude_oracle(const PoleExpansion& expansion, double t,
                                     double tolerance = 1e-8, double e_cut = 0.0) {
  detail::check_time(t);
  require_valid(expansion);
  double scale = 0.0;
  double cut_floor = 0.0;
  for (const MomentumPole& pole : expansion.poles) {
    const complex e = pole.energy();
    scale = std::max(scale, std::abs(e));
    const double x = -e.imag() / e.real();
    cut_floor = std::max(cut_floor, e.real() * std::max(1e4, 1e3 / x));
  }

  complex tail = 0.0;
  double tail_error = 0.0;
  if (t == 0.0) {
    if (e_cut <= 0.0) e_cut = cut_floor;
    const auto [value, error] = detail::static_tail(expansion, e_cut);
    tail = value;
    tail_error = error;
  } else {
    const bool automatic = e_cut <= 0.0;
    if (automatic) e_cut = 100.0 * scale;
    for (;;) {
      tail_error = std::abs(detail::rho_derivative(expansion, e_cut, 2)) / (t * t * t);
      if (!automatic || tail_error <= 0.1 * tolerance || e_cut > 1e6 * scale) break;
      e_cut *= 2.0;
    }
    if (tail_error > tolerance)
      throw qdecay::convergence_error("amplitude oracle: tail remainder " +
                                          std::to_string(tail_error) +
                                          " exceeds tolerance at t = " + std::to_string(t),
                                      tail_error);
    const complex it(0.0, t);
    tail = std::exp(complex(0.0, -e_cut * t)) *
           (detail::rho_derivative(expansion, e_cut, 0) / it +
            detail::rho_derivative(expansion, e_cut, 1) / (it * it) +
            detail::rho_derivative(expansion, e_cut, 2) / (it * it * it));
  }

  const double max_width =
      t > 0.0 ? std::numbers::pi / (4.0 * t) : std::numeric_limits<double>::infinity();
  const std::vector<double> marks = detail::oracle_breakpoints(expansion, e_cut, max_width);
  auto integrand = [&](double k) -> complex {
    const double energy = k * k;
    if (energy == 0.0) return 0.0;
    return 2.0 * k * rho(expansion, energy) * std::exp(complex(0.0, -energy * t));
  };

  complex sum = 0.0;
  double error = tail_error;
  for (std::size_t i = 1; i < marks.size(); ++i) {
    double panel_error = 0.0;
    sum += boost::math::quadrature::gauss_kronrod<double, 21>::integrate(
        integrand, std::sqrt(marks[i - 1]), std::sqrt(marks[i]), 12, 1e-10, &panel_error);
    error += panel_error;
  }
  const OracleResult result{sum + tail, error, e_cut};
  if (!(result.error_estimate <= tolerance))
    throw qdecay::convergence_error("amplitude oracle: error estimate " +
                                        std::to_string(result.error_estimate) +
                                        " exceeds tolerance at t = " + std::to_string(t),
                                    result.error_estimate);
  return result;
}

// ---------------------------------------------------------------------------
// Sampled curves.

struct AmplitudeParts {
  complex exponential;
  complex power_law;
};

struct SurvivalSample {
  double tau;  ///< Gamma_r t for an isolated resonance, raw t for an expansion
  complex amplitude;
  double probability;
  std::optional<AmplitudeParts> parts;
};

struct SurvivalSeries {
  std::vector<SurvivalSample> samples;
  std::variant<ResonanceSpec, PoleExpansion> source;
  Grid grid;
};

/// Samples an isolated resonance on a grid in tau = Gamma_r t, with parts.
inline SurvivalSeries survival_series(const ResonanceSpec& spec, const Grid& grid) {
  const std::vector<double> taus = grid_points(grid);
  SurvivalSeries series{{}, spec, grid};
  series.samples.reserve(taus.size());
  for (std::size_t i = 0; i < taus.size(); ++i) {
    try {
      const double t = taus[i] / spec.gamma_r;
      const complex a = amplitude_exact(spec, t);
      AmplitudeParts parts{amplitude_exponential(spec, t), amplitude_powerlaw(spec, t)};
      series.samples.push_back({taus[i], a, std::norm(a), parts});
    } catch (const std::exception& e) {
      throw qdecay::grid_error(i, e.what());
    }
  }
  return series;
}

/// Samples a multi-pole expansion on a grid in raw time t.
inline SurvivalSeries survival_series(const PoleExpansion& expansion, const Grid& grid) {
  require_valid(expansion);
  const std::vector<double> times = grid_points(grid);
  SurvivalSeries series{{}, expansion, grid};
  series.samples.reserve(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    try {
      const complex a = amplitude_exact(expansion, times[i]);
      series.samples.push_back({times[i], a, std::norm(a), std::nullopt});
    } catch (const std::exception& e) {
      throw qdecay::grid_error(i, e.what());
    }
  }
  return series;
}

}  // namespace qdecay

#endif  // QDECAY_SURVIVAL_HPP
