#ifndef QDECAY_SPECFUN_HPP
#define QDECAY_SPECFUN_HPP

// Special-function kernel: upper incomplete gamma at half-integer order for
// complex argument, and the two real branches of the Lambert W function.

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

#include "qdecay/errors.hpp"

namespace qdecay {

using complex = std::complex<double>;

namespace specfun {

enum class LambertBranch { Principal, MinusOne };

/// How to treat an argument lying exactly on the negative real axis.
enum class BranchCut {
  Reject,  ///< domain error
  Upper,   ///< evaluate at arg z = +pi
};

namespace detail {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kSqrtPi = 1.7724538509055160273;
constexpr int kMaxContinuedFraction = 20000;
// Above this modulus the asymptotic series reaches full precision near the
// negative real axis, where the continued fractions converge slowly.
constexpr double kAsymptoticRadius = 40.0;

inline bool is_supported_order(double alpha) {
  return alpha == -0.5 || alpha == 0.5 || alpha == 1.5;
}

inline double complete_gamma(double alpha) {
  if (alpha == 0.5) return kSqrtPi;
  if (alpha == 1.5) return 0.5 * kSqrtPi;
  return -2.0 * kSqrtPi;
}

inline complex principal_power(complex z, double alpha) {
  const complex r = std::sqrt(z);
  if (alpha == 0.5) return r;
  if (alpha == 1.5) return z * r;
  return 1.0 / r;
}

inline complex checked_argument(complex z, BranchCut cut) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw qdecay::domain_error("incomplete gamma: non-finite argument");
  if (z.imag() == 0.0 && z.real() < 0.0) {
    if (cut == BranchCut::Reject)
      throw qdecay::domain_error(
          "incomplete gamma: argument on the negative real axis, no cut side selected");
    return {z.real(), 0.0};
  }
  return z;
}

// Modified Lentz evaluation of b0 + a1/(b1 + a2/(b2 + ...)).
template <class Coefficients>
complex lentz(complex b0, Coefficients next, const char* name) {
  constexpr double tiny = 1e-300;
  complex f = b0;
  if (std::abs(f) < tiny) f = tiny;
  complex c = f;
  complex d = 0.0;
  for (int n = 1; n <= kMaxContinuedFraction; ++n) {
    const auto [an, bn] = next(n);
    d = bn + an * d;
    if (std::abs(d) < tiny) d = tiny;
    c = bn + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const complex delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < kEps) return f;
  }
  throw qdecay::convergence_error(std::string(name) + ": continued fraction did not converge",
                                  std::abs(f));
}

// e^z Gamma(a, z) from Gamma(a) - sum (-1)^n z^(a+n) / (n! (a+n)).
inline complex gamma_series_scaled(double alpha, complex z) {
  complex term = 1.0;
  complex sum = 1.0 / alpha;
  const double modulus = std::abs(z);
  for (int n = 1; n < 2000; ++n) {
    term *= -z / static_cast<double>(n);
    const complex contribution = term / (alpha + n);
    sum += contribution;
    if (n > modulus && std::abs(contribution) <= 0.25 * kEps * std::abs(sum)) break;
  }
  return std::exp(z) * (complete_gamma(alpha) - principal_power(z, alpha) * sum);
}

// Legendre continued fraction: Gamma(a,z) = e^-z z^a / (z+1-a - 1(1-a)/(z+3-a - ...)).
inline complex gamma_cf_scaled(double alpha, complex z) {
  const complex f = lentz(
      z + 1.0 - alpha,
      [&](int n) {
        const double nd = n;
        return std::pair<complex, complex>{-nd * (nd - alpha), z + 2.0 * nd + 1.0 - alpha};
      },
      "incomplete gamma");
  return principal_power(z, alpha) / f;
}

// e^z Gamma(a,z) ~ z^(a-1) sum_n (a-1)(a-2)...(a-n) / z^n, truncated at the smallest term.
inline complex gamma_asymptotic_scaled(double alpha, complex z) {
  complex term = 1.0;
  complex sum = 1.0;
  double previous = 1.0;
  for (int n = 1; n < 500; ++n) {
    term *= (alpha - n) / z;
    const double size = std::abs(term);
    if (size > previous) break;
    sum += term;
    previous = size;
    if (size <= 0.25 * kEps * std::abs(sum)) break;
  }
  return principal_power(z, alpha) / z * sum;
}

// e^(u^2) erfc(u) for Re u >= 0, using the same three regimes as the gamma kernel.
inline complex erfc_scaled(complex u) {
  const complex u2 = u * u;
  if (u.real() >= 1.0) {
    const complex k = lentz(
        u, [&](int n) { return std::pair<complex, complex>{0.5 * n, u}; }, "erfc");
    return 1.0 / (kSqrtPi * k);
  }
  if (std::abs(u2) >= kAsymptoticRadius) {
    const complex inv = 1.0 / (2.0 * u2);
    complex term = 1.0;
    complex sum = 1.0;
    double previous = 1.0;
    for (int n = 1; n < 500; ++n) {
      term *= -(2.0 * n - 1.0) * inv;
      const double size = std::abs(term);
      if (size > previous) break;
      sum += term;
      previous = size;
      if (size <= 0.25 * kEps * std::abs(sum)) break;
    }
    return sum / (u * kSqrtPi);
  }
  // erf(u) = 2/sqrt(pi) sum (-1)^n u^(2n+1) / (n! (2n+1))
  complex term = u;
  complex sum = u;
  const double modulus = std::abs(u2);
  for (int n = 1; n < 2000; ++n) {
    term *= -u2 / static_cast<double>(n);
    const complex contribution = term / (2.0 * n + 1.0);
    sum += contribution;
    if (n > modulus && std::abs(contribution) <= 0.25 * kEps * std::abs(sum)) break;
  }
  return std::exp(u2) * (1.0 - 2.0 / kSqrtPi * sum);
}

inline double lambert_residual_step(double w, double x) {
  // Halley step for w e^w - x.
  const double ew = std::exp(w);
  const double f = w * ew - x;
  const double wp1 = w + 1.0;
  const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
  return f / denom;
}

// 1 + e x computed without cancellation near x = -1/e.
inline double branch_point_offset(double x) {
  constexpr double inv_e_hi = 0.36787944117144233;
  constexpr double inv_e_lo = -1.2428753672788363e-17;
  return std::numbers::e * ((x + inv_e_hi) + inv_e_lo);
}

}  // namespace detail

/// Scaled upper incomplete gamma e^z Gamma(alpha, z) on the principal branch,
/// for alpha in {-1/2, 1/2, 3/2}.
///
/// The scaled form stays representable where e^-z or Gamma(alpha, z) alone
/// would overflow or underflow, which is the regime of large decay times.
/// At z = 0 the value is Gamma(alpha); for alpha = -1/2 this is the finite
/// part -2 sqrt(pi) of the divergent integral.
inline complex upper_incomplete_gamma_scaled(double alpha, complex z,
                                             BranchCut cut = BranchCut::Reject) {
  if (!detail::is_supported_order(alpha))
    throw qdecay::domain_error("incomplete gamma: order must be -1/2, 1/2 or 3/2");
  z = detail::checked_argument(z, cut);
  if (z == 0.0) return detail::complete_gamma(alpha);

  const complex root = std::sqrt(z);
  if (alpha == 0.5) return detail::kSqrtPi * detail::erfc_scaled(root);
  if (root.real() >= 1.0) return detail::gamma_cf_scaled(alpha, z);
  if (std::abs(z) < detail::kAsymptoticRadius) return detail::gamma_series_scaled(alpha, z);
  return detail::gamma_asymptotic_scaled(alpha, z);
}

/// Upper incomplete gamma Gamma(alpha, z) = int_z^inf t^(alpha-1) e^-t dt.
///
/// Throws overflow_error when e^-z is not representable; values below the
/// double range underflow to zero (use the scaled form there).
inline complex upper_incomplete_gamma(double alpha, complex z,
                                      BranchCut cut = BranchCut::Reject) {
  const complex scaled = upper_incomplete_gamma_scaled(alpha, z, cut);
  if (-z.real() > std::log(std::numeric_limits<double>::max()))
    throw qdecay::overflow_error("incomplete gamma: e^-z overflows for Re z = " +
                                 std::to_string(z.real()));
  const complex value = std::exp(-z) * scaled;
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
    throw qdecay::overflow_error("incomplete gamma: result overflows");
  return value;
}

/// Real branches of the Lambert W function, w e^w = x.
///
/// Principal is defined on [-1/e, inf) and returns w >= -1; MinusOne on
/// [-1/e, 0) and returns w <= -1.
inline double lambert_w(LambertBranch branch, double x) {
  if (std::isnan(x)) throw qdecay::domain_error("lambert_w: NaN argument");
  const double offset = detail::branch_point_offset(x);
  // the double nearest -1/e lies just below it; accept a few ulps of slack
  if (offset < 0.0 && offset > -1e-15) return -1.0;
  if (offset < 0.0) throw qdecay::domain_error("lambert_w: argument below -1/e");
  if (branch == LambertBranch::MinusOne && x >= 0.0)
    throw qdecay::domain_error("lambert_w: W_-1 requires x < 0");
  if (branch == LambertBranch::Principal && x == 0.0) return 0.0;
  if (offset == 0.0) return -1.0;
  if (std::isinf(x)) return x;

  double w;
  if (offset < 0.3) {
    // series about the branch point in p = +-sqrt(2(1 + e x))
    double p = std::sqrt(2.0 * offset);
    if (branch == LambertBranch::MinusOne) p = -p;
    w = -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0)));
  } else if (branch == LambertBranch::MinusOne) {
    const double l1 = std::log(-x);
    const double l2 = std::log(-l1);
    w = l1 - l2 + l2 / l1;
  } else if (x < 3.0) {
    w = std::log1p(x) * (1.0 - std::log1p(std::log1p(x)) / (2.0 + std::log1p(x)));
  } else {
    const double l1 = std::log(x);
    const double l2 = std::log(l1);
    w = l1 - l2 + l2 / l1;
  }

  for (int i = 0; i < 64; ++i) {
    if (w == -1.0) break;
    const double step = detail::lambert_residual_step(w, x);
    double next = w - step;
    if (branch == LambertBranch::MinusOne && next > -1.0) next = 0.5 * (w - 1.0);
    if (branch == LambertBranch::Principal && next < -1.0) next = 0.5 * (w - 1.0);
    const bool done = std::abs(next - w) <= 4.0 * detail::kEps * std::abs(next);
    w = next;
    if (done) break;
  }
  return w;
}

}  // namespace specfun
}  // namespace qdecay

#endif  // QDECAY_SPECFUN_HPP
