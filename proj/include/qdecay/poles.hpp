#ifndef QDECAY_POLES_HPP
#define QDECAY_POLES_HPP

// Resonance and pole-expansion data model. Units: 2m = hbar = 1, so k^2 = E.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "qdecay/errors.hpp"
#include "qdecay/specfun.hpp"

namespace qdecay {

/// Resonant S-matrix pole in the fourth quadrant of the momentum plane.
class MomentumPole {
 public:
  explicit MomentumPole(complex k) : k_(k) {
    if (!std::isfinite(k.real()) || !std::isfinite(k.imag()) || !(k.real() > 0.0) ||
        !(k.imag() < 0.0))
      throw qdecay::domain_error("momentum pole must satisfy Re k > 0 and Im k < 0");
  }

  complex value() const noexcept { return k_; }
  /// Pole position in the energy plane, k^2 = eps - i Gamma/2.
  complex energy() const noexcept { return k_ * k_; }

  friend bool operator==(const MomentumPole&, const MomentumPole&) = default;

 private:
  complex k_;
};

/// An isolated s-wave resonance and its derived quantities.
struct ResonanceSpec {
  double epsilon_r;   ///< pole energy above threshold
  double gamma_r;     ///< width
  MomentumPole k_r;   ///< fourth-quadrant root of eps - i Gamma/2
  double x_r;         ///< Gamma / (2 eps)
  double omega_r;     ///< eps / Gamma
  complex gamma_coef; ///< k_r / Re k_r
};

inline ResonanceSpec make_isolated(double epsilon_r, double gamma_r) {
  if (!std::isfinite(epsilon_r) || !std::isfinite(gamma_r) || !(epsilon_r > 0.0) ||
      !(gamma_r > 0.0))
    throw qdecay::domain_error("resonance requires epsilon_r > 0 and gamma_r > 0");
  const complex k = std::sqrt(complex(epsilon_r, -0.5 * gamma_r));
  return ResonanceSpec{epsilon_r, gamma_r,           MomentumPole(k),
                       gamma_r / (2.0 * epsilon_r), epsilon_r / gamma_r, k / k.real()};
}

/// Isolated resonance from x_r = Gamma/(2 eps) at the given energy scale.
inline ResonanceSpec make_isolated_xr(double x_r, double epsilon_r = 1.0) {
  if (!std::isfinite(x_r) || !(x_r > 0.0))
    throw qdecay::domain_error("x_r must be positive");
  return make_isolated(epsilon_r, 2.0 * x_r * epsilon_r);
}

/// Poles {k_p} with complex weights {gamma_p}, ordered by ascending |k_p|.
struct PoleExpansion {
  std::vector<MomentumPole> poles;
  std::vector<complex> coefficients;

  std::size_t size() const noexcept { return poles.size(); }
};

inline PoleExpansion make_expansion(std::vector<MomentumPole> poles,
                                    std::vector<complex> coefficients) {
  if (poles.size() != coefficients.size())
    throw std::length_error("pole expansion: " + std::to_string(poles.size()) + " poles but " +
                            std::to_string(coefficients.size()) + " coefficients");
  std::vector<std::size_t> order(poles.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(poles[a].value()) < std::abs(poles[b].value());
  });
  PoleExpansion out;
  out.poles.reserve(poles.size());
  out.coefficients.reserve(poles.size());
  for (std::size_t i : order) {
    out.poles.push_back(poles[i]);
    out.coefficients.push_back(coefficients[i]);
  }
  return out;
}

inline PoleExpansion single_pole(const ResonanceSpec& spec) {
  return PoleExpansion{{spec.k_r}, {spec.gamma_coef}};
}

struct ValidationReport {
  double re_sum_residual;    ///< |Re(sum gamma_p) - 1|
  double im_ratio_residual;  ///< |Im(sum gamma_p / k_p)|
  double tolerance;
  bool passed;
};

constexpr double kDefaultValidationTolerance = 1e-9;

/// Checks Re(sum gamma_p) = 1 and Im(sum gamma_p / k_p) = 0.
inline ValidationReport validate_expansion(const PoleExpansion& expansion,
                                           double tol = kDefaultValidationTolerance) {
  if (expansion.poles.size() != expansion.coefficients.size())
    throw std::length_error("pole expansion: pole and coefficient counts differ");
  if (expansion.poles.empty()) throw qdecay::domain_error("pole expansion is empty");
  complex sum = 0.0;
  complex ratio = 0.0;
  for (std::size_t p = 0; p < expansion.size(); ++p) {
    sum += expansion.coefficients[p];
    ratio += expansion.coefficients[p] / expansion.poles[p].value();
  }
  ValidationReport report{std::abs(sum.real() - 1.0), std::abs(ratio.imag()), tol, false};
  report.passed = report.re_sum_residual <= tol && report.im_ratio_residual <= tol;
  return report;
}

/// Throws domain_error unless the expansion satisfies both sum constraints.
inline void require_valid(const PoleExpansion& expansion,
                          double tol = kDefaultValidationTolerance) {
  const ValidationReport r = validate_expansion(expansion, tol);
  if (!r.passed)
    throw qdecay::domain_error("pole expansion violates coefficient constraints (Re residual " +
                               std::to_string(r.re_sum_residual) + ", Im residual " +
                               std::to_string(r.im_ratio_residual) + ")");
}

// ---------------------------------------------------------------------------
// S-matrix product form for a finite-range potential without bound or
// virtual states:
//   S(k) = e^{-2iRk} prod_n (k + k_n)(k - k_n*) / ((k - k_n)(k + k_n*))

struct SMatrixModel {
  double range_R = 0.0;
  std::vector<MomentumPole> poles;
};

inline complex s_matrix(const SMatrixModel& model, complex k) {
  complex s = std::exp(complex(0.0, -2.0 * model.range_R) * k);
  for (const MomentumPole& pole : model.poles) {
    const complex kn = pole.value();
    s *= (k + kn) * (k - std::conj(kn)) / ((k - kn) * (k + std::conj(kn)));
  }
  return s;
}

/// Single-pole residue 2ik tan(arg k), exact for R = 0 and one pole.
inline complex residue_approximation(MomentumPole pole) {
  const complex k = pole.value();
  return complex(0.0, 2.0) * k * std::tan(std::arg(k));
}

/// Residue b_n of S(k) at the resonant pole k_n.
inline complex s_matrix_residue(const SMatrixModel& model, std::size_t index) {
  if (index >= model.poles.size())
    throw std::out_of_range("s_matrix_residue: pole index " + std::to_string(index));
  constexpr double tiny = 1e-300;
  const complex kn = model.poles[index].value();
  complex b = residue_approximation(model.poles[index]);
  if (model.range_R != 0.0) b *= std::exp(complex(0.0, -2.0 * model.range_R) * kn);
  for (std::size_t p = 0; p < model.poles.size(); ++p) {
    if (p == index) continue;
    const complex kp = model.poles[p].value();
    const complex den = (kn - kp) * (kn + std::conj(kp));
    if (std::abs(kn - kp) < tiny || std::abs(den) < tiny)
      throw qdecay::degenerate_error("s_matrix_residue: coincident poles " +
                                     std::to_string(index) + " and " + std::to_string(p));
    b *= (kn + kp) * (kn - std::conj(kp)) / den;
  }
  return b;
}

/// Residues of 1/S at -k_n and at k_n*: (-b_n, conj(b_n)).
inline std::pair<complex, complex> inverse_s_residues(const SMatrixModel& model,
                                                      std::size_t index) {
  const complex b = s_matrix_residue(model, index);
  return {-b, std::conj(b)};
}

/// b_n divided by its single-pole approximation 2ik_n tan(arg k_n).
inline complex approximation_ratio(const SMatrixModel& model, std::size_t index) {
  return s_matrix_residue(model, index) / residue_approximation(model.poles.at(index));
}

}  // namespace qdecay

#endif  // QDECAY_POLES_HPP
