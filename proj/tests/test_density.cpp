#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qdecay/density.hpp"
#include "qdecay/survival.hpp"

using qdecay::complex;

TEST(Density, VanishesAtThresholdAndRejectsBadEnergies) {
  const auto s = qdecay::make_isolated_xr(0.1);
  const auto e = qdecay::single_pole(s);
  EXPECT_EQ(qdecay::rho(e, 0.0), 0.0);
  EXPECT_THROW(qdecay::rho(e, -1.0), qdecay::domain_error);
  EXPECT_THROW(qdecay::rho(e, std::nan("")), qdecay::domain_error);
  EXPECT_THROW(qdecay::rho_bu(s, -1e-9), qdecay::domain_error);
  // threshold behaviour rho ~ sqrt(E)
  const double r1 = qdecay::rho(e, 1e-8), r2 = qdecay::rho(e, 4e-8);
  EXPECT_NEAR(r2 / r1, 2.0, 1e-6);
}

TEST(Density, IsolatedResonanceIsPositive) {
  for (double x : {0.01, 0.1, 0.5, 1.0, 4.0}) {
    const auto e = qdecay::single_pole(qdecay::make_isolated_xr(x));
    for (double E = 1e-6; E < 1e4; E *= 1.3) EXPECT_GT(qdecay::rho(e, E), 0.0) << x << " " << E;
  }
}

TEST(Density, BethUhlenbeckPlusCorrection) {
  for (double x : {0.05, 0.5, 2.0}) {
    const auto s = qdecay::make_isolated_xr(x, 3.0);
    const auto e = qdecay::single_pole(s);
    for (double E = 0.01; E < 50.0; E *= 1.7) {
      const double total = qdecay::rho(e, E);
      EXPECT_NEAR(total, qdecay::rho_bu(s, E) + qdecay::rho_correction(s, E),
                  1e-13 * std::abs(total));
      EXPECT_NEAR(total, oracle::density(e, E), 1e-13 * std::abs(total));
    }
  }
}

TEST(Density, BethUhlenbeckTracksPhaseShiftDerivative) {
  // pole-term form vs the exact derivative of delta = -arg((k - k_r)(k + k_r*));
  // across the peak they differ at relative order x_r^2
  for (double x : {0.2, 0.05, 0.01, 1e-3}) {
    const auto s = qdecay::make_isolated_xr(x);
    const complex kr = s.k_r.value();
    auto delta = [&](double E) {
      const double k = std::sqrt(E);
      return -std::arg((k - kr) * (k + std::conj(kr)));
    };
    for (double d : {-0.5, -0.25, 0.0, 0.125, 0.5}) {
      const double E = s.epsilon_r + d * s.gamma_r;
      const double h = 1e-5 * s.gamma_r;
      const double numeric = (delta(E + h) - delta(E - h)) / (2 * h) / std::numbers::pi;
      EXPECT_LT(std::abs(qdecay::rho_bu(s, E) - numeric), 1.5 * x * x * numeric) << x << " " << d;
    }
  }
}

TEST(Density, NarrowResonanceIsLorentzian) {
  const auto s = qdecay::make_isolated_xr(1e-3);
  const auto e = qdecay::single_pole(s);
  for (double d : {-3.0, -1.0, 0.0, 0.5, 2.0}) {
    const double E = s.epsilon_r + d * s.gamma_r;
    const double bw = s.gamma_r / (2 * std::numbers::pi) /
                      ((E - s.epsilon_r) * (E - s.epsilon_r) + 0.25 * s.gamma_r * s.gamma_r);
    EXPECT_NEAR(qdecay::rho(e, E) / bw, 1.0, 5e-3);
  }
}

TEST(Density, Normalized) {
  for (double x : {0.01, 0.1, 0.5, 1.0}) {
    const auto e = qdecay::single_pole(qdecay::make_isolated_xr(x));
    EXPECT_NEAR(oracle::density_integral(e), 1.0, 1e-6) << x;
  }
  const auto two = oracle::two_pole(complex(1.0, -0.05), complex(1.6, -0.3), complex(0.6, 0.02));
  EXPECT_NEAR(oracle::density_integral(two), 1.0, 1e-6);
}

TEST(Density, LibraryOracleAgreesAtTimeZero) {
  for (double x : {0.01, 0.1, 0.5, 1.0}) {
    const auto e = qdecay::single_pole(qdecay::make_isolated_xr(x));
    const auto r = qdecay::amplitude_oracle(e, 0.0);
    EXPECT_NEAR(r.value.real(), oracle::density_integral(e), 1e-8);
    EXPECT_EQ(r.value.imag(), 0.0);
  }
}
