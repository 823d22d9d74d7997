#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hallsim/quantization.hpp"

using namespace hallsim;

namespace {

std::vector<double> radii() { return {0.5, 0.8, 1.0, 1.2, 1.5}; }

double residual_at(double sigma, std::size_t points) {
  return angular_momentum_residual(build_wavefunctional(sigma, 1.0, radii(), uniform_phi_grid(points)));
}

}  // namespace

TEST(Quantization, SnapExamples) {
  EXPECT_EQ(snap_sigma_H(2.4), 2);
  EXPECT_EQ(snap_sigma_H(0.0), 0);
  EXPECT_EQ(snap_sigma_H(-0.3), 0);
  EXPECT_EQ(snap_sigma_H(2.5), 3);
  EXPECT_EQ(snap_sigma_H(2.6), 3);
  EXPECT_THROW(snap_sigma_H(std::nan("")), std::invalid_argument);
  EXPECT_THROW(snap_sigma_H(INFINITY), std::invalid_argument);
}

TEST(Quantization, SnapMatchesNearestIntegerOracle) {
  for (int k = -50; k <= 500; ++k) {
    const double x = 0.037 * k;
    const long expected = x <= 0.0 ? 0 : static_cast<long>(std::lround(x));
    EXPECT_EQ(snap_sigma_H(x), expected) << x;
  }
}

TEST(Quantization, PhiGridIncludesBothEnds) {
  const auto phi = uniform_phi_grid(33);
  EXPECT_EQ(phi.front(), 0.0);
  EXPECT_EQ(phi.back(), 2.0 * std::numbers::pi);
  for (std::size_t k = 1; k < phi.size(); ++k) EXPECT_NEAR(phi[k] - phi[k - 1], 2.0 * std::numbers::pi / 32, 1e-15);
}

TEST(Quantization, ZeroSigmaIsConstantInPhi) {
  const auto w = build_wavefunctional(0.0, 1.0, radii(), uniform_phi_grid(64));
  for (std::size_t r = 0; r < w.R_values.size(); ++r)
    for (std::size_t p = 0; p < w.phi_values.size(); ++p) EXPECT_EQ(w.at(r, p), w.at(r, 0));
}

TEST(Quantization, UnitSigmaWindsOnce) {
  const auto w = build_wavefunctional(1.0, 1.0, radii(), uniform_phi_grid(65));
  const std::size_t half = 32;
  for (std::size_t r = 0; r < w.R_values.size(); ++r) {
    const cplx ratio = w.at(r, half) / w.at(r, 0);
    EXPECT_NEAR(ratio.real(), -1.0, 1e-12);
    EXPECT_NEAR(std::abs(w.at(r, 64) - w.at(r, 0)), 0.0, 1e-12);
    double total = 0.0;
    for (std::size_t p = 1; p < w.phi_values.size(); ++p) total += std::arg(w.at(r, p) / w.at(r, p - 1));
    EXPECT_NEAR(total, 2.0 * std::numbers::pi, 1e-12);
  }
}

TEST(Quantization, ModulusIndependentOfPhi) {
  for (int sigma : {1, 2, 5}) {
    const auto w = build_wavefunctional(sigma, 1.0, radii(), uniform_phi_grid(100));
    for (std::size_t r = 0; r < w.R_values.size(); ++r) {
      const double F = w.envelope(w.R_values[r]);
      for (std::size_t p = 0; p < w.phi_values.size(); ++p) EXPECT_NEAR(std::abs(w.at(r, p)), F, 1e-14);
    }
  }
}

TEST(Quantization, EndColumnsDifferByWindingDefect) {
  for (double sigma : {0.5, 1.25, 2.7, 3.0}) {
    const auto w = build_wavefunctional(sigma, 1.0, radii(), uniform_phi_grid(40));
    const double defect = std::abs(std::polar(1.0, 2.0 * std::numbers::pi * sigma) - 1.0);
    for (std::size_t r = 0; r < w.R_values.size(); ++r) {
      EXPECT_NEAR(std::abs(w.at(r, 39) - w.at(r, 0)), defect * w.envelope(w.R_values[r]), 1e-12);
    }
  }
}

TEST(Quantization, BuildRejectsEmptyGrids) {
  EXPECT_THROW(build_wavefunctional(1.0, 1.0, {}, uniform_phi_grid(20)), std::invalid_argument);
  EXPECT_THROW(build_wavefunctional(1.0, 1.0, radii(), {}), std::invalid_argument);
}

TEST(Quantization, AngularResidualExamples) {
  EXPECT_LT(residual_at(0.0, 64), 1e-15);
  const double coarse = residual_at(3.0, 256);
  EXPECT_LT(coarse, 1e-2);
  const double fine = residual_at(3.0, 511);  // same distinct-point count doubled
  EXPECT_NEAR(coarse / fine, 4.0, 0.05);

  const auto w = build_wavefunctional(1.0, 1.0, radii(), uniform_phi_grid(64));
  EXPECT_LT(angular_momentum_residual(w, Differentiation::Exact), 1e-12);
}

TEST(Quantization, AngularResidualConvergesAtSecondOrder) {
  // Central differences give |sin(s dphi)/dphi - s| ~ s^3 dphi^2 / 6.
  for (double sigma : {1.0, 2.0, 4.0}) {
    double prev = 0.0;
    for (std::size_t m : {64u, 128u, 256u, 512u}) {
      const double r = residual_at(sigma, m + 1);
      const double dphi = 2.0 * std::numbers::pi / static_cast<double>(m);
      const double oracle = std::abs(std::sin(sigma * dphi) / dphi - sigma);
      EXPECT_NEAR(r, oracle, 1e-9 + 1e-6 * oracle);
      if (prev > 0.0) {
        const double slope = std::log2(prev / r);
        EXPECT_GT(slope, 1.8);
        EXPECT_LT(slope, 2.2);
      }
      prev = r;
    }
  }
}

TEST(Quantization, AngularResidualNeedsSixteenPoints) {
  const auto w = build_wavefunctional(1.0, 1.0, radii(), uniform_phi_grid(15));
  EXPECT_THROW(angular_momentum_residual(w), std::invalid_argument);
}

TEST(Quantization, SingleValuedness) {
  EXPECT_TRUE(single_valuedness_check(3.0));
  EXPECT_FALSE(single_valuedness_check(2.5));
  EXPECT_TRUE(single_valuedness_check(0.0));
}

TEST(Quantization, SingleValuedExactlyOnIntegers) {
  for (int den : {2, 3, 7, 10}) {
    for (int num = 0; num <= 10 * den; ++num) {
      const double sigma = static_cast<double>(num) / den;
      EXPECT_EQ(single_valuedness_check(sigma), num % den == 0) << num << "/" << den;
    }
  }
}

TEST(Quantization, EffectivePlanckConstant) {
  SingleModePair p;
  p.sigma_H = 1.0;
  EXPECT_DOUBLE_EQ(p.hbar_eff(), 4.0 * std::numbers::pi);
  p.sigma_H = 2.0;
  EXPECT_DOUBLE_EQ(p.hbar_eff(), 2.0 * std::numbers::pi);
}

TEST(Quantization, CommutatorResidualGaussian) {
  SingleModePair p;
  p.sigma_H = 1.0;
  p.h = 1e-3;
  const auto r = commutator_residual(p, {gaussian_test_function()});
  EXPECT_LT(r.residual, 1e-4);
  EXPECT_NEAR(r.measured_constant / p.hbar_eff(), 1.0, 1e-3);
}

TEST(Quantization, CommutatorResidualMatchesLeadingErrorTerm) {
  // Central differences give [A1, A2] f = i hbar_eff (f(A+h) + f(A-h)) / 2.
  SingleModePair p;
  p.sigma_H = 1.0;
  for (double h : {4e-3, 2e-3, 1e-3}) {
    p.h = h;
    const double r = commutator_residual(p, {gaussian_test_function()}).residual;
    const double oracle = p.hbar_eff() * h * h / 2.0;  // max |f''| = 1 at the centre
    EXPECT_NEAR(r / oracle, 1.0, 1e-3);
  }
}

TEST(Quantization, MeasuredConstantScalesInversely) {
  SingleModePair p;
  p.sigma_H = 1.0;
  const double one = commutator_residual(p, {gaussian_test_function()}).measured_constant;
  p.sigma_H = 2.0;
  const double two = commutator_residual(p, {gaussian_test_function()}).measured_constant;
  EXPECT_NEAR(two / one, 0.5, 1e-9);
}

TEST(Quantization, PolynomialExactUnderAnalyticDerivative) {
  SingleModePair p;
  p.sigma_H = 1.0;
  p.h = 0.01;
  p.extent = 2.0;
  const auto r = commutator_residual(p, {polynomial_test_function(2)}, Differentiation::Exact);
  EXPECT_LT(r.residual, 1e-12);
  EXPECT_NEAR(r.measured_constant, p.hbar_eff(), 1e-12);
}

TEST(Quantization, CommutatorSpreadAcrossTestFunctions) {
  SingleModePair p;
  p.sigma_H = 3.0;
  const auto r = commutator_residual(
      p, {gaussian_test_function(0.0, 1.0), gaussian_test_function(0.5, 1.5), bump_test_function(0.0, 3.0)});
  EXPECT_LT(r.max_single, 10.0 * r.min_single + 1e-15);
  EXPECT_LT(r.max_single - r.min_single, 10.0 * r.max_single);
}

TEST(Quantization, CommutatorUndefinedAtZeroSigma) {
  SingleModePair p;
  p.sigma_H = 0.0;
  try {
    commutator_residual(p, {gaussian_test_function()});
    FAIL();
  } catch (const std::domain_error& e) {
    EXPECT_STREQ(e.what(), "commutator undefined: quantization parameter vanishes");
  }
}

TEST(Quantization, EnvelopesPeakAtUnitRadius) {
  EnvelopeSpec g{Envelope::Gaussian, 0.25};
  EnvelopeSpec b{Envelope::Bump, 0.25};
  EXPECT_DOUBLE_EQ(g(1.0), 1.0);
  EXPECT_DOUBLE_EQ(b(1.0), 1.0);
  EXPECT_EQ(b(1.3), 0.0);
  EXPECT_GT(g(1.3), 0.0);
}
