#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hallsim/transport.hpp"

using namespace hallsim;

TEST(Transport, DrudeSigma0) {
  EXPECT_DOUBLE_EQ(drude_sigma0(PhysicalParams::natural(1.0, 1.0, 1.0)), 1.0);
  EXPECT_DOUBLE_EQ(drude_sigma0(PhysicalParams::natural(1.0, 0.0, 1.0)), 0.0);
  PhysicalParams p = PhysicalParams::natural(2.0, 3.0, 1.0);
  p.units = UnitSystem::SI;
  p.mu = 4.0;
  EXPECT_DOUBLE_EQ(drude_sigma0(p), 1.5);
}

TEST(Transport, ClassicalClosedForms) {
  const auto zero = conductivity_classical(PhysicalParams::natural(1.0, 2.0, 0.0));
  EXPECT_DOUBLE_EQ(zero.sigma_L, 2.0);
  EXPECT_DOUBLE_EQ(zero.sigma_H, 0.0);

  const auto sym = conductivity_classical(PhysicalParams::natural(1.0, 2.0, 1.0));
  EXPECT_DOUBLE_EQ(sym.sigma_L, 1.0);
  EXPECT_DOUBLE_EQ(sym.sigma_H, 1.0);

  const PhysicalParams p = PhysicalParams::natural(1.0, 1.0, 100.0);
  const auto s = conductivity_classical(p);
  const double x = 100.0;
  EXPECT_NEAR(s.sigma_H, 1.0 * x / (1.0 + x * x), 1e-15);
  EXPECT_NEAR(s.sigma_H / 0.01, 1.0, 1e-4);
}

TEST(Transport, QuantumLimit) {
  const auto a = conductivity_quantum_limit(PhysicalParams::natural(1.0, 2.0, 1.0));
  EXPECT_DOUBLE_EQ(a.sigma_H, 2.0);
  EXPECT_DOUBLE_EQ(a.sigma_L, 0.0);
  const auto b = conductivity_quantum_limit(PhysicalParams::natural(1.0, 1.0, 2.0));
  EXPECT_DOUBLE_EQ(b.sigma_H, 0.5);
  try {
    conductivity_quantum_limit(PhysicalParams::natural(1.0, 1.0, 0.0));
    FAIL();
  } catch (const std::domain_error& e) {
    EXPECT_STREQ(e.what(), "quantum limit undefined at zero field");
  }
}

TEST(Transport, ClassicalApproachesQuantumLimit) {
  const PhysicalParams p = PhysicalParams::natural(1e3, 1.0, 1.0);
  const double ref = p.n * p.e / p.B;
  EXPECT_LT(std::abs(conductivity_classical(p).sigma_H - ref) / ref, 1e-6);
}

TEST(Transport, ClassifyRegime) {
  EXPECT_EQ(classify_regime(PhysicalParams::natural(100.0, 1.0, 1.0), 1.0).kind, RegimeKind::Quantum);
  EXPECT_EQ(classify_regime(PhysicalParams::natural(0.01, 1.0, 1.0), 1.0).kind, RegimeKind::Classical);
  EXPECT_EQ(classify_regime(PhysicalParams::natural(1.0, 1.0, 1.0), 1.0).kind, RegimeKind::Crossover);
  // Boundaries are inclusive.
  EXPECT_EQ(classify_regime(PhysicalParams::natural(10.0, 1.0, 1.0), 1.0).kind, RegimeKind::Quantum);
  EXPECT_EQ(classify_regime(PhysicalParams::natural(0.1, 1.0, 1.0), 1.0).kind, RegimeKind::Classical);
  EXPECT_THROW(classify_regime(PhysicalParams::natural(1.0, 1.0, 1.0), 1.0, {10.0, 0.1}), std::invalid_argument);
}

TEST(Transport, ActionRatioIsAlwaysReported) {
  const PhysicalParams p = PhysicalParams::natural(1.0, 2.0, 1.0);
  const Regime r = classify_regime(p, 3.0);
  EXPECT_DOUBLE_EQ(r.action_ratio, conductivity_classical(p).sigma_H * 3.0);
  EXPECT_DOUBLE_EQ(r.hall_parameter, 1.0);
}

TEST(Transport, RandomParametersObeyDrudeIdentities) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> lg(-4.0, 4.0);
  for (int k = 0; k < 5000; ++k) {
    const PhysicalParams p = PhysicalParams::natural(std::pow(10.0, lg(rng)), std::pow(10.0, lg(rng)),
                                                     std::pow(10.0, lg(rng)));
    const auto s = conductivity_classical(p);
    const double x = hall_parameter(p);
    EXPECT_NEAR(s.sigma_H / (x * s.sigma_L), 1.0, 1e-12);
    EXPECT_NEAR((s.sigma_L * s.sigma_L + s.sigma_H * s.sigma_H) / (drude_sigma0(p) * s.sigma_L), 1.0, 1e-12);
  }
}

TEST(Transport, LongitudinalDecreasesAndHallPeaksAtUnity) {
  double prev = std::numeric_limits<double>::infinity();
  double best = 0.0;
  double best_x = 0.0;
  for (int k = 1; k <= 4000; ++k) {
    const double x = 1e-3 * k;
    const auto s = conductivity_classical(PhysicalParams::natural(1.0, 1.0, x));
    EXPECT_LT(s.sigma_L, prev);
    prev = s.sigma_L;
    if (s.sigma_H > best) {
      best = s.sigma_H;
      best_x = x;
    }
  }
  EXPECT_NEAR(best_x, 1.0, 1e-3);
  const PhysicalParams at_one = PhysicalParams::natural(1.0, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(conductivity_classical(at_one).sigma_H, drude_sigma0(at_one) / 2.0);
}

TEST(Transport, QuantumLimitDeviationBound) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> lg(0.01, 5.0);
  for (int k = 0; k < 2000; ++k) {
    const double x = std::pow(10.0, lg(rng));
    const PhysicalParams p = PhysicalParams::natural(x, 0.7, 1.0);
    const double ref = p.n * p.e / p.B;
    const double dev = std::abs(conductivity_classical(p).sigma_H - ref);
    EXPECT_NEAR(dev, ref / (1.0 + x * x), 4e-16 * ref);
    EXPECT_LE(dev, ref / (x * x) + 4e-16 * ref);
  }
}

TEST(Transport, TensorIsAntisymmetric) {
  const ConductivityTensor s{0.3, 0.7};
  const auto m = s.matrix();
  EXPECT_DOUBLE_EQ(m[0][1], -m[1][0]);
  EXPECT_DOUBLE_EQ(m[0][0], m[1][1]);
  EXPECT_DOUBLE_EQ(m[1][0], 0.7);
  const auto j = s.apply({1.0, 0.0});
  EXPECT_DOUBLE_EQ(j[0], 0.3);
  EXPECT_DOUBLE_EQ(j[1], 0.7);
  const auto jf = s.apply({1.0, 0.0}, -1);
  EXPECT_DOUBLE_EQ(jf[1], -0.7);
}

TEST(Transport, HallCurrentIsLinearInSigmaH) {
  const std::array<double, 2> E{0.3, -1.1};
  const auto one = ConductivityTensor{0.0, 1.0}.apply(E);
  const auto two = ConductivityTensor{0.0, 2.0}.apply(E);
  EXPECT_NEAR(two[0], 2.0 * one[0], 1e-15);
  EXPECT_NEAR(two[1], 2.0 * one[1], 1e-15);
}

TEST(Transport, StaircaseSnapsToNearestInteger) {
  const PhysicalParams p = PhysicalParams::natural(1.0, 1.0, 1.0);
  const std::vector<double> fields{1.0 / 0.4, 1.0 / 1.3, 1.0 / 2.6};
  const auto steps = plateau_staircase(p, fields);
  ASSERT_EQ(steps.size(), 3u);
  EXPECT_EQ(steps[0].sigma_quantized, 0);
  EXPECT_EQ(steps[1].sigma_quantized, 1);
  EXPECT_EQ(steps[2].sigma_quantized, 3);
  EXPECT_NEAR(steps[1].sigma_continuous, 1.3, 1e-12);

  const std::vector<double> exact{0.5};
  EXPECT_EQ(plateau_staircase(p, exact)[0].sigma_quantized, 2);
  const std::vector<double> huge{1e12};
  EXPECT_EQ(plateau_staircase(p, huge)[0].sigma_quantized, 0);
}

TEST(Transport, StaircaseIsMonotoneWithUnitSteps) {
  const PhysicalParams p = PhysicalParams::natural(1.0, 5.0, 1.0);
  std::vector<double> fields;
  // Filling from 20 down to 0.1 in steps of 0.05, so no step can skip a plateau.
  for (int k = 0; k < 399; ++k) fields.push_back(5.0 / (20.0 - 0.05 * k));
  const auto steps = plateau_staircase(p, fields);
  for (std::size_t k = 1; k < steps.size(); ++k) {
    EXPECT_LE(steps[k].sigma_quantized, steps[k - 1].sigma_quantized);
    EXPECT_LE(steps[k - 1].sigma_quantized - steps[k].sigma_quantized, 1);
    EXPECT_GE(steps[k].sigma_quantized, 0);
  }
}

TEST(Transport, StaircaseRejectsNonPositiveField) {
  const std::vector<double> fields{1.0, 0.0};
  EXPECT_THROW(plateau_staircase(PhysicalParams::natural(1.0, 1.0, 1.0), fields), std::invalid_argument);
}

TEST(Transport, SiFillingCountsConductanceQuanta) {
  PhysicalParams p;
  p.units = UnitSystem::SI;
  p.e = si::elementary_charge;
  p.hbar = si::hbar;
  p.mu = si::electron_mass;
  p.B = 10.0;
  // One flux quantum h/e per carrier is filling one.
  p.n = p.e * p.B / (2.0 * std::numbers::pi * p.hbar);
  EXPECT_NEAR(hall_filling(p), 1.0, 1e-12);
}

TEST(Transport, SweepOrderIsIndependentOfWorkers) {
  const PhysicalParams base = PhysicalParams::natural(1.0, 1.0, 1.0);
  std::vector<double> values;
  for (int k = 0; k < 257; ++k) values.push_back(0.01 * (k + 1));
  const auto one = transport_sweep(base, SweepVariable::B, values, 1.0, {}, 1);
  const auto many = transport_sweep(base, SweepVariable::B, values, 1.0, {}, 7);
  ASSERT_EQ(one.size(), many.size());
  for (std::size_t k = 0; k < one.size(); ++k) {
    EXPECT_EQ(one[k].B, values[k]);
    EXPECT_EQ(one[k].sigma_L, many[k].sigma_L);
    EXPECT_EQ(one[k].sigma_H, many[k].sigma_H);
    EXPECT_EQ(one[k].regime, many[k].regime);
  }
}

TEST(Transport, TauSweepKeepsField) {
  const PhysicalParams base = PhysicalParams::natural(1.0, 1.0, 2.0);
  const std::vector<double> taus{0.01, 1.0, 100.0};
  const auto r = transport_sweep(base, SweepVariable::Tau, taus, 1.0, {}, 2);
  for (std::size_t k = 0; k < taus.size(); ++k) {
    EXPECT_EQ(r[k].B, 2.0);
    EXPECT_DOUBLE_EQ(r[k].omega_c_tau, 2.0 * taus[k]);
  }
  EXPECT_EQ(r.front().regime, RegimeKind::Classical);
  EXPECT_EQ(r.back().regime, RegimeKind::Quantum);
}

TEST(Transport, EmptySweepRejected) {
  try {
    transport_sweep(PhysicalParams::natural(1.0, 1.0, 1.0), SweepVariable::B, {}, 1.0, {}, 1);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_STREQ(e.what(), "empty sweep");
  }
}
