#pragma once

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "hallsim/params.hpp"

namespace hallsim {

/// Drude conductivities. As a tensor acting on E the diagonal is sigma_L and
/// the off-diagonal pair is antisymmetric with magnitude sigma_H.
struct ConductivityTensor {
  double sigma_L = 0.0;
  double sigma_H = 0.0;

  /// j_m = sigma_L E_m + hall_sign * sigma_H eps_{nm} E_n, eps_{12} = 1.
  std::array<double, 2> apply(std::array<double, 2> E, int hall_sign = 1) const;

  /// 2x2 matrix form of apply() for the same sign convention.
  std::array<std::array<double, 2>, 2> matrix(int hall_sign = 1) const;
};

enum class RegimeKind { Classical, Crossover, Quantum };

std::string_view to_string(RegimeKind kind);
RegimeKind regime_kind_from_string(std::string_view text);

struct Regime {
  RegimeKind kind = RegimeKind::Crossover;
  double hall_parameter = 0.0;
  /// sigma_H * S_CS / hbar
  double action_ratio = 0.0;
};

/// Decade thresholds on omega_c tau.
struct RegimeThresholds {
  double classical = 0.1;
  double quantum = 10.0;
};

/// sigma_0 = e^2 n tau / mu
double drude_sigma0(const PhysicalParams& p);

ConductivityTensor conductivity_classical(const PhysicalParams& p);

/// sigma_H = n e / B, sigma_L = 0. Throws std::domain_error at B = 0.
ConductivityTensor conductivity_quantum_limit(const PhysicalParams& p);

Regime classify_regime(const PhysicalParams& p, double s_cs,
                       const RegimeThresholds& thresholds = {});

/// n e / B expressed as a count of conductance quanta e^2/h.
///
/// In Natural units the value n e / B is itself taken as the count. In SI the
/// conductance is divided by e^2/h.
double hall_filling(const PhysicalParams& p);

struct StaircasePoint {
  double B = 0.0;
  double sigma_continuous = 0.0;
  long sigma_quantized = 0;
};

/// Continuous and snapped Hall conductivity for each field value of the sweep.
/// Every B must be strictly positive.
std::vector<StaircasePoint> plateau_staircase(const PhysicalParams& base,
                                              std::span<const double> fields);

/// Which parameter a transport sweep varies. Sweeping B keeps sigma_0 fixed;
/// sweeping tau keeps n and B fixed while sigma_0 grows with tau.
enum class SweepVariable { B, Tau };

struct SweepRecord {
  double B = 0.0;
  double tau = 0.0;
  double omega_c_tau = 0.0;
  double sigma_L = 0.0;
  double sigma_H = 0.0;
  long sigma_H_quantized = 0;
  RegimeKind regime = RegimeKind::Crossover;
};

/// One record per sweep value, in input order. Evaluates points on up to
/// `threads` workers; the result does not depend on the worker count.
std::vector<SweepRecord> transport_sweep(const PhysicalParams& base, SweepVariable variable,
                                         std::span<const double> values, double s_cs,
                                         const RegimeThresholds& thresholds, unsigned threads = 1);

}  // namespace hallsim
