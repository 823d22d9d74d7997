#include "hallsim/transport.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>

#include "hallsim/quantization.hpp"

namespace hallsim {

std::array<double, 2> ConductivityTensor::apply(std::array<double, 2> E, int hall_sign) const {
  // eps_{nm} E_n: component 1 picks eps_{21} E_2 = -E_2, component 2 picks eps_{12} E_1.
  const double s = hall_sign >= 0 ? 1.0 : -1.0;
  return {sigma_L * E[0] - s * sigma_H * E[1], sigma_L * E[1] + s * sigma_H * E[0]};
}

std::array<std::array<double, 2>, 2> ConductivityTensor::matrix(int hall_sign) const {
  const double s = hall_sign >= 0 ? 1.0 : -1.0;
  return {{{sigma_L, -s * sigma_H}, {s * sigma_H, sigma_L}}};
}

std::string_view to_string(RegimeKind kind) {
  switch (kind) {
    case RegimeKind::Classical: return "classical";
    case RegimeKind::Crossover: return "crossover";
    case RegimeKind::Quantum: return "quantum";
  }
  return "crossover";
}

RegimeKind regime_kind_from_string(std::string_view text) {
  if (text == "classical") return RegimeKind::Classical;
  if (text == "crossover") return RegimeKind::Crossover;
  if (text == "quantum") return RegimeKind::Quantum;
  throw std::invalid_argument("unknown regime '" + std::string(text) + "'");
}

double drude_sigma0(const PhysicalParams& p) { return p.e * p.e * p.n * p.tau / p.mu; }

ConductivityTensor conductivity_classical(const PhysicalParams& p) {
  const double x = hall_parameter(p);
  ConductivityTensor s;
  s.sigma_L = drude_sigma0(p) / (1.0 + x * x);
  s.sigma_H = x * s.sigma_L;
  return s;
}

ConductivityTensor conductivity_quantum_limit(const PhysicalParams& p) {
  if (p.B == 0.0) throw std::domain_error("quantum limit undefined at zero field");
  return {0.0, p.n * p.e / p.B};
}

Regime classify_regime(const PhysicalParams& p, double s_cs, const RegimeThresholds& thresholds) {
  if (!(thresholds.classical < thresholds.quantum)) {
    throw std::invalid_argument("classical threshold must be below quantum threshold");
  }
  Regime r;
  r.hall_parameter = hall_parameter(p);
  r.action_ratio = conductivity_classical(p).sigma_H * s_cs / p.hbar;
  if (r.hall_parameter >= thresholds.quantum) {
    r.kind = RegimeKind::Quantum;
  } else if (r.hall_parameter <= thresholds.classical) {
    r.kind = RegimeKind::Classical;
  } else {
    r.kind = RegimeKind::Crossover;
  }
  return r;
}

double hall_filling(const PhysicalParams& p) {
  const double sigma = p.n * p.e / p.B;
  if (p.units == UnitSystem::Natural) return sigma;
  const double quantum = p.e * p.e / (2.0 * std::numbers::pi * p.hbar);
  return sigma / quantum;
}

std::vector<StaircasePoint> plateau_staircase(const PhysicalParams& base,
                                              std::span<const double> fields) {
  std::vector<StaircasePoint> out;
  out.reserve(fields.size());
  for (double B : fields) {
    if (!(B > 0.0) || !std::isfinite(B)) {
      throw std::invalid_argument("staircase fields must be positive, got " + std::to_string(B));
    }
    PhysicalParams p = base;
    p.B = B;
    const double sigma = hall_filling(p);
    out.push_back({B, sigma, snap_sigma_H(sigma)});
  }
  return out;
}

namespace {

SweepRecord evaluate_point(const PhysicalParams& p, double s_cs,
                           const RegimeThresholds& thresholds) {
  SweepRecord r;
  r.B = p.B;
  r.tau = p.tau;
  r.omega_c_tau = hall_parameter(p);
  const auto sigma = conductivity_classical(p);
  r.sigma_L = sigma.sigma_L;
  r.sigma_H = sigma.sigma_H;
  r.sigma_H_quantized = p.B > 0.0 ? snap_sigma_H(hall_filling(p)) : 0;
  r.regime = classify_regime(p, s_cs, thresholds).kind;
  return r;
}

}  // namespace

std::vector<SweepRecord> transport_sweep(const PhysicalParams& base, SweepVariable variable,
                                         std::span<const double> values, double s_cs,
                                         const RegimeThresholds& thresholds, unsigned threads) {
  if (values.empty()) throw std::invalid_argument("empty sweep");
  std::vector<PhysicalParams> points(values.size(), base);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (variable == SweepVariable::B) {
      points[i].B = values[i];
    } else {
      points[i].tau = values[i];
    }
    points[i].validate();
  }

  std::vector<SweepRecord> out(values.size());
  const unsigned workers =
      std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(values.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < points.size(); ++i) out[i] = evaluate_point(points[i], s_cs, thresholds);
    return out;
  }

  // Each slot is written by exactly one worker, so ordering is by input index.
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      out[i] = evaluate_point(points[i], s_cs, thresholds);
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return out;
}

}  // namespace hallsim
