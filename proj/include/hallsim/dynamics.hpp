#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hallsim/params.hpp"
#include "hallsim/state.hpp"
#include "hallsim/transport.hpp"

namespace hallsim {

// ---------------------------------------------------------------------------
// Current density
// ---------------------------------------------------------------------------

/// j_m = (e hbar / mu) Im(psi* d_m psi) [- (e^2/mu) A_m |psi|^2], central
/// differences on interior nodes, zero on the boundary ring.
CurrentField current_density(const Grid& g, const ComplexField& psi, const VectorField& A,
                             const PhysicalParams& p, CurrentDefinition definition);
CurrentField current_density(const LatticeState& s, const PhysicalParams& p,
                             CurrentDefinition definition);

/// eps_{nm} v_n scaled by hall_sign: (-v_2, v_1) for hall_sign = +1.
VectorField hall_rotate(const VectorField& v, int hall_sign = 1);

// ---------------------------------------------------------------------------
// Schroedinger substep
// ---------------------------------------------------------------------------

enum class PsiStepper { CrankNicolson, RK4 };

struct PsiStepOptions {
  PsiStepper stepper = PsiStepper::CrankNicolson;
  /// dt may not exceed stability_factor * mu a^2 / hbar.
  double stability_factor = 0.5;
  /// Relative residual for the implicit solve.
  double solver_tolerance = 1e-14;
};

double stability_limit(const Grid& g, const PhysicalParams& p, double stability_factor);

/// (1/2mu)(-i hbar d - e A)^2 psi on interior nodes with psi = 0 outside.
ComplexField apply_hamiltonian(const Grid& g, const ComplexField& psi, const VectorField& A,
                               const PhysicalParams& p);

/// Advances psi by dt with A frozen. Leaves s.t untouched; the coupled
/// macro-step owns the clock. Throws before mutating when dt breaks the bound.
void step_psi(LatticeState& s, const PhysicalParams& p, double dt, const PsiStepOptions& opts = {});

// ---------------------------------------------------------------------------
// Gauge substep
// ---------------------------------------------------------------------------

enum class GaugeStepper { Euler, RK4 };

/// Current as an affine function of A with psi frozen:
/// j(A) = paramagnetic - diamagnetic_weight * density * A.
struct GaugeSource {
  VectorField paramagnetic;
  RealField density;
  double diamagnetic_weight = 0.0;  // e^2/mu for the gauge-term definition, else 0
  double mean_density = 0.0;        // global n entering e^2 n / mu

  VectorField current(const VectorField& A) const;
};

GaugeSource gauge_source(const LatticeState& s, const PhysicalParams& p,
                         CurrentDefinition definition);

/// A source with a fixed, A-independent current.
GaugeSource fixed_current_source(const CurrentField& j, double mean_density);

struct GaugeStepResult {
  VectorField slope;    // the stepper's effective dA/dt
  VectorField A_eff;    // the A at which `slope` satisfies the equation of motion
  VectorField j_eff;    // current evaluated at A_eff
  double london = 0.0;  // e^2 n / mu
};

/// Solves j_m - (e^2 n/mu) A_m = sigma_H eps^{nm} dA_n/dt for dA/dt,
///   dA_1/dt = -s (j_2 - k A_2) / sigma_H,   dA_2/dt = +s (j_1 - k A_1) / sigma_H,
/// with s = hall_sign, and advances A. Sets s.E = -(A_new - A_old) / dt.
/// Throws std::domain_error when sigma_H = 0.
GaugeStepResult step_gauge(LatticeState& s, const GaugeSource& source, const PhysicalParams& p,
                           double sigma_H, double dt, GaugeStepper stepper = GaugeStepper::RK4,
                           int hall_sign = 1);

/// max |j_eff - k A_eff - sigma_H eps E| over all nodes, with E = -slope and
/// eps the hall_rotate convention.
double gauge_step_identity_residual(const GaugeStepResult& r, double sigma_H, int hall_sign = 1);

// ---------------------------------------------------------------------------
// Chern-Simons action
// ---------------------------------------------------------------------------

struct GaugeSlice {
  double t = 0.0;
  VectorField A;
};

struct ActionValue {
  double action = 0.0;        // sigma_H S_CS
  double action_ratio = 0.0;  // |sigma_H S_CS| / hbar
};

/// -(sigma_H / 8 pi) int dt sum_nodes w a^2 eps^{mn} dA_m/dt A_n.
///
/// Each time interval uses the two-slice difference for dA/dt and the
/// trapezoid average of A; spatial weights w are trapezoid weights, so the
/// node sum of w a^2 is the sample area. Needs at least two slices.
ActionValue chern_simons_action(const Grid& g, std::span<const GaugeSlice> history, double sigma_H,
                                double hbar = 1.0);

/// Contribution of one interval [t, t + dt] to chern_simons_action.
double chern_simons_increment(const Grid& g, const VectorField& A_old, const VectorField& A_new,
                              double dt, double sigma_H);

// ---------------------------------------------------------------------------
// Ohm residuals
// ---------------------------------------------------------------------------

struct OhmResidual {
  double value = 0.0;
  /// False when the current vanishes and `value` is the absolute residual.
  bool normalized = true;
};

/// max |j - sigma_L E - sigma_H eps E| / max |j| over nodes with ring >= min_ring.
OhmResidual ohm_residual_classical(const Grid& g, const VectorField& j, const VectorField& E,
                                   const ConductivityTensor& sigma, int hall_sign = 1,
                                   int min_ring = 1);

/// Least-squares split of j onto E (longitudinal) and eps E (Hall).
struct HallProjection {
  double longitudinal = 0.0;  // sum j.E / sum |E|^2
  double hall = 0.0;          // sum j.(eps E) / sum |E|^2
  double longitudinal_fraction = 0.0;
  double hall_fraction = 0.0;
};

HallProjection hall_projection(const Grid& g, const VectorField& j, const VectorField& E,
                               int hall_sign = 1, int min_ring = 1);

// ---------------------------------------------------------------------------
// Simulation configuration
// ---------------------------------------------------------------------------

struct PlaneWave {
  double kx = 0.0;
  double ky = 0.0;
};

struct GaussianPacket {
  double x0 = 0.0;  // physical coordinates; origin at node (0, 0)
  double y0 = 0.0;
  double width = 1.0;
  double kx = 0.0;
  double ky = 0.0;
};

using InitialPsi = std::variant<PlaneWave, GaussianPacket>;

struct ZeroPotential {};

/// A = E tau_gauge, the relaxation-time gauge.
struct UniformE {
  double E1 = 0.0;
  double E2 = 0.0;
  double tau_gauge = 0.0;  // <= 0 selects params.tau
};

enum class GaugeFunctionKind { Random, Bump };

/// A = grad Lambda.
///
/// Random: seeded white noise smoothed by a Gaussian of standard deviation
/// `correlation` (physical length; <= 0 selects the magnetic length), scaled
/// to RMS `amplitude`. Bump: amplitude sin(pi x / W) sin(pi y / H), which
/// vanishes on the boundary.
struct PureGauge {
  GaugeFunctionKind kind = GaugeFunctionKind::Random;
  double amplitude = 1.0;
  double correlation = 0.0;
  std::uint64_t seed = 0;
};

using InitialA = std::variant<ZeroPotential, UniformE, PureGauge>;

enum class SigmaMode { Continuous, Quantized };

struct SimConfig {
  PhysicalParams params;
  int nx = 64;
  int ny = 64;
  double a = 1.0;
  double dt = 0.0;  // <= 0 selects 0.1 mu a^2 / hbar
  int steps = 100;
  std::optional<RegimeKind> regime_override;
  InitialPsi initial_psi = GaussianPacket{};
  InitialA initial_A = ZeroPotential{};
  SigmaMode sigma_mode = SigmaMode::Continuous;
  PsiStepper psi_stepper = PsiStepper::CrankNicolson;
  GaugeStepper gauge_stepper = GaugeStepper::RK4;
  int hall_sign = 1;
  double stability_factor = 0.5;
  RegimeThresholds thresholds;
  std::optional<CurrentDefinition> current_definition;  // default follows the regime
  double s_cs = 1.0;  // action scale for regime diagnostics

  Grid grid() const { return Grid(nx, ny, a); }
  double effective_dt() const;
  /// Throws std::invalid_argument on bad sizes, parameters or a dt above the
  /// stability bound.
  void validate() const;
};

/// Builds the initial lattice state. psi is scaled so that its mean density
/// over the sample area equals params.n.
LatticeState initial_state(const SimConfig& cfg);

/// Gauge function Lambda on the nodes for a PureGauge spec.
RealField gauge_function(const Grid& g, const PureGauge& spec, const PhysicalParams& p);

/// Central-difference gradient, one-sided on the boundary ring.
VectorField lattice_gradient(const Grid& g, const RealField& f);

// ---------------------------------------------------------------------------
// Coupled evolution
// ---------------------------------------------------------------------------

struct StepDiagnostics {
  double t = 0.0;
  double norm = 0.0;
  double S_cs = 0.0;
  double action_ratio = 0.0;
  double ohm_residual = 0.0;
  double hall_fraction = 0.0;
  double longitudinal_fraction = 0.0;
  double identity_residual = 0.0;
};

/// Operator-split evolution: psi with A frozen, then A with psi frozen.
class Simulation {
 public:
  explicit Simulation(SimConfig cfg);

  StepDiagnostics step();

  const SimConfig& config() const { return cfg_; }
  const LatticeState& state() const { return state_; }
  const CurrentField& current() const { return current_; }
  const Regime& regime() const { return regime_; }
  CurrentDefinition definition() const { return definition_; }
  double sigma_H() const { return sigma_H_; }
  /// Conductivity tensor the Ohm residual is measured against.
  const ConductivityTensor& reference_tensor() const { return reference_; }
  double action() const { return action_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  SimConfig cfg_;
  LatticeState state_;
  Regime regime_;
  CurrentDefinition definition_ = CurrentDefinition::WithGaugeTerm;
  double sigma_H_ = 0.0;
  ConductivityTensor reference_;
  CurrentField current_;
  double action_ = 0.0;
  std::vector<std::string> warnings_;
};

struct QuantumRunReport {
  long sigma_H = 0;
  Regime regime;
  /// max |j - sigma_H eps E| / max |j| after the last step.
  OhmResidual hall_residual;
  /// Largest normalized residual over all steps.
  double max_hall_residual = 0.0;
  /// Residual with the opposite eps sign convention, after the last step.
  double flipped_sign_residual = 0.0;
  HallProjection projection;
  double max_identity_residual = 0.0;
  double norm_drift = 0.0;  // relative
  double action = 0.0;
  double action_ratio = 0.0;
  CurrentField current;
  LatticeState final_state;
  std::vector<StepDiagnostics> trace;
  std::vector<std::string> warnings;
};

/// Coupled evolution with quantized sigma_H and the gauge-term current.
/// Throws std::invalid_argument unless cfg.sigma_mode is Quantized and
/// std::domain_error when sigma_H snaps to zero.
QuantumRunReport quantum_run(const SimConfig& cfg);

struct ClassicalRunReport {
  Regime regime;
  ConductivityTensor sigma;
  std::array<double, 2> drift_velocity{};
  std::array<double, 2> wavevector{};
  /// Residual against the Drude tensor.
  OhmResidual residual;
  /// Residual against sigma_L -> sigma_0.
  OhmResidual residual_sigma0;
  /// Hall coefficient read off j - (e^2 n/mu) A with A = E tau.
  double implied_sigma_H = 0.0;
  CurrentField current;
  VectorField E;
  LatticeState state;
  std::vector<std::string> warnings;
};

/// Relaxation-time check of the classical Ohm law: A = E tau with a constant
/// applied E, a drift plane wave whose momentum balances the Lorentz and
/// relaxation forces, and the gauge-free current definition.
/// Requires cfg.initial_A to be UniformE.
ClassicalRunReport classical_gauge_run(const SimConfig& cfg);

/// Steady relaxation-time drift: mu v / tau = e (E + s B eps v), with
/// eps v = (-v_2, v_1) and s = hall_sign. Then n e v is the Drude tensor
/// applied to E with the same sign convention.
std::array<double, 2> drude_drift_velocity(const PhysicalParams& p, std::array<double, 2> E,
                                           int hall_sign = 1);

}  // namespace hallsim
