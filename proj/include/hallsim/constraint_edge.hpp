#pragma once

#include <vector>

#include "hallsim/dynamics.hpp"
#include "hallsim/params.hpp"
#include "hallsim/state.hpp"

namespace hallsim {

/// Gauss-law bookkeeping for one snapshot.
struct ConstraintReport {
  /// -sigma_H eps^{mn} d_m A_n - e |psi|^2 on interior nodes, 0 on the boundary.
  RealField residual_field;
  double residual_max = 0.0;
  double residual_mean = 0.0;
  /// n_bar e / B_bar from interior means; 0 when B_bar vanishes.
  double integrated_sigma = 0.0;
  /// |curl part of A| / |A| (2-norms); 0 when A vanishes.
  double pure_gauge_fraction = 0.0;
};

ConstraintReport gauss_residual(const LatticeState& s, const PhysicalParams& p, double sigma_H);

/// eps_{nm} d_m A_n = d_2 A_1 - d_1 A_2, the field strength entering the
/// integrated constraint.
RealField field_strength(const Grid& g, const VectorField& A);

struct IntegratedConstraint {
  double n_bar = 0.0;
  double B_bar = 0.0;
  double sigma_implied = 0.0;
  double deviation = 0.0;
};

/// Interior means of |psi|^2 and the field strength. Throws std::domain_error
/// when B_bar = 0.
IntegratedConstraint integrated_constraint(const LatticeState& s, const PhysicalParams& p,
                                           double sigma_H);

/// A = (B0 (y - yc) / 2, -B0 (x - xc) / 2) about the sample centre, so the
/// field strength is B0 everywhere.
VectorField symmetric_gauge(const Grid& g, double B0);

struct HelmholtzOptions {
  double tolerance = 1e-10;  // relative residual of the normal equations
  long max_iterations = 0;   // <= 0 selects 10 nx ny
};

struct HelmholtzSplit {
  RealField lambda;      // zero on the boundary ring
  VectorField gradient;  // d lambda
  VectorField curl;      // A - d lambda
  long iterations = 0;
  double relative_residual = 0.0;
};

/// Least-squares gradient fit: minimise |A - G lambda| over lambda vanishing
/// on the boundary, where G is the central difference with lambda = 0 on and
/// outside the boundary. Solved by conjugate gradients on G^T G lambda = G^T A,
/// i.e. the discrete Poisson problem lap(lambda) = div(A) with the Laplacian
/// and divergence consistent with G. Throws std::runtime_error when the
/// iteration cap is reached.
HelmholtzSplit helmholtz_split(const Grid& g, const VectorField& A, const HelmholtzOptions& opts = {});

/// G lambda for the operator used by helmholtz_split.
VectorField boundary_vanishing_gradient(const Grid& g, const RealField& lambda);

struct EdgeProfile {
  std::vector<double> distances;     // ring index * a
  std::vector<double> current_mass;  // fraction of sum |j| per ring
  double fitted_width = 0.0;
  bool decays = true;  // false when the fitted slope is not negative
  double l_B = 0.0;
};

/// Bins |j| by Chebyshev distance to the boundary and fits the log of the mean
/// |j| per node against distance over the first decade of decay from the peak
/// ring. Throws std::domain_error when B = 0 and std::invalid_argument when the
/// current vanishes everywhere.
EdgeProfile edge_profile(const CurrentField& j, const Grid& g, const PhysicalParams& p);
EdgeProfile edge_profile(const CurrentField& j, const LatticeState& s, const PhysicalParams& p);

/// Sum of current_mass over bins with distance <= l_B.
double edge_current_fraction(const EdgeProfile& profile);

struct BreakdownResult {
  bool breakdown = false;
  bool vacuous = false;  // n_bar = 0
  double ratio = 0.0;    // max |residual| / (e n_bar)
};

BreakdownResult breakdown_check(const LatticeState& s, const PhysicalParams& p, double sigma_H,
                                double threshold = 0.1);

struct EdgeRunReport {
  EdgeProfile profile;
  double edge_fraction = 0.0;
  ConstraintReport constraint;
  BreakdownResult breakdown;
  Regime regime;
  double sigma_H = 0.0;
  CurrentDefinition definition = CurrentDefinition::WithGaugeTerm;
  std::vector<std::string> warnings;
};

/// Runs the coupled evolution for cfg.steps and profiles the final current.
EdgeRunReport edge_run(const SimConfig& cfg, double breakdown_threshold = 0.1);

}  // namespace hallsim
