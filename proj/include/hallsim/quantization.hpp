#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace hallsim {

using cplx = std::complex<double>;

/// Nearest non-negative integer, ties rounding up. Negative input clamps to 0;
/// NaN and infinities throw std::invalid_argument.
long snap_sigma_H(double sigma_continuous);

/// Radial profile F(R) of the wavefunctional. Both are centred on R = 1.
enum class Envelope { Gaussian, Bump };

struct EnvelopeSpec {
  Envelope kind = Envelope::Gaussian;
  double width = 0.25;

  double operator()(double R) const;
};

/// Psi(R, phi) = F(R) exp(i sigma_H l phi) sampled on a polar grid, hbar = 1.
///
/// The phi grid is uniform and contains both 0 and 2 pi, so for non-integer
/// sigma_H l the two end columns differ.
struct WavefunctionalGrid {
  std::vector<double> R_values;
  std::vector<double> phi_values;
  std::vector<cplx> samples;  // row-major, phi fastest
  double sigma_H = 0.0;
  double l = 1.0;
  EnvelopeSpec envelope;

  cplx at(std::size_t r, std::size_t p) const { return samples[r * phi_values.size() + p]; }
};

std::vector<double> uniform_phi_grid(std::size_t points);

WavefunctionalGrid build_wavefunctional(double sigma_H, double l, std::vector<double> R_grid,
                                        std::vector<double> phi_grid, EnvelopeSpec envelope = {});

enum class Differentiation { CentralDifference, Exact };

/// max |L Psi - sigma_H l Psi| / max |Psi| with L = -i d/dphi.
///
/// Central differences wrap periodically over the distinct points of the phi
/// circle (the 2 pi column duplicates phi = 0). Needs at least 16 phi points.
double angular_momentum_residual(const WavefunctionalGrid& w,
                                 Differentiation mode = Differentiation::CentralDifference);

/// |exp(2 pi i sigma_H l) - 1| < 1e-9
bool single_valuedness_check(double sigma_H, double l = 1.0);

/// One conjugate pair (A1, A2) on a uniform grid of the gauge mode A1.
///
/// A1 acts by multiplication and A2 = -i hbar_eff d/dA1, so that
/// [A1, A2] = i hbar_eff with hbar_eff = 4 pi hbar / sigma_H.
struct SingleModePair {
  double sigma_H = 1.0;
  double hbar = 1.0;
  double h = 1e-3;       // grid spacing
  double extent = 8.0;   // grid covers [-extent, extent]

  double hbar_eff() const;
  std::vector<double> grid() const;
};

struct TestFunction {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
};

TestFunction gaussian_test_function(double centre = 0.0, double width = 1.0);
TestFunction bump_test_function(double centre = 0.0, double radius = 3.0);
TestFunction polynomial_test_function(int power);

struct CommutatorReport {
  /// max over test functions of ||[A1,A2] f - i hbar_eff f||_inf / ||f||_inf
  double residual = 0.0;
  /// Im <f, [A1,A2] f> / <f, f>, averaged over the test functions.
  double measured_constant = 0.0;
  /// Largest and smallest single-function residuals.
  double max_single = 0.0;
  double min_single = 0.0;
};

/// Evaluates the commutator away from the grid ends (a margin of 4 nodes).
/// Throws std::domain_error when sigma_H = 0.
CommutatorReport commutator_residual(const SingleModePair& pair,
                                     const std::vector<TestFunction>& test_functions,
                                     Differentiation mode = Differentiation::CentralDifference);

}  // namespace hallsim
