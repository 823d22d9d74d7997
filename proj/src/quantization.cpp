#include "hallsim/quantization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace hallsim {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

long snap_sigma_H(double sigma_continuous) {
  if (!std::isfinite(sigma_continuous)) {
    throw std::invalid_argument("snap_sigma_H: non-finite conductivity");
  }
  if (sigma_continuous <= 0.0) return 0;
  return static_cast<long>(std::floor(sigma_continuous + 0.5));
}

double EnvelopeSpec::operator()(double R) const {
  const double x = (R - 1.0) / width;
  switch (kind) {
    case Envelope::Gaussian:
      return std::exp(-0.5 * x * x);
    case Envelope::Bump:
      return std::abs(x) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - x * x)) : 0.0;
  }
  return 0.0;
}

std::vector<double> uniform_phi_grid(std::size_t points) {
  if (points < 2) throw std::invalid_argument("phi grid needs at least two points");
  std::vector<double> phi(points);
  for (std::size_t i = 0; i < points; ++i) {
    phi[i] = two_pi * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  phi.back() = two_pi;
  return phi;
}

WavefunctionalGrid build_wavefunctional(double sigma_H, double l, std::vector<double> R_grid,
                                        std::vector<double> phi_grid, EnvelopeSpec envelope) {
  if (R_grid.empty() || phi_grid.empty()) throw std::invalid_argument("empty wavefunctional grid");
  WavefunctionalGrid w;
  w.R_values = std::move(R_grid);
  w.phi_values = std::move(phi_grid);
  w.sigma_H = sigma_H;
  w.l = l;
  w.envelope = envelope;
  w.samples.resize(w.R_values.size() * w.phi_values.size());
  for (std::size_t r = 0; r < w.R_values.size(); ++r) {
    const double F = envelope(w.R_values[r]);
    for (std::size_t p = 0; p < w.phi_values.size(); ++p) {
      w.samples[r * w.phi_values.size() + p] = F * std::polar(1.0, sigma_H * l * w.phi_values[p]);
    }
  }
  return w;
}

double angular_momentum_residual(const WavefunctionalGrid& w, Differentiation mode) {
  const std::size_t np = w.phi_values.size();
  if (np < 16) throw std::invalid_argument("angular residual needs at least 16 phi points");
  if (w.samples.size() != np * w.R_values.size()) throw std::invalid_argument("degenerate grid");

  // Distinct points on the circle: the last column repeats phi = 0.
  const std::size_t m = np - 1;
  const double dphi = w.phi_values[1] - w.phi_values[0];
  const double eigenvalue = w.sigma_H * w.l;

  double max_res = 0.0;
  double max_psi = 0.0;
  for (std::size_t r = 0; r < w.R_values.size(); ++r) {
    for (std::size_t p = 0; p < m; ++p) {
      const cplx psi = w.at(r, p);
      cplx dpsi;
      if (mode == Differentiation::Exact) {
        dpsi = cplx(0.0, eigenvalue) * psi;
      } else {
        dpsi = (w.at(r, (p + 1) % m) - w.at(r, (p + m - 1) % m)) / (2.0 * dphi);
      }
      const cplx L_psi = cplx(0.0, -1.0) * dpsi;
      max_res = std::max(max_res, std::abs(L_psi - eigenvalue * psi));
      max_psi = std::max(max_psi, std::abs(psi));
    }
  }
  if (max_psi == 0.0) throw std::invalid_argument("degenerate grid: wavefunctional vanishes");
  return max_res / max_psi;
}

bool single_valuedness_check(double sigma_H, double l) {
  return std::abs(std::polar(1.0, two_pi * sigma_H * l) - 1.0) < 1e-9;
}

double SingleModePair::hbar_eff() const { return 4.0 * std::numbers::pi * hbar / sigma_H; }

std::vector<double> SingleModePair::grid() const {
  if (!(h > 0.0) || !(extent > 0.0)) throw std::invalid_argument("single-mode grid needs h > 0");
  const auto n = static_cast<std::size_t>(std::llround(2.0 * extent / h)) + 1;
  std::vector<double> A(n);
  for (std::size_t i = 0; i < n; ++i) A[i] = -extent + h * static_cast<double>(i);
  return A;
}

TestFunction gaussian_test_function(double centre, double width) {
  return {[=](double x) {
            const double u = (x - centre) / width;
            return std::exp(-0.5 * u * u);
          },
          [=](double x) {
            const double u = (x - centre) / width;
            return -u / width * std::exp(-0.5 * u * u);
          }};
}

TestFunction bump_test_function(double centre, double radius) {
  return {[=](double x) {
            const double u = (x - centre) / radius;
            return std::abs(u) < 1.0 ? std::exp(-1.0 / (1.0 - u * u)) : 0.0;
          },
          [=](double x) {
            const double u = (x - centre) / radius;
            if (std::abs(u) >= 1.0) return 0.0;
            const double q = 1.0 - u * u;
            return std::exp(-1.0 / q) * (-2.0 * u / (q * q)) / radius;
          }};
}

TestFunction polynomial_test_function(int power) {
  return {[=](double x) { return std::pow(x, power); },
          [=](double x) { return power == 0 ? 0.0 : power * std::pow(x, power - 1); }};
}

CommutatorReport commutator_residual(const SingleModePair& pair,
                                     const std::vector<TestFunction>& test_functions,
                                     Differentiation mode) {
  if (pair.sigma_H == 0.0) {
    throw std::domain_error("commutator undefined: quantization parameter vanishes");
  }
  if (test_functions.empty()) throw std::invalid_argument("no test functions");

  const std::vector<double> A = pair.grid();
  const std::size_t n = A.size();
  constexpr std::size_t margin = 4;
  if (n < 2 * margin + 3) throw std::invalid_argument("single-mode grid too small");

  const double hb = pair.hbar_eff();
  const cplx minus_i_hb(0.0, -hb);
  const double h = pair.h;

  CommutatorReport report;
  report.min_single = std::numeric_limits<double>::infinity();
  double constant_sum = 0.0;

  std::vector<double> f(n), Af(n), df(n), dAf(n);
  for (const auto& tf : test_functions) {
    for (std::size_t i = 0; i < n; ++i) {
      f[i] = tf.value(A[i]);
      Af[i] = A[i] * f[i];
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (mode == Differentiation::Exact) {
        df[i] = tf.derivative(A[i]);
        dAf[i] = f[i] + A[i] * df[i];
      } else {
        df[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
        dAf[i] = (Af[i + 1] - Af[i - 1]) / (2.0 * h);
      }
    }

    double max_res = 0.0;
    double max_f = 0.0;
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = margin; i + margin < n; ++i) {
      // A1 (A2 f) - A2 (A1 f)
      const cplx comm = A[i] * (minus_i_hb * df[i]) - minus_i_hb * dAf[i];
      const cplx expected(0.0, hb * f[i]);
      max_res = std::max(max_res, std::abs(comm - expected));
      max_f = std::max(max_f, std::abs(f[i]));
      num += f[i] * comm.imag();
      den += f[i] * f[i];
    }
    if (max_f == 0.0 || den == 0.0) throw std::invalid_argument("test function vanishes on grid");
    const double single = max_res / max_f;
    report.residual = std::max(report.residual, single);
    report.max_single = std::max(report.max_single, single);
    report.min_single = std::min(report.min_single, single);
    constant_sum += num / den;
  }
  report.measured_constant = constant_sum / static_cast<double>(test_functions.size());
  return report;
}

}  // namespace hallsim
