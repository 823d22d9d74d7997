#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <vector>

namespace hallsim {

using cplx = std::complex<double>;
using RealField = std::vector<double>;
using ComplexField = std::vector<cplx>;

/// Rectangular node lattice with spacing `a`. Storage is row-major with x
/// fastest: node (i, j) lives at i + nx * j.
struct Grid {
  int nx = 0;
  int ny = 0;
  double a = 1.0;

  Grid() = default;
  Grid(int nx_, int ny_, double a_);

  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) + static_cast<std::size_t>(nx) * static_cast<std::size_t>(j);
  }
  double x(int i) const { return a * i; }
  double y(int j) const { return a * j; }
  double width() const { return a * (nx - 1); }
  double height() const { return a * (ny - 1); }
  double area() const { return width() * height(); }

  /// Chebyshev (ring) distance to the boundary in lattice units.
  int ring(int i, int j) const { return std::min(std::min(i, j), std::min(nx - 1 - i, ny - 1 - j)); }
  bool on_boundary(int i, int j) const { return ring(i, j) == 0; }
  int max_ring() const { return (std::min(nx, ny) - 1) / 2; }
};

struct VectorField {
  RealField x;
  RealField y;

  VectorField() = default;
  explicit VectorField(std::size_t n) : x(n, 0.0), y(n, 0.0) {}
  VectorField(RealField x_, RealField y_) : x(std::move(x_)), y(std::move(y_)) {}
};

/// Central-difference derivatives on interior nodes; boundary nodes get 0.
RealField ddx(const Grid& g, const RealField& f);
RealField ddy(const Grid& g, const RealField& f);

/// d1 v2 - d2 v1 on interior nodes.
RealField curl(const Grid& g, const VectorField& v);
/// d1 v1 + d2 v2 on interior nodes.
RealField divergence(const Grid& g, const VectorField& v);

/// Max |f| over nodes whose ring index is at least `min_ring`.
double max_abs(const Grid& g, const RealField& f, int min_ring = 0);
/// Max over nodes of the Euclidean length of v.
double max_norm(const Grid& g, const VectorField& v, int min_ring = 0);
/// Mean of f over nodes whose ring index is at least `min_ring`.
double mean(const Grid& g, const RealField& f, int min_ring = 1);

/// Sum |psi|^2 a^2 over the lattice.
double total_probability(const Grid& g, const ComplexField& psi);

RealField density(const ComplexField& psi);

}  // namespace hallsim
