#include "hallsim/lattice.hpp"

#include <cmath>
#include <stdexcept>

namespace hallsim {

Grid::Grid(int nx_, int ny_, double a_) : nx(nx_), ny(ny_), a(a_) {
  if (nx < 3 || ny < 3) throw std::invalid_argument("grid needs at least 3 nodes per axis");
  if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("lattice spacing must be positive");
}

RealField ddx(const Grid& g, const RealField& f) {
  RealField out(g.size(), 0.0);
  const double inv = 1.0 / (2.0 * g.a);
  for (int j = 1; j < g.ny - 1; ++j) {
    for (int i = 1; i < g.nx - 1; ++i) {
      out[g.index(i, j)] = (f[g.index(i + 1, j)] - f[g.index(i - 1, j)]) * inv;
    }
  }
  return out;
}

RealField ddy(const Grid& g, const RealField& f) {
  RealField out(g.size(), 0.0);
  const double inv = 1.0 / (2.0 * g.a);
  for (int j = 1; j < g.ny - 1; ++j) {
    for (int i = 1; i < g.nx - 1; ++i) {
      out[g.index(i, j)] = (f[g.index(i, j + 1)] - f[g.index(i, j - 1)]) * inv;
    }
  }
  return out;
}

RealField curl(const Grid& g, const VectorField& v) {
  RealField d1v2 = ddx(g, v.y);
  const RealField d2v1 = ddy(g, v.x);
  for (std::size_t k = 0; k < d1v2.size(); ++k) d1v2[k] -= d2v1[k];
  return d1v2;
}

RealField divergence(const Grid& g, const VectorField& v) {
  RealField d1v1 = ddx(g, v.x);
  const RealField d2v2 = ddy(g, v.y);
  for (std::size_t k = 0; k < d1v1.size(); ++k) d1v1[k] += d2v2[k];
  return d1v1;
}

double max_abs(const Grid& g, const RealField& f, int min_ring) {
  double m = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (g.ring(i, j) >= min_ring) m = std::max(m, std::abs(f[g.index(i, j)]));
    }
  }
  return m;
}

double max_norm(const Grid& g, const VectorField& v, int min_ring) {
  double m = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (g.ring(i, j) >= min_ring) {
        const auto k = g.index(i, j);
        m = std::max(m, std::hypot(v.x[k], v.y[k]));
      }
    }
  }
  return m;
}

double mean(const Grid& g, const RealField& f, int min_ring) {
  double sum = 0.0;
  std::size_t count = 0;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (g.ring(i, j) >= min_ring) {
        sum += f[g.index(i, j)];
        ++count;
      }
    }
  }
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

double total_probability(const Grid& g, const ComplexField& psi) {
  double sum = 0.0;
  for (const auto& v : psi) sum += std::norm(v);
  return sum * g.a * g.a;
}

RealField density(const ComplexField& psi) {
  RealField rho(psi.size());
  for (std::size_t k = 0; k < psi.size(); ++k) rho[k] = std::norm(psi[k]);
  return rho;
}

}  // namespace hallsim
