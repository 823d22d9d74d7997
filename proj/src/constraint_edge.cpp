#include "hallsim/constraint_edge.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hallsim {

namespace {

// Interior unknowns (ring >= 1), x-fastest.
std::size_t interior_size(const Grid& g) {
  return static_cast<std::size_t>(g.nx - 2) * static_cast<std::size_t>(g.ny - 2);
}

std::size_t interior_index(const Grid& g, int i, int j) {
  return static_cast<std::size_t>(i - 1) + static_cast<std::size_t>(g.nx - 2) * static_cast<std::size_t>(j - 1);
}

RealField embed(const Grid& g, const std::vector<double>& u) {
  RealField f(g.size(), 0.0);
  for (int j = 1; j < g.ny - 1; ++j)
    for (int i = 1; i < g.nx - 1; ++i) f[g.index(i, j)] = u[interior_index(g, i, j)];
  return f;
}

// Transpose of boundary_vanishing_gradient restricted to the unknowns.
std::vector<double> gradient_transpose(const Grid& g, const VectorField& v) {
  std::vector<double> out(interior_size(g));
  const double inv = 1.0 / (2.0 * g.a);
  for (int j = 1; j < g.ny - 1; ++j) {
    for (int i = 1; i < g.nx - 1; ++i) {
      out[interior_index(g, i, j)] = (v.x[g.index(i - 1, j)] - v.x[g.index(i + 1, j)]) * inv +
                                     (v.y[g.index(i, j - 1)] - v.y[g.index(i, j + 1)]) * inv;
    }
  }
  return out;
}

std::vector<double> normal_operator(const Grid& g, const std::vector<double>& u) {
  return gradient_transpose(g, boundary_vanishing_gradient(g, embed(g, u)));
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm2(const VectorField& v) {
  double s = 0.0;
  for (std::size_t k = 0; k < v.x.size(); ++k) s += v.x[k] * v.x[k] + v.y[k] * v.y[k];
  return std::sqrt(s);
}

}  // namespace

RealField field_strength(const Grid& g, const VectorField& A) {
  RealField f = curl(g, A);
  for (auto& v : f) v = -v;
  return f;
}

ConstraintReport gauss_residual(const LatticeState& s, const PhysicalParams& p, double sigma_H) {
  const Grid& g = s.grid;
  ConstraintReport r;
  const RealField c = curl(g, s.A);
  r.residual_field.assign(g.size(), 0.0);
  double sum = 0.0;
  std::size_t count = 0;
  for (int j = 1; j < g.ny - 1; ++j) {
    for (int i = 1; i < g.nx - 1; ++i) {
      const auto k = g.index(i, j);
      const double v = -sigma_H * c[k] - p.e * std::norm(s.psi[k]);
      r.residual_field[k] = v;
      r.residual_max = std::max(r.residual_max, std::abs(v));
      sum += v;
      ++count;
    }
  }
  r.residual_mean = count ? sum / static_cast<double>(count) : 0.0;

  const double B_bar = mean(g, field_strength(g, s.A));
  if (B_bar != 0.0) r.integrated_sigma = mean(g, density(s.psi)) * p.e / B_bar;

  const double an = norm2(s.A);
  if (an > 0.0) r.pure_gauge_fraction = norm2(helmholtz_split(g, s.A).curl) / an;
  return r;
}

IntegratedConstraint integrated_constraint(const LatticeState& s, const PhysicalParams& p,
                                           double sigma_H) {
  IntegratedConstraint c;
  c.n_bar = mean(s.grid, density(s.psi));
  c.B_bar = mean(s.grid, field_strength(s.grid, s.A));
  if (c.B_bar == 0.0) throw std::domain_error("constraint degenerate: zero mean field");
  c.sigma_implied = c.n_bar * p.e / c.B_bar;
  c.deviation = sigma_H != 0.0 ? std::abs(c.sigma_implied - sigma_H) / std::abs(sigma_H)
                               : std::abs(c.sigma_implied);
  return c;
}

VectorField symmetric_gauge(const Grid& g, double B0) {
  VectorField A(g.size());
  const double xc = 0.5 * g.width();
  const double yc = 0.5 * g.height();
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const auto k = g.index(i, j);
      A.x[k] = 0.5 * B0 * (g.y(j) - yc);
      A.y[k] = -0.5 * B0 * (g.x(i) - xc);
    }
  return A;
}

VectorField boundary_vanishing_gradient(const Grid& g, const RealField& lambda) {
  VectorField out(g.size());
  const double inv = 1.0 / (2.0 * g.a);
  auto at = [&](int i, int j) {
    if (i <= 0 || j <= 0 || i >= g.nx - 1 || j >= g.ny - 1) return 0.0;
    return lambda[g.index(i, j)];
  };
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const auto k = g.index(i, j);
      out.x[k] = (at(i + 1, j) - at(i - 1, j)) * inv;
      out.y[k] = (at(i, j + 1) - at(i, j - 1)) * inv;
    }
  return out;
}

HelmholtzSplit helmholtz_split(const Grid& g, const VectorField& A, const HelmholtzOptions& opts) {
  if (g.nx < 8 || g.ny < 8) throw std::invalid_argument("lattice must be at least 8x8");
  const long cap = opts.max_iterations > 0 ? opts.max_iterations : 10L * g.nx * g.ny;

  const std::vector<double> b = gradient_transpose(g, A);
  const double bnorm = std::sqrt(dot(b, b));
  std::vector<double> x(b.size(), 0.0);
  HelmholtzSplit out;

  if (bnorm > 0.0) {
    std::vector<double> r = b;
    std::vector<double> d = r;
    double rr = dot(r, r);
    long it = 0;
    while (std::sqrt(rr) > opts.tolerance * bnorm) {
      if (it >= cap) throw std::runtime_error("helmholtz solve did not converge");
      const std::vector<double> q = normal_operator(g, d);
      const double alpha = rr / dot(d, q);
      for (std::size_t k = 0; k < x.size(); ++k) {
        x[k] += alpha * d[k];
        r[k] -= alpha * q[k];
      }
      const double rr_new = dot(r, r);
      const double beta = rr_new / rr;
      for (std::size_t k = 0; k < d.size(); ++k) d[k] = r[k] + beta * d[k];
      rr = rr_new;
      ++it;
    }
    out.iterations = it;
    out.relative_residual = std::sqrt(rr) / bnorm;
  }

  out.lambda = embed(g, x);
  out.gradient = boundary_vanishing_gradient(g, out.lambda);
  out.curl = VectorField(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    out.curl.x[k] = A.x[k] - out.gradient.x[k];
    out.curl.y[k] = A.y[k] - out.gradient.y[k];
  }
  return out;
}

EdgeProfile edge_profile(const CurrentField& j, const Grid& g, const PhysicalParams& p) {
  EdgeProfile prof;
  prof.l_B = magnetic_length(p);

  const int rings = g.max_ring() + 1;
  std::vector<double> mass(static_cast<std::size_t>(rings), 0.0);
  std::vector<double> count(static_cast<std::size_t>(rings), 0.0);
  double total = 0.0;
  for (int y = 0; y < g.ny; ++y)
    for (int x = 0; x < g.nx; ++x) {
      const auto k = g.index(x, y);
      const auto d = static_cast<std::size_t>(g.ring(x, y));
      const double v = std::hypot(j.j.x[k], j.j.y[k]);
      mass[d] += v;
      count[d] += 1.0;
      total += v;
    }
  if (!(total > 0.0)) throw std::invalid_argument("no current to profile");

  prof.distances.resize(mass.size());
  prof.current_mass.resize(mass.size());
  std::vector<double> per_node(mass.size());
  for (std::size_t d = 0; d < mass.size(); ++d) {
    prof.distances[d] = static_cast<double>(d) * g.a;
    prof.current_mass[d] = mass[d] / total;
    per_node[d] = mass[d] / count[d];
  }

  // Least squares on log(per-node |j|) from the peak down one decade.
  const auto peak = static_cast<std::size_t>(
      std::distance(per_node.begin(), std::max_element(per_node.begin(), per_node.end())));
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t d = peak; d < per_node.size(); ++d) {
    if (!(per_node[d] >= 0.1 * per_node[peak]) || per_node[d] <= 0.0) break;
    xs.push_back(prof.distances[d]);
    ys.push_back(std::log(per_node[d]));
  }
  if (xs.size() < 2) {
    prof.fitted_width = 0.0;
    return prof;
  }
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxy += (xs[k] - mx) * (ys[k] - my);
    sxx += (xs[k] - mx) * (xs[k] - mx);
  }
  const double slope = sxy / sxx;
  if (slope < 0.0) {
    prof.fitted_width = -1.0 / slope;
  } else {
    prof.decays = false;
    prof.fitted_width = prof.distances.back();
  }
  return prof;
}

EdgeProfile edge_profile(const CurrentField& j, const LatticeState& s, const PhysicalParams& p) {
  return edge_profile(j, s.grid, p);
}

double edge_current_fraction(const EdgeProfile& profile) {
  double f = 0.0;
  const double cut = profile.l_B * (1.0 + 1e-12);
  for (std::size_t d = 0; d < profile.distances.size(); ++d)
    if (profile.distances[d] <= cut) f += profile.current_mass[d];
  return std::min(f, 1.0);
}

BreakdownResult breakdown_check(const LatticeState& s, const PhysicalParams& p, double sigma_H,
                                double threshold) {
  BreakdownResult b;
  const double n_bar = mean(s.grid, density(s.psi));
  if (n_bar == 0.0) {
    b.vacuous = true;
    return b;
  }
  const RealField c = curl(s.grid, s.A);
  double rmax = 0.0;
  for (int j = 1; j < s.grid.ny - 1; ++j)
    for (int i = 1; i < s.grid.nx - 1; ++i) {
      const auto k = s.grid.index(i, j);
      rmax = std::max(rmax, std::abs(-sigma_H * c[k] - p.e * std::norm(s.psi[k])));
    }
  b.ratio = rmax / (p.e * n_bar);
  b.breakdown = b.ratio > threshold;
  return b;
}

EdgeRunReport edge_run(const SimConfig& cfg, double breakdown_threshold) {
  Simulation sim(cfg);
  for (int n = 0; n < cfg.steps; ++n) sim.step();
  EdgeRunReport rep;
  const PhysicalParams& p = cfg.params;
  rep.regime = sim.regime();
  rep.sigma_H = sim.sigma_H();
  rep.definition = sim.definition();
  rep.warnings = sim.warnings();
  rep.profile = edge_profile(sim.current(), sim.state(), p);
  rep.edge_fraction = edge_current_fraction(rep.profile);
  rep.constraint = gauss_residual(sim.state(), p, sim.sigma_H());
  rep.breakdown = breakdown_check(sim.state(), p, sim.sigma_H(), breakdown_threshold);
  return rep;
}

}  // namespace hallsim
