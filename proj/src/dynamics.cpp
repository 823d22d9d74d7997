#include "hallsim/dynamics.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>
#include <Eigen/Sparse>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "hallsim/constraint_edge.hpp"
#include "hallsim/quantization.hpp"

namespace hallsim {

namespace {

using SpMat = Eigen::SparseMatrix<cplx>;
using CVec = Eigen::VectorXcd;

constexpr cplx I{0.0, 1.0};

// Interior unknowns are numbered x-fastest over nodes with ring >= 1.
struct InteriorMap {
  int mx;
  int my;
  explicit InteriorMap(const Grid& g) : mx(g.nx - 2), my(g.ny - 2) {}
  int size() const { return mx * my; }
  int operator()(int i, int j) const { return (i - 1) + mx * (j - 1); }
};

SpMat hamiltonian_matrix(const Grid& g, const VectorField& A, const PhysicalParams& p) {
  const InteriorMap map(g);
  const double kin = p.hbar * p.hbar / (2.0 * p.mu * g.a * g.a);
  const double mix = p.hbar * p.e / (4.0 * p.mu * g.a);
  const double dia = p.e * p.e / (2.0 * p.mu);

  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(static_cast<std::size_t>(map.size()) * 5);
  for (int j = 1; j < g.ny - 1; ++j) {
    for (int i = 1; i < g.nx - 1; ++i) {
      const auto k = g.index(i, j);
      const int row = map(i, j);
      const double a2 = A.x[k] * A.x[k] + A.y[k] * A.y[k];
      trip.emplace_back(row, row, 4.0 * kin + dia * a2);
      // Neighbour couplings; the Dirichlet ring drops out.
      if (i + 1 < g.nx - 1) {
        trip.emplace_back(row, map(i + 1, j), -kin + I * mix * (A.x[k] + A.x[g.index(i + 1, j)]));
      }
      if (i - 1 > 0) {
        trip.emplace_back(row, map(i - 1, j), -kin - I * mix * (A.x[k] + A.x[g.index(i - 1, j)]));
      }
      if (j + 1 < g.ny - 1) {
        trip.emplace_back(row, map(i, j + 1), -kin + I * mix * (A.y[k] + A.y[g.index(i, j + 1)]));
      }
      if (j - 1 > 0) {
        trip.emplace_back(row, map(i, j - 1), -kin - I * mix * (A.y[k] + A.y[g.index(i, j - 1)]));
      }
    }
  }
  SpMat H(map.size(), map.size());
  H.setFromTriplets(trip.begin(), trip.end());
  return H;
}

CVec gather(const Grid& g, const ComplexField& psi) {
  const InteriorMap map(g);
  CVec v(map.size());
  for (int j = 1; j < g.ny - 1; ++j)
    for (int i = 1; i < g.nx - 1; ++i) v[map(i, j)] = psi[g.index(i, j)];
  return v;
}

void scatter(const Grid& g, const CVec& v, ComplexField& psi) {
  const InteriorMap map(g);
  for (int j = 1; j < g.ny - 1; ++j)
    for (int i = 1; i < g.nx - 1; ++i) psi[g.index(i, j)] = v[map(i, j)];
}

VectorField axpy(const VectorField& x, double alpha, const VectorField& y) {
  VectorField out(x.x.size());
  for (std::size_t k = 0; k < x.x.size(); ++k) {
    out.x[k] = x.x[k] + alpha * y.x[k];
    out.y[k] = x.y[k] + alpha * y.y[k];
  }
  return out;
}

VectorField gauge_slope(const GaugeSource& src, const VectorField& A, double london, double sigma_H,
                        int s) {
  VectorField j = src.current(A);
  VectorField out(A.x.size());
  for (std::size_t k = 0; k < A.x.size(); ++k) {
    out.x[k] = -s * (j.y[k] - london * A.y[k]) / sigma_H;
    out.y[k] = s * (j.x[k] - london * A.x[k]) / sigma_H;
  }
  return out;
}

void check_sign(int hall_sign) {
  if (hall_sign != 1 && hall_sign != -1) throw std::invalid_argument("hall_sign must be +1 or -1");
}

double mean_density(const Grid& g, const ComplexField& psi) {
  return total_probability(g, psi) / g.area();
}

void set_interior(const Grid& g, ComplexField& psi, auto&& value) {
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      psi[g.index(i, j)] = g.on_boundary(i, j) ? cplx{0.0, 0.0} : value(g.x(i), g.y(j));
    }
  }
}

std::vector<double> gaussian_kernel(double sigma_cells) {
  const int r = std::max(1, static_cast<int>(std::ceil(4.0 * sigma_cells)));
  std::vector<double> w(static_cast<std::size_t>(2 * r + 1));
  double sum = 0.0;
  for (int d = -r; d <= r; ++d) {
    const double v = std::exp(-0.5 * d * d / (sigma_cells * sigma_cells));
    w[static_cast<std::size_t>(d + r)] = v;
    sum += v;
  }
  for (auto& v : w) v /= sum;
  return w;
}

}  // namespace

// ---------------------------------------------------------------------------

CurrentField current_density(const Grid& g, const ComplexField& psi, const VectorField& A,
                             const PhysicalParams& p, CurrentDefinition definition) {
  CurrentField out{VectorField(g.size()), definition};
  const double para = p.e * p.hbar / p.mu;
  const double dia = definition == CurrentDefinition::WithGaugeTerm ? p.e * p.e / p.mu : 0.0;
  const double inv = 1.0 / (2.0 * g.a);
  for (int j = 1; j < g.ny - 1; ++j) {
    for (int i = 1; i < g.nx - 1; ++i) {
      const auto k = g.index(i, j);
      const cplx dx = (psi[g.index(i + 1, j)] - psi[g.index(i - 1, j)]) * inv;
      const cplx dy = (psi[g.index(i, j + 1)] - psi[g.index(i, j - 1)]) * inv;
      const cplx c = std::conj(psi[k]);
      const double rho = std::norm(psi[k]);
      out.j.x[k] = para * (c * dx).imag() - dia * A.x[k] * rho;
      out.j.y[k] = para * (c * dy).imag() - dia * A.y[k] * rho;
    }
  }
  return out;
}

CurrentField current_density(const LatticeState& s, const PhysicalParams& p,
                             CurrentDefinition definition) {
  return current_density(s.grid, s.psi, s.A, p, definition);
}

VectorField hall_rotate(const VectorField& v, int hall_sign) {
  VectorField out(v.x.size());
  for (std::size_t k = 0; k < v.x.size(); ++k) {
    out.x[k] = -hall_sign * v.y[k];
    out.y[k] = hall_sign * v.x[k];
  }
  return out;
}

// ---------------------------------------------------------------------------

double stability_limit(const Grid& g, const PhysicalParams& p, double stability_factor) {
  return stability_factor * p.mu * g.a * g.a / p.hbar;
}

ComplexField apply_hamiltonian(const Grid& g, const ComplexField& psi, const VectorField& A,
                               const PhysicalParams& p) {
  const SpMat H = hamiltonian_matrix(g, A, p);
  ComplexField out(g.size(), cplx{0.0, 0.0});
  scatter(g, H * gather(g, psi), out);
  return out;
}

void step_psi(LatticeState& s, const PhysicalParams& p, double dt, const PsiStepOptions& opts) {
  const Grid& g = s.grid;
  const double limit = stability_limit(g, p, opts.stability_factor);
  if (!(dt > 0.0) || dt > limit * (1.0 + 1e-12)) {
    throw std::invalid_argument("time step violates the stability bound dt <= " + std::to_string(limit));
  }
  const SpMat H = hamiltonian_matrix(g, s.A, p);
  const CVec psi = gather(g, s.psi);
  CVec next;

  if (opts.stepper == PsiStepper::CrankNicolson) {
    const cplx half = I * (0.5 * dt / p.hbar);
    SpMat Id(H.rows(), H.cols());
    Id.setIdentity();
    const SpMat plus = Id + half * H;
    const CVec rhs = psi - half * (H * psi);
    Eigen::BiCGSTAB<SpMat, Eigen::DiagonalPreconditioner<cplx>> solver;
    solver.setTolerance(opts.solver_tolerance);
    solver.setMaxIterations(1000);
    solver.compute(plus);
    next = solver.solveWithGuess(rhs, psi);
    if (solver.info() != Eigen::Success) {
      Eigen::SparseLU<SpMat> lu;
      lu.compute(plus);
      if (lu.info() != Eigen::Success) throw std::runtime_error("Crank-Nicolson factorization failed");
      next = lu.solve(rhs);
    }
  } else {
    const cplx f = -I / p.hbar;
    const CVec k1 = f * (H * psi);
    const CVec k2 = f * (H * (psi + 0.5 * dt * k1));
    const CVec k3 = f * (H * (psi + 0.5 * dt * k2));
    const CVec k4 = f * (H * (psi + dt * k3));
    next = psi + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  scatter(g, next, s.psi);
}

// ---------------------------------------------------------------------------

VectorField GaugeSource::current(const VectorField& A) const {
  VectorField out(A.x.size());
  for (std::size_t k = 0; k < A.x.size(); ++k) {
    out.x[k] = paramagnetic.x[k] - diamagnetic_weight * density[k] * A.x[k];
    out.y[k] = paramagnetic.y[k] - diamagnetic_weight * density[k] * A.y[k];
  }
  return out;
}

GaugeSource gauge_source(const LatticeState& s, const PhysicalParams& p, CurrentDefinition definition) {
  GaugeSource src;
  src.paramagnetic = current_density(s.grid, s.psi, s.A, p, CurrentDefinition::Free).j;
  src.density = density(s.psi);
  src.diamagnetic_weight = definition == CurrentDefinition::WithGaugeTerm ? p.e * p.e / p.mu : 0.0;
  src.mean_density = mean_density(s.grid, s.psi);
  return src;
}

GaugeSource fixed_current_source(const CurrentField& j, double mean_density) {
  GaugeSource src;
  src.paramagnetic = j.j;
  src.density.assign(j.j.x.size(), 0.0);
  src.mean_density = mean_density;
  return src;
}

GaugeStepResult step_gauge(LatticeState& s, const GaugeSource& source, const PhysicalParams& p,
                           double sigma_H, double dt, GaugeStepper stepper, int hall_sign) {
  check_sign(hall_sign);
  if (sigma_H == 0.0) throw std::domain_error("Chern-Simons kinetic term degenerate");
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");

  GaugeStepResult r;
  r.london = p.e * p.e * source.mean_density / p.mu;
  const VectorField& A0 = s.A;

  // The right-hand side is affine in A, so every stepper's combined slope is
  // the slope evaluated at the matching combination of stage potentials.
  if (stepper == GaugeStepper::Euler) {
    r.A_eff = A0;
    r.slope = gauge_slope(source, A0, r.london, sigma_H, hall_sign);
  } else {
    const VectorField k1 = gauge_slope(source, A0, r.london, sigma_H, hall_sign);
    const VectorField A2 = axpy(A0, 0.5 * dt, k1);
    const VectorField k2 = gauge_slope(source, A2, r.london, sigma_H, hall_sign);
    const VectorField A3 = axpy(A0, 0.5 * dt, k2);
    const VectorField k3 = gauge_slope(source, A3, r.london, sigma_H, hall_sign);
    const VectorField A4 = axpy(A0, dt, k3);
    const VectorField k4 = gauge_slope(source, A4, r.london, sigma_H, hall_sign);
    const std::size_t n = A0.x.size();
    r.slope = VectorField(n);
    r.A_eff = VectorField(n);
    for (std::size_t k = 0; k < n; ++k) {
      r.slope.x[k] = (k1.x[k] + 2.0 * k2.x[k] + 2.0 * k3.x[k] + k4.x[k]) / 6.0;
      r.slope.y[k] = (k1.y[k] + 2.0 * k2.y[k] + 2.0 * k3.y[k] + k4.y[k]) / 6.0;
      r.A_eff.x[k] = (A0.x[k] + 2.0 * A2.x[k] + 2.0 * A3.x[k] + A4.x[k]) / 6.0;
      r.A_eff.y[k] = (A0.y[k] + 2.0 * A2.y[k] + 2.0 * A3.y[k] + A4.y[k]) / 6.0;
    }
  }
  r.j_eff = source.current(r.A_eff);

  s.A = axpy(A0, dt, r.slope);
  for (std::size_t k = 0; k < s.E.x.size(); ++k) {
    s.E.x[k] = -r.slope.x[k];
    s.E.y[k] = -r.slope.y[k];
  }
  return r;
}

double gauge_step_identity_residual(const GaugeStepResult& r, double sigma_H, int hall_sign) {
  // j - k A = sigma_H eps E with E = -slope.
  const VectorField rot = hall_rotate(r.slope, hall_sign);
  double m = 0.0;
  for (std::size_t k = 0; k < rot.x.size(); ++k) {
    m = std::max(m, std::abs(r.j_eff.x[k] - r.london * r.A_eff.x[k] + sigma_H * rot.x[k]));
    m = std::max(m, std::abs(r.j_eff.y[k] - r.london * r.A_eff.y[k] + sigma_H * rot.y[k]));
  }
  return m;
}

// ---------------------------------------------------------------------------

double chern_simons_increment(const Grid& g, const VectorField& A_old, const VectorField& A_new,
                              double dt, double sigma_H) {
  if (!(dt > 0.0)) throw std::invalid_argument("time slices must be strictly increasing");
  double sum = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    const double wy = (j == 0 || j == g.ny - 1) ? 0.5 : 1.0;
    for (int i = 0; i < g.nx; ++i) {
      const double w = wy * ((i == 0 || i == g.nx - 1) ? 0.5 : 1.0);
      const auto k = g.index(i, j);
      const double d1 = (A_new.x[k] - A_old.x[k]) / dt;
      const double d2 = (A_new.y[k] - A_old.y[k]) / dt;
      const double m1 = 0.5 * (A_new.x[k] + A_old.x[k]);
      const double m2 = 0.5 * (A_new.y[k] + A_old.y[k]);
      sum += w * (d1 * m2 - d2 * m1);
    }
  }
  return -(sigma_H / (8.0 * std::numbers::pi)) * dt * sum * g.a * g.a;
}

ActionValue chern_simons_action(const Grid& g, std::span<const GaugeSlice> history, double sigma_H,
                                double hbar) {
  if (history.size() < 2) throw std::invalid_argument("action needs at least two time slices");
  ActionValue v;
  for (std::size_t n = 1; n < history.size(); ++n) {
    v.action += chern_simons_increment(g, history[n - 1].A, history[n].A,
                                       history[n].t - history[n - 1].t, sigma_H);
  }
  v.action_ratio = std::abs(v.action) / hbar;
  return v;
}

// ---------------------------------------------------------------------------

OhmResidual ohm_residual_classical(const Grid& g, const VectorField& j, const VectorField& E,
                                   const ConductivityTensor& sigma, int hall_sign, int min_ring) {
  check_sign(hall_sign);
  double res = 0.0;
  double jmax = 0.0;
  for (int y = 0; y < g.ny; ++y) {
    for (int x = 0; x < g.nx; ++x) {
      if (g.ring(x, y) < min_ring) continue;
      const auto k = g.index(x, y);
      const auto model = sigma.apply({E.x[k], E.y[k]}, hall_sign);
      res = std::max(res, std::hypot(j.x[k] - model[0], j.y[k] - model[1]));
      jmax = std::max(jmax, std::hypot(j.x[k], j.y[k]));
    }
  }
  if (jmax == 0.0) return {res, false};
  return {res / jmax, true};
}

HallProjection hall_projection(const Grid& g, const VectorField& j, const VectorField& E,
                               int hall_sign, int min_ring) {
  check_sign(hall_sign);
  double ee = 0.0;
  double jl = 0.0;
  double jh = 0.0;
  for (int y = 0; y < g.ny; ++y) {
    for (int x = 0; x < g.nx; ++x) {
      if (g.ring(x, y) < min_ring) continue;
      const auto k = g.index(x, y);
      ee += E.x[k] * E.x[k] + E.y[k] * E.y[k];
      jl += j.x[k] * E.x[k] + j.y[k] * E.y[k];
      jh += hall_sign * (-j.x[k] * E.y[k] + j.y[k] * E.x[k]);
    }
  }
  HallProjection h;
  if (ee == 0.0) return h;
  h.longitudinal = jl / ee;
  h.hall = jh / ee;
  const double norm = std::hypot(h.longitudinal, h.hall);
  if (norm > 0.0) {
    h.longitudinal_fraction = std::abs(h.longitudinal) / norm;
    h.hall_fraction = std::abs(h.hall) / norm;
  }
  return h;
}

// ---------------------------------------------------------------------------

double SimConfig::effective_dt() const {
  return dt > 0.0 ? dt : 0.1 * params.mu * a * a / params.hbar;
}

void SimConfig::validate() const {
  params.validate();
  if (nx < 8 || ny < 8) throw std::invalid_argument("lattice must be at least 8x8");
  if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("lattice spacing must be positive");
  if (steps < 0) throw std::invalid_argument("steps must be non-negative");
  check_sign(hall_sign);
  if (!(stability_factor > 0.0)) throw std::invalid_argument("stability_factor must be positive");
  if (!(thresholds.classical < thresholds.quantum)) {
    throw std::invalid_argument("regime thresholds must satisfy classical < quantum");
  }
  const double limit = stability_limit(grid(), params, stability_factor);
  if (effective_dt() > limit * (1.0 + 1e-12)) {
    throw std::invalid_argument("dt exceeds the stability bound " + std::to_string(limit));
  }
  if (const auto* g = std::get_if<GaussianPacket>(&initial_psi); g && !(g->width > 0.0)) {
    throw std::invalid_argument("packet width must be positive");
  }
}

VectorField lattice_gradient(const Grid& g, const RealField& f) {
  VectorField out(g.size());
  const double a = g.a;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const auto k = g.index(i, j);
      if (i == 0) {
        out.x[k] = (f[g.index(1, j)] - f[k]) / a;
      } else if (i == g.nx - 1) {
        out.x[k] = (f[k] - f[g.index(i - 1, j)]) / a;
      } else {
        out.x[k] = (f[g.index(i + 1, j)] - f[g.index(i - 1, j)]) / (2.0 * a);
      }
      if (j == 0) {
        out.y[k] = (f[g.index(i, 1)] - f[k]) / a;
      } else if (j == g.ny - 1) {
        out.y[k] = (f[k] - f[g.index(i, j - 1)]) / a;
      } else {
        out.y[k] = (f[g.index(i, j + 1)] - f[g.index(i, j - 1)]) / (2.0 * a);
      }
    }
  }
  return out;
}

RealField gauge_function(const Grid& g, const PureGauge& spec, const PhysicalParams& p) {
  RealField lambda(g.size(), 0.0);
  if (spec.kind == GaugeFunctionKind::Bump) {
    const double pi = std::numbers::pi;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        lambda[g.index(i, j)] =
            spec.amplitude * std::sin(pi * g.x(i) / g.width()) * std::sin(pi * g.y(j) / g.height());
    return lambda;
  }

  const double corr = spec.correlation > 0.0 ? spec.correlation : magnetic_length(p);
  const auto w = gaussian_kernel(corr / g.a);
  const int r = static_cast<int>(w.size() / 2);
  const int px = g.nx + 2 * r;
  const int py = g.ny + 2 * r;

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> noise(static_cast<std::size_t>(px) * py);
  for (auto& v : noise) v = normal(rng);

  // Separable smoothing on the padded field, then crop.
  std::vector<double> tmp(static_cast<std::size_t>(g.nx) * py, 0.0);
  for (int j = 0; j < py; ++j)
    for (int i = 0; i < g.nx; ++i) {
      double acc = 0.0;
      for (int d = -r; d <= r; ++d) acc += w[static_cast<std::size_t>(d + r)] * noise[static_cast<std::size_t>(i + r + d) + static_cast<std::size_t>(px) * j];
      tmp[static_cast<std::size_t>(i) + static_cast<std::size_t>(g.nx) * j] = acc;
    }
  double ss = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      double acc = 0.0;
      for (int d = -r; d <= r; ++d) acc += w[static_cast<std::size_t>(d + r)] * tmp[static_cast<std::size_t>(i) + static_cast<std::size_t>(g.nx) * (j + r + d)];
      lambda[g.index(i, j)] = acc;
      ss += acc * acc;
    }
  const double rms = std::sqrt(ss / static_cast<double>(g.size()));
  if (rms > 0.0)
    for (auto& v : lambda) v *= spec.amplitude / rms;
  return lambda;
}

LatticeState initial_state(const SimConfig& cfg) {
  cfg.validate();
  const Grid g = cfg.grid();
  LatticeState s(g, cfg.effective_dt());
  const PhysicalParams& p = cfg.params;

  if (const auto* pw = std::get_if<PlaneWave>(&cfg.initial_psi)) {
    set_interior(g, s.psi, [&](double x, double y) { return std::exp(I * (pw->kx * x + pw->ky * y)); });
  } else {
    const auto& gp = std::get<GaussianPacket>(cfg.initial_psi);
    set_interior(g, s.psi, [&](double x, double y) {
      const double r2 = (x - gp.x0) * (x - gp.x0) + (y - gp.y0) * (y - gp.y0);
      return std::exp(-r2 / (2.0 * gp.width * gp.width)) * std::exp(I * (gp.kx * x + gp.ky * y));
    });
  }
  const double nbar = mean_density(g, s.psi);
  const double scale = nbar > 0.0 ? std::sqrt(p.n / nbar) : 0.0;
  for (auto& v : s.psi) v *= scale;

  if (const auto* ue = std::get_if<UniformE>(&cfg.initial_A)) {
    const double tg = ue->tau_gauge > 0.0 ? ue->tau_gauge : p.tau;
    std::fill(s.A.x.begin(), s.A.x.end(), ue->E1 * tg);
    std::fill(s.A.y.begin(), s.A.y.end(), ue->E2 * tg);
    std::fill(s.E.x.begin(), s.E.x.end(), ue->E1);
    std::fill(s.E.y.begin(), s.E.y.end(), ue->E2);
  } else if (const auto* pg = std::get_if<PureGauge>(&cfg.initial_A)) {
    s.A = lattice_gradient(g, gauge_function(g, *pg, p));
  }
  return s;
}

// ---------------------------------------------------------------------------

Simulation::Simulation(SimConfig cfg) : cfg_(std::move(cfg)) {
  state_ = initial_state(cfg_);
  const PhysicalParams& p = cfg_.params;
  regime_ = classify_regime(p, cfg_.s_cs, cfg_.thresholds);
  if (cfg_.regime_override) regime_.kind = *cfg_.regime_override;

  if (cfg_.sigma_mode == SigmaMode::Quantized) {
    const long snapped = snap_sigma_H(hall_filling(p));
    if (snapped == 0) throw std::domain_error("no Hall channel: system insulating");
    sigma_H_ = static_cast<double>(snapped);
    reference_ = {0.0, sigma_H_};
    if (regime_.kind != RegimeKind::Quantum) warnings_.emplace_back("quantized sigma_H outside the quantum regime");
    // Potentials differing by the gradient of a boundary-vanishing function
    // are identified; keep the representative without that gradient.
    state_.A = helmholtz_split(state_.grid, state_.A).curl;
  } else {
    reference_ = conductivity_classical(p);
    sigma_H_ = reference_.sigma_H;
    if (sigma_H_ == 0.0) throw std::domain_error("Chern-Simons kinetic term degenerate");
  }
  definition_ = cfg_.current_definition.value_or(
      regime_.kind == RegimeKind::Classical ? CurrentDefinition::Free : CurrentDefinition::WithGaugeTerm);
  current_ = current_density(state_, p, definition_);
}

StepDiagnostics Simulation::step() {
  const PhysicalParams& p = cfg_.params;
  const double dt = state_.dt;
  const VectorField A_old = state_.A;

  step_psi(state_, p, dt, {cfg_.psi_stepper, cfg_.stability_factor, 1e-14});
  const GaugeSource src = gauge_source(state_, p, definition_);
  const GaugeStepResult r = step_gauge(state_, src, p, sigma_H_, dt, cfg_.gauge_stepper, cfg_.hall_sign);
  state_.t += dt;
  action_ += chern_simons_increment(state_.grid, A_old, state_.A, dt, sigma_H_);
  // The current paired with E = -dA/dt is the one at the stepper's effective A.
  current_ = CurrentField{r.j_eff, definition_};

  StepDiagnostics d;
  d.t = state_.t;
  d.norm = total_probability(state_.grid, state_.psi);
  d.S_cs = action_;
  d.action_ratio = std::abs(action_) / p.hbar;
  d.ohm_residual = ohm_residual_classical(state_.grid, current_.j, state_.E, reference_, cfg_.hall_sign).value;
  const HallProjection h = hall_projection(state_.grid, current_.j, state_.E, cfg_.hall_sign);
  d.hall_fraction = h.hall_fraction;
  d.longitudinal_fraction = h.longitudinal_fraction;
  d.identity_residual = gauge_step_identity_residual(r, sigma_H_, cfg_.hall_sign);
  return d;
}

QuantumRunReport quantum_run(const SimConfig& cfg) {
  if (cfg.sigma_mode != SigmaMode::Quantized) throw std::invalid_argument("quantum_run needs quantized sigma_H");
  Simulation sim(cfg);
  QuantumRunReport rep;
  rep.sigma_H = std::lround(sim.sigma_H());
  rep.regime = sim.regime();
  rep.warnings = sim.warnings();
  if (rep.regime.kind != RegimeKind::Quantum) rep.warnings.emplace_back("regime is not quantum");

  const Grid g = sim.state().grid;
  const double n0 = total_probability(g, sim.state().psi);
  const ConductivityTensor hall{0.0, sim.sigma_H()};
  for (int n = 0; n < cfg.steps; ++n) {
    StepDiagnostics d = sim.step();
    const double res = ohm_residual_classical(g, sim.current().j, sim.state().E, hall, cfg.hall_sign).value;
    rep.max_hall_residual = std::max(rep.max_hall_residual, res);
    rep.max_identity_residual = std::max(rep.max_identity_residual, d.identity_residual);
    rep.trace.push_back(d);
  }
  const auto& s = sim.state();
  rep.hall_residual = ohm_residual_classical(g, sim.current().j, s.E, hall, cfg.hall_sign);
  rep.flipped_sign_residual = ohm_residual_classical(g, sim.current().j, s.E, hall, -cfg.hall_sign).value;
  rep.projection = hall_projection(g, sim.current().j, s.E, cfg.hall_sign);
  rep.norm_drift = n0 > 0.0 ? std::abs(total_probability(g, s.psi) - n0) / n0 : 0.0;
  rep.action = sim.action();
  rep.action_ratio = std::abs(sim.action()) / cfg.params.hbar;
  rep.current = sim.current();
  rep.final_state = s;
  return rep;
}

std::array<double, 2> drude_drift_velocity(const PhysicalParams& p, std::array<double, 2> E,
                                           int hall_sign) {
  check_sign(hall_sign);
  const double beta = hall_parameter(p);
  const double pre = p.e * p.tau / p.mu / (1.0 + beta * beta);
  return {pre * (E[0] - hall_sign * beta * E[1]), pre * (E[1] + hall_sign * beta * E[0])};
}

ClassicalRunReport classical_gauge_run(const SimConfig& cfg) {
  const auto* ue = std::get_if<UniformE>(&cfg.initial_A);
  if (!ue) throw std::invalid_argument("classical_gauge_run needs a uniform-E initial potential");
  cfg.validate();
  const PhysicalParams& p = cfg.params;
  const Grid g = cfg.grid();

  ClassicalRunReport rep;
  rep.regime = classify_regime(p, cfg.s_cs, cfg.thresholds);
  if (rep.regime.kind != RegimeKind::Classical) rep.warnings.emplace_back("regime is not classical");
  rep.sigma = conductivity_classical(p);

  const std::array<double, 2> E{ue->E1, ue->E2};
  rep.drift_velocity = drude_drift_velocity(p, E, cfg.hall_sign);
  rep.wavevector = {p.mu * rep.drift_velocity[0] / p.hbar, p.mu * rep.drift_velocity[1] / p.hbar};

  LatticeState s(g, cfg.effective_dt());
  const double amp = std::sqrt(p.n);
  set_interior(g, s.psi, [&](double x, double y) {
    return amp * std::exp(I * (rep.wavevector[0] * x + rep.wavevector[1] * y));
  });
  const double tg = ue->tau_gauge > 0.0 ? ue->tau_gauge : p.tau;
  std::fill(s.A.x.begin(), s.A.x.end(), E[0] * tg);
  std::fill(s.A.y.begin(), s.A.y.end(), E[1] * tg);
  std::fill(s.E.x.begin(), s.E.x.end(), E[0]);
  std::fill(s.E.y.begin(), s.E.y.end(), E[1]);

  const CurrentDefinition def = cfg.current_definition.value_or(CurrentDefinition::Free);
  rep.current = current_density(s, p, def);
  // Ring 1 sees the Dirichlet wall through its central difference.
  constexpr int bulk = 2;
  rep.residual = ohm_residual_classical(g, rep.current.j, s.E, rep.sigma, cfg.hall_sign, bulk);
  rep.residual_sigma0 = ohm_residual_classical(g, rep.current.j, s.E, {drude_sigma0(p), rep.sigma.sigma_H},
                                               cfg.hall_sign, bulk);

  // j - (e^2 n / mu) A projected on eps E.
  const double k = p.e * p.e * p.n / p.mu;
  double num = 0.0;
  double den = 0.0;
  for (int y = 0; y < g.ny; ++y)
    for (int x = 0; x < g.nx; ++x) {
      if (g.ring(x, y) < bulk) continue;
      const auto i = g.index(x, y);
      const double rx = rep.current.j.x[i] - k * s.A.x[i];
      const double ry = rep.current.j.y[i] - k * s.A.y[i];
      num += cfg.hall_sign * (-rx * s.E.y[i] + ry * s.E.x[i]);
      den += s.E.x[i] * s.E.x[i] + s.E.y[i] * s.E.y[i];
    }
  rep.implied_sigma_H = den > 0.0 ? num / den : 0.0;
  rep.E = s.E;
  rep.state = std::move(s);
  return rep;
}

}  // namespace hallsim
