#include "hallsim/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <thread>

namespace hallsim {

unsigned worker_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("HALLSIM_THREADS")) {
    unsigned cap = 0;
    const auto [ptr, ec] = std::from_chars(env, env + std::strlen(env), cap);
    if (ec == std::errc() && *ptr == '\0' && cap > 0) n = std::min(n, cap);
  }
  return n;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

QuantizeReport quantize_report(const QuantizeSettings& q) {
  QuantizeReport r;
  r.sigma_in = q.sigma_in;
  r.sigma_snapped = snap_sigma_H(q.sigma_in);
  r.single_valued = single_valuedness_check(q.sigma_in, q.l);

  std::vector<double> R(static_cast<std::size_t>(q.R_points));
  for (std::size_t k = 0; k < R.size(); ++k)
    R[k] = R.size() == 1 ? 1.0 : 2.0 * static_cast<double>(k) / static_cast<double>(R.size() - 1);
  const auto w = build_wavefunctional(q.sigma_in, q.l, R, uniform_phi_grid(static_cast<std::size_t>(q.phi_points)),
                                      q.envelope);
  r.angular_residual = angular_momentum_residual(w);

  if (q.sigma_in > 0.0) {
    SingleModePair pair;
    pair.sigma_H = q.sigma_in;
    pair.h = q.commutator_h;
    pair.extent = q.commutator_extent;
    r.commutator_residual =
        commutator_residual(pair, {gaussian_test_function(0.0, 1.0), bump_test_function(0.0, 3.0)}).residual;
  }
  return r;
}

int run_sweep(const RunConfig& cfg) {
  const auto& values = cfg.sweep_variable == SweepVariable::B ? cfg.B_sweep : cfg.tau_sweep;
  const auto records = transport_sweep(cfg.params, cfg.sweep_variable, values, cfg.s_cs, cfg.thresholds, worker_count());
  write_file(cfg.output, cfg.format == OutputFormat::Csv ? sweep_csv(records) : sweep_json(records));
  return 0;
}

int run_staircase(const RunConfig& cfg) {
  if (cfg.B_sweep.empty()) throw std::invalid_argument("empty sweep");
  const auto points = plateau_staircase(cfg.params, cfg.B_sweep);
  write_file(cfg.output, cfg.format == OutputFormat::Csv ? staircase_csv(points) : staircase_json(points));
  return 0;
}

int run_simulate(const RunConfig& cfg) {
  Simulation sim(cfg.sim);
  std::vector<StepDiagnostics> rows;
  rows.reserve(static_cast<std::size_t>(cfg.sim.steps));
  for (int n = 0; n < cfg.sim.steps; ++n) rows.push_back(sim.step());
  write_file(cfg.output, cfg.format == OutputFormat::Csv ? diagnostics_csv(rows) : diagnostics_json(rows));
  if (cfg.snapshot == SnapshotFormat::Json) write_file(cfg.output + ".snapshot.json", snapshot_json(sim.state()));
  if (cfg.snapshot == SnapshotFormat::Binary) write_file(cfg.output + ".snapshot.bin", snapshot_binary(sim.state()));
  return 0;
}

int run_edge(const RunConfig& cfg) {
  const EdgeRunReport rep = edge_run(cfg.sim, cfg.breakdown_threshold);
  if (cfg.format == OutputFormat::Csv) {
    write_file(cfg.output, edge_profile_csv(rep.profile));
    write_file(cfg.output + ".summary.json", edge_summary_json(rep));
  } else {
    write_file(cfg.output, edge_summary_json(rep, true));
  }
  return 0;
}

int run_quantize(const RunConfig& cfg) {
  const QuantizeReport r = quantize_report(cfg.quantize);
  write_file(cfg.output, cfg.format == OutputFormat::Csv ? quantize_csv(r) : quantize_json(r));
  return 0;
}

int run_command(const RunConfig& cfg) {
  switch (cfg.command) {
    case Command::Sweep: return run_sweep(cfg);
    case Command::Staircase: return run_staircase(cfg);
    case Command::Simulate: return run_simulate(cfg);
    case Command::Edge: return run_edge(cfg);
    case Command::Quantize: return run_quantize(cfg);
  }
  return 1;
}

}  // namespace hallsim
