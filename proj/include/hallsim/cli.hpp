#pragma once

#include <string>

#include "hallsim/config.hpp"
#include "hallsim/io.hpp"

namespace hallsim {

/// Worker count for sweeps: hardware concurrency capped by HALLSIM_THREADS
/// when that variable holds a positive integer.
unsigned worker_count();

QuantizeReport quantize_report(const QuantizeSettings& q);

/// Each runner writes cfg.output (and side files where documented) and
/// returns 0. I/O failures throw std::runtime_error.
int run_sweep(const RunConfig& cfg);
int run_staircase(const RunConfig& cfg);
/// Diagnostics go to cfg.output; the final state goes next to it as
/// <output>.snapshot.json or <output>.snapshot.bin.
int run_simulate(const RunConfig& cfg);
/// CSV format writes the profile to cfg.output and the summary to
/// <output>.summary.json; JSON format writes one document with both.
int run_edge(const RunConfig& cfg);
int run_quantize(const RunConfig& cfg);

int run_command(const RunConfig& cfg);

/// Writes `content` to `path` in binary mode, replacing any existing file.
void write_file(const std::string& path, const std::string& content);

}  // namespace hallsim
