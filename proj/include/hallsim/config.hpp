#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hallsim/dynamics.hpp"
#include "hallsim/params.hpp"
#include "hallsim/quantization.hpp"
#include "hallsim/transport.hpp"

namespace hallsim {

enum class Command { Sweep, Staircase, Simulate, Edge, Quantize };
enum class OutputFormat { Csv, Json };
enum class SnapshotFormat { None, Json, Binary };

std::string_view to_string(Command c);
Command command_from_string(std::string_view text);
OutputFormat output_format_from_string(std::string_view text);

/// Configuration error tied to a source line. Line 0 means the error has no
/// single source line; overrides are numbered after the last file line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

struct QuantizeSettings {
  double sigma_in = 1.0;
  double l = 1.0;
  int phi_points = 256;
  int R_points = 16;
  EnvelopeSpec envelope;
  double commutator_h = 1e-3;
  double commutator_extent = 8.0;
};

struct RunConfig {
  Command command = Command::Sweep;
  std::string params_file;
  std::string output;
  OutputFormat format = OutputFormat::Csv;
  std::uint64_t seed = 0;
  std::vector<std::string> overrides;

  /// Parameters as written in the file (SI or natural).
  PhysicalParams params;
  double length_unit = 1e-9;
  RegimeThresholds thresholds;
  double s_cs = 1.0;

  SweepVariable sweep_variable = SweepVariable::B;
  std::vector<double> B_sweep;
  std::vector<double> tau_sweep;

  /// Lattice run settings; sim.params is always in natural units.
  SimConfig sim;
  SnapshotFormat snapshot = SnapshotFormat::Json;
  double breakdown_threshold = 0.1;

  QuantizeSettings quantize;
};

/// Parses `key = value` lines (`#` starts a comment), then applies each
/// override of the form `key=value`. Unknown keys, malformed values and
/// violated invariants throw ConfigError naming the line.
RunConfig parse_config(std::string_view text, std::span<const std::string> overrides = {});

/// `log:lo:hi:count`, `lin:lo:hi:count` or a comma-separated list. An empty
/// specification yields an empty list.
std::vector<double> parse_sweep(std::string_view spec);

/// Every key parse_config accepts.
std::span<const std::string_view> known_config_keys();

}  // namespace hallsim
