#pragma once

#include <optional>
#include <span>
#include <string>

#include "hallsim/constraint_edge.hpp"
#include "hallsim/dynamics.hpp"
#include "hallsim/transport.hpp"

namespace hallsim {

/// 17 significant digits; enough to round-trip any double.
std::string format_double(double v);

std::string sweep_csv(std::span<const SweepRecord> records);
std::string sweep_json(std::span<const SweepRecord> records);

std::string staircase_csv(std::span<const StaircasePoint> points);
std::string staircase_json(std::span<const StaircasePoint> points);

std::string diagnostics_csv(std::span<const StepDiagnostics> rows);
std::string diagnostics_json(std::span<const StepDiagnostics> rows);

/// Field dump with arrays in row-major order, x fastest (index i + nx * j).
std::string snapshot_json(const LatticeState& s);

/// Little-endian binary dump: int32 nx, int32 ny, float64 a, float64 t, then
/// six float64 arrays of nx * ny values (psi_re, psi_im, A1, A2, E1, E2), each
/// row-major with x fastest.
std::string snapshot_binary(const LatticeState& s);

std::string edge_profile_csv(const EdgeProfile& profile);
/// {fitted_width, l_B, edge_fraction, gauss_residual, breakdown}; the profile
/// bins are appended as "profile" when `with_profile` is set.
std::string edge_summary_json(const EdgeRunReport& report, bool with_profile = false);

struct QuantizeReport {
  double sigma_in = 0.0;
  long sigma_snapped = 0;
  bool single_valued = false;
  double angular_residual = 0.0;
  /// Empty when the commutator is undefined (sigma_in <= 0).
  std::optional<double> commutator_residual;
};

std::string quantize_json(const QuantizeReport& r);
std::string quantize_csv(const QuantizeReport& r);

}  // namespace hallsim
