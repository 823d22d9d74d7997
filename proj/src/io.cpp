#include "hallsim/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>

#include <fmt/format.h>

namespace hallsim {

namespace {

std::string json_number(double v) { return std::isfinite(v) ? format_double(v) : "null"; }

std::string json_array(const RealField& f) {
  std::string out = "[";
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (k) out += ',';
    out += json_number(f[k]);
  }
  return out + "]";
}

template <class T>
void put(std::string& out, T value) {
  static_assert(std::endian::native == std::endian::little, "binary snapshot assumes a little-endian host");
  char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  out.append(bytes, sizeof(T));
}

}  // namespace

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

std::string sweep_csv(std::span<const SweepRecord> records) {
  std::string out = "B,omega_c_tau,sigma_L,sigma_H,sigma_H_quantized,regime\n";
  for (const auto& r : records) {
    out += fmt::format("{},{},{},{},{},{}\n", format_double(r.B), format_double(r.omega_c_tau),
                       format_double(r.sigma_L), format_double(r.sigma_H), r.sigma_H_quantized,
                       to_string(r.regime));
  }
  return out;
}

std::string sweep_json(std::span<const SweepRecord> records) {
  std::string out = "[\n";
  for (std::size_t k = 0; k < records.size(); ++k) {
    const auto& r = records[k];
    out += fmt::format(
        "  {{\"B\": {}, \"omega_c_tau\": {}, \"sigma_L\": {}, \"sigma_H\": {}, "
        "\"sigma_H_quantized\": {}, \"regime\": \"{}\"}}{}\n",
        json_number(r.B), json_number(r.omega_c_tau), json_number(r.sigma_L), json_number(r.sigma_H),
        r.sigma_H_quantized, to_string(r.regime), k + 1 < records.size() ? "," : "");
  }
  return out + "]\n";
}

std::string staircase_csv(std::span<const StaircasePoint> points) {
  std::string out = "B,sigma_H_continuous,sigma_H_quantized\n";
  for (const auto& p : points)
    out += fmt::format("{},{},{}\n", format_double(p.B), format_double(p.sigma_continuous), p.sigma_quantized);
  return out;
}

std::string staircase_json(std::span<const StaircasePoint> points) {
  std::string out = "[\n";
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto& p = points[k];
    out += fmt::format("  {{\"B\": {}, \"sigma_H_continuous\": {}, \"sigma_H_quantized\": {}}}{}\n",
                       json_number(p.B), json_number(p.sigma_continuous), p.sigma_quantized,
                       k + 1 < points.size() ? "," : "");
  }
  return out + "]\n";
}

std::string diagnostics_csv(std::span<const StepDiagnostics> rows) {
  std::string out = "t,norm,S_cs,action_ratio,ohm_residual,hall_fraction\n";
  for (const auto& d : rows) {
    out += fmt::format("{},{},{},{},{},{}\n", format_double(d.t), format_double(d.norm), format_double(d.S_cs),
                       format_double(d.action_ratio), format_double(d.ohm_residual),
                       format_double(d.hall_fraction));
  }
  return out;
}

std::string diagnostics_json(std::span<const StepDiagnostics> rows) {
  std::string out = "[\n";
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& d = rows[k];
    out += fmt::format(
        "  {{\"t\": {}, \"norm\": {}, \"S_cs\": {}, \"action_ratio\": {}, \"ohm_residual\": {}, "
        "\"hall_fraction\": {}}}{}\n",
        json_number(d.t), json_number(d.norm), json_number(d.S_cs), json_number(d.action_ratio),
        json_number(d.ohm_residual), json_number(d.hall_fraction), k + 1 < rows.size() ? "," : "");
  }
  return out + "]\n";
}

std::string snapshot_json(const LatticeState& s) {
  RealField re(s.psi.size());
  RealField im(s.psi.size());
  for (std::size_t k = 0; k < s.psi.size(); ++k) {
    re[k] = s.psi[k].real();
    im[k] = s.psi[k].imag();
  }
  return fmt::format(
      "{{\n  \"nx\": {},\n  \"ny\": {},\n  \"a\": {},\n  \"t\": {},\n  \"layout\": \"row-major, x fastest\",\n"
      "  \"psi_re\": {},\n  \"psi_im\": {},\n  \"A1\": {},\n  \"A2\": {},\n  \"E1\": {},\n  \"E2\": {}\n}}\n",
      s.grid.nx, s.grid.ny, json_number(s.grid.a), json_number(s.t), json_array(re), json_array(im),
      json_array(s.A.x), json_array(s.A.y), json_array(s.E.x), json_array(s.E.y));
}

std::string snapshot_binary(const LatticeState& s) {
  std::string out;
  out.reserve(24 + 48 * s.psi.size());
  put(out, static_cast<std::int32_t>(s.grid.nx));
  put(out, static_cast<std::int32_t>(s.grid.ny));
  put(out, s.grid.a);
  put(out, s.t);
  for (const auto& v : s.psi) put(out, v.real());
  for (const auto& v : s.psi) put(out, v.imag());
  for (const RealField* f : {&s.A.x, &s.A.y, &s.E.x, &s.E.y})
    for (double v : *f) put(out, v);
  return out;
}

std::string edge_profile_csv(const EdgeProfile& profile) {
  std::string out = "distance,mass\n";
  for (std::size_t k = 0; k < profile.distances.size(); ++k)
    out += fmt::format("{},{}\n", format_double(profile.distances[k]), format_double(profile.current_mass[k]));
  return out;
}

std::string edge_summary_json(const EdgeRunReport& r, bool with_profile) {
  std::string out = fmt::format(
      "{{\n  \"fitted_width\": {},\n  \"l_B\": {},\n  \"edge_fraction\": {},\n  \"gauss_residual\": {},\n"
      "  \"breakdown\": {}",
      json_number(r.profile.fitted_width), json_number(r.profile.l_B), json_number(r.edge_fraction),
      json_number(r.constraint.residual_max), r.breakdown.breakdown ? "true" : "false");
  if (with_profile) {
    out += ",\n  \"profile\": [";
    for (std::size_t k = 0; k < r.profile.distances.size(); ++k) {
      out += fmt::format("{}{{\"distance\": {}, \"mass\": {}}}", k ? ", " : "",
                         json_number(r.profile.distances[k]), json_number(r.profile.current_mass[k]));
    }
    out += "]";
  }
  return out + "\n}\n";
}

std::string quantize_json(const QuantizeReport& r) {
  return fmt::format(
      "{{\n  \"sigma_in\": {},\n  \"sigma_snapped\": {},\n  \"single_valued\": {},\n"
      "  \"angular_residual\": {},\n  \"commutator_residual\": {}\n}}\n",
      json_number(r.sigma_in), r.sigma_snapped, r.single_valued ? "true" : "false",
      json_number(r.angular_residual),
      r.commutator_residual ? json_number(*r.commutator_residual) : std::string("null"));
}

std::string quantize_csv(const QuantizeReport& r) {
  return fmt::format("sigma_in,sigma_snapped,single_valued,angular_residual,commutator_residual\n{},{},{},{},{}\n",
                     format_double(r.sigma_in), r.sigma_snapped, r.single_valued ? "true" : "false",
                     format_double(r.angular_residual),
                     r.commutator_residual ? format_double(*r.commutator_residual) : std::string());
}

}  // namespace hallsim
