#include "hallsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>

#include <fmt/format.h>

namespace hallsim {

namespace {

constexpr std::string_view kKeys[] = {
    "units", "e", "hbar", "mass", "tau", "density", "B", "length_unit",
    "classical_threshold", "quantum_threshold", "s_cs", "seed",
    "B_sweep", "tau_sweep", "sweep_variable",
    "nx", "ny", "a", "dt", "steps", "stepper", "gauge_stepper", "stability_factor", "regime",
    "initial_psi", "kx", "ky", "x0", "y0", "width",
    "initial_A", "E1", "E2", "tau_gauge", "lambda_kind", "lambda_amplitude", "lambda_correlation",
    "sigma_H_mode", "current_definition", "hall_sign", "snapshot", "breakdown_threshold",
    "sigma_in", "l", "phi_points", "R_points", "envelope", "envelope_width",
    "commutator_h", "commutator_extent"};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

struct Assignment {
  std::string key;
  std::string value;
  int line = 0;
};

double to_double(const Assignment& a) {
  const std::string_view v = trim(a.value);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty() || !std::isfinite(out)) {
    throw ConfigError(a.line, fmt::format("key '{}' expects a number, got '{}'", a.key, a.value));
  }
  return out;
}

long to_long(const Assignment& a) {
  std::string_view v = trim(a.value);
  if (!v.empty() && v.front() == '+') v.remove_prefix(1);
  long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
    throw ConfigError(a.line, fmt::format("key '{}' expects an integer, got '{}'", a.key, a.value));
  }
  return out;
}

std::uint64_t to_u64(const Assignment& a) {
  const std::string_view v = trim(a.value);
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
    throw ConfigError(a.line, fmt::format("key '{}' expects a non-negative integer, got '{}'", a.key, a.value));
  }
  return out;
}

template <class T>
T choose(const Assignment& a, std::initializer_list<std::pair<std::string_view, T>> options) {
  const std::string_view v = trim(a.value);
  std::string names;
  for (const auto& [name, value] : options) {
    if (v == name) return value;
    names += names.empty() ? std::string(name) : ", " + std::string(name);
  }
  throw ConfigError(a.line, fmt::format("key '{}' expects one of {}, got '{}'", a.key, names, a.value));
}

void require(bool ok, const Assignment& a, std::string_view message) {
  if (!ok) throw ConfigError(a.line, std::string(message));
}

std::vector<double> to_sweep(const Assignment& a) {
  try {
    return parse_sweep(a.value);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(a.line, fmt::format("key '{}': {}", a.key, e.what()));
  }
}

enum class PsiKind { PlaneWave, Gaussian };
enum class AKind { Zero, UniformE, PureGauge };

// Values that need other keys before they can be assembled.
struct Pending {
  PsiKind psi = PsiKind::Gaussian;
  double kx = 0.0, ky = 0.0, width = 4.0;
  std::optional<double> x0, y0;
  AKind a_kind = AKind::Zero;
  UniformE uniform;
  PureGauge gauge;
  std::optional<std::string> regime;
  std::string definition = "auto";
};

}  // namespace

ConfigError::ConfigError(int line, const std::string& message)
    : std::runtime_error(line > 0 ? fmt::format("line {}: {}", line, message) : message), line_(line) {}

std::string_view to_string(Command c) {
  switch (c) {
    case Command::Sweep: return "sweep";
    case Command::Staircase: return "staircase";
    case Command::Simulate: return "simulate";
    case Command::Edge: return "edge";
    case Command::Quantize: return "quantize";
  }
  return "unknown";
}

Command command_from_string(std::string_view text) {
  for (Command c : {Command::Sweep, Command::Staircase, Command::Simulate, Command::Edge, Command::Quantize})
    if (to_string(c) == text) return c;
  throw std::invalid_argument("unknown command '" + std::string(text) + "'");
}

OutputFormat output_format_from_string(std::string_view text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "json") return OutputFormat::Json;
  throw std::invalid_argument("unknown format '" + std::string(text) + "'");
}

std::span<const std::string_view> known_config_keys() { return kKeys; }

std::vector<double> parse_sweep(std::string_view spec) {
  spec = trim(spec);
  if (spec.empty()) return {};
  auto number = [](std::string_view s) {
    s = trim(s);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty() || !std::isfinite(v)) {
      throw std::invalid_argument("bad number '" + std::string(s) + "' in sweep");
    }
    return v;
  };
  if (spec.starts_with("log:") || spec.starts_with("lin:")) {
    const bool log = spec.starts_with("log:");
    std::vector<std::string_view> parts;
    std::string_view rest = spec.substr(4);
    for (std::size_t pos; (pos = rest.find(':')) != std::string_view::npos; rest.remove_prefix(pos + 1))
      parts.push_back(rest.substr(0, pos));
    parts.push_back(rest);
    if (parts.size() != 3) throw std::invalid_argument("sweep range needs lo:hi:count");
    const double lo = number(parts[0]);
    const double hi = number(parts[1]);
    const double count_d = number(parts[2]);
    if (count_d < 0 || count_d != std::floor(count_d)) throw std::invalid_argument("sweep count must be a non-negative integer");
    const auto count = static_cast<std::size_t>(count_d);
    if (log && !(lo > 0.0 && hi > 0.0)) throw std::invalid_argument("log sweep needs positive bounds");
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k) {
      const double f = count == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(count - 1);
      out[k] = log ? std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo))) : lo + f * (hi - lo);
    }
    if (count > 1) {
      out.front() = lo;
      out.back() = hi;
    }
    return out;
  }
  std::vector<double> out;
  std::string_view rest = spec;
  for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos; rest.remove_prefix(pos + 1))
    out.push_back(number(rest.substr(0, pos)));
  out.push_back(number(rest));
  return out;
}

RunConfig parse_config(std::string_view text, std::span<const std::string> overrides) {
  std::vector<Assignment> items;
  std::map<std::string, int> seen;
  int line_no = 0;
  auto accept = [&](std::string_view line, int number, bool is_override) {
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(number, fmt::format("expected 'key = value', got '{}'", trim(line)));
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (std::find(std::begin(kKeys), std::end(kKeys), key) == std::end(kKeys)) {
      throw ConfigError(number, fmt::format("unknown key '{}'", key));
    }
    if (!is_override && seen.contains(key)) {
      throw ConfigError(number, fmt::format("duplicate key '{}' (first set on line {})", key, seen[key]));
    }
    seen[key] = number;
    items.push_back({std::move(key), std::move(value), number});
  };

  std::size_t start = 0;
  while (start < text.size()) {
    const auto end = text.find('\n', start);
    std::string_view line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (!trim(line).empty()) accept(line, line_no, false);
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  for (const auto& o : overrides) accept(o, ++line_no, true);

  RunConfig cfg;
  const Assignment* units_item = nullptr;
  for (const auto& a : items)
    if (a.key == "units") units_item = &a;
  if (units_item) {
    try {
      cfg.params.units = unit_system_from_string(trim(units_item->value));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(units_item->line, e.what());
    }
  }
  if (cfg.params.units == UnitSystem::SI) {
    cfg.params.e = si::elementary_charge;
    cfg.params.hbar = si::hbar;
    cfg.params.mu = si::electron_mass;
  }

  Pending pend;
  std::map<std::string, int> line_of;
  PhysicalParams& p = cfg.params;
  SimConfig& sim = cfg.sim;
  QuantizeSettings& q = cfg.quantize;

  using Handler = std::function<void(const Assignment&)>;
  auto positive = [](double& field, std::string_view msg) {
    return [&field, msg](const Assignment& a) {
      const double v = to_double(a);
      require(v > 0.0, a, msg);
      field = v;
    };
  };
  auto real = [](double& field) { return [&field](const Assignment& a) { field = to_double(a); }; };
  auto integer = [](int& field, long lo, std::string_view msg) {
    return [&field, lo, msg](const Assignment& a) {
      const long v = to_long(a);
      require(v >= lo && v <= 1'000'000, a, msg);
      field = static_cast<int>(v);
    };
  };

  const std::map<std::string, Handler, std::less<>> handlers = {
      {"units", [](const Assignment&) {}},
      {"e", positive(p.e, "e must be positive")},
      {"hbar", positive(p.hbar, "hbar must be positive")},
      {"mass", positive(p.mu, "mass must be positive")},
      {"tau", positive(p.tau, "tau must be positive")},
      {"density", [&](const Assignment& a) { p.n = to_double(a); require(p.n >= 0.0, a, "density must be non-negative"); }},
      {"B", [&](const Assignment& a) { p.B = to_double(a); require(p.B >= 0.0, a, "B must be non-negative"); }},
      {"length_unit", positive(cfg.length_unit, "length_unit must be positive")},
      {"classical_threshold", positive(cfg.thresholds.classical, "classical_threshold must be positive")},
      {"quantum_threshold", positive(cfg.thresholds.quantum, "quantum_threshold must be positive")},
      {"s_cs", real(cfg.s_cs)},
      {"seed", [&](const Assignment& a) { cfg.seed = to_u64(a); }},
      {"B_sweep", [&](const Assignment& a) { cfg.B_sweep = to_sweep(a); }},
      {"tau_sweep", [&](const Assignment& a) { cfg.tau_sweep = to_sweep(a); }},
      {"sweep_variable", [&](const Assignment& a) {
         cfg.sweep_variable = choose<SweepVariable>(a, {{"B", SweepVariable::B}, {"tau", SweepVariable::Tau}});
       }},
      {"nx", integer(sim.nx, 8, "nx must be at least 8")},
      {"ny", integer(sim.ny, 8, "ny must be at least 8")},
      {"a", positive(sim.a, "a must be positive")},
      {"dt", positive(sim.dt, "dt must be positive")},
      {"steps", integer(sim.steps, 0, "steps must be non-negative")},
      {"stepper", [&](const Assignment& a) {
         sim.psi_stepper = choose<PsiStepper>(a, {{"cn", PsiStepper::CrankNicolson}, {"rk4", PsiStepper::RK4}});
       }},
      {"gauge_stepper", [&](const Assignment& a) {
         sim.gauge_stepper = choose<GaugeStepper>(a, {{"rk4", GaugeStepper::RK4}, {"euler", GaugeStepper::Euler}});
       }},
      {"stability_factor", positive(sim.stability_factor, "stability_factor must be positive")},
      {"regime", [&](const Assignment& a) {
         choose<int>(a, {{"auto", 0}, {"classical", 1}, {"crossover", 2}, {"quantum", 3}});
         pend.regime = std::string(trim(a.value));
       }},
      {"initial_psi", [&](const Assignment& a) {
         pend.psi = choose<PsiKind>(a, {{"plane_wave", PsiKind::PlaneWave}, {"gaussian", PsiKind::Gaussian}});
       }},
      {"kx", real(pend.kx)},
      {"ky", real(pend.ky)},
      {"x0", [&](const Assignment& a) { pend.x0 = to_double(a); }},
      {"y0", [&](const Assignment& a) { pend.y0 = to_double(a); }},
      {"width", positive(pend.width, "width must be positive")},
      {"initial_A", [&](const Assignment& a) {
         pend.a_kind = choose<AKind>(a, {{"zero", AKind::Zero}, {"uniform_e", AKind::UniformE}, {"pure_gauge", AKind::PureGauge}});
       }},
      {"E1", real(pend.uniform.E1)},
      {"E2", real(pend.uniform.E2)},
      {"tau_gauge", positive(pend.uniform.tau_gauge, "tau_gauge must be positive")},
      {"lambda_kind", [&](const Assignment& a) {
         pend.gauge.kind = choose<GaugeFunctionKind>(a, {{"random", GaugeFunctionKind::Random}, {"bump", GaugeFunctionKind::Bump}});
       }},
      {"lambda_amplitude", real(pend.gauge.amplitude)},
      {"lambda_correlation", positive(pend.gauge.correlation, "lambda_correlation must be positive")},
      {"sigma_H_mode", [&](const Assignment& a) {
         sim.sigma_mode = choose<SigmaMode>(a, {{"continuous", SigmaMode::Continuous}, {"quantized", SigmaMode::Quantized}});
       }},
      {"current_definition", [&](const Assignment& a) {
         choose<int>(a, {{"auto", 0}, {"with_gauge_term", 1}, {"free", 2}});
         pend.definition = std::string(trim(a.value));
       }},
      {"hall_sign", [&](const Assignment& a) {
         const long v = to_long(a);
         require(v == 1 || v == -1, a, "hall_sign must be +1 or -1");
         sim.hall_sign = static_cast<int>(v);
       }},
      {"snapshot", [&](const Assignment& a) {
         cfg.snapshot = choose<SnapshotFormat>(a, {{"none", SnapshotFormat::None}, {"json", SnapshotFormat::Json}, {"binary", SnapshotFormat::Binary}});
       }},
      {"breakdown_threshold", positive(cfg.breakdown_threshold, "breakdown_threshold must be positive")},
      {"sigma_in", real(q.sigma_in)},
      {"l", real(q.l)},
      {"phi_points", integer(q.phi_points, 16, "phi_points must be at least 16")},
      {"R_points", integer(q.R_points, 1, "R_points must be at least 1")},
      {"envelope", [&](const Assignment& a) {
         q.envelope.kind = choose<Envelope>(a, {{"gaussian", Envelope::Gaussian}, {"bump", Envelope::Bump}});
       }},
      {"envelope_width", positive(q.envelope.width, "envelope_width must be positive")},
      {"commutator_h", positive(q.commutator_h, "commutator_h must be positive")},
      {"commutator_extent", positive(q.commutator_extent, "commutator_extent must be positive")},
  };

  for (const auto& a : items) {
    handlers.find(a.key)->second(a);
    line_of[a.key] = a.line;
  }
  auto line = [&](std::initializer_list<const char*> keys) {
    int best = 0;
    for (const char* k : keys)
      if (auto it = line_of.find(k); it != line_of.end()) best = std::max(best, it->second);
    return best;
  };

  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(line({"units", "e", "hbar", "mass"}), e.what());
  }
  if (!(cfg.thresholds.classical < cfg.thresholds.quantum)) {
    throw ConfigError(line({"classical_threshold", "quantum_threshold"}),
                      "classical_threshold must be below quantum_threshold");
  }

  // Lattice runs always work in natural units.
  try {
    sim.params = p.units == UnitSystem::Natural ? p : to_natural(p, cfg.length_unit).params;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(line({"length_unit"}), e.what());
  }
  sim.thresholds = cfg.thresholds;
  sim.s_cs = cfg.s_cs;

  const double xc = 0.5 * sim.a * (sim.nx - 1);
  const double yc = 0.5 * sim.a * (sim.ny - 1);
  if (pend.psi == PsiKind::PlaneWave) {
    sim.initial_psi = PlaneWave{pend.kx, pend.ky};
  } else {
    sim.initial_psi = GaussianPacket{pend.x0.value_or(xc), pend.y0.value_or(yc), pend.width, pend.kx, pend.ky};
  }
  pend.gauge.seed = cfg.seed;
  switch (pend.a_kind) {
    case AKind::Zero: sim.initial_A = ZeroPotential{}; break;
    case AKind::UniformE: sim.initial_A = pend.uniform; break;
    case AKind::PureGauge: sim.initial_A = pend.gauge; break;
  }
  if (pend.regime && *pend.regime != "auto") sim.regime_override = regime_kind_from_string(*pend.regime);
  if (pend.definition == "with_gauge_term") sim.current_definition = CurrentDefinition::WithGaugeTerm;
  if (pend.definition == "free") sim.current_definition = CurrentDefinition::Free;

  try {
    sim.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(line({"nx", "ny", "a", "dt", "stability_factor", "width"}), e.what());
  }
  return cfg;
}

}  // namespace hallsim
