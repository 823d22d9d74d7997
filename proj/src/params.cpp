#include "hallsim/params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hallsim {

std::string_view to_string(UnitSystem units) {
  return units == UnitSystem::Natural ? "natural" : "si";
}

UnitSystem unit_system_from_string(std::string_view text) {
  if (text == "natural" || text == "Natural") return UnitSystem::Natural;
  if (text == "si" || text == "SI") return UnitSystem::SI;
  throw std::invalid_argument("unknown unit system '" + std::string(text) + "'");
}

namespace {

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

}  // namespace

void PhysicalParams::validate() const {
  require(std::isfinite(e) && e > 0.0, "e must be positive");
  require(std::isfinite(hbar) && hbar > 0.0, "hbar must be positive");
  require(std::isfinite(mu) && mu > 0.0, "mass must be positive");
  require(std::isfinite(tau) && tau > 0.0, "tau must be positive");
  require(std::isfinite(n) && n >= 0.0, "density must be non-negative");
  require(std::isfinite(B) && B >= 0.0, "B must be non-negative");
  if (units == UnitSystem::Natural) {
    require(e == 1.0 && hbar == 1.0 && mu == 1.0,
            "natural units require e = hbar = mass = 1");
  }
}

PhysicalParams PhysicalParams::natural(double tau, double n, double B) {
  PhysicalParams p;
  p.tau = tau;
  p.n = n;
  p.B = B;
  return p;
}

NaturalConversion to_natural(const PhysicalParams& si_params, double length_unit) {
  if (si_params.units != UnitSystem::SI) {
    throw std::invalid_argument("to_natural expects SI parameters");
  }
  if (!(length_unit > 0.0)) throw std::invalid_argument("length unit must be positive");
  si_params.validate();

  UnitScales scales;
  scales.charge = si_params.e;
  scales.action = si_params.hbar;
  scales.mass = si_params.mu;
  scales.length = length_unit;

  PhysicalParams out;
  out.units = UnitSystem::Natural;
  out.tau = si_params.tau / scales.time();
  out.n = si_params.n / scales.density();
  out.B = si_params.B / scales.field();
  return {out, scales};
}

PhysicalParams to_si(const PhysicalParams& natural, const UnitScales& scales) {
  if (natural.units != UnitSystem::Natural) {
    throw std::invalid_argument("to_si expects natural parameters");
  }
  PhysicalParams out;
  out.units = UnitSystem::SI;
  out.e = scales.charge;
  out.hbar = scales.action;
  out.mu = scales.mass;
  out.tau = natural.tau * scales.time();
  out.n = natural.n * scales.density();
  out.B = natural.B * scales.field();
  return out;
}

double cyclotron_frequency(const PhysicalParams& p) { return p.e * p.B / p.mu; }

double hall_parameter(const PhysicalParams& p) { return cyclotron_frequency(p) * p.tau; }

double magnetic_length(const PhysicalParams& p) {
  if (p.B == 0.0) throw std::domain_error("magnetic length undefined at zero field");
  return std::sqrt(p.hbar / (p.e * p.B));
}

}  // namespace hallsim
