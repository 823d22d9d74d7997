#pragma once

#include <string>
#include <string_view>

namespace hallsim {

enum class UnitSystem { Natural, SI };

std::string_view to_string(UnitSystem units);
UnitSystem unit_system_from_string(std::string_view text);

/// CODATA values used when a configuration is given in SI units.
namespace si {
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double hbar = 1.054571817e-34;               // J s
inline constexpr double electron_mass = 9.1093837015e-31;     // kg
}  // namespace si

/// Physical symbols of the Hall system.
///
/// `mu` is the carrier mass (it enters both the cyclotron frequency and the
/// kinetic term), `n` the areal carrier density and `B` the perpendicular
/// applied field. In Natural units e = hbar = mu = 1.
struct PhysicalParams {
  double e = 1.0;
  double hbar = 1.0;
  double mu = 1.0;
  double tau = 1.0;
  double n = 1.0;
  double B = 1.0;
  UnitSystem units = UnitSystem::Natural;

  /// Throws std::invalid_argument naming the first violated invariant.
  void validate() const;

  static PhysicalParams natural(double tau, double n, double B);
};

/// Base scales that map Natural values onto SI values.
///
/// Natural units fix e, hbar and the carrier mass to one; the remaining freedom
/// is a length scale. Time, field and density units follow from it.
struct UnitScales {
  double charge = si::elementary_charge;
  double action = si::hbar;
  double mass = si::electron_mass;
  double length = 1e-9;

  double time() const { return mass * length * length / action; }
  double field() const { return action / (charge * length * length); }
  double density() const { return 1.0 / (length * length); }
  double conductance() const { return charge * charge / action; }
};

struct NaturalConversion {
  PhysicalParams params;
  UnitScales scales;
};

/// Rescales SI parameters so that e = hbar = mu = 1, with `length_unit`
/// metres as the unit of length. Returns the scales needed to go back.
NaturalConversion to_natural(const PhysicalParams& si_params, double length_unit = 1e-9);

/// Inverse of to_natural.
PhysicalParams to_si(const PhysicalParams& natural, const UnitScales& scales);

/// omega_c = e B / mu
double cyclotron_frequency(const PhysicalParams& p);

/// omega_c * tau
double hall_parameter(const PhysicalParams& p);

/// sqrt(hbar / (e B)); throws std::domain_error at B = 0.
double magnetic_length(const PhysicalParams& p);

}  // namespace hallsim
