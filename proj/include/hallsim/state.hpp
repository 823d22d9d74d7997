#pragma once

#include <string_view>

#include "hallsim/lattice.hpp"

namespace hallsim {

/// Charge current with (WithGaugeTerm) or without (Free) the -(e^2/mu) A |psi|^2
/// contribution.
enum class CurrentDefinition { WithGaugeTerm, Free };

std::string_view to_string(CurrentDefinition d);

struct CurrentField {
  VectorField j;
  CurrentDefinition definition = CurrentDefinition::WithGaugeTerm;
};

/// Carrier field and temporal-gauge potentials on a bounded lattice.
///
/// psi vanishes on the boundary ring. A is unconstrained there. E holds the
/// most recent two-slice estimate of -dA/dt.
struct LatticeState {
  Grid grid;
  double dt = 0.0;
  double t = 0.0;
  ComplexField psi;
  VectorField A;
  VectorField E;

  LatticeState() = default;
  LatticeState(Grid g, double dt_);

  /// Throws std::invalid_argument if the grid is smaller than 8x8, field sizes
  /// disagree or psi is non-zero on the boundary.
  void validate() const;
};

}  // namespace hallsim
