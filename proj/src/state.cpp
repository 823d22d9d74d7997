#include "hallsim/state.hpp"

#include <stdexcept>

namespace hallsim {

std::string_view to_string(CurrentDefinition d) {
  switch (d) {
    case CurrentDefinition::WithGaugeTerm:
      return "with_gauge_term";
    case CurrentDefinition::Free:
      return "free";
  }
  return "unknown";
}

LatticeState::LatticeState(Grid g, double dt_)
    : grid(g), dt(dt_), psi(g.size(), cplx{0.0, 0.0}), A(g.size()), E(g.size()) {}

void LatticeState::validate() const {
  if (grid.nx < 8 || grid.ny < 8) throw std::invalid_argument("lattice must be at least 8x8");
  const auto n = grid.size();
  if (psi.size() != n || A.x.size() != n || A.y.size() != n || E.x.size() != n || E.y.size() != n) {
    throw std::invalid_argument("field sizes do not match the grid");
  }
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      if (grid.on_boundary(i, j) && psi[grid.index(i, j)] != cplx{0.0, 0.0}) {
        throw std::invalid_argument("psi must vanish on the boundary");
      }
    }
  }
}

}  // namespace hallsim
