#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "semirecon/fields.hpp"

namespace semirecon {

// Where an observation came from. Reconstruction never reads these fields;
// `generator` in particular names the true nonlinearity for scoring only.
struct Provenance {
  std::array<int, 2> fine_cells{0, 0};
  int fine_steps = 0;
  std::string generator;
  std::string dirichlet;
};

// Dirichlet samples and measured Neumann flux on the same nodes and times.
struct ObservedData {
  BoundaryTrace phi;
  BoundaryTrace flux;
  double noise = 0.0;
  std::uint64_t seed = 0;
  Provenance provenance;

  const DomainSpec& domain() const { return phi.nodes().domain(); }
  void validate() const;
};

}  // namespace semirecon
