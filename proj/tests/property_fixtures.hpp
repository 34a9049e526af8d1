#pragma once

// Random fields and lattice-aligned query points shared by the property
// tests and the acceptance run.

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "hconv/convexify.hpp"
#include "hconv/fields.hpp"

namespace hconv::testing {

// Coercive quartic plus random lower-order terms; z-symmetric when
// `symmetric` (only terms even in (x, y) jointly).
inline ScalarField random_field(std::mt19937_64& rng, bool symmetric = false) {
  std::uniform_real_distribution<double> c(-1, 1);
  std::vector<Monomial> terms{{1.0, 4, 0, 0}, {1.0, 0, 4, 0}, {0.5, 0, 0, 2}};
  terms.push_back({c(rng), 1, 1, 0});
  terms.push_back({c(rng), 2, 0, 1});
  terms.push_back({c(rng), 0, 2, 1});
  terms.push_back({c(rng), 2, 0, 0});
  terms.push_back({c(rng), 0, 0, 1});
  if (!symmetric) {
    terms.push_back({c(rng), 1, 0, 1});
    terms.push_back({c(rng), 0, 1, 1});
    terms.push_back({c(rng), 1, 0, 0});
    terms.push_back({c(rng), 2, 1, 0});
  }
  return polynomial_field(terms, "random");
}

// Even integer (x, y) and z a multiple of 1/2: plane lattice points with
// spacing 1/2 then lie on the space lattice of the same spacing, so the
// space LPs see a superset of the plane candidates.
inline Point aligned_point(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> i(-1, 1);
  std::uniform_real_distribution<double> z(-1, 1);
  const double x = 2.0 * i(rng);
  const double y = 2.0 * i(rng);
  return {x, y, 0.5 * std::round(2 * z(rng))};
}

inline const WindowSpec kAlignedPlane{1.0, 5};
inline const WindowSpec kAlignedSpace{2.0, 9};

// No growth: every operator sees exactly its lattice.
inline GrowthPolicy fixed_window() {
  GrowthPolicy g;
  g.max_doublings = 0;
  g.stall_tolerance = std::numeric_limits<double>::infinity();
  return g;
}

}  // namespace hconv::testing
