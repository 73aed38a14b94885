#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "regen/path.hpp"

namespace regen {

struct Atom {
  double y = 0.0;     // location
  double mark = 0.0;  // intensity coordinate in [0, n_max]
};

// Planar Poisson process with intensity e^{-y} dy dn on (0, inf) x [0, n_max];
// projecting onto marks <= n gives the atom set at intensity n for every n at
// once. Sorted by location.
struct AtomSet {
  std::vector<Atom> atoms;
  double n_max = 0.0;
};

AtomSet sample_atoms(double n_max, std::uint64_t seed, std::uint32_t replicate = 0);

// Sorted locations of the atoms with mark <= n.
std::vector<double> project(const AtomSet& atoms, double n);

// For each jump, the smallest mark among atoms strictly inside its gap
// (+inf if none): the gap is occupied at intensity n iff threshold <= n.
std::vector<double> gap_thresholds(const SubordinatorPath& path, const AtomSet& atoms);

// The same thresholds drawn directly: a gap ]a, a+x[ holds atoms with marks
// forming a Poisson process of rate e^{-a}(1-e^{-x}), so its smallest mark is
// exponential with that rate. Equal in law to gap_thresholds on fresh atoms.
std::vector<double> gap_thresholds(const SubordinatorPath& path, std::uint64_t seed, std::uint32_t replicate = 0);

void write_csv(const AtomSet& atoms, std::ostream& out);

}  // namespace regen
