#include "regen/atoms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "regen/error.hpp"
#include "regen/rng.hpp"

namespace regen {

AtomSet sample_atoms(double n_max, std::uint64_t seed, std::uint32_t replicate) {
  if (!(n_max >= 0.0) || !std::isfinite(n_max)) throw BadIntensity("n_max must be finite and >= 0");
  AtomSet set;
  set.n_max = n_max;
  RandomStream rng(seed, replicate, streams::kAtoms);
  // Points u = n_max e^{-y} form a unit-rate process on (0, n_max]; walking it
  // by exponential spacings yields a Poisson(n_max) count of i.i.d. Exp(1)
  // locations, already in decreasing order.
  for (double u = rng.exponential(); u <= n_max; u += rng.exponential()) {
    set.atoms.push_back({std::log(n_max / u), n_max * rng.uniform()});
  }
  std::reverse(set.atoms.begin(), set.atoms.end());
  return set;
}

std::vector<double> project(const AtomSet& atoms, double n) {
  if (!(n >= 0.0) || n > atoms.n_max) throw BadIntensity("projection intensity must lie in [0, n_max]");
  std::vector<double> out;
  for (const Atom& a : atoms.atoms) {
    if (a.mark <= n) out.push_back(a.y);
  }
  return out;
}

std::vector<double> gap_thresholds(const SubordinatorPath& path, const AtomSet& atoms) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> out(path.jumps.size(), kInf);
  std::size_t j = 0;
  for (const Atom& a : atoms.atoms) {
    while (j < path.jumps.size() && path.jumps[j].s_pre + path.jumps[j].x <= a.y) ++j;
    if (j == path.jumps.size()) break;
    if (path.jumps[j].s_pre < a.y) out[j] = std::min(out[j], a.mark);
  }
  return out;
}

std::vector<double> gap_thresholds(const SubordinatorPath& path, std::uint64_t seed, std::uint32_t replicate) {
  RandomStream rng(seed, replicate, streams::kGapMarks);
  std::vector<double> out;
  out.reserve(path.jumps.size());
  for (const Jump& j : path.jumps) {
    const double rate = std::exp(-j.s_pre) * -std::expm1(-j.x);
    const double e = rng.exponential();
    out.push_back(rate > 0.0 ? e / rate : std::numeric_limits<double>::infinity());
  }
  return out;
}

void write_csv(const AtomSet& atoms, std::ostream& out) {
  out << "y,mark\n";
  out.precision(17);
  for (const Atom& a : atoms.atoms) out << a.y << ',' << a.mark << '\n';
}

}  // namespace regen
