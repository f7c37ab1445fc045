#ifndef VOIDCRYSTAL_TEST_HELPERS_HPP
#define VOIDCRYSTAL_TEST_HELPERS_HPP

#include <cmath>
#include <random>
#include <vector>

#include "voidcrystal/lattice.hpp"
#include "voidcrystal/rng.hpp"

namespace vctest {

inline voidcrystal::SpinConfig random_config(const voidcrystal::TorusLattice& lat,
                                             std::mt19937_64& rng) {
  voidcrystal::SpinConfig cfg(lat, 0);
  for (int s = 0; s < lat.sites(); ++s)
    cfg.set(s, static_cast<std::int8_t>(static_cast<int>(voidcrystal::uniform_below(rng, 3)) - 1));
  return cfg;
}

inline voidcrystal::Region random_region(const voidcrystal::TorusLattice& lat, int volume,
                                         std::mt19937_64& rng) {
  std::vector<int> sites(lat.sites());
  for (int i = 0; i < lat.sites(); ++i) sites[i] = i;
  voidcrystal::Region r(lat);
  for (int i = 0; i < volume; ++i) {
    const auto j = i + static_cast<int>(voidcrystal::uniform_below(rng, sites.size() - i));
    std::swap(sites[i], sites[j]);
    r.add(sites[i]);
  }
  return r;
}

}

#endif
