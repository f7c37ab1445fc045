#ifndef VOIDCRYSTAL_SNAPSHOT_HPP
#define VOIDCRYSTAL_SNAPSHOT_HPP

#include <stdexcept>

#include "json.hpp"
#include "voidcrystal/lattice.hpp"

namespace voidcrystal {

// Configuration snapshot: {"d": .., "N": .., "values": [-1,0,1,...]},
// row-major. Shared by the CLI, sample streams and test fixtures.

inline nlohmann::json snapshot_to_json(const SpinConfig& config) {
  nlohmann::json j;
  j["d"] = config.lattice().dim();
  j["N"] = config.lattice().side();
  j["values"] = nlohmann::json::array();
  for (auto v : config.values()) j["values"].push_back(static_cast<int>(v));
  return j;
}

inline SpinConfig snapshot_from_json(const nlohmann::json& j) {
  const int d = j.at("d").get<int>();
  const int n = j.at("N").get<int>();
  TorusLattice lat(d, n);
  const auto& vals = j.at("values");
  if (static_cast<int>(vals.size()) != lat.sites())
    throw std::invalid_argument("snapshot: value count does not match N^d");
  SpinConfig cfg(lat, 0);
  for (int s = 0; s < lat.sites(); ++s) cfg.set(s, static_cast<std::int8_t>(vals[s].get<int>()));
  return cfg;
}

}

#endif
