#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "helpers.hpp"
#include "voidcrystal/oracle.hpp"

using namespace voidcrystal;

namespace {

// Independent oracle for log Z: enumerates spin assignments through the
// public SpinConfig/ising_energy path instead of the internal bond list.
double log_z_by_config_enumeration(const Region& v, double beta, double h) {
  const auto sites = v.site_list();
  const int m = static_cast<int>(sites.size());
  LogSumAccumulator acc;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << m); ++code) {
    SpinConfig cfg(v.lattice(), 0);
    for (int i = 0; i < m; ++i) cfg.set(sites[i], (code >> i & 1) ? 1 : -1);
    acc.add(-beta * ising_energy(cfg, v, h));
  }
  return acc.value();
}

// Second, mechanism-independent region iterator: 0/1 masks in
// prev_permutation order instead of the lexicographic index odometer.
template <class F>
void for_each_region_by_mask(int n, int k, F&& fn) {
  std::vector<int> mask(n, 0);
  std::fill(mask.begin(), mask.begin() + k, 1);
  do {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i)
      if (mask[i]) idx.push_back(i);
    fn(idx);
  } while (std::prev_permutation(mask.begin(), mask.end()));
}

}

TEST_CASE("free-boundary partition functions") {
  TorusLattice lat(2, 3);
  const double beta = 1.0, h = 0.5;

  SECTION("single site") {
    Region v(lat, {4});
    REQUIRE_THAT(partition_free(v, beta, h).log_value,
                 Catch::Matchers::WithinAbs(std::log(2 * std::cosh(beta * h)), 1e-12));
  }
  SECTION("two adjacent sites: four configurations") {
    Region v(lat, {lat.site_of(0, 0), lat.site_of(1, 0)});
    const double expect = std::log(std::exp(2.0) + 1.0 + 2 * std::exp(-1.0));
    REQUIRE_THAT(partition_free(v, beta, h).log_value, Catch::Matchers::WithinAbs(expect, 1e-12));
  }
  SECTION("two disjoint sites factorize") {
    Region v(lat, {lat.site_of(0, 0), lat.site_of(2, 1)});
    REQUIRE_THAT(partition_free(v, beta, h).log_value,
                 Catch::Matchers::WithinAbs(2 * std::log(2 * std::cosh(beta * h)), 1e-12));
  }
  SECTION("empty region has Z = 1") {
    Region v(lat);
    REQUIRE(partition_free(v, beta, h).log_value == 0.0);
  }
  SECTION("factorization over distant blocks") {
    std::mt19937_64 rng(5);
    TorusLattice big(2, 6);
    for (int t = 0; t < 10; ++t) {
      Region a(big), b(big), both(big);
      for (int i = 0; i < 3; ++i) {
        const int sa = big.site_of(static_cast<int>(uniform_below(rng, 2)),
                                   static_cast<int>(uniform_below(rng, 2)));
        const int sb = big.site_of(3 + static_cast<int>(uniform_below(rng, 2)),
                                   3 + static_cast<int>(uniform_below(rng, 2)));
        a.add(sa);
        b.add(sb);
        both.add(sa);
        both.add(sb);
      }
      const double sum = partition_free(a, beta, h).log_value + partition_free(b, beta, h).log_value;
      REQUIRE_THAT(partition_free(both, beta, h).log_value, Catch::Matchers::WithinAbs(sum, 1e-12));
    }
  }
  SECTION("enumeration matches the config-path oracle") {
    std::mt19937_64 rng(9);
    for (int t = 0; t < 10; ++t) {
      Region v = vctest::random_region(lat, 4, rng);
      REQUIRE_THAT(partition_free(v, 0.8, 0.4).log_value,
                   Catch::Matchers::WithinAbs(log_z_by_config_enumeration(v, 0.8, 0.4), 1e-12));
    }
  }
  SECTION("cap refusal") {
    TorusLattice big(2, 5);
    Region v(big);
    for (int s = 0; s < 21; ++s) v.add(s);
    REQUIRE_THROWS_AS(partition_free(v, beta, h), CapExceeded);
  }
}

TEST_CASE("void ensemble partition function") {
  const double beta = 1.0, h = 0.5;
  SECTION("volume one: nine translated single-site boxes") {
    REQUIRE_THAT(xi(3, 0.12, beta, h).log_value,
                 Catch::Matchers::WithinAbs(std::log(9 * 2 * std::cosh(beta * h)), 1e-12));
  }
  SECTION("volume zero: empty box only") {
    REQUIRE(xi(3, 0.05, beta, h).log_value == 0.0);
  }
  SECTION("volume two: independent two-pass enumeration") {
    TorusLattice lat(2, 3);
    LogSumAccumulator acc;
    for_each_region_by_mask(9, 2, [&](const std::vector<int>& idx) {
      Region v(lat, idx);
      acc.add(log_z_by_config_enumeration(v, beta, h));
    });
    REQUIRE_THAT(xi(3, 0.25, beta, h).log_value, Catch::Matchers::WithinAbs(acc.value(), 1e-12));
  }
  SECTION("cap refusal") {
    OracleCaps caps;
    caps.max_regions = 10;
    REQUIRE_THROWS_AS(xi(3, 0.45, beta, h, 2, caps), CapExceeded);
  }
}

TEST_CASE("void box distribution") {
  SECTION("volume one is uniform by translation symmetry") {
    const auto dist = void_distribution(3, 0.12, 1.0, 0.5);
    REQUIRE(dist.entries.size() == 9);
    for (const auto& e : dist.entries)
      REQUIRE_THAT(e.probability, Catch::Matchers::WithinAbs(1.0 / 9, 1e-13));
  }
  SECTION("low temperature concentrates on adjacent pairs") {
    const auto dist = void_distribution(3, 0.25, 6.0, 0.5);
    TorusLattice lat(2, 3);
    double adjacent_mass = 0.0;
    for (const auto& e : dist.entries) {
      const Region v = Region::from_mask(lat, e.mask);
      const auto sites = v.site_list();
      bool adj = false;
      for (int k = 0; k < lat.degree(); ++k) adj |= (lat.neighbor(sites[0], k) == sites[1]);
      if (adj) adjacent_mass += e.probability;
    }
    REQUIRE(adjacent_mass > 0.99);
  }
  SECTION("beta = 0 is exactly uniform at fixed volume") {
    const auto dist = void_distribution(3, 0.34, 1e-14, 0.5);
    REQUIRE(dist.entries.size() == binomial_count(9, 3));
    for (const auto& e : dist.entries)
      REQUIRE_THAT(e.probability, Catch::Matchers::WithinAbs(1.0 / dist.entries.size(), 1e-12));
  }
  SECTION("csv export") {
    const auto dist = void_distribution(3, 0.12, 1.0, 0.5);
    std::ostringstream os;
    dist.write_csv(os);
    const std::string s = os.str();
    REQUIRE(s.rfind("region_bitmask_hex,volume,log_Z,probability\n", 0) == 0);
    REQUIRE(std::count(s.begin(), s.end(), '\n') == 10);
  }
}

TEST_CASE("constrained support marginal") {
  SECTION("independent of the vacancy field") {
    const auto a = constrained_support_marginal(3, 0.25, 1.0, 0.5, 0.0);
    const auto b = constrained_support_marginal(3, 0.25, 1.0, 0.5, 17.0);
    REQUIRE(total_variation(a, b) < 1e-12);
  }
  SECTION("matches the void ensemble") {
    for (double beta : {0.5, 1.5}) {
      const auto constrained = constrained_support_marginal(3, 0.25, beta, 0.5, 0.7);
      const auto voids = void_distribution(3, 0.25, beta, 0.5);
      REQUIRE(total_variation(constrained, voids) < 1e-12);
    }
  }
  SECTION("beta = 0 is uniform over constrained supports") {
    const auto dist = constrained_support_marginal(3, 0.25, 1e-14, 0.5, 0.3);
    for (const auto& e : dist.entries)
      REQUIRE_THAT(e.probability, Catch::Matchers::WithinAbs(1.0 / dist.entries.size(), 1e-12));
  }
  SECTION("cap refusal") {
    OracleCaps caps;
    caps.max_configs = 1000;
    REQUIRE_THROWS_AS(constrained_support_marginal(3, 0.25, 1.0, 0.5, 0.0, 2, caps), CapExceeded);
  }
}
