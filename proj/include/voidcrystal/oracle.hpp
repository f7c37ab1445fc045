#ifndef VOIDCRYSTAL_ORACLE_HPP
#define VOIDCRYSTAL_ORACLE_HPP

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <map>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "voidcrystal/lattice.hpp"
#include "voidcrystal/logsum.hpp"

namespace voidcrystal {

// Exact enumeration is desk-scale by construction. Every entry point checks
// its cap up front and refuses loudly; there is no silent fallback.
struct CapExceeded : std::runtime_error {
  explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct OracleCaps {
  int max_region_sites = 20;                 // 2^20 spin configurations
  std::uint64_t max_regions = 1'000'000;     // C(N^d, volume)
  std::uint64_t max_configs = 20'000'000;    // 3^(N^d)
};

inline std::uint64_t binomial_count(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long double acc = 1.0L;
  for (int i = 1; i <= k; ++i) acc = acc * (n - k + i) / i;
  if (acc > 1.8e19L) return UINT64_MAX;
  return static_cast<std::uint64_t>(acc + 0.5L);
}

// Visits every size-k subset of {0..n-1} in lexicographic order.
template <class F>
void for_each_subset(int n, int k, F&& fn) {
  if (k == 0) {
    std::vector<int> empty;
    fn(empty);
    return;
  }
  if (k > n) return;
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  for (;;) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// log Z(beta, h, V): free-boundary Ising partition function of the region,
// by enumeration of all +-1 assignments. Bonds are the torus bonds with
// both endpoints inside V.
inline PartitionValue partition_free(const Region& region, double beta, double h,
                                     const OracleCaps& caps = {}) {
  const int m = region.volume();
  if (m > caps.max_region_sites)
    throw CapExceeded("partition_free: region has " + std::to_string(m) + " sites, cap is " +
                      std::to_string(caps.max_region_sites));
  if (m == 0) return {0.0};  // single empty configuration, Z = 1

  const auto sites = region.site_list();
  std::vector<int> pos(region.lattice().sites(), -1);
  for (int i = 0; i < m; ++i) pos[sites[i]] = i;

  // Internal unordered bonds as index pairs into `sites`.
  std::vector<std::pair<int, int>> bonds;
  const auto& lat = region.lattice();
  for (int i = 0; i < m; ++i)
    for (int a = 0; a < lat.dim(); ++a) {
      int t = lat.forward(sites[i], a);
      if (pos[t] >= 0) bonds.emplace_back(i, pos[t]);
    }

  LogSumAccumulator acc;
  std::vector<int> spin(m, -1);
  const std::uint64_t total = std::uint64_t{1} << m;
  for (std::uint64_t code = 0; code < total; ++code) {
    for (int i = 0; i < m; ++i) spin[i] = (code >> i & 1) ? 1 : -1;
    double bond = 0.0, field = 0.0;
    for (const auto& [i, j] : bonds) bond += spin[i] * spin[j];
    for (int i = 0; i < m; ++i) field += spin[i];
    acc.add(beta * (bond + h * field));
  }
  return {acc.value()};
}

struct BoxEntry {
  std::uint64_t mask = 0;
  int volume = 0;
  double log_weight = 0.0;  // unnormalized log Z of this box
  double probability = 0.0;
};

// Probability table over the boxes of a prescribed volume.
struct BoxDistribution {
  std::vector<BoxEntry> entries;  // sorted by mask

  void normalize() {
    LogSumAccumulator acc;
    for (const auto& e : entries) acc.add(e.log_weight);
    const double logz = acc.value();
    for (auto& e : entries) e.probability = std::exp(e.log_weight - logz);
  }

  double total_log_weight() const {
    LogSumAccumulator acc;
    for (const auto& e : entries) acc.add(e.log_weight);
    return acc.value();
  }

  void write_csv(std::ostream& os) const {
    os << "region_bitmask_hex,volume,log_Z,probability\n";
    os << std::setprecision(17);
    for (const auto& e : entries)
      os << std::hex << e.mask << std::dec << ',' << e.volume << ',' << e.log_weight << ','
         << e.probability << '\n';
  }
};

// Half the L1 distance between the two probability tables, over the union
// of their supports.
inline double total_variation(const BoxDistribution& a, const BoxDistribution& b) {
  std::map<std::uint64_t, double> diff;
  for (const auto& e : a.entries) diff[e.mask] += e.probability;
  for (const auto& e : b.entries) diff[e.mask] -= e.probability;
  double tv = 0.0;
  for (const auto& [mask, d] : diff) tv += std::abs(d);
  return 0.5 * tv;
}

namespace detail {
inline void check_region_enumeration(int n_sites, int volume, const OracleCaps& caps,
                                     const char* who) {
  if (n_sites > 64) throw CapExceeded(std::string(who) + ": more than 64 sites");
  const std::uint64_t count = binomial_count(n_sites, volume);
  if (count > caps.max_regions)
    throw CapExceeded(std::string(who) + ": " + std::to_string(count) + " regions exceed cap " +
                      std::to_string(caps.max_regions));
}
}

// log Xi(beta, h, N, f): sum of Z(beta,h,V) over all boxes V of volume
// floor(f*N^d).
inline PartitionValue xi(int side, double fill, double beta, double h, int dim = 2,
                         const OracleCaps& caps = {}) {
  TorusLattice lat(dim, side);
  const int volume = static_cast<int>(fill * static_cast<double>(lat.sites()));
  detail::check_region_enumeration(lat.sites(), volume, caps, "xi");
  LogSumAccumulator acc;
  for_each_subset(lat.sites(), volume, [&](const std::vector<int>& idx) {
    Region v(lat, idx);
    acc.add(partition_free(v, beta, h, caps).log_value);
  });
  return {acc.value()};
}

// P_N(V) = Z(beta,h,V) / Xi: the box distribution of the void ensemble.
inline BoxDistribution void_distribution(int side, double fill, double beta, double h, int dim = 2,
                                         const OracleCaps& caps = {}) {
  TorusLattice lat(dim, side);
  const int volume = static_cast<int>(fill * static_cast<double>(lat.sites()));
  detail::check_region_enumeration(lat.sites(), volume, caps, "void_distribution");
  BoxDistribution dist;
  for_each_subset(lat.sites(), volume, [&](const std::vector<int>& idx) {
    Region v(lat, idx);
    BoxEntry e;
    e.mask = v.mask();
    e.volume = volume;
    e.log_weight = partition_free(v, beta, h, caps).log_value;
    dist.entries.push_back(e);
  });
  dist.normalize();
  return dist;
}

// Law of the support W(eta) under the three-state Gibbs weight restricted
// to configurations with the prescribed vacancy count. Enumerates all
// 3^(N^d) configurations directly — an independent route from
// void_distribution, which goes through per-region Ising sums.
inline BoxDistribution constrained_support_marginal(int side, double fill, double beta, double h,
                                                    double k, int dim = 2,
                                                    const OracleCaps& caps = {}) {
  TorusLattice lat(dim, side);
  const int n = lat.sites();
  if (n > 40) throw CapExceeded("constrained_support_marginal: more than 3^40 configurations");
  double configs = std::pow(3.0, n);
  if (configs > static_cast<double>(caps.max_configs))
    throw CapExceeded("constrained_support_marginal: 3^" + std::to_string(n) +
                      " configurations exceed cap " + std::to_string(caps.max_configs));

  const int volume = static_cast<int>(fill * static_cast<double>(n));
  const int target_zeros = n - volume;
  ModelParams p;
  p.beta = beta;
  p.h = h;
  p.k = k;
  p.dim = dim;
  p.side = side;
  p.fill = fill;

  std::map<std::uint64_t, LogSumAccumulator> weights;
  SpinConfig cfg(lat, -1);
  std::vector<int> trit(n, 0);  // 0,1,2 -> spin -1,0,+1... encoded as value = trit - 1
  // odometer over all 3^n configurations
  for (;;) {
    if (cfg.zero_count() == target_zeros) {
      const double e = three_state_energy(cfg, p);
      weights[support(cfg).mask()].add(-beta * e);
    }
    int i = 0;
    while (i < n && trit[i] == 2) {
      trit[i] = 0;
      cfg.set(i, -1);
      ++i;
    }
    if (i == n) break;
    ++trit[i];
    cfg.set(i, static_cast<std::int8_t>(trit[i] - 1));
  }

  BoxDistribution dist;
  for (const auto& [mask, acc] : weights) {
    BoxEntry e;
    e.mask = mask;
    e.volume = volume;
    e.log_weight = acc.value();
    dist.entries.push_back(e);
  }
  dist.normalize();
  return dist;
}

}

#endif
