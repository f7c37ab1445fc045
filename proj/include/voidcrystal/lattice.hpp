#ifndef VOIDCRYSTAL_LATTICE_HPP
#define VOIDCRYSTAL_LATTICE_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace voidcrystal {

// Periodic d-dimensional lattice (d = 1 or 2), row-major site indexing.
// Side length >= 3 so that the 2d neighbors of a site are distinct and the
// forward-bond enumeration below counts each unordered nearest-neighbor
// pair exactly once (d*N^d bonds in total).
class TorusLattice {
 public:
  TorusLattice(int dim, int side) : dim_(dim), side_(side) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("TorusLattice: dim must be 1 or 2");
    if (side < 3) throw std::invalid_argument("TorusLattice: side must be >= 3");
    sites_ = 1;
    for (int a = 0; a < dim; ++a) sites_ *= side;
    neighbors_.resize(static_cast<std::size_t>(sites_) * 2 * dim);
    for (int s = 0; s < sites_; ++s) {
      const int x = s % side;
      if (dim == 1) {
        neighbors_[2 * s + 0] = (x + 1) % side;
        neighbors_[2 * s + 1] = (x + side - 1) % side;
      } else {
        const int y = s / side;
        neighbors_[4 * s + 0] = (x + 1) % side + side * y;
        neighbors_[4 * s + 1] = (x + side - 1) % side + side * y;
        neighbors_[4 * s + 2] = x + side * ((y + 1) % side);
        neighbors_[4 * s + 3] = x + side * ((y + side - 1) % side);
      }
    }
  }

  int dim() const { return dim_; }
  int side() const { return side_; }
  int sites() const { return sites_; }
  int degree() const { return 2 * dim_; }
  int bond_count() const { return dim_ * sites_; }

  // k in [0, 2*dim): even = +axis, odd = -axis.
  int neighbor(int site, int k) const { return neighbors_[static_cast<std::size_t>(site) * degree() + k]; }

  // Forward neighbor along axis a; iterating these over all sites visits
  // every unordered bond once.
  int forward(int site, int axis) const { return neighbor(site, 2 * axis); }

  int site_of(int x, int y = 0) const { return x + side_ * y; }
  std::array<int, 2> coords(int site) const { return {site % side_, site / side_}; }

  bool same_geometry(const TorusLattice& o) const { return dim_ == o.dim_ && side_ == o.side_; }

 private:
  int dim_;
  int side_;
  int sites_;
  std::vector<int> neighbors_;
};

// Scalar couplings of the three-state Hamiltonian
//   H(eta) = -sum_bonds eta_x eta_y - h sum eta_x - (d + k) sum (1 - eta_x^2)
// with bonds = unordered nearest-neighbor pairs.
struct ModelParams {
  double beta = 1.0;   // inverse temperature, > 0
  double h = 0.5;      // field on the +-1 spins, > 0
  double k = 0.0;      // field on the 0 spins (enters as d + k)
  int dim = 2;
  int side = 3;
  double fill = 0.05;  // matter fraction, in (0, 1)

  void validate() const {
    if (!(beta > 0)) throw std::invalid_argument("ModelParams: beta must be > 0");
    if (!(h > 0)) throw std::invalid_argument("ModelParams: h must be > 0");
    if (dim != 1 && dim != 2) throw std::invalid_argument("ModelParams: dim must be 1 or 2");
    if (side < 3) throw std::invalid_argument("ModelParams: side must be >= 3");
    if (!(fill > 0 && fill < 1)) throw std::invalid_argument("ModelParams: fill must be in (0,1)");
    if (matter_volume() < 1) throw std::invalid_argument("ModelParams: floor(fill*N^d) must be >= 1");
  }

  long sites() const {
    long n = 1;
    for (int a = 0; a < dim; ++a) n *= side;
    return n;
  }
  long matter_volume() const { return static_cast<long>(fill * static_cast<double>(sites())); }
  long vacancy_count() const { return sites() - matter_volume(); }
};

// {-1, 0, +1}-valued field on the torus; the 0 count is cached and kept in
// sync by set().
class SpinConfig {
 public:
  explicit SpinConfig(TorusLattice lattice, std::int8_t init = 0)
      : lattice_(std::move(lattice)), values_(lattice_.sites(), init) {
    check_value(init);
    zero_count_ = (init == 0) ? lattice_.sites() : 0;
  }

  const TorusLattice& lattice() const { return lattice_; }
  const std::vector<std::int8_t>& values() const { return values_; }
  std::int8_t at(int site) const { return values_[site]; }

  void set(int site, std::int8_t v) {
    check_value(v);
    if (values_[site] == 0) --zero_count_;
    values_[site] = v;
    if (v == 0) ++zero_count_;
  }

  int zero_count() const { return zero_count_; }

  int recompute_zero_count() const {
    int z = 0;
    for (auto v : values_) z += (v == 0);
    return z;
  }

 private:
  static void check_value(std::int8_t v) {
    if (v < -1 || v > 1) throw std::invalid_argument("SpinConfig: values must be -1, 0 or +1");
  }
  TorusLattice lattice_;
  std::vector<std::int8_t> values_;
  int zero_count_ = 0;
};

// Subset of torus sites with cached volume.
class Region {
 public:
  explicit Region(TorusLattice lattice)
      : lattice_(std::move(lattice)), member_(lattice_.sites(), 0), volume_(0) {}

  Region(TorusLattice lattice, const std::vector<int>& sites) : Region(std::move(lattice)) {
    for (int s : sites) add(s);
  }

  static Region from_mask(const TorusLattice& lattice, std::uint64_t mask) {
    if (lattice.sites() > 64) throw std::invalid_argument("Region::from_mask: more than 64 sites");
    Region r(lattice);
    for (int s = 0; s < lattice.sites(); ++s)
      if (mask >> s & 1) r.add(s);
    return r;
  }

  const TorusLattice& lattice() const { return lattice_; }
  bool contains(int site) const { return member_[site] != 0; }
  int volume() const { return volume_; }

  void add(int site) {
    if (!member_[site]) {
      member_[site] = 1;
      ++volume_;
    }
  }
  void remove(int site) {
    if (member_[site]) {
      member_[site] = 0;
      --volume_;
    }
  }

  std::vector<int> site_list() const {
    std::vector<int> out;
    out.reserve(volume_);
    for (int s = 0; s < lattice_.sites(); ++s)
      if (member_[s]) out.push_back(s);
    return out;
  }

  std::uint64_t mask() const {
    if (lattice_.sites() > 64) throw std::invalid_argument("Region::mask: more than 64 sites");
    std::uint64_t m = 0;
    for (int s = 0; s < lattice_.sites(); ++s)
      if (member_[s]) m |= std::uint64_t{1} << s;
    return m;
  }

  // Unordered n.n. pairs {x,y} with x inside and y outside; each such pair
  // is seen exactly once by scanning all 2d directions from member sites.
  int boundary_pair_count() const {
    int c = 0;
    for (int s = 0; s < lattice_.sites(); ++s) {
      if (!member_[s]) continue;
      for (int k = 0; k < lattice_.degree(); ++k) c += !member_[lattice_.neighbor(s, k)];
    }
    return c;
  }

  std::vector<std::pair<int, int>> boundary_pairs() const {
    std::vector<std::pair<int, int>> out;
    for (int s = 0; s < lattice_.sites(); ++s) {
      if (!member_[s]) continue;
      for (int k = 0; k < lattice_.degree(); ++k) {
        int t = lattice_.neighbor(s, k);
        if (!member_[t]) out.emplace_back(s, t);
      }
    }
    return out;
  }

  // Sizes of the 2d-connected components, largest first.
  std::vector<int> component_sizes() const {
    std::vector<int> sizes;
    std::vector<char> seen(lattice_.sites(), 0);
    for (int s = 0; s < lattice_.sites(); ++s) {
      if (!member_[s] || seen[s]) continue;
      int size = 0;
      std::queue<int> q;
      q.push(s);
      seen[s] = 1;
      while (!q.empty()) {
        int u = q.front();
        q.pop();
        ++size;
        for (int k = 0; k < lattice_.degree(); ++k) {
          int v = lattice_.neighbor(u, k);
          if (member_[v] && !seen[v]) {
            seen[v] = 1;
            q.push(v);
          }
        }
      }
      sizes.push_back(size);
    }
    std::sort(sizes.begin(), sizes.end(), std::greater<>());
    return sizes;
  }

 private:
  TorusLattice lattice_;
  std::vector<std::uint8_t> member_;
  int volume_;
};

// ---------------------------------------------------------------------------
// Energies. Bond sums run over unordered pairs via forward neighbors.

// Free-boundary Ising energy of the +-1 spins inside V:
//   -sum_{internal bonds} s_x s_y - h sum_{x in V} s_x.
// A 0 spin inside V violates the contract.
inline double ising_energy(const SpinConfig& config, const Region& region, double h) {
  if (!config.lattice().same_geometry(region.lattice()))
    throw std::invalid_argument("ising_energy: lattice mismatch");
  const auto& lat = config.lattice();
  double bond = 0.0, field = 0.0;
  for (int s = 0; s < lat.sites(); ++s) {
    if (!region.contains(s)) continue;
    const int sx = config.at(s);
    if (sx == 0) throw std::invalid_argument("ising_energy: zero spin inside the region");
    field += sx;
    for (int a = 0; a < lat.dim(); ++a) {
      int t = lat.forward(s, a);
      if (region.contains(t)) bond += sx * config.at(t);
    }
  }
  return -bond - h * field;
}

inline double three_state_energy(const SpinConfig& config, const ModelParams& p) {
  if (config.lattice().dim() != p.dim || config.lattice().side() != p.side)
    throw std::invalid_argument("three_state_energy: lattice mismatch");
  const auto& lat = config.lattice();
  double bond = 0.0, field = 0.0;
  long zeros = 0;
  for (int s = 0; s < lat.sites(); ++s) {
    const int sx = config.at(s);
    zeros += (sx == 0);
    field += sx;
    if (sx == 0) continue;
    for (int a = 0; a < lat.dim(); ++a) bond += sx * config.at(lat.forward(s, a));
  }
  return -bond - p.h * field - (p.dim + p.k) * static_cast<double>(zeros);
}

struct Move {
  enum class Kind { flip, exchange };
  Kind kind;
  int site;     // flip target / nonzero end of an exchange
  int partner;  // zero end of an exchange
};

inline Move flip_move(int site) { return {Move::Kind::flip, site, -1}; }
inline Move exchange_move(int nonzero_site, int zero_site) {
  return {Move::Kind::exchange, nonzero_site, zero_site};
}

// Exact energy difference of applying the move, derived from the local
// neighbor sums. The vacancy-field term cancels: a flip keeps eta^2 fixed
// and an exchange only permutes which sites are zero.
inline double local_energy_delta(const SpinConfig& config, const Move& move, const ModelParams& p) {
  const auto& lat = config.lattice();
  if (move.kind == Move::Kind::flip) {
    const int s = config.at(move.site);
    if (s == 0) throw std::invalid_argument("local_energy_delta: flip targets a zero spin");
    int nbr_sum = 0;
    for (int k = 0; k < lat.degree(); ++k) nbr_sum += config.at(lat.neighbor(move.site, k));
    return 2.0 * s * (nbr_sum + p.h);
  }
  const int s = config.at(move.site);
  if (s == 0) throw std::invalid_argument("local_energy_delta: exchange source is zero");
  if (config.at(move.partner) != 0) throw std::invalid_argument("local_energy_delta: exchange target not zero");
  int sum_from = 0, sum_to = 0, adjacent = 0;
  for (int k = 0; k < lat.degree(); ++k) {
    int n = lat.neighbor(move.site, k);
    sum_from += config.at(n);
    adjacent |= (n == move.partner);
  }
  for (int k = 0; k < lat.degree(); ++k) sum_to += config.at(lat.neighbor(move.partner, k));
  return s * (sum_from - sum_to) + adjacent;
}

inline void apply_move(SpinConfig& config, const Move& move) {
  if (move.kind == Move::Kind::flip) {
    config.set(move.site, static_cast<std::int8_t>(-config.at(move.site)));
  } else {
    auto s = config.at(move.site);
    config.set(move.site, 0);
    config.set(move.partner, s);
  }
}

// Support of eta: the sites carrying a nonzero spin.
inline Region support(const SpinConfig& config) {
  Region r(config.lattice());
  for (int s = 0; s < config.lattice().sites(); ++s)
    if (config.at(s) != 0) r.add(s);
  return r;
}

inline SpinConfig eta_from_region(const Region& region, std::int8_t sign_fill = 1) {
  if (sign_fill != 1 && sign_fill != -1)
    throw std::invalid_argument("eta_from_region: fill must be +1 or -1");
  SpinConfig cfg(region.lattice(), 0);
  for (int s = 0; s < region.lattice().sites(); ++s)
    if (region.contains(s)) cfg.set(s, sign_fill);
  return cfg;
}

}

#endif
