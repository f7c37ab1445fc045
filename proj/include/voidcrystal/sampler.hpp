#ifndef VOIDCRYSTAL_SAMPLER_HPP
#define VOIDCRYSTAL_SAMPLER_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "voidcrystal/lattice.hpp"
#include "voidcrystal/rng.hpp"
#include "voidcrystal/snapshot.hpp"
#include "voidcrystal/version.hpp"

namespace voidcrystal {

struct MoveSchedule {
  double exchange_ratio = 0.5;     // fraction of attempts that are exchanges
  long sweeps_per_sample = 100;
  long thermalization_sweeps = 1000;
  std::uint64_t seed = 1;

  void validate() const {
    if (!(exchange_ratio > 0.0 && exchange_ratio < 1.0))
      throw std::invalid_argument("MoveSchedule: exchange_ratio must be in (0,1)");
    if (sweeps_per_sample < 1) throw std::invalid_argument("MoveSchedule: sweeps_per_sample must be positive");
    if (thermalization_sweeps < 1)
      throw std::invalid_argument("MoveSchedule: thermalization_sweeps must be positive");
  }
};

struct SampleRecord {
  long sweep = 0;
  double energy = 0.0;
  std::vector<std::int8_t> values;
};

struct SweepStats {
  long attempts = 0;
  long accepted = 0;
};

enum class InitMode { droplet, scattered };

// Exactly floor(fill*N^2) sites set to +1: a packed square block (droplet)
// or a uniform random subset (scattered).
inline SpinConfig init_config(int side, double fill, std::uint64_t seed,
                              InitMode mode = InitMode::droplet) {
  TorusLattice lat(2, side);
  const long m = static_cast<long>(fill * static_cast<double>(lat.sites()));
  if (m < 1) throw std::invalid_argument("init_config: floor(fill*N^2) must be >= 1");
  if (m > lat.sites()) throw std::invalid_argument("init_config: fill too large");
  SpinConfig cfg(lat, 0);
  if (mode == InitMode::droplet) {
    // fill a centered square block, then rows above it until the count lands
    const int block = static_cast<int>(std::sqrt(static_cast<double>(m)));
    const int x0 = (side - block) / 2, y0 = (side - block) / 2;
    long placed = 0;
    for (int dy = 0; dy < block; ++dy)
      for (int dx = 0; dx < block; ++dx, ++placed)
        cfg.set(lat.site_of((x0 + dx) % side, (y0 + dy) % side), 1);
    for (long i = 0; placed < m; ++i) {
      const int x = (x0 + static_cast<int>(i % side)) % side;
      const int y = (y0 + block + static_cast<int>(i / side)) % side;
      const int s = lat.site_of(x, y);
      if (cfg.at(s) == 0) {
        cfg.set(s, 1);
        ++placed;
      }
    }
  } else {
    std::mt19937_64 rng(seed);
    std::vector<int> sites(lat.sites());
    for (int i = 0; i < lat.sites(); ++i) sites[i] = i;
    for (long i = 0; i < m; ++i) {
      const auto j = i + static_cast<long>(uniform_below(rng, sites.size() - i));
      std::swap(sites[i], sites[j]);
      cfg.set(sites[i], 1);
    }
  }
  return cfg;
}

// Metropolis dynamics for the three-state model at fixed vacancy count.
// Elementary moves: spin flips on nonzero sites and exchanges of an
// arbitrary (nonzero, zero) site pair, both proposed symmetrically. The
// nonlocal exchange keeps the canonical constraint exact and lets distant
// droplets coalesce quickly.
class Sampler {
 public:
  Sampler(SpinConfig config, ModelParams params, MoveSchedule schedule)
      : config_(std::move(config)), params_(params), schedule_(schedule), rng_(schedule.seed) {
    params_.validate();
    schedule_.validate();
    if (config_.lattice().dim() != params_.dim || config_.lattice().side() != params_.side)
      throw std::invalid_argument("Sampler: config does not match params");
    rebuild_site_lists();
    if (nonzero_.empty() || zero_.empty())
      throw std::invalid_argument("Sampler: need both occupied and empty sites");
    expected_zeros_ = static_cast<long>(zero_.size());
    energy_ = three_state_energy(config_, params_);
  }

  const SpinConfig& config() const { return config_; }
  const ModelParams& params() const { return params_; }
  const MoveSchedule& schedule() const { return schedule_; }
  double energy() const { return energy_; }
  long sweep_index() const { return sweep_index_; }
  const SweepStats& stats() const { return stats_; }

  void sweep() {
    const int attempts = config_.lattice().sites();
    for (int i = 0; i < attempts; ++i) attempt();
    ++sweep_index_;
    if (config_.zero_count() != expected_zeros_)
      throw std::logic_error("Sampler: vacancy count drifted");  // never happens by construction
  }

  void run_sweeps(long n) {
    for (long i = 0; i < n; ++i) sweep();
  }

  SampleRecord record() const { return {sweep_index_, energy_, config_.values()}; }

  double recompute_energy() const { return three_state_energy(config_, params_); }

  // Self-contained resumable state; restoring reproduces the exact sample
  // stream of an uninterrupted run.
  nlohmann::json checkpoint() const {
    nlohmann::json j;
    j["params"] = {{"beta", params_.beta}, {"h", params_.h},       {"k", params_.k},
                   {"dim", params_.dim},   {"side", params_.side}, {"fill", params_.fill}};
    j["schedule"] = {{"exchange_ratio", schedule_.exchange_ratio},
                     {"sweeps_per_sample", schedule_.sweeps_per_sample},
                     {"thermalization_sweeps", schedule_.thermalization_sweeps},
                     {"seed", schedule_.seed}};
    j["snapshot"] = snapshot_to_json(config_);
    std::ostringstream os;
    os << rng_;
    j["rng_state"] = os.str();
    j["sweep_index"] = sweep_index_;
    j["energy"] = energy_;
    j["nonzero"] = nonzero_;
    j["zero"] = zero_;
    j["attempts"] = stats_.attempts;
    j["accepted"] = stats_.accepted;
    return j;
  }

  static Sampler restore(const nlohmann::json& j) {
    ModelParams p;
    p.beta = j.at("params").at("beta").get<double>();
    p.h = j.at("params").at("h").get<double>();
    p.k = j.at("params").at("k").get<double>();
    p.dim = j.at("params").at("dim").get<int>();
    p.side = j.at("params").at("side").get<int>();
    p.fill = j.at("params").at("fill").get<double>();
    MoveSchedule s;
    s.exchange_ratio = j.at("schedule").at("exchange_ratio").get<double>();
    s.sweeps_per_sample = j.at("schedule").at("sweeps_per_sample").get<long>();
    s.thermalization_sweeps = j.at("schedule").at("thermalization_sweeps").get<long>();
    s.seed = j.at("schedule").at("seed").get<std::uint64_t>();
    Sampler out(snapshot_from_json(j.at("snapshot")), p, s);
    std::istringstream is(j.at("rng_state").get<std::string>());
    is >> out.rng_;
    out.sweep_index_ = j.at("sweep_index").get<long>();
    out.energy_ = j.at("energy").get<double>();
    out.nonzero_ = j.at("nonzero").get<std::vector<int>>();
    out.zero_ = j.at("zero").get<std::vector<int>>();
    out.stats_.attempts = j.at("attempts").get<long>();
    out.stats_.accepted = j.at("accepted").get<long>();
    out.rebuild_positions();
    return out;
  }

 private:
  void rebuild_site_lists() {
    nonzero_.clear();
    zero_.clear();
    for (int s = 0; s < config_.lattice().sites(); ++s)
      (config_.at(s) != 0 ? nonzero_ : zero_).push_back(s);
    rebuild_positions();
  }

  void rebuild_positions() {
    pos_.assign(config_.lattice().sites(), -1);
    for (std::size_t i = 0; i < nonzero_.size(); ++i) pos_[nonzero_[i]] = static_cast<int>(i);
    for (std::size_t i = 0; i < zero_.size(); ++i) pos_[zero_[i]] = static_cast<int>(i);
  }

  void attempt() {
    ++stats_.attempts;
    const auto& lat = config_.lattice();
    if (uniform01(rng_) < schedule_.exchange_ratio) {
      const int xi = static_cast<int>(uniform_below(rng_, nonzero_.size()));
      const int yi = static_cast<int>(uniform_below(rng_, zero_.size()));
      const int x = nonzero_[xi], y = zero_[yi];
      const int s = config_.at(x);
      int sum_from = 0, sum_to = 0, adjacent = 0;
      for (int k = 0; k < lat.degree(); ++k) {
        const int n = lat.neighbor(x, k);
        sum_from += config_.at(n);
        adjacent |= (n == y);
      }
      for (int k = 0; k < lat.degree(); ++k) sum_to += config_.at(lat.neighbor(y, k));
      const double delta = s * (sum_from - sum_to) + adjacent;
      if (accept(delta)) {
        config_.set(x, 0);
        config_.set(y, static_cast<std::int8_t>(s));
        nonzero_[xi] = y;
        zero_[yi] = x;
        pos_[y] = xi;
        pos_[x] = yi;
        energy_ += delta;
        ++stats_.accepted;
      }
    } else {
      const int xi = static_cast<int>(uniform_below(rng_, nonzero_.size()));
      const int x = nonzero_[xi];
      const int s = config_.at(x);
      int nbr = 0;
      for (int k = 0; k < lat.degree(); ++k) nbr += config_.at(lat.neighbor(x, k));
      const double delta = 2.0 * s * (nbr + params_.h);
      if (accept(delta)) {
        config_.set(x, static_cast<std::int8_t>(-s));
        energy_ += delta;
        ++stats_.accepted;
      }
    }
  }

  bool accept(double delta) {
    if (delta <= 0.0) return true;
    return uniform01(rng_) < std::exp(-params_.beta * delta);
  }

  SpinConfig config_;
  ModelParams params_;
  MoveSchedule schedule_;
  std::mt19937_64 rng_;
  std::vector<int> nonzero_, zero_;
  std::vector<int> pos_;
  long expected_zeros_ = 0;
  double energy_ = 0.0;
  long sweep_index_ = 0;
  SweepStats stats_;
};

// Thermalize, then emit n_samples records at the configured spacing.
inline std::vector<SampleRecord> run(const ModelParams& params, const MoveSchedule& schedule,
                                     int n_samples, InitMode mode = InitMode::droplet) {
  Sampler s(init_config(params.side, params.fill, schedule.seed, mode), params, schedule);
  s.run_sweeps(schedule.thermalization_sweeps);
  std::vector<SampleRecord> out;
  out.reserve(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    s.run_sweeps(schedule.sweeps_per_sample);
    out.push_back(s.record());
  }
  return out;
}

inline nlohmann::json run_manifest(const ModelParams& p, const MoveSchedule& s, int n_samples,
                                   InitMode mode) {
  nlohmann::json j;
  j["params"] = {{"beta", p.beta}, {"h", p.h},       {"k", p.k},
                 {"dim", p.dim},   {"side", p.side}, {"fill", p.fill}};
  j["schedule"] = {{"exchange_ratio", s.exchange_ratio},
                   {"sweeps_per_sample", s.sweeps_per_sample},
                   {"thermalization_sweeps", s.thermalization_sweeps},
                   {"seed", s.seed}};
  j["n_samples"] = n_samples;
  j["init_mode"] = (mode == InitMode::droplet) ? "droplet" : "scattered";
  j["code_version"] = source_hash;
  return j;
}

}

#endif
