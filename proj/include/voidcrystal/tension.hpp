#ifndef VOIDCRYSTAL_TENSION_HPP
#define VOIDCRYSTAL_TENSION_HPP

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "voidcrystal/free_energy.hpp"
#include "voidcrystal/logsum.hpp"
#include "voidcrystal/oracle.hpp"
#include "voidcrystal/parallel.hpp"

namespace voidcrystal {

// Clamped spins on the frame of the box B_n. theta assigns +1 to frame
// sites with <x, theta> >= 0 and 0 elsewhere; plus/zero are constant.
//
// The direction components are snapped at multiples of pi/4 so that whole
// lattice lines of ties (<x, theta> = 0) break identically across the
// symmetry orbit of theta; otherwise the sign noise of cos(pi/2) shifts
// the interface by one row for some orbit members.
struct BoundaryCondition {
  enum class Kind { theta, plus, zero };
  Kind kind = Kind::plus;
  double angle = 0.0;
  double ux = 1.0, uy = 0.0;

  static BoundaryCondition make_theta(double a) {
    BoundaryCondition bc{Kind::theta, a, std::cos(a), std::sin(a)};
    const double r = std::numbers::sqrt2 / 2;
    const auto snap = [](double& c, double target) {
      if (std::abs(std::abs(c) - target) < 1e-9) c = std::copysign(target, c);
    };
    snap(bc.ux, 0.0);
    snap(bc.uy, 0.0);
    snap(bc.ux, r);
    snap(bc.uy, r);
    if (bc.uy == 0.0) bc.ux = std::copysign(1.0, bc.ux);
    if (bc.ux == 0.0) bc.uy = std::copysign(1.0, bc.uy);
    return bc;
  }
  static BoundaryCondition make_plus() { return {Kind::plus, 0.0, 0.0, 0.0}; }
  static BoundaryCondition make_zero() { return {Kind::zero, 0.0, 0.0, 0.0}; }

  int spin_at(double x, double y) const {
    switch (kind) {
      case Kind::plus: return 1;
      case Kind::zero: return 0;
      case Kind::theta: return (x * ux + y * uy >= 0.0) ? 1 : 0;
    }
    return 0;
  }
};

// log Z(beta, h, k, B_n; bc) for the three-state Hamiltonian: interior
// sites are Z^2 in [-n, n]^2, the frame one step outside is clamped by bc.
// Bonds with at least one interior endpoint count; field and vacancy terms
// on interior sites only.
//
// Exact column-to-column contraction over states in {-1,0,+1}^(2n+1).
// The horizontal coupling factorizes over rows into 3x3 kernels, so one
// column step costs O(H 3^H). All weights are normalized per step and the
// scale accumulated in log form; nothing overflows at large beta.
inline PartitionValue boundary_partition(int n, const BoundaryCondition& bc, double beta, double h,
                                         double k, int max_half_side = 6) {
  if (n < 1) throw std::invalid_argument("boundary_partition: n must be >= 1");
  if (n > max_half_side || n > 6)
    throw CapExceeded("boundary_partition: half-side " + std::to_string(n) + " exceeds cap " +
                      std::to_string(std::min(max_half_side, 6)));
  if (!(beta > 0)) throw std::invalid_argument("boundary_partition: beta must be > 0");

  const int H = 2 * n + 1;             // sites per column / number of columns
  const double dk = 2.0 + k;           // vacancy field, d = 2 here
  std::size_t dim = 1;
  for (int i = 0; i < H; ++i) dim *= 3;
  const std::size_t p3_top = dim / 3;  // stride of the topmost trit

  const auto spin_of = [](int trit) { return trit - 1; };

  // base exponent per column state: vertical bonds + field + vacancy term,
  // all multiplied by beta at use
  std::vector<double> base(dim);
  double max_base_class[3][3];
  for (auto& row : max_base_class)
    for (auto& v : row) v = -1e300;
  for (std::size_t idx = 0; idx < dim; ++idx) {
    std::size_t rest = idx;
    int prev = 0, bond = 0, field = 0, zeros = 0, t0 = 0, ttop = 0;
    for (int r = 0; r < H; ++r) {
      const int t = static_cast<int>(rest % 3);
      rest /= 3;
      const int s = spin_of(t);
      if (r == 0) t0 = t;
      if (r == H - 1) ttop = t;
      if (r > 0) bond += prev * s;
      prev = s;
      field += s;
      zeros += (s == 0);
    }
    base[idx] = bond + h * field + dk * zeros;
    max_base_class[t0][ttop] = std::max(max_base_class[t0][ttop], base[idx]);
  }

  // clamped frame spins
  std::vector<int> bottom(H), top(H), left(H), right(H);
  for (int i = 0; i < H; ++i) {
    const double c = i - n;  // coordinate along the frame side
    bottom[i] = bc.spin_at(c, -(n + 1));
    top[i] = bc.spin_at(c, n + 1);
    left[i] = bc.spin_at(-(n + 1), c);
    right[i] = bc.spin_at(n + 1, c);
  }

  // normalized horizontal kernel: exp(beta (s s' - 1))
  double kern[3][3];
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) kern[a][b] = std::exp(beta * (spin_of(a) * spin_of(b) - 1.0));

  double log_scale = 0.0;
  std::vector<double> v(dim);

  // column exponent including the bonds to the frame row below/above
  const auto column_shift = [&](int c) {
    double m = -1e300;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        m = std::max(m, max_base_class[a][b] + spin_of(a) * bottom[c] + spin_of(b) * top[c]);
    return m;
  };

  // first column, with bonds to the left frame column
  {
    const double shift = column_shift(0);
    double extra = -1e300;
    std::vector<double> edge(dim);
    for (std::size_t idx = 0; idx < dim; ++idx) {
      std::size_t rest = idx;
      double e = 0.0;
      for (int r = 0; r < H; ++r) {
        e += spin_of(static_cast<int>(rest % 3)) * left[r];
        rest /= 3;
      }
      edge[idx] = e;
      extra = std::max(extra, e);
    }
    for (std::size_t idx = 0; idx < dim; ++idx) {
      const int t0 = static_cast<int>(idx % 3);
      const int tt = static_cast<int>(idx / p3_top);
      const double xi = base[idx] + spin_of(t0) * bottom[0] + spin_of(tt) * top[0] + edge[idx];
      v[idx] = std::exp(beta * (xi - shift - extra));
    }
    log_scale += beta * (shift + extra);
  }

  for (int c = 1; c < H; ++c) {
    // horizontal coupling: one 3x3 kernel per row
    std::size_t stride = 1;
    for (int r = 0; r < H; ++r) {
      for (std::size_t blk = 0; blk < dim; blk += stride * 3) {
        for (std::size_t off = 0; off < stride; ++off) {
          const std::size_t i0 = blk + off, i1 = i0 + stride, i2 = i1 + stride;
          const double a = v[i0], b = v[i1], cc = v[i2];
          v[i0] = a * kern[0][0] + b * kern[1][0] + cc * kern[2][0];
          v[i1] = a * kern[0][1] + b * kern[1][1] + cc * kern[2][1];
          v[i2] = a * kern[0][2] + b * kern[1][2] + cc * kern[2][2];
        }
      }
      stride *= 3;
    }
    log_scale += beta * H;  // kernel normalization, one factor e^beta per row

    // renormalize between the two stages: each spans at most exp(-beta*O(H))
    // on its own, which keeps beta = 40 boxes inside double range
    double kmax = 0.0;
    for (double x : v) kmax = std::max(kmax, x);
    if (kmax <= 0.0) throw std::runtime_error("boundary_partition: weight vector vanished");
    for (auto& x : v) x /= kmax;
    log_scale += std::log(kmax);

    const double shift = column_shift(c);
    double vmax = 0.0;
    for (std::size_t idx = 0; idx < dim; ++idx) {
      const int t0 = static_cast<int>(idx % 3);
      const int tt = static_cast<int>(idx / p3_top);
      const double xi = base[idx] + spin_of(t0) * bottom[c] + spin_of(tt) * top[c];
      v[idx] *= std::exp(beta * (xi - shift));
      vmax = std::max(vmax, v[idx]);
    }
    log_scale += beta * shift;
    if (vmax <= 0.0) throw std::runtime_error("boundary_partition: weight vector vanished");
    for (auto& x : v) x /= vmax;
    log_scale += std::log(vmax);
  }

  // close with the right frame column
  LogSumAccumulator acc;
  for (std::size_t idx = 0; idx < dim; ++idx) {
    if (v[idx] <= 0.0) continue;
    std::size_t rest = idx;
    double e = 0.0;
    for (int r = 0; r < H; ++r) {
      e += spin_of(static_cast<int>(rest % 3)) * right[r];
      rest /= 3;
    }
    acc.add(std::log(v[idx]) + beta * e);
  }
  return {acc.value() + log_scale};
}

// Chord of the interface line {<x, theta> = 0} through the box, in lattice
// units matching the (2n+1)-row site grid.
inline double interface_chord(double theta, int n) {
  const double c = std::abs(std::cos(theta)), s = std::abs(std::sin(theta));
  return (2.0 * n + 1.0) / std::max(c, s);
}

struct TensionEstimate {
  double tau = 0.0;
  double residual = 0.0;
  bool converged = false;
  std::vector<std::pair<int, double>> per_box;  // (n, finite-box estimate)
};

// tau(theta) at coexistence: per-box log-ratio estimates extrapolated with
// a two-point 1/n fit. k must be the coexistence field; anything else makes
// the ratio drift linearly in n, so the caller pins it.
inline TensionEstimate tension_at_k(double theta, double beta, double h, double k,
                                    const std::vector<int>& n_list) {
  if (n_list.size() < 2) throw std::invalid_argument("tension_at: need at least two box sizes");
  for (std::size_t i = 1; i < n_list.size(); ++i)
    if (n_list[i] <= n_list[i - 1]) throw std::invalid_argument("tension_at: n_list must be ascending");

  TensionEstimate est;
  for (int n : n_list) {
    const double z_theta = boundary_partition(n, BoundaryCondition::make_theta(theta), beta, h, k).log_value;
    const double z_plus = boundary_partition(n, BoundaryCondition::make_plus(), beta, h, k).log_value;
    const double z_zero = boundary_partition(n, BoundaryCondition::make_zero(), beta, h, k).log_value;
    const double tau_n = -(z_theta - 0.5 * (z_plus + z_zero)) / (beta * interface_chord(theta, n));
    est.per_box.emplace_back(n, tau_n);
  }

  // two-point fit tau_n = tau_inf + a / l, with l the interface chord of
  // the box (removes the exact half-integer offset of the site grid)
  const auto extrapolate = [&](std::size_t i, std::size_t j) {
    const double li = 2.0 * est.per_box[i].first + 1.0, lj = 2.0 * est.per_box[j].first + 1.0;
    return (lj * est.per_box[j].second - li * est.per_box[i].second) / (lj - li);
  };
  const std::size_t m = est.per_box.size();
  est.tau = extrapolate(m - 2, m - 1);
  est.residual = std::abs(est.per_box[m - 1].second - est.tau);

  bool monotone = true;
  const double slack = 0.05 * std::abs(est.tau) + 1e-9;
  for (std::size_t i = 2; i < m; ++i) {
    const double d_prev = est.per_box[i - 1].second - est.per_box[i - 2].second;
    const double d_cur = est.per_box[i].second - est.per_box[i - 1].second;
    if (d_prev * d_cur < 0 && std::min(std::abs(d_prev), std::abs(d_cur)) > slack) monotone = false;
  }
  // Cauchy criterion on successive extrapolants; the plain distance from
  // the last box is dominated by the removed 1/l term
  const double cauchy = m >= 3 ? std::abs(est.tau - extrapolate(m - 3, m - 2)) : est.residual;
  est.converged = monotone && cauchy <= std::max(0.02 * std::abs(est.tau), 5e-4);
  return est;
}

inline TensionEstimate tension_at(double theta, double beta, double h, const std::vector<int>& n_list,
                                  int max_width = 12) {
  return tension_at_k(theta, beta, h, coexistence_field(beta, h, 2, max_width), n_list);
}

struct TensionSample {
  double theta = 0.0;
  double tau = 0.0;
  double residual = 0.0;
  bool converged = false;
};

// Fold an angle into [0, pi/4] using the square-lattice symmetries
// (theta -> -theta, theta -> theta + pi/2).
inline double fold_angle(double theta) {
  const double q = std::numbers::pi / 2.0;
  double t = std::fmod(theta, q);
  if (t < 0) t += q;
  if (t > q / 2.0) t = q - t;
  return t;
}

// Sampled tau(theta) with provenance. Raw per-direction values are kept as
// computed (the symmetry audit compares them); evaluation between samples
// folds into [0, pi/4] and interpolates monotonically.
class SurfaceTensionTable {
 public:
  SurfaceTensionTable() = default;
  SurfaceTensionTable(std::vector<TensionSample> samples, double beta, double h, double k,
                      std::vector<int> n_list)
      : samples_(std::move(samples)), beta_(beta), h_(h), k_(k), n_list_(std::move(n_list)) {
    build_nodes();
  }

  const std::vector<TensionSample>& samples() const { return samples_; }
  double beta() const { return beta_; }
  double h() const { return h_; }
  double k() const { return k_; }
  const std::vector<int>& n_list() const { return n_list_; }
  bool all_converged() const {
    for (const auto& s : samples_)
      if (!s.converged) return false;
    return !samples_.empty();
  }
  double max_residual() const {
    double r = 0.0;
    for (const auto& s : samples_) r = std::max(r, s.residual);
    return r;
  }

  // monotone cubic through the folded nodes, zero slope at both ends (the
  // folded extension is reflection-symmetric there)
  double value_at(double theta) const {
    if (node_x_.empty()) throw std::logic_error("SurfaceTensionTable: empty table");
    if (node_x_.size() == 1) return node_y_[0];
    const double x = fold_angle(theta);
    std::size_t i = 0;
    while (i + 2 < node_x_.size() && x > node_x_[i + 1]) ++i;
    const double h0 = node_x_[i + 1] - node_x_[i];
    const double t = std::clamp((x - node_x_[i]) / h0, 0.0, 1.0);
    const double y0 = node_y_[i], y1 = node_y_[i + 1], m0 = node_d_[i] * h0, m1 = node_d_[i + 1] * h0;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * y1 +
           (t3 - t2) * m1;
  }

  // largest deviation of a raw sample from the folded mean of its orbit
  double symmetry_residual() const {
    double worst = 0.0;
    for (const auto& s : samples_) worst = std::max(worst, std::abs(s.tau - fold_mean(fold_angle(s.theta))));
    return worst;
  }

  // max over grid pairs of tau~(x+y) - tau~(x) - tau~(y) for the
  // 1-homogeneous extension tau~(v) = |v| tau(v/|v|); <= 0 means sublinear
  double sublinearity_violation() const {
    const auto ext = [&](double vx, double vy) {
      const double r = std::hypot(vx, vy);
      return r < 1e-12 ? 0.0 : r * value_at(std::atan2(vy, vx));
    };
    double worst = -1e300;
    for (const auto& a : samples_)
      for (const auto& b : samples_) {
        const double ax = std::cos(a.theta), ay = std::sin(a.theta);
        const double bx = std::cos(b.theta), by = std::sin(b.theta);
        worst = std::max(worst, ext(ax + bx, ay + by) - ext(ax, ay) - ext(bx, by));
      }
    return worst;
  }

  void write_csv(std::ostream& os) const {
    os << "theta_radians,tau,residual,converged_flag\n" << std::setprecision(17);
    for (const auto& s : samples_)
      os << s.theta << ',' << s.tau << ',' << s.residual << ',' << (s.converged ? 1 : 0) << '\n';
  }

  nlohmann::json meta_json() const {
    nlohmann::json j;
    j["beta"] = beta_;
    j["h"] = h_;
    j["k"] = k_;
    j["n_list"] = n_list_;
    return j;
  }

  static SurfaceTensionTable from_rows(const std::vector<TensionSample>& rows,
                                       const nlohmann::json& meta) {
    return SurfaceTensionTable(rows, meta.at("beta").get<double>(), meta.at("h").get<double>(),
                               meta.at("k").get<double>(), meta.at("n_list").get<std::vector<int>>());
  }

 private:
  double fold_mean(double folded) const {
    double sum = 0.0;
    int cnt = 0;
    for (const auto& s : samples_) {
      if (std::abs(fold_angle(s.theta) - folded) < 1e-9) {
        sum += s.tau;
        ++cnt;
      }
    }
    return cnt ? sum / cnt : 0.0;
  }

  void build_nodes() {
    std::vector<std::pair<double, std::pair<double, int>>> agg;  // folded angle -> (sum, count)
    for (const auto& s : samples_) {
      const double f = fold_angle(s.theta);
      bool found = false;
      for (auto& [x, sc] : agg)
        if (std::abs(x - f) < 1e-9) {
          sc.first += s.tau;
          ++sc.second;
          found = true;
          break;
        }
      if (!found) agg.push_back({f, {s.tau, 1}});
    }
    std::sort(agg.begin(), agg.end());
    node_x_.clear();
    node_y_.clear();
    for (const auto& [x, sc] : agg) {
      node_x_.push_back(x);
      node_y_.push_back(sc.first / sc.second);
    }
    // Fritsch-Carlson slopes, clamped ends at zero
    const std::size_t m = node_x_.size();
    node_d_.assign(m, 0.0);
    if (m < 2) return;
    std::vector<double> sec(m - 1);
    for (std::size_t i = 0; i + 1 < m; ++i)
      sec[i] = (node_y_[i + 1] - node_y_[i]) / (node_x_[i + 1] - node_x_[i]);
    for (std::size_t i = 1; i + 1 < m; ++i) {
      if (sec[i - 1] * sec[i] <= 0) {
        node_d_[i] = 0.0;
      } else {
        const double h0 = node_x_[i] - node_x_[i - 1], h1 = node_x_[i + 1] - node_x_[i];
        const double w1 = 2 * h1 + h0, w2 = h1 + 2 * h0;
        node_d_[i] = (w1 + w2) / (w1 / sec[i - 1] + w2 / sec[i]);
      }
    }
  }

  std::vector<TensionSample> samples_;
  double beta_ = 0.0, h_ = 0.0, k_ = 0.0;
  std::vector<int> n_list_;
  std::vector<double> node_x_, node_y_, node_d_;
};

// tau over a uniform direction grid; every direction is computed raw (no
// folding) so the symmetry audit stays meaningful.
inline SurfaceTensionTable tension_table(double beta, double h, int n_dirs,
                                         const std::vector<int>& n_list, int threads = 1) {
  if (n_dirs < 8) throw std::invalid_argument("tension_table: need at least 8 directions");
  const double k = coexistence_field(beta, h, 2);
  std::vector<TensionSample> samples(n_dirs);
  parallel_for(n_dirs, threads, [&](int i) {
    const double theta = 2.0 * std::numbers::pi * i / n_dirs;
    const auto est = tension_at_k(theta, beta, h, k, n_list);
    samples[i] = {theta, est.tau, est.residual, est.converged};
  });
  return SurfaceTensionTable(std::move(samples), beta, h, k, n_list);
}

}

#endif
