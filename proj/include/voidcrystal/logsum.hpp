#ifndef VOIDCRYSTAL_LOGSUM_HPP
#define VOIDCRYSTAL_LOGSUM_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace voidcrystal {

// Natural log of a partition function. All partition arithmetic stays in
// log domain; ratios of probabilities come from differences of log values.
struct PartitionValue {
  double log_value = -std::numeric_limits<double>::infinity();
};

// Streaming log(sum(exp(a_i))). Keeps the running max so the stored sum
// never overflows; mergeable across workers.
class LogSumAccumulator {
 public:
  void add(double a) {
    if (std::isinf(a) && a < 0) return;
    if (a <= max_) {
      sum_ += std::exp(a - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - a) + 1.0;
      max_ = a;
    }
    ++count_;
  }

  void merge(const LogSumAccumulator& other) {
    if (other.count_ == 0) return;
    if (other.max_ <= max_) {
      sum_ += other.sum_ * std::exp(other.max_ - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - other.max_) + other.sum_;
      max_ = other.max_;
    }
    count_ += other.count_;
  }

  double value() const {
    if (count_ == 0) return -std::numeric_limits<double>::infinity();
    return max_ + std::log(sum_);
  }

  std::size_t count() const { return count_; }

 private:
  double max_ = -std::numeric_limits<double>::infinity();
  double sum_ = 0.0;
  std::size_t count_ = 0;
};

inline double log_sum_exp(const std::vector<double>& args) {
  if (args.empty()) throw std::invalid_argument("log_sum_exp: empty input");
  double m = *std::max_element(args.begin(), args.end());
  if (std::isinf(m) && m < 0) return m;
  double s = 0.0;
  for (double a : args) s += std::exp(a - m);
  return m + std::log(s);
}

}

#endif
