#pragma once

#include <cmath>
#include <cstdint>

namespace clum {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }

  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

// ln(exp(log_t) + gap) for gap >= 0, without forming exp(log_t).
inline double log_shifted(double log_t, double gap) noexcept {
  if (gap <= 0.0) return log_t;
  const double log_gap = std::log(gap);
  const double x = log_t - log_gap;
  if (x > 0.0) return log_t + std::log1p(std::exp(-x));
  return log_gap + std::log1p(std::exp(x));
}

// exp(log_t) / (exp(log_t) + gap), the logistic of (log_t - ln gap).
inline double shifted_fraction(double log_t, double gap) noexcept {
  if (gap <= 0.0) return 1.0;
  const double x = log_t - std::log(gap);
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace clum
