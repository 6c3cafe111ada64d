#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace bdew {

/// Truncation policy shared by every infinite-series evaluation in the library.
struct SeriesControl {
  double tol = 1e-12;
  std::size_t max_terms = 100000;

  SeriesControl() = default;
  SeriesControl(double tolerance, std::size_t cap) : tol(tolerance), max_terms(cap) {
    if (!(tol > 0.0)) throw std::invalid_argument("SeriesControl: tol must be positive");
    if (max_terms < 1) throw std::invalid_argument("SeriesControl: max_terms must be >= 1");
  }
};

/// Thrown when a series hits max_terms before its tail bound drops below tol.
class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, double partial, double tail_bound)
      : std::runtime_error(what), partial_(partial), tail_bound_(tail_bound) {}

  double partial_sum() const noexcept { return partial_; }
  double tail_bound() const noexcept { return tail_bound_; }

 private:
  double partial_;
  double tail_bound_;
};

// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace bdew
