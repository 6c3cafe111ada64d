#pragma once

// Independent reference computations for the test suites. These use the textbook
// formulas with plain pow() and brute-force sums, never the library's log-space
// kernels, so agreement is a genuine cross-check.

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracle {

struct Law {
  double alpha, p, b1, b2, b3;
};

inline double edw_cdf(double alpha, double p, double beta, std::int64_t x) {
  if (x < 0) return 0.0;
  return std::pow(1.0 - std::pow(p, std::pow(static_cast<double>(x) + 1.0, alpha)), beta);
}

inline double edw_pmf(double alpha, double p, double beta, std::int64_t x) {
  return edw_cdf(alpha, p, beta, x) - edw_cdf(alpha, p, beta, x - 1);
}

/// Binomial-series pmf, which terminates for integer beta.
inline double edw_pmf_series(double alpha, double p, int beta, std::int64_t x) {
  const double lo = std::pow(static_cast<double>(x), alpha);
  const double hi = std::pow(static_cast<double>(x) + 1.0, alpha);
  double sum = 0.0, binom = 1.0;
  for (int k = 1; k <= beta; ++k) {
    binom = binom * (beta - k + 1) / k;
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    sum += sign * binom * (std::pow(p, k * lo) - std::pow(p, k * hi));
  }
  return sum;
}

inline double joint_cdf(const Law& l, std::int64_t x1, std::int64_t x2) {
  if (x1 < 0 || x2 < 0) return 0.0;
  const std::int64_t z = x1 < x2 ? x1 : x2;
  return edw_cdf(l.alpha, l.p, l.b1, x1) * edw_cdf(l.alpha, l.p, l.b2, x2) *
         edw_cdf(l.alpha, l.p, l.b3, z);
}

inline double four_corner(const Law& l, std::int64_t x1, std::int64_t x2) {
  return joint_cdf(l, x1, x2) - joint_cdf(l, x1 - 1, x2) - joint_cdf(l, x1, x2 - 1) +
         joint_cdf(l, x1 - 1, x2 - 1);
}

/// Brute-force probability of the latent-variable event, enumerating V1, V2, V3
/// up to `edge` with independent EDW pmfs.
inline double latent_enumeration(const Law& l, std::int64_t x1, std::int64_t x2, std::int64_t edge) {
  double total = 0.0;
  for (std::int64_t v3 = 0; v3 <= edge; ++v3) {
    const double f3 = edw_pmf(l.alpha, l.p, l.b3, v3);
    for (std::int64_t v1 = 0; v1 <= edge; ++v1) {
      if (std::max(v1, v3) != x1) continue;
      for (std::int64_t v2 = 0; v2 <= edge; ++v2) {
        if (std::max(v2, v3) != x2) continue;
        total += f3 * edw_pmf(l.alpha, l.p, l.b1, v1) * edw_pmf(l.alpha, l.p, l.b2, v2);
      }
    }
  }
  return total;
}

inline double sum_region(const Law& l, std::int64_t edge,
                         const std::function<bool(std::int64_t, std::int64_t)>& keep) {
  double s = 0.0;
  for (std::int64_t i = 0; i <= edge; ++i)
    for (std::int64_t j = 0; j <= edge; ++j)
      if (keep(i, j)) s += four_corner(l, i, j);
  return s;
}

/// Central difference of f along coordinate i.
inline double central_difference(const std::function<double(const std::vector<double>&)>& f,
                                 std::vector<double> x, std::size_t i, double h) {
  const double x0 = x[i];
  x[i] = x0 + h;
  const double up = f(x);
  x[i] = x0 - h;
  const double down = f(x);
  return (up - down) / (2.0 * h);
}

}  // namespace oracle
