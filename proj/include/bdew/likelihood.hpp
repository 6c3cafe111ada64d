#pragma once

// Log-likelihood and score of a BDEW law over a sample of non-negative integer pairs.
//
// With G(y; b) = [1 - p^(y^alpha)]^b and g1(x; b) = G(x+1; b) - G(x; b):
//   x1 < x2 : f = g1(x1; b1+b3) g1(x2; b2)
//   x2 < x1 : f = g1(x1; b1) g1(x2; b2+b3)
//   x1 = x2 : f = G(x+1; b1) g1(x; b2+b3) - G(x; b1+b3) g1(x; b2)
// The partial derivatives of G are
//   g2 = dG/db = G ln(1 - p^(y^alpha))
//   g3 = dG/dp = -b y^alpha p^(y^alpha - 1) [1 - p^(y^alpha)]^(b-1)
//   g4 = dG/dalpha = -b ln(y) y^alpha p^(y^alpha) ln(p) [1 - p^(y^alpha)]^(b-1)
// all taken as 0 at y = 0, where G vanishes identically.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "bdew/bivariate.hpp"

namespace bdew {

struct PairSample {
  std::vector<PairPoint> pairs;
  std::size_t n1 = 0;  // x1 < x2
  std::size_t n2 = 0;  // x2 < x1
  std::size_t n3 = 0;  // x1 = x2

  std::size_t size() const noexcept { return pairs.size(); }
};

inline PairSample partition_sample(std::span<const PairPoint> pairs) {
  PairSample s;
  s.pairs.assign(pairs.begin(), pairs.end());
  for (const auto& pt : s.pairs) {
    if (pt.x1 < 0 || pt.x2 < 0) throw std::invalid_argument("partition_sample: negative coordinate");
    if (pt.x1 < pt.x2)
      ++s.n1;
    else if (pt.x2 < pt.x1)
      ++s.n2;
    else
      ++s.n3;
  }
  return s;
}

/// Accepts real-valued coordinates, rejecting anything that is not a non-negative integer.
inline PairSample partition_sample(std::span<const std::array<double, 2>> raw) {
  std::vector<PairPoint> pts;
  pts.reserve(raw.size());
  for (const auto& r : raw) {
    for (double c : r)
      if (!(c >= 0.0) || std::floor(c) != c || c > 9.0e18)
        throw std::invalid_argument("partition_sample: coordinates must be non-negative integers");
    pts.emplace_back(static_cast<std::int64_t>(r[0]), static_cast<std::int64_t>(r[1]));
  }
  return partition_sample(pts);
}

/// Parameter order used by every gradient in the library.
enum ParamIndex : std::size_t { kAlpha = 0, kP = 1, kBeta1 = 2, kBeta2 = 3, kBeta3 = 4 };

using Gradient = std::array<double, 5>;

namespace detail {

// A value with its gradient in (alpha, ln p, beta1, beta2, beta3).
struct Graded {
  double v = 0.0;
  Gradient d{};

  friend Graded operator-(const Graded& a, const Graded& b) {
    Graded r{a.v - b.v, {}};
    for (std::size_t i = 0; i < 5; ++i) r.d[i] = a.d[i] - b.d[i];
    return r;
  }
  friend Graded operator*(const Graded& a, const Graded& b) {
    Graded r{a.v * b.v, {}};
    for (std::size_t i = 0; i < 5; ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
    return r;
  }
};

// Which of beta1..beta3 enter an exponent.
struct BetaMask {
  bool b1, b2, b3;
  double sum(const BdewParams& b) const {
    return (b1 ? b.beta1() : 0.0) + (b2 ? b.beta2() : 0.0) + (b3 ? b.beta3() : 0.0);
  }
};

inline constexpr BetaMask kB1{true, false, false};
inline constexpr BetaMask kB2{false, true, false};
inline constexpr BetaMask kB13{true, false, true};
inline constexpr BetaMask kB23{false, true, true};

// G(y; beta) with its derivatives (g4, d/d ln p, g2 on the masked betas).
inline Graded level_power(const BdewParams& b, const ShapeKernel& k, std::int64_t y,
                          BetaMask mask) {
  Graded g;
  if (y <= 0) return g;
  const double beta = mask.sum(b);
  const double yd = static_cast<double>(y);
  const double z = k.exponent(yd);
  const double level = log1mexp(z);
  g.v = std::exp(beta * level);
  // beta * p^(y^a) * [1 - p^(y^a)]^(beta - 1)
  const double common = beta * std::exp((beta - 1.0) * level + z);
  const double log_y = std::log(yd);
  g.d[kAlpha] = -common * z * log_y;
  g.d[kP] = -common * std::exp(k.alpha * log_y);
  const double g2 = g.v * level;
  if (mask.b1) g.d[kBeta1] = g2;
  if (mask.b2) g.d[kBeta2] = g2;
  if (mask.b3) g.d[kBeta3] = g2;
  return g;
}

inline Graded edw_pmf_graded(const BdewParams& b, const ShapeKernel& k, std::int64_t x,
                             BetaMask mask) {
  return level_power(b, k, x + 1, mask) - level_power(b, k, x, mask);
}

// ln f at one pair with gradient in (alpha, ln p, betas).
inline Graded log_pmf_graded(const BdewParams& b, const ShapeKernel& k, PairPoint pt) {
  Graded out;
  auto accumulate_log = [&out](const Graded& f) {
    out.v += std::log(f.v);
    for (std::size_t i = 0; i < 5; ++i) out.d[i] += f.d[i] / f.v;
  };
  if (pt.x1 < pt.x2) {
    accumulate_log(edw_pmf_graded(b, k, pt.x1, kB13));
    accumulate_log(edw_pmf_graded(b, k, pt.x2, kB2));
  } else if (pt.x2 < pt.x1) {
    accumulate_log(edw_pmf_graded(b, k, pt.x1, kB1));
    accumulate_log(edw_pmf_graded(b, k, pt.x2, kB23));
  } else {
    const auto x = pt.x1;
    const Graded f3 = level_power(b, k, x + 1, kB1) * edw_pmf_graded(b, k, x, kB23) -
                      level_power(b, k, x, kB13) * edw_pmf_graded(b, k, x, kB2);
    accumulate_log(f3);
  }
  return out;
}

}  // namespace detail

/// Sum of ln f over the sample; -infinity if any observed pair has zero probability.
inline double log_likelihood(const BdewParams& b, const PairSample& sample) {
  CompensatedSum acc;
  for (const auto& pt : sample.pairs) {
    double lf;
    if (pt.x1 < pt.x2) {
      lf = std::log(edw_pmf(b.edw(b.beta1() + b.beta3()), pt.x1)) +
           std::log(edw_pmf(b.edw(b.beta2()), pt.x2));
    } else if (pt.x2 < pt.x1) {
      lf = std::log(edw_pmf(b.edw(b.beta1()), pt.x1)) +
           std::log(edw_pmf(b.edw(b.beta2() + b.beta3()), pt.x2));
    } else {
      lf = std::log(joint_pmf(b, pt));
    }
    if (!(lf > -std::numeric_limits<double>::infinity()))
      return -std::numeric_limits<double>::infinity();
    acc.add(lf);
  }
  return acc.value();
}

/// Gradient of log_likelihood in (alpha, ln p, beta1, beta2, beta3); the optimizer
/// works in this coordinate for p because 1 - p can be ~1e-11 at real optima.
inline Gradient score_log_p(const BdewParams& b, const PairSample& sample) {
  const auto k = b.kernel();
  Gradient g{};
  for (const auto& pt : sample.pairs) {
    const auto term = detail::log_pmf_graded(b, k, pt);
    if (!std::isfinite(term.v)) throw std::domain_error("score: observed pair has zero probability");
    for (std::size_t i = 0; i < 5; ++i) g[i] += term.d[i];
  }
  return g;
}

/// Gradient of log_likelihood in (alpha, p, beta1, beta2, beta3).
inline Gradient score(const BdewParams& b, const PairSample& sample) {
  Gradient g = score_log_p(b, sample);
  g[kP] /= b.p();
  return g;
}

}  // namespace bdew
