#pragma once

// Bivariate discrete exponentiated Weibull law (BDEW):
//
//   X1 = max(V1, V3),  X2 = max(V2, V3),  Vi ~ EDW(alpha, p, beta_i) independent.
//
// Everything below reduces to powers of G(y) = 1 - p^(y^alpha); the joint CDF is
// G(x1+1)^b1 * G(x2+1)^b2 * G(min(x1,x2)+1)^b3.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>

#include "bdew/edw.hpp"
#include "bdew/series.hpp"

namespace bdew {

struct PairPoint {
  std::int64_t x1 = 0;
  std::int64_t x2 = 0;

  PairPoint() = default;
  PairPoint(std::int64_t a, std::int64_t b) : x1(a), x2(b) {
    if (a < 0 || b < 0) throw std::invalid_argument("PairPoint: coordinates must be non-negative");
  }
  friend bool operator==(const PairPoint&, const PairPoint&) = default;
};

class BdewParams {
 public:
  BdewParams(double alpha, double p, double beta1, double beta2, double beta3)
      : BdewParams(EdwParams(alpha, p, beta1), beta2, beta3) {}

  static BdewParams from_log_p(double alpha, double log_p, double beta1, double beta2,
                               double beta3) {
    return BdewParams(EdwParams::from_log_p(alpha, log_p, beta1), beta2, beta3);
  }

  double alpha() const noexcept { return base_.alpha(); }
  double p() const noexcept { return base_.p(); }
  double log_p() const noexcept { return base_.log_p(); }
  double beta1() const noexcept { return base_.beta(); }
  double beta2() const noexcept { return beta2_; }
  double beta3() const noexcept { return beta3_; }

  /// Law of the latent component V_i, i in {1, 2, 3}.
  EdwParams latent(int i) const {
    switch (i) {
      case 1: return base_;
      case 2: return base_.with_beta(beta2_);
      case 3: return base_.with_beta(beta3_);
    }
    throw std::out_of_range("BdewParams::latent: index must be 1, 2 or 3");
  }

  /// EDW law sharing (alpha, p) with exponent beta; marginals and branch factors use this.
  EdwParams edw(double beta) const { return base_.with_beta(beta); }

  detail::ShapeKernel kernel() const noexcept { return base_.kernel(); }

  friend bool operator==(const BdewParams&, const BdewParams&) = default;

 private:
  BdewParams(EdwParams base, double beta2, double beta3)
      : base_(base), beta2_(beta2), beta3_(beta3) {
    if (!(beta2 > 0.0) || !std::isfinite(beta2))
      throw std::invalid_argument("BdewParams: beta2 must be positive");
    if (!(beta3 > 0.0) || !std::isfinite(beta3))
      throw std::invalid_argument("BdewParams: beta3 must be positive");
  }

  EdwParams base_;
  double beta2_;
  double beta3_;
};

/// Thrown when the diagonal mass cannot be resolved to a non-negative number.
class NumericalDegeneracy : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

// Joint CDF on the extended lattice, F(-1, .) = F(., -1) = 0.
inline double joint_cdf_ext(const BdewParams& b, std::int64_t x1, std::int64_t x2) noexcept {
  if (x1 < 0 || x2 < 0) return 0.0;
  const auto k = b.kernel();
  const double l1 = k.log_level(static_cast<double>(x1) + 1.0);
  const double l2 = k.log_level(static_cast<double>(x2) + 1.0);
  const double lz = x1 < x2 ? l1 : l2;
  return std::exp(b.beta1() * l1 + b.beta2() * l2 + b.beta3() * lz);
}

inline double four_corner_pmf(const BdewParams& b, std::int64_t x1, std::int64_t x2) noexcept {
  return joint_cdf_ext(b, x1, x2) - joint_cdf_ext(b, x1 - 1, x2) - joint_cdf_ext(b, x1, x2 - 1) +
         joint_cdf_ext(b, x1 - 1, x2 - 1);
}

// f3(x) = G(x+1)^b1 f(x; b2+b3) - G(x)^(b1+b3) f(x; b2).
inline double diagonal_pmf_closed(const BdewParams& b, std::int64_t x) noexcept {
  const double s23 = b.beta2() + b.beta3();
  const double s13 = b.beta1() + b.beta3();
  const double lhs = edw_cdf(b.edw(b.beta1()), x) * edw_pmf(b.edw(s23), x);
  const double rhs = edw_cdf(b.edw(s13), x - 1) * edw_pmf(b.edw(b.beta2()), x);
  return lhs - rhs;
}

constexpr double kDiagonalRoundoff = 1e-13;

}  // namespace detail

inline double joint_cdf(const BdewParams& b, PairPoint pt) noexcept {
  return detail::joint_cdf_ext(b, pt.x1, pt.x2);
}

inline double marginal_cdf(const BdewParams& b, int which, std::int64_t x) {
  if (which != 1 && which != 2) throw std::out_of_range("marginal: which must be 1 or 2");
  return edw_cdf(b.edw((which == 1 ? b.beta1() : b.beta2()) + b.beta3()), x);
}

inline double marginal_sf(const BdewParams& b, int which, std::int64_t x) {
  if (which != 1 && which != 2) throw std::out_of_range("marginal: which must be 1 or 2");
  return edw_sf(b.edw((which == 1 ? b.beta1() : b.beta2()) + b.beta3()), x);
}

inline double marginal_pmf(const BdewParams& b, int which, std::int64_t x) {
  if (which != 1 && which != 2) throw std::out_of_range("marginal: which must be 1 or 2");
  return edw_pmf(b.edw((which == 1 ? b.beta1() : b.beta2()) + b.beta3()), x);
}

/// Branch form: f1 off the diagonal above, f2 below, f3 on it.
inline double joint_pmf(const BdewParams& b, PairPoint pt) {
  const auto [x1, x2] = pt;
  if (x1 < x2) return edw_pmf(b.edw(b.beta1() + b.beta3()), x1) * edw_pmf(b.edw(b.beta2()), x2);
  if (x2 < x1) return edw_pmf(b.edw(b.beta1()), x1) * edw_pmf(b.edw(b.beta2() + b.beta3()), x2);
  const double closed = detail::diagonal_pmf_closed(b, x1);
  if (closed > 0.0) return closed;
  const double corners = detail::four_corner_pmf(b, x1, x1);
  if (corners >= 0.0) return corners;
  if (corners > -detail::kDiagonalRoundoff) return 0.0;
  throw NumericalDegeneracy("joint_pmf: diagonal mass evaluates negative at x = " +
                            std::to_string(x1));
}

/// P(X1 = x1 | X2 = x2).
inline double cond_pmf(const BdewParams& b, std::int64_t x1, std::int64_t given_x2) {
  const double denom = marginal_pmf(b, 2, given_x2);
  if (!(denom > 0.0)) throw std::domain_error("cond_pmf: conditioning event has zero probability");
  return joint_pmf(b, PairPoint(x1, given_x2)) / denom;
}

/// P(X1 <= x1 | X2 <= x2).
inline double cond_cdf_given_le(const BdewParams& b, std::int64_t x1, std::int64_t le_x2) {
  const double denom = marginal_cdf(b, 2, le_x2);
  if (!(denom > 0.0))
    throw std::domain_error("cond_cdf_given_le: conditioning event has zero probability");
  return joint_cdf(b, PairPoint(x1, le_x2)) / denom;
}

/// P(X1 <= x1 | X2 = x2). Closed branches avoid differencing the joint CDF,
/// which cancels badly when the conditioning pmf is small.
inline double cond_cdf_given_eq(const BdewParams& b, std::int64_t x1, std::int64_t eq_x2) {
  const double denom = marginal_pmf(b, 2, eq_x2);
  if (!(denom > 0.0))
    throw std::domain_error("cond_cdf_given_eq: conditioning event has zero probability");
  // From the diagonal on, X1 given X2 = x2 is EDW(beta1) above x2, so the
  // remaining mass is exactly its survival.
  if (x1 >= eq_x2) return edw_cdf(b.latent(1), x1);
  const double ratio = edw_pmf(b.latent(2), eq_x2) / denom;
  return std::clamp(edw_cdf(b.edw(b.beta1() + b.beta3()), x1) * ratio, 0.0, 1.0);
}

/// E[X1 | X2 = x2]. Above x2 the conditional law of X1 is EDW(alpha, p, beta1),
/// so the infinite part is an EDW first-moment tail.
inline double cond_expectation(const BdewParams& b, std::int64_t eq_x2,
                               const SeriesControl& ctrl = {}) {
  const double denom = marginal_pmf(b, 2, eq_x2);
  if (!(denom > 0.0))
    throw std::domain_error("cond_expectation: conditioning event has zero probability");
  CompensatedSum acc;
  for (std::int64_t x1 = 1; x1 <= eq_x2; ++x1)
    acc.add(static_cast<double>(x1) * joint_pmf(b, PairPoint(x1, eq_x2)) / denom);

  const EdwParams v1 = b.latent(1);
  // sum_{x > x2} x f(x) = (x2 + 1) S(x2) + sum_{x > x2} S(x)
  acc.add(static_cast<double>(eq_x2 + 1) * edw_sf(v1, eq_x2));
  double prev = edw_sf(v1, eq_x2);
  for (std::size_t n = 0; n < ctrl.max_terms; ++n) {
    const std::int64_t x = eq_x2 + 1 + static_cast<std::int64_t>(n);
    const double s = edw_sf(v1, x);
    acc.add(s);
    if (s == 0.0) return acc.value();
    const double ratio = prev > 0.0 ? s / prev : 0.0;
    prev = s;
    // Remaining sum_{y > x} S(y) under a geometric tail with the current ratio.
    if (ratio < 1.0 && s * ratio / (1.0 - ratio) < ctrl.tol) return acc.value();
  }
  throw TruncationError("cond_expectation: max_terms reached", acc.value(), prev);
}

/// E[u^X1 v^X2] by direct summation over a growing square, stopped once the
/// mass outside it is below tol.
inline double joint_pgf(const BdewParams& b, double u, double v, const SeriesControl& ctrl = {}) {
  if (!(std::fabs(u) <= 1.0 && std::fabs(v) <= 1.0))
    throw std::domain_error("joint_pgf: require |u| <= 1 and |v| <= 1");
  if (u == 1.0 && v == 1.0) return 1.0;
  std::int64_t edge = -1;
  double outside = 1.0;
  while (outside >= ctrl.tol) {
    ++edge;
    if (static_cast<std::size_t>(edge) >= ctrl.max_terms)
      throw TruncationError("joint_pgf: max_terms reached", std::numeric_limits<double>::quiet_NaN(),
                            outside);
    outside = marginal_sf(b, 1, edge) + marginal_sf(b, 2, edge);
  }
  CompensatedSum acc;
  double ui = 1.0;
  for (std::int64_t i = 0; i <= edge; ++i, ui *= u) {
    double vj = 1.0;
    for (std::int64_t j = 0; j <= edge; ++j, vj *= v) acc.add(joint_pmf(b, PairPoint(i, j)) * ui * vj);
  }
  return acc.value();
}

/// P(X1 < X2) = sum_i f(i+1; beta2) * G(i+1)^(beta1+beta3).
inline double stress_strength(const BdewParams& b, const SeriesControl& ctrl = {}) {
  const EdwParams v2 = b.latent(2);
  const EdwParams lower = b.edw(b.beta1() + b.beta3());
  CompensatedSum acc;
  for (std::size_t n = 0; n < ctrl.max_terms; ++n) {
    const auto i = static_cast<std::int64_t>(n);
    acc.add(edw_pmf(v2, i + 1) * edw_cdf(lower, i));
    // every later term is bounded by the V2 mass beyond i + 1
    if (edw_sf(v2, i + 1) < ctrl.tol) return acc.value();
  }
  throw TruncationError("stress_strength: max_terms reached", acc.value(),
                        edw_sf(v2, static_cast<std::int64_t>(ctrl.max_terms)));
}

/// P(X1 > x1, X2 > x2).
inline double joint_sf(const BdewParams& b, PairPoint pt) {
  // 1 - F1 - F2 + F with 1 - F1 taken from the marginal survival directly.
  const double s = marginal_sf(b, 1, pt.x1) - marginal_cdf(b, 2, pt.x2) + joint_cdf(b, pt);
  return std::max(s, 0.0);
}

class UndefinedHazard : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Branchwise f / S.
inline double joint_hrf(const BdewParams& b, PairPoint pt) {
  const double s = joint_sf(b, pt);
  if (!(s > 0.0)) throw UndefinedHazard("joint_hrf: survival is zero at this point");
  return joint_pmf(b, pt) / s;
}

/// Law of the componentwise maximum of independent BDEW vectors with common (alpha, p).
inline BdewParams max_combine(std::span<const BdewParams> laws) {
  if (laws.empty()) throw std::invalid_argument("max_combine: empty list");
  const auto& first = laws.front();
  double s1 = 0.0, s2 = 0.0, s3 = 0.0;
  for (const auto& l : laws) {
    if (l.alpha() != first.alpha() || l.log_p() != first.log_p())
      throw std::invalid_argument("max_combine: all laws must share alpha and p");
    s1 += l.beta1();
    s2 += l.beta2();
    s3 += l.beta3();
  }
  return BdewParams::from_log_p(first.alpha(), first.log_p(), s1, s2, s3);
}

/// (max(V1, V3), max(V2, V3)) from three caller-supplied uniforms.
inline PairPoint sample_pair(const BdewParams& b, double u1, double u2, double u3) {
  const auto v1 = edw_sample_one(b.latent(1), u1);
  const auto v2 = edw_sample_one(b.latent(2), u2);
  const auto v3 = edw_sample_one(b.latent(3), u3);
  return PairPoint(std::max(v1, v3), std::max(v2, v3));
}

}  // namespace bdew
