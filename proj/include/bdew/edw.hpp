#pragma once

// Univariate exponentiated discrete Weibull (EDW) law on {0, 1, 2, ...}:
//
//   F(x) = [1 - p^((x+1)^alpha)]^beta,   f(x) = F(x) - F(x-1),   F(-1) = 0.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace bdew {

namespace detail {

/// log(1 - e^z) for z <= 0, accurate at both ends.
inline double log1mexp(double z) noexcept {
  if (z >= 0.0) return -std::numeric_limits<double>::infinity();
  return z > -0.6931471805599453 ? std::log(-std::expm1(z)) : std::log1p(-std::exp(z));
}

/// The (alpha, p) pair shared by all latent components; everything else is a
/// power of 1 - p^(y^alpha).
struct ShapeKernel {
  double alpha;
  double log_p;       // ln p < 0
  double log_lambda;  // ln(-ln p)

  /// z(y) = y^alpha * ln p, computed in log space so huge y^alpha never overflows.
  double exponent(double y) const noexcept {
    if (y <= 0.0) return 0.0;
    return -std::exp(alpha * std::log(y) + log_lambda);
  }

  /// L(y) = ln(1 - p^(y^alpha)); -inf at y = 0.
  double log_level(double y) const noexcept { return log1mexp(exponent(y)); }
};

}  // namespace detail

class EdwParams {
 public:
  EdwParams(double alpha, double p, double beta) : alpha_(alpha), p_(p), beta_(beta) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("EdwParams: p must lie in (0,1)");
    log_p_ = std::log(p);
    validate();
  }

  /// Builds from ln p directly; keeps full precision when p is within 1e-12 of 1.
  static EdwParams from_log_p(double alpha, double log_p, double beta) {
    if (!(log_p < 0.0) || !std::isfinite(log_p))
      throw std::invalid_argument("EdwParams: log_p must be finite and negative");
    EdwParams e;
    e.alpha_ = alpha;
    e.log_p_ = log_p;
    e.p_ = std::exp(log_p);
    e.beta_ = beta;
    e.validate();
    return e;
  }

  double alpha() const noexcept { return alpha_; }
  double p() const noexcept { return p_; }
  double beta() const noexcept { return beta_; }
  double log_p() const noexcept { return log_p_; }
  /// Rate of the continuous exponentiated Weibull parent, lambda = -ln p.
  double lambda() const noexcept { return -log_p_; }

  EdwParams with_beta(double beta) const { return from_log_p(alpha_, log_p_, beta); }

  detail::ShapeKernel kernel() const noexcept { return {alpha_, log_p_, std::log(-log_p_)}; }

  friend bool operator==(const EdwParams&, const EdwParams&) = default;

 private:
  EdwParams() = default;

  void validate() const {
    if (!(alpha_ > 0.0) || !std::isfinite(alpha_))
      throw std::invalid_argument("EdwParams: alpha must be positive");
    if (!(beta_ > 0.0) || !std::isfinite(beta_))
      throw std::invalid_argument("EdwParams: beta must be positive");
  }

  double alpha_ = 1.0;
  double p_ = 0.5;
  double log_p_ = -0.6931471805599453;
  double beta_ = 1.0;
};

/// ln F(x); -inf for x < 0.
inline double edw_log_cdf(const EdwParams& e, std::int64_t x) noexcept {
  if (x < 0) return -std::numeric_limits<double>::infinity();
  return e.beta() * e.kernel().log_level(static_cast<double>(x) + 1.0);
}

inline double edw_cdf(const EdwParams& e, std::int64_t x) noexcept {
  if (x < 0) return 0.0;
  return std::exp(edw_log_cdf(e, x));
}

/// 1 - F(x) without cancellation.
inline double edw_sf(const EdwParams& e, std::int64_t x) noexcept {
  if (x < 0) return 1.0;
  return -std::expm1(edw_log_cdf(e, x));
}

inline double edw_pmf(const EdwParams& e, std::int64_t x) noexcept {
  if (x < 0) return 0.0;
  return edw_cdf(e, x) - edw_cdf(e, x - 1);
}

/// Smallest x with F(x) >= u, for u in [0, 1).
inline std::int64_t edw_quantile(const EdwParams& e, double u) {
  if (!(u >= 0.0 && u < 1.0)) throw std::domain_error("edw_quantile: u must lie in [0,1)");
  if (u <= edw_cdf(e, 0)) return 0;
  // Continuous solve of F(y - 1) = u, then settle on the exact integer.
  const double log_u = std::log(u);
  const double tail = -detail::log1mexp(log_u / e.beta());  // -ln(1 - u^(1/beta))
  const double y = std::exp((std::log(tail) - std::log(e.lambda())) / e.alpha());
  const double guess = std::ceil(y - 1.0);
  constexpr double cap = 9.0e18;
  std::int64_t x = guess > cap ? static_cast<std::int64_t>(cap)
                               : static_cast<std::int64_t>(std::max(0.0, guess));
  while (x > 0 && edw_cdf(e, x - 1) >= u) --x;
  while (edw_cdf(e, x) < u) ++x;
  return x;
}

/// Inverse-CDF draw from the continuous exponentiated Weibull parent, floored.
inline std::int64_t edw_sample_one(const EdwParams& e, double u) {
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("edw_sample_one: u must lie in (0,1)");
  const double tail = -detail::log1mexp(std::log(u) / e.beta());
  const double y = std::pow(tail / e.lambda(), 1.0 / e.alpha());
  constexpr double cap = 9.0e18;
  return y >= cap ? static_cast<std::int64_t>(cap) : static_cast<std::int64_t>(std::floor(y));
}

enum class EdwFamily { DW, DGE, DG, DR, DGR };

inline std::string to_string(EdwFamily f) {
  switch (f) {
    case EdwFamily::DW: return "DW";
    case EdwFamily::DGE: return "DGE";
    case EdwFamily::DG: return "DG";
    case EdwFamily::DR: return "DR";
    case EdwFamily::DGR: return "DGR";
  }
  return "?";
}

struct SpecialArgs {
  double p;
  std::optional<double> alpha;
  std::optional<double> beta;
};

/// Nested EDW sub-families. Supplying a value for a parameter the family pins
/// is an error, even if the value matches.
inline EdwParams make_special(EdwFamily kind, const SpecialArgs& args) {
  std::optional<double> fixed_alpha, fixed_beta;
  switch (kind) {
    case EdwFamily::DW: fixed_beta = 1.0; break;
    case EdwFamily::DGE: fixed_alpha = 1.0; break;
    case EdwFamily::DG: fixed_alpha = 1.0; fixed_beta = 1.0; break;
    case EdwFamily::DR: fixed_alpha = 2.0; fixed_beta = 1.0; break;
    case EdwFamily::DGR: fixed_alpha = 2.0; break;
  }
  auto resolve = [&](const char* name, const std::optional<double>& fixed,
                     const std::optional<double>& given) {
    if (fixed && given)
      throw std::invalid_argument("make_special: " + to_string(kind) + " fixes " + name);
    if (!fixed && !given)
      throw std::invalid_argument("make_special: " + to_string(kind) + " requires " + name);
    return fixed ? *fixed : *given;
  };
  const double alpha = resolve("alpha", fixed_alpha, args.alpha);
  const double beta = resolve("beta", fixed_beta, args.beta);
  return EdwParams(alpha, args.p, beta);
}

}  // namespace bdew
