#pragma once

// Maximum-likelihood fitting of BDEW and its constrained sub-families, with
// information criteria and model ranking.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bdew/likelihood.hpp"
#include "bdew/optimize.hpp"
#include "bdew/random.hpp"

namespace bdew {

enum class Family { BDEW, BDGE, BDGR, NBG };

inline std::string to_string(Family f) {
  switch (f) {
    case Family::BDEW: return "BDEW";
    case Family::BDGE: return "BDGE";
    case Family::BDGR: return "BDGR";
    case Family::NBG: return "NBG";
  }
  return "?";
}

inline Family parse_family(std::string name) {
  std::transform(name.begin(), name.end(), name.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (name == "BDEW") return Family::BDEW;
  if (name == "BDGE") return Family::BDGE;
  if (name == "BDGR") return Family::BDGR;
  if (name == "NBG") return Family::NBG;
  throw std::invalid_argument("unknown model family '" + name + "'");
}

/// A family and the constraints it places on (alpha, p, beta1, beta2, beta3):
/// BDGE alpha = 1; BDGR alpha = 2; NBG alpha = 1, beta3 = b, beta1 = beta2 = 1 - b.
struct ModelSpec {
  Family family = Family::BDEW;

  std::size_t free_parameters() const noexcept {
    switch (family) {
      case Family::BDEW: return 5;
      case Family::BDGE:
      case Family::BDGR: return 4;
      case Family::NBG: return 2;
    }
    return 0;
  }

  std::optional<double> fixed_alpha() const noexcept {
    switch (family) {
      case Family::BDGE:
      case Family::NBG: return 1.0;
      case Family::BDGR: return 2.0;
      case Family::BDEW: break;
    }
    return std::nullopt;
  }

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

struct Criteria {
  double aic = 0.0;
  double bic = 0.0;
  double caic = 0.0;
  double hqic = 0.0;
};

enum class Criterion { AIC, BIC, CAIC, HQIC };

inline double criterion_value(const Criteria& c, Criterion which) {
  switch (which) {
    case Criterion::AIC: return c.aic;
    case Criterion::BIC: return c.bic;
    case Criterion::CAIC: return c.caic;
    case Criterion::HQIC: return c.hqic;
  }
  return c.aic;
}

inline Criterion parse_criterion(std::string name) {
  std::transform(name.begin(), name.end(), name.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (name == "aic") return Criterion::AIC;
  if (name == "bic") return Criterion::BIC;
  if (name == "caic") return Criterion::CAIC;
  if (name == "hqic") return Criterion::HQIC;
  throw std::invalid_argument("unknown criterion '" + name + "'");
}

/// AIC = 2k + 2 negL, BIC = k ln n + 2 negL, CAIC = AIC + 2k(k+1)/(n-k-1),
/// HQIC = 2k ln ln n + 2 negL.
inline Criteria info_criteria(std::size_t k, std::size_t n, double neg_log_lik) {
  if (n == 0) throw std::domain_error("info_criteria: n must be positive");
  const double kd = static_cast<double>(k), nd = static_cast<double>(n);
  const double dev = 2.0 * neg_log_lik;
  Criteria c;
  c.aic = 2.0 * kd + dev;
  if (k == 0) {
    c.bic = c.caic = c.hqic = dev;
    return c;
  }
  if (n <= k + 1) throw std::domain_error("info_criteria: CAIC needs n > k + 1");
  if (n < 3) throw std::domain_error("info_criteria: HQIC needs n >= 3");
  c.bic = kd * std::log(nd) + dev;
  c.caic = c.aic + 2.0 * kd * (kd + 1.0) / (nd - kd - 1.0);
  c.hqic = 2.0 * kd * std::log(std::log(nd)) + dev;
  return c;
}

struct FitConfig {
  std::size_t starts = 20;
  std::uint64_t seed = 20190101;
  double ftol = 1e-8;
  double xtol = 1e-7;
  std::size_t max_iter = 5000;
};

struct FitResult {
  ModelSpec spec;
  BdewParams params{1.0, 0.5, 1.0, 1.0, 1.0};
  double neg_log_lik = std::numeric_limits<double>::infinity();
  Criteria criteria;
  std::size_t k = 0;
  std::size_t n = 0;
  bool converged = false;
  std::size_t iterations = 0;
  /// Infinity norm of the gradient of -L in the optimizer's unconstrained coordinates.
  double gradient_norm_at_solution = std::numeric_limits<double>::infinity();
};

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline double sigmoid(double t) { return t >= 0 ? 1.0 / (1.0 + std::exp(-t)) : std::exp(t) / (1.0 + std::exp(t)); }
inline double logit(double q) { return std::log(q) - std::log1p(-q); }
// ln p for p = sigmoid(t), without forming p.
inline double log_sigmoid(double t) { return t >= 0 ? -std::log1p(std::exp(-t)) : t - std::log1p(std::exp(t)); }

// Maps the unconstrained optimizer vector to parameters and back, per family.
// BDEW: (ln alpha, logit p, ln b1, ln b2, ln b3); BDGE/BDGR drop ln alpha;
// NBG: (logit p, logit b).
class Reparam {
 public:
  explicit Reparam(ModelSpec spec) : spec_(spec) {}

  BdewParams to_params(const opt::Vec& t) const {
    if (spec_.family == Family::NBG) {
      const double b = sigmoid(t[1]);
      return BdewParams::from_log_p(1.0, log_sigmoid(t[0]), 1.0 - b, 1.0 - b, b);
    }
    std::size_t i = 0;
    const double alpha = spec_.fixed_alpha() ? *spec_.fixed_alpha() : std::exp(t[i++]);
    const double log_p = log_sigmoid(t[i]);
    return BdewParams::from_log_p(alpha, log_p, std::exp(t[i + 1]), std::exp(t[i + 2]),
                                  std::exp(t[i + 3]));
  }

  opt::Vec from_params(const BdewParams& b) const {
    const double logit_p = b.log_p() - std::log(-std::expm1(b.log_p()));
    if (spec_.family == Family::NBG) return {logit_p, logit(b.beta3())};
    opt::Vec t;
    if (!spec_.fixed_alpha()) t.push_back(std::log(b.alpha()));
    t.push_back(logit_p);
    t.push_back(std::log(b.beta1()));
    t.push_back(std::log(b.beta2()));
    t.push_back(std::log(b.beta3()));
    return t;
  }

  // Chain rule from the (alpha, ln p, betas) gradient to the unconstrained one.
  opt::Vec pull_back(const BdewParams& b, const Gradient& g) const {
    const double one_minus_p = -std::expm1(b.log_p());
    const double dp = g[kP] * one_minus_p;
    if (spec_.family == Family::NBG) {
      const double beta = b.beta3();
      const double dbeta = -g[kBeta1] - g[kBeta2] + g[kBeta3];
      return {dp, dbeta * beta * (1.0 - beta)};
    }
    opt::Vec out;
    if (!spec_.fixed_alpha()) out.push_back(g[kAlpha] * b.alpha());
    out.push_back(dp);
    out.push_back(g[kBeta1] * b.beta1());
    out.push_back(g[kBeta2] * b.beta2());
    out.push_back(g[kBeta3] * b.beta3());
    return out;
  }

 private:
  ModelSpec spec_;
};

// -ln(1 - q^(1/s)): the value of lambda (y^alpha) at which an EDW(beta = s) CDF reaches q.
inline double level_for_quantile(double q, double s) { return -log1mexp(std::log(q) / s); }

}  // namespace detail

/// Negative log-likelihood as a function of the unconstrained parameter vector.
inline double neg_log_lik_unconstrained(const ModelSpec& spec, const PairSample& s,
                                        const opt::Vec& t) {
  for (double v : t)
    if (!std::isfinite(v) || std::fabs(v) > 700.0) return std::numeric_limits<double>::infinity();
  try {
    const auto b = detail::Reparam(spec).to_params(t);
    const double ll = log_likelihood(b, s);
    return std::isfinite(ll) ? -ll : std::numeric_limits<double>::infinity();
  } catch (const std::exception&) {
    return std::numeric_limits<double>::infinity();
  }
}

inline opt::Vec neg_score_unconstrained(const ModelSpec& spec, const PairSample& s,
                                        const opt::Vec& t) {
  const detail::Reparam rp(spec);
  const auto b = rp.to_params(t);
  auto g = rp.pull_back(b, score_log_p(b, s));
  for (double& v : g) v = -v;
  return g;
}

namespace detail {

// Seeds: one moment-matched centre point plus Latin-hypercube jitter around it.
// Each seed picks shape and exponents, then sets p so the marginal medians
// land on the pooled sample median.
inline std::vector<BdewParams> start_points(const ModelSpec& spec, const PairSample& s,
                                            std::size_t count, std::uint64_t seed) {
  std::vector<double> coords;
  double sum = 0.0, sumsq = 0.0;
  for (const auto& pt : s.pairs) {
    for (double c : {static_cast<double>(pt.x1), static_cast<double>(pt.x2)}) {
      coords.push_back(c);
      sum += c;
      sumsq += c * c;
    }
  }
  std::sort(coords.begin(), coords.end());
  const double median = coords[coords.size() / 2];
  const double mean = sum / static_cast<double>(coords.size());
  const double var = std::max(sumsq / static_cast<double>(coords.size()) - mean * mean, 1e-2);
  // A geometric law has var/mean^2 near 1; tighter data suggests a larger shape.
  const double cv2 = var / std::max(mean * mean, 1e-2);
  const double alpha0 = std::clamp(1.0 / std::sqrt(cv2), 0.3, 8.0);
  const double share = static_cast<double>(s.n3) / static_cast<double>(s.size());

  Rng rng(seed);
  const std::size_t dims = 4;
  std::vector<std::vector<double>> strata(dims);
  const std::size_t jittered = count > 1 ? count - 1 : 0;
  for (auto& col : strata) {
    col.resize(jittered);
    for (std::size_t i = 0; i < jittered; ++i)
      col[i] = (static_cast<double>(i) + rng.uniform()) / static_cast<double>(jittered);
    rng.shuffle(col);
  }

  std::vector<BdewParams> out;
  auto emit = [&](double alpha, double b1, double b2, double b3) {
    if (spec.fixed_alpha()) alpha = *spec.fixed_alpha();
    if (spec.family == Family::NBG) {
      b3 = std::clamp(b3 / (b3 + 0.5 * (b1 + b2)), 0.05, 0.95);
      b1 = b2 = 1.0 - b3;
    }
    const double s_marg = 0.5 * (b1 + b2) + b3;
    const double lambda =
        level_for_quantile(0.5, s_marg) / std::pow(median + 1.0, alpha);
    const double log_p = -std::clamp(lambda, 1e-300, 700.0);
    out.push_back(BdewParams::from_log_p(alpha, log_p, b1, b2, b3));
  };

  const double b3_0 = std::clamp(share, 0.1, 0.9) * 2.0;
  emit(alpha0, 1.0, 1.0, b3_0);
  for (std::size_t i = 0; i < jittered; ++i) {
    const double alpha = alpha0 * std::exp((strata[0][i] - 0.5) * 2.0 * std::log(6.0));
    const double b1 = std::exp(std::log(0.1) + strata[1][i] * std::log(200.0));
    const double b2 = std::exp(std::log(0.1) + strata[2][i] * std::log(200.0));
    const double b3 = std::exp(std::log(0.1) + strata[3][i] * std::log(200.0));
    emit(alpha, b1, b2, b3);
  }
  return out;
}

}  // namespace detail

/// Multi-start maximum likelihood: simplex search from each seed, then BFGS polish;
/// the best optimum across seeds wins (earliest seed on exact ties).
inline FitResult fit_mle(const PairSample& sample, const ModelSpec& spec, const FitConfig& cfg = {}) {
  const std::size_t k = spec.free_parameters();
  if (sample.size() < k)
    throw FitError("fit_mle: sample has fewer pairs than free parameters");
  if (std::all_of(sample.pairs.begin(), sample.pairs.end(),
                  [&](const PairPoint& p) { return p == sample.pairs.front(); }))
    throw FitError("fit_mle: degenerate sample (all pairs identical)");
  if (cfg.starts == 0) throw std::invalid_argument("fit_mle: need at least one start");

  const detail::Reparam rp(spec);
  const opt::Objective f = [&](const opt::Vec& t) { return neg_log_lik_unconstrained(spec, sample, t); };
  const opt::GradientFn g = [&](const opt::Vec& t) { return neg_score_unconstrained(spec, sample, t); };

  opt::SimplexOptions nm;
  nm.ftol = cfg.ftol;
  nm.xtol = cfg.xtol;
  nm.max_iter = cfg.max_iter;
  opt::QuasiNewtonOptions qn;
  qn.max_iter = cfg.max_iter;

  opt::MinimizeResult best;
  for (const auto& start : detail::start_points(spec, sample, cfg.starts, cfg.seed)) {
    auto simplex = opt::nelder_mead(f, rp.from_params(start), nm);
    if (!std::isfinite(simplex.value)) continue;
    auto polished = opt::bfgs(f, g, simplex.x, qn);
    polished.iterations += simplex.iterations;
    if (!std::isfinite(polished.value) || polished.value > simplex.value) {
      simplex.converged = false;
      polished = simplex;
    }
    if (polished.value < best.value) best = std::move(polished);
  }
  if (!std::isfinite(best.value)) throw FitError("fit_mle: no start reached a finite likelihood");

  FitResult r;
  r.spec = spec;
  r.params = rp.to_params(best.x);
  r.neg_log_lik = -log_likelihood(r.params, sample);
  r.k = k;
  r.n = sample.size();
  r.criteria = info_criteria(k, r.n, r.neg_log_lik);
  r.iterations = best.iterations;
  r.gradient_norm_at_solution = opt::norm_inf(g(best.x));
  r.converged = best.converged;
  return r;
}

struct FailedFit {
  ModelSpec spec;
  std::string message;
};

struct Comparison {
  std::vector<FitResult> ranked;
  std::vector<FailedFit> failed;
};

/// Strict ordering used for ranking: criterion, then fewer parameters, then family order.
inline bool ranks_before(const FitResult& a, const FitResult& b, Criterion by) {
  const double ca = criterion_value(a.criteria, by), cb = criterion_value(b.criteria, by);
  if (ca != cb) return ca < cb;
  if (a.k != b.k) return a.k < b.k;
  return static_cast<int>(a.spec.family) < static_cast<int>(b.spec.family);
}

/// Fits each spec and orders by the criterion, then fewer parameters, then family
/// order, then input order.
inline Comparison compare_models(const PairSample& sample, const std::vector<ModelSpec>& specs,
                                 const FitConfig& cfg = {}, Criterion by = Criterion::AIC) {
  Comparison out;
  for (const auto& spec : specs) {
    try {
      out.ranked.push_back(fit_mle(sample, spec, cfg));
    } catch (const std::exception& e) {
      out.failed.push_back({spec, e.what()});
    }
  }
  std::stable_sort(out.ranked.begin(), out.ranked.end(),
                   [by](const FitResult& a, const FitResult& b) { return ranks_before(a, b, by); });
  return out;
}

}  // namespace bdew
