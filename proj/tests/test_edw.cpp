#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <vector>

#include "bdew/edw.hpp"
#include "bdew/random.hpp"
#include "bdew/series.hpp"
#include "oracles.hpp"

using namespace bdew;

namespace {

std::vector<EdwParams> battery() {
  std::vector<EdwParams> out;
  for (double a : {0.7, 1.0, 1.6, 2.0, 3.5})
    for (double p : {0.2, 0.5, 0.85})
      for (double b : {0.4, 1.0, 2.5}) out.emplace_back(a, p, b);
  return out;
}

}  // namespace

TEST(EdwParams, RejectsInvalid) {
  EXPECT_THROW(EdwParams(0.0, 0.5, 1.0), std::invalid_argument);
  EXPECT_THROW(EdwParams(-1.0, 0.5, 1.0), std::invalid_argument);
  EXPECT_THROW(EdwParams(1.0, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(EdwParams(1.0, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(EdwParams(1.0, 0.5, 0.0), std::invalid_argument);
  EXPECT_THROW(EdwParams(1.0, 0.5, std::nan("")), std::invalid_argument);
  EXPECT_THROW(EdwParams::from_log_p(1.0, 0.0, 1.0), std::invalid_argument);
}

TEST(EdwParams, LambdaIsMinusLogP) {
  const EdwParams e(1.3, 0.25, 2.0);
  EXPECT_DOUBLE_EQ(e.lambda(), -std::log(0.25));
  EXPECT_DOUBLE_EQ(e.with_beta(4.0).beta(), 4.0);
  EXPECT_DOUBLE_EQ(e.with_beta(4.0).alpha(), 1.3);
}

TEST(EdwCdf, HandValues) {
  EXPECT_NEAR(edw_cdf(EdwParams(1.0, 0.5, 1.0), 1), 0.75, 1e-15);
  EXPECT_NEAR(edw_cdf(EdwParams(2.0, 0.5, 1.0), 1), 0.9375, 1e-15);
  EXPECT_EQ(edw_cdf(EdwParams(2.0, 0.5, 1.0), -1), 0.0);
}

TEST(EdwCdf, MonotoneToOne) {
  for (const auto& e : battery()) {
    double prev = 0.0;
    for (std::int64_t x = 0; x < 400; ++x) {
      const double c = edw_cdf(e, x);
      ASSERT_GE(c, prev);
      prev = c;
    }
    EXPECT_NEAR(edw_cdf(e, 1000000), 1.0, 1e-12);
  }
}

TEST(EdwCdf, MatchesPowOracle) {
  for (const auto& e : battery())
    for (std::int64_t x = 0; x < 30; ++x)
      ASSERT_NEAR(edw_cdf(e, x), oracle::edw_cdf(e.alpha(), e.p(), e.beta(), x), 1e-13);
}

TEST(EdwPmf, HandValues) {
  EXPECT_NEAR(edw_pmf(EdwParams(1.0, 0.5, 1.0), 0), 0.5, 1e-15);
  EXPECT_NEAR(edw_pmf(EdwParams(1.0, 0.5, 2.0), 0), 0.25, 1e-15);
}

TEST(EdwPmf, EqualsCdfDifferenceExactly) {
  for (const auto& e : battery())
    for (std::int64_t x = 1; x < 50; ++x) ASSERT_EQ(edw_pmf(e, x), edw_cdf(e, x) - edw_cdf(e, x - 1));
}

TEST(EdwPmf, Normalizes) {
  const SeriesControl ctrl;
  for (const auto& e : battery()) {
    CompensatedSum acc;
    std::int64_t x = 0;
    for (; edw_sf(e, x - 1) >= ctrl.tol; ++x) acc.add(edw_pmf(e, x));
    EXPECT_NEAR(acc.value(), 1.0, ctrl.tol * 10) << "alpha=" << e.alpha() << " p=" << e.p();
  }
}

TEST(EdwPmf, MatchesTerminatingBinomialSeries) {
  for (int beta : {1, 2, 3})
    for (double a : {0.8, 1.0, 2.0, 3.0})
      for (double p : {0.3, 0.6, 0.9}) {
        const EdwParams e(a, p, beta);
        for (std::int64_t x = 0; x < 40; ++x)
          ASSERT_NEAR(edw_pmf(e, x), oracle::edw_pmf_series(a, p, beta, x), 1e-12)
              << "beta=" << beta << " a=" << a << " p=" << p << " x=" << x;
      }
}

TEST(EdwPmf, StableWithPNearOne) {
  // 1 - p = 1e-11 and a large shape: mass sits near x ~ 14, not lost to rounding.
  const EdwParams e = EdwParams::from_log_p(9.0, -1e-11, 0.4);
  double total = 0.0;
  for (std::int64_t x = 0; x < 60; ++x) {
    const double f = edw_pmf(e, x);
    ASSERT_GE(f, 0.0);
    total += f;
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_GT(edw_pmf(e, 14), 0.05);
}

TEST(EdwQuantile, HandValues) {
  const EdwParams geo(1.0, 0.5, 1.0);
  EXPECT_EQ(edw_quantile(geo, 0.5), 0);
  EXPECT_EQ(edw_quantile(geo, 0.0), 0);
  EXPECT_EQ(edw_quantile(geo, 0.9), 3);
  EXPECT_THROW(edw_quantile(geo, 1.0), std::domain_error);
  EXPECT_THROW(edw_quantile(geo, -0.1), std::domain_error);
}

TEST(EdwQuantile, GeneralizedInverseOnDenseGrid) {
  for (const auto& e : battery()) {
    for (int i = 0; i < 1000; ++i) {
      const double u = i / 1000.0;
      const auto x = edw_quantile(e, u);
      ASSERT_GE(edw_cdf(e, x), u);
      if (x > 0) {
        ASSERT_LT(edw_cdf(e, x - 1), u);
      }
    }
  }
}

TEST(EdwSample, HandValues) {
  const EdwParams geo(1.0, 0.5, 1.0);
  EXPECT_EQ(edw_sample_one(geo, 0.9), 3);
  EXPECT_EQ(edw_sample_one(geo, 1e-12), 0);
  EXPECT_THROW(edw_sample_one(geo, 0.0), std::domain_error);
  EXPECT_THROW(edw_sample_one(geo, 1.0), std::domain_error);
}

TEST(EdwSample, AgreesWithQuantile) {
  Rng rng(7);
  for (const auto& e : battery())
    for (int i = 0; i < 500; ++i) {
      const double u = rng.uniform();
      ASSERT_EQ(edw_sample_one(e, u), edw_quantile(e, u)) << "u=" << u;
    }
}

TEST(EdwSample, EmpiricalFrequenciesMatchPmf) {
  const EdwParams geo(1.0, 0.5, 1.0);
  Rng rng(12345);
  constexpr int n = 100000;
  std::map<std::int64_t, int> counts;
  for (int i = 0; i < n; ++i) ++counts[edw_sample_one(geo, rng.uniform())];
  for (std::int64_t x = 0; x <= 5; ++x) {
    const double f = edw_pmf(geo, x);
    const double se = std::sqrt(f * (1.0 - f) / n);
    EXPECT_NEAR(counts[x] / static_cast<double>(n), f, 4.0 * se) << "x=" << x;
  }
}

TEST(MakeSpecial, FamiliesPinTheirParameters) {
  EXPECT_EQ(make_special(EdwFamily::DG, {.p = 0.5}), EdwParams(1.0, 0.5, 1.0));
  EXPECT_EQ(make_special(EdwFamily::DR, {.p = 0.3}), EdwParams(2.0, 0.3, 1.0));
  EXPECT_EQ(make_special(EdwFamily::DGE, {.p = 0.7, .beta = 2.5}), EdwParams(1.0, 0.7, 2.5));
  EXPECT_EQ(make_special(EdwFamily::DW, {.p = 0.7, .alpha = 1.4}), EdwParams(1.4, 0.7, 1.0));
  EXPECT_EQ(make_special(EdwFamily::DGR, {.p = 0.7, .beta = 0.5}), EdwParams(2.0, 0.7, 0.5));
}

TEST(MakeSpecial, RejectsOverridesAndMissing) {
  EXPECT_THROW(make_special(EdwFamily::DG, {.p = 0.5, .alpha = 1.0}), std::invalid_argument);
  EXPECT_THROW(make_special(EdwFamily::DR, {.p = 0.5, .beta = 2.0}), std::invalid_argument);
  EXPECT_THROW(make_special(EdwFamily::DGE, {.p = 0.5, .alpha = 2.0, .beta = 1.0}),
               std::invalid_argument);
  EXPECT_THROW(make_special(EdwFamily::DW, {.p = 0.5}), std::invalid_argument);
  EXPECT_THROW(make_special(EdwFamily::DG, {.p = 1.5}), std::invalid_argument);
}

TEST(SeriesControl, Validates) {
  EXPECT_THROW(SeriesControl(0.0, 10), std::invalid_argument);
  EXPECT_THROW(SeriesControl(1e-9, 0), std::invalid_argument);
  const SeriesControl d;
  EXPECT_EQ(d.tol, 1e-12);
  EXPECT_EQ(d.max_terms, 100000u);
}
