#pragma once

// Small unconstrained minimizers over std::vector<double>: a Nelder-Mead simplex
// for robust global-ish moves and BFGS with backtracking for the final polish.
// Objectives may return +inf to mark infeasible points.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

namespace bdew::opt {

using Vec = std::vector<double>;
using Objective = std::function<double(const Vec&)>;
using GradientFn = std::function<Vec(const Vec&)>;

struct MinimizeResult {
  Vec x;
  double value = std::numeric_limits<double>::infinity();
  std::size_t iterations = 0;
  bool converged = false;
};

struct SimplexOptions {
  double initial_step = 0.5;
  double ftol = 1e-8;
  double xtol = 1e-7;
  std::size_t max_iter = 5000;
  // Optional box; points are clamped into it before evaluation.
  std::optional<Vec> lower;
  std::optional<Vec> upper;
};

inline MinimizeResult nelder_mead(const Objective& f, Vec x0, const SimplexOptions& opt = {}) {
  const std::size_t n = x0.size();
  auto clamp = [&](Vec& x) {
    for (std::size_t i = 0; i < n; ++i) {
      if (opt.lower) x[i] = std::max(x[i], (*opt.lower)[i]);
      if (opt.upper) x[i] = std::min(x[i], (*opt.upper)[i]);
    }
  };
  auto eval = [&](Vec& x) {
    clamp(x);
    const double v = f(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };

  std::vector<Vec> pts(n + 1, x0);
  std::vector<double> vals(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    pts[i + 1][i] += opt.initial_step;
    clamp(pts[i + 1]);
    // a clamped coordinate collapses the simplex; step the other way
    if (pts[i + 1][i] == x0[i]) pts[i + 1][i] -= opt.initial_step;
  }
  for (std::size_t i = 0; i <= n; ++i) vals[i] = eval(pts[i]);

  std::vector<std::size_t> order(n + 1);
  MinimizeResult res;
  for (res.iterations = 0; res.iterations < opt.max_iter; ++res.iterations) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];

    double fspread = std::fabs(vals[worst] - vals[best]);
    double xspread = 0.0;
    for (std::size_t i = 0; i <= n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        xspread = std::max(xspread, std::fabs(pts[i][j] - pts[best][j]));
    if (std::isfinite(vals[best]) && fspread <= opt.ftol && xspread <= opt.xtol) {
      res.converged = true;
      break;
    }

    Vec centroid(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i)
      if (i != worst)
        for (std::size_t j = 0; j < n; ++j) centroid[j] += pts[i][j] / static_cast<double>(n);

    auto along = [&](double t) {
      Vec x(n);
      for (std::size_t j = 0; j < n; ++j) x[j] = centroid[j] + t * (pts[worst][j] - centroid[j]);
      return x;
    };

    Vec xr = along(-1.0);
    const double fr = eval(xr);
    if (fr < vals[best]) {
      Vec xe = along(-2.0);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[worst] = std::move(xe);
        vals[worst] = fe;
      } else {
        pts[worst] = std::move(xr);
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = std::move(xr);
      vals[worst] = fr;
      continue;
    }
    Vec xc = fr < vals[worst] ? along(-0.5) : along(0.5);
    const double fc = eval(xc);
    if (fc < std::min(fr, vals[worst])) {
      pts[worst] = std::move(xc);
      vals[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t j = 0; j < n; ++j) pts[i][j] = pts[best][j] + 0.5 * (pts[i][j] - pts[best][j]);
      vals[i] = eval(pts[i]);
    }
  }
  const auto it = std::min_element(vals.begin(), vals.end());
  res.x = pts[static_cast<std::size_t>(it - vals.begin())];
  res.value = *it;
  return res;
}

struct QuasiNewtonOptions {
  double gtol = 1e-7;
  double ftol = 1e-12;
  double xtol = 1e-12;
  std::size_t max_iter = 5000;
};

inline double norm_inf(const Vec& v) {
  double m = 0.0;
  for (double e : v) m = std::max(m, std::fabs(e));
  return m;
}

/// BFGS on the inverse Hessian with Armijo backtracking.
inline MinimizeResult bfgs(const Objective& f, const GradientFn& grad, Vec x0,
                           const QuasiNewtonOptions& opt = {}) {
  const std::size_t n = x0.size();
  MinimizeResult res;
  res.x = std::move(x0);
  res.value = f(res.x);
  if (!std::isfinite(res.value)) return res;
  Vec g = grad(res.x);

  std::vector<double> h(n * n, 0.0);
  auto reset = [&] {
    std::fill(h.begin(), h.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) h[i * n + i] = 1.0;
  };
  reset();

  for (res.iterations = 0; res.iterations < opt.max_iter; ++res.iterations) {
    if (norm_inf(g) <= opt.gtol) {
      res.converged = true;
      break;
    }
    Vec dir(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) dir[i] -= h[i * n + j] * g[j];
    double slope = std::inner_product(dir.begin(), dir.end(), g.begin(), 0.0);
    if (!(slope < 0.0)) {
      reset();
      dir = g;
      for (double& d : dir) d = -d;
      slope = -std::inner_product(g.begin(), g.end(), g.begin(), 0.0);
    }

    double step = 1.0;
    Vec xn(n);
    double fn = std::numeric_limits<double>::infinity();
    bool accepted = false;
    for (int tries = 0; tries < 60; ++tries, step *= 0.5) {
      for (std::size_t i = 0; i < n; ++i) xn[i] = res.x[i] + step * dir[i];
      fn = f(xn);
      if (std::isfinite(fn) && fn <= res.value + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // no descent along the quasi-Newton direction at working precision
      res.converged = norm_inf(g) <= std::sqrt(opt.gtol);
      break;
    }

    Vec gn = grad(xn);
    Vec s(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = xn[i] - res.x[i];
      y[i] = gn[i] - g[i];
    }
    const double fdrop = res.value - fn;
    res.x = xn;
    res.value = fn;
    g = std::move(gn);
    if (fdrop <= opt.ftol * (1.0 + std::fabs(fn)) && norm_inf(s) <= opt.xtol * (1.0 + norm_inf(res.x))) {
      res.converged = true;
      break;
    }

    const double sy = std::inner_product(s.begin(), s.end(), y.begin(), 0.0);
    if (sy <= 1e-14 * norm_inf(s) * norm_inf(y)) continue;
    Vec hy(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) hy[i] += h[i * n + j] * y[j];
    const double yhy = std::inner_product(y.begin(), y.end(), hy.begin(), 0.0);
    const double rho = 1.0 / sy;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        h[i * n + j] += (1.0 + yhy * rho) * rho * s[i] * s[j] - rho * (hy[i] * s[j] + s[i] * hy[j]);
  }
  if (norm_inf(g) <= opt.gtol) res.converged = true;
  return res;
}

}  // namespace bdew::opt
