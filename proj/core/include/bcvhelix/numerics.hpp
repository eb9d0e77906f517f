#pragma once

// Shared numerical kernels: adaptive quadrature, Richardson-extrapolated
// central differences, and bisection for domain endpoints.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "bcvhelix/errors.hpp"

namespace bcv {

using ScalarFn = std::function<double(double)>;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  double midpoint() const { return 0.5 * (lo + hi); }
  bool contains(double u) const { return u >= lo && u <= hi; }
};

// One configuration object threaded through every module. Acceptance
// tolerances are stated assuming these defaults.
struct Tolerances {
  double quad_abs = 1e-10;
  double quad_rel = 1e-10;
  int quad_max_panels = 4000;

  double fd_first = 1e-5;   // tangent vectors, sigma'
  double fd_second = 1e-4;  // second derivatives of embeddings
  double fd_min = 1e-7;     // stencils never shrink below this
  double christoffel_step = 1e-4;
  double brioschi_step = 1e-2;  // spacing of the 5x5 first-form sub-grid

  double min_scale = 1e-9;      // B below this is outside the metric domain
  double axis_r_min = 1e-6;     // cylindrical charts degenerate below this radius
  double radicand_eps = 1e-12;  // radicands in (-eps, 0) clamp to 0
  double arclength_tol = 1e-6;
  double case_eps = 1e-9;
  double bisection_tol = 1e-10;
  int domain_scan_samples = 400;
};

struct QuadResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  int panel_count = 0;
};

namespace detail {

struct Panel {
  double lo;
  double hi;
  double value;
  double error;
};

template <class F>
Panel gauss_kronrod_panel(F& g, double lo, double hi) {
  using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
  using Gauss = boost::math::quadrature::gauss<double, 7>;
  const auto& x = Kronrod::abscissa();
  const auto& wk = Kronrod::weights();
  const auto& wg = Gauss::weights();
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);

  // Boost stores the non-negative half of the symmetric rule; even indices
  // carry the embedded Gauss nodes, index 0 is the centre.
  const double f0 = g(mid);
  double kronrod = wk[0] * f0;
  double gauss = wg[0] * f0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double fsum = g(mid - half * x[i]) + g(mid + half * x[i]);
    kronrod += wk[i] * fsum;
    if (i % 2 == 0) gauss += wg[i / 2] * fsum;
  }
  return {lo, hi, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod (7/15) with bisection of the worst panel.
// The interval is first mapped through x = lo + (hi - lo)(3s^2 - 2s^3), which
// turns square-root endpoint singularities into smooth integrands.
template <class F>
QuadResult quad_adaptive(F&& f, double lo, double hi, double abs_tol, double rel_tol,
                         int max_panels = 4000) {
  if (lo == hi) return {0.0, 0.0, 1};
  if (hi < lo) {
    QuadResult r = quad_adaptive(f, hi, lo, abs_tol, rel_tol, max_panels);
    r.value = -r.value;
    return r;
  }
  const double width = hi - lo;
  auto g = [&](double s) {
    const double x = lo + width * s * s * (3.0 - 2.0 * s);
    return f(x) * width * 6.0 * s * (1.0 - s);
  };

  auto by_error = [](const detail::Panel& a, const detail::Panel& b) { return a.error < b.error; };
  std::vector<detail::Panel> heap;
  heap.push_back(detail::gauss_kronrod_panel(g, 0.0, 1.0));

  auto totals = [&heap] {
    double value = 0.0, error = 0.0;
    for (const auto& p : heap) {
      value += p.value;
      error += p.error;
    }
    return std::pair{value, error};
  };

  for (;;) {
    auto [value, error] = totals();
    if (!std::isfinite(value)) {
      throw Error(ErrorCode::QuadratureFailure, "integrand is not finite on the interval");
    }
    if (error <= std::max(abs_tol, rel_tol * std::abs(value))) {
      return {value, error, static_cast<int>(heap.size())};
    }
    if (static_cast<int>(heap.size()) >= max_panels) {
      throw Error(ErrorCode::QuadratureFailure,
                  "panel cap reached with error estimate " + std::to_string(error));
    }
    std::pop_heap(heap.begin(), heap.end(), by_error);
    const detail::Panel worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (mid <= worst.lo || mid >= worst.hi) {
      throw Error(ErrorCode::QuadratureFailure, "panel width reached machine resolution");
    }
    heap.push_back(detail::gauss_kronrod_panel(g, worst.lo, mid));
    std::push_heap(heap.begin(), heap.end(), by_error);
    heap.push_back(detail::gauss_kronrod_panel(g, mid, worst.hi));
    std::push_heap(heap.begin(), heap.end(), by_error);
  }
}

// Fixed 10-point Gauss-Legendre rule. Smooth in both endpoints, so it is the
// rule of choice for short increments inside finite-difference stencils.
template <class F>
double quad_fixed(F&& f, double lo, double hi) {
  return boost::math::quadrature::gauss<double, 10>::integrate(f, lo, hi);
}

// Integral of f from `origin` to every node, in one sweep over the sorted
// nodes; consecutive segments are integrated once and accumulated.
template <class F>
std::vector<double> cumulative_quad(F&& f, double origin, std::span<const double> nodes,
                                    double abs_tol, double rel_tol, int max_panels = 4000) {
  std::vector<double> out(nodes.size(), 0.0);
  const auto split = std::lower_bound(nodes.begin(), nodes.end(), origin);
  const auto first_up = static_cast<std::size_t>(split - nodes.begin());

  double acc = 0.0, at = origin;
  for (std::size_t i = first_up; i < nodes.size(); ++i) {
    acc += quad_adaptive(f, at, nodes[i], abs_tol, rel_tol, max_panels).value;
    at = nodes[i];
    out[i] = acc;
  }
  acc = 0.0;
  at = origin;
  for (std::size_t i = first_up; i-- > 0;) {
    acc += quad_adaptive(f, at, nodes[i], abs_tol, rel_tol, max_panels).value;
    at = nodes[i];
    out[i] = acc;
  }
  return out;
}

// Central difference of order 1 or 2 with one Richardson level, O(h^4).
template <class F>
double diff_central(F&& f, double u, int order, double h) {
  if (order == 1) {
    auto d = [&](double s) { return (f(u + s) - f(u - s)) / (2.0 * s); };
    return (4.0 * d(0.5 * h) - d(h)) / 3.0;
  }
  if (order == 2) {
    const double f0 = f(u);
    auto d = [&](double s) { return (f(u + s) - 2.0 * f0 + f(u - s)) / (s * s); };
    return (4.0 * d(0.5 * h) - d(h)) / 3.0;
  }
  throw Error(ErrorCode::ParameterOutOfRange, "diff_central supports order 1 or 2");
}

// Bisection for a sign change of f on [lo, hi]; returns the abscissa within tol.
template <class F>
double bracket_root(F&& f, double lo, double hi, double tol) {
  const double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0)) {
    throw Error(ErrorCode::NoBracket, "no sign change on the interval");
  }
  std::uintmax_t max_iter = 200;
  auto done = [tol](double a, double b) { return std::abs(b - a) <= tol; };
  const auto [a, b] = boost::math::tools::bisect(f, lo, hi, done, max_iter);
  return 0.5 * (a + b);
}

// Abscissa where a predicate flips between lo and hi.
double bracket_flip(const std::function<bool(double)>& pred, double lo, double hi, double tol);

// Maximal interval inside `window` on which `valid` holds, found by scanning
// `samples` cells and refining each finite end by bisection. Prefers the run
// containing `anchor`, otherwise the longest run. Returned endpoints are valid.
Interval find_valid_interval(const std::function<bool(double)>& valid, Interval window, double anchor,
                             int samples, double tol);

}  // namespace bcv
