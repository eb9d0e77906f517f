#include "bcvhelix/numerics.hpp"

namespace bcv {

double bracket_flip(const std::function<bool(double)>& pred, double lo, double hi, double tol) {
  const bool at_lo = pred(lo);
  if (at_lo == pred(hi)) throw Error(ErrorCode::NoBracket, "predicate does not flip on the interval");
  // Plain bisection keeps the invariant pred(lo) == at_lo, pred(hi) != at_lo.
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (pred(mid) == at_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

namespace {

// Last point still satisfying `valid` between a valid and an invalid abscissa.
double refine_edge(const std::function<bool(double)>& valid, double good, double bad, double tol) {
  while (std::abs(bad - good) > tol) {
    const double mid = 0.5 * (good + bad);
    if (mid == good || mid == bad) break;
    if (valid(mid)) {
      good = mid;
    } else {
      bad = mid;
    }
  }
  return good;
}

}  // namespace

Interval find_valid_interval(const std::function<bool(double)>& valid, Interval window, double anchor,
                             int samples, double tol) {
  samples = std::max(samples, 2);
  const double step = window.width() / samples;
  std::vector<double> grid(samples + 1);
  std::vector<char> ok(samples + 1);
  for (int i = 0; i <= samples; ++i) {
    grid[i] = i == samples ? window.hi : window.lo + i * step;
    ok[i] = valid(grid[i]) ? 1 : 0;
  }

  int anchor_idx = 0;
  if (step > 0.0) {
    anchor_idx = static_cast<int>(std::lround((anchor - window.lo) / step));
    anchor_idx = std::clamp(anchor_idx, 0, samples);
  }

  int best_lo = -1, best_hi = -1;
  if (ok[anchor_idx]) {
    best_lo = best_hi = anchor_idx;
    while (best_lo > 0 && ok[best_lo - 1]) --best_lo;
    while (best_hi < samples && ok[best_hi + 1]) ++best_hi;
  } else {
    for (int i = 0; i <= samples;) {
      if (!ok[i]) {
        ++i;
        continue;
      }
      int j = i;
      while (j < samples && ok[j + 1]) ++j;
      if (best_lo < 0 || j - i > best_hi - best_lo) {
        best_lo = i;
        best_hi = j;
      }
      i = j + 1;
    }
  }
  if (best_lo < 0) throw Error(ErrorCode::EmptyDomain, "no admissible point in the search window");

  Interval out{grid[best_lo], grid[best_hi]};
  if (best_lo > 0) out.lo = refine_edge(valid, grid[best_lo], grid[best_lo - 1], tol);
  if (best_hi < samples) out.hi = refine_edge(valid, grid[best_hi], grid[best_hi + 1], tol);
  return out;
}

}  // namespace bcv
