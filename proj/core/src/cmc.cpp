#include "bcvhelix/cmc.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>

#include "radicand.hpp"

namespace bcv {

using detail::clamp_difference;

CmcConstants cmc_constants(const BcvSpace& space, double a, double H, double c) {
  const double k = space.kappa(), tau = space.tau();
  CmcConstants out;
  out.c = c;
  out.H = H;
  out.b = (1.0 - 2.0 * a * tau) * (k * (1.0 + 2.0 * a * tau) - 8.0 * tau * tau) - c * c;
  out.b1 = 4.0 * tau * tau - 2.0 * a * k * tau - c * H;
  out.has_b2 = out.b1 != 0.0;
  if (out.has_b2) out.b2 = -out.b / (2.0 * out.b1);
  out.b3 = 4.0 * a * tau - a * a * k - 1.0;
  out.c1 = 1.0 + (1.0 - 2.0 * a * tau) * (1.0 - 2.0 * a * tau) - c * H;
  const double s = 1.0 - a * tau;
  out.c2 = -c * c - 4.0 * a * a * s * s;
  return out;
}

std::string_view to_string(CmcCase c) {
  switch (c) {
    case CmcCase::EuclideanMinimal: return "EuclideanMinimal";
    case CmcCase::SpaceFormGeneric: return "SpaceFormGeneric";
    case CmcCase::CriticalKappa: return "CriticalKappa";
    case CmcCase::Oscillatory: return "Oscillatory";
    case CmcCase::HyperbolicSinh: return "HyperbolicSinh";
    case CmcCase::HyperbolicCosh: return "HyperbolicCosh";
  }
  return "?";
}

CmcCase select_case(const BcvSpace& space, double a, double H, double c, double eps) {
  const double k = space.kappa(), tau = space.tau();
  if (std::abs(k) <= eps && std::abs(tau) <= eps && std::abs(H) <= eps) return CmcCase::EuclideanMinimal;
  if (std::abs(k - 4.0 * tau * tau) <= eps) return CmcCase::SpaceFormGeneric;
  const double kp = H * H + k;
  if (std::abs(kp) <= eps) return CmcCase::CriticalKappa;
  if (kp > 0.0) return CmcCase::Oscillatory;
  const CmcConstants cc = cmc_constants(space, a, H, c);
  const double disc = cc.b1 * cc.b1 + cc.b * kp;
  if (std::abs(disc) <= eps) {
    throw Error(ErrorCode::DegenerateFamily, "hyperbolic sub-branch discriminant vanishes (constant sqrt Delta)");
  }
  return disc < 0.0 ? CmcCase::HyperbolicSinh : CmcCase::HyperbolicCosh;
}

namespace {

struct Jet {
  double v, d1, d2;
};

// U^2 in closed form. Where the closed form came from integrating an ODE
// for sqrt(Delta), `root` is that signed quantity: the family is a solution
// only where it is positive.
struct Closed {
  std::function<Jet(double)> W;
  std::function<double(double)> root;
  double period = 0.0;
  double reach = 10.0;  // default half-width of the search window when not periodic
};

// (A + p^2) / den from a jet of p.
Jet quadratic(double A, double den, Jet p) {
  return {(A + p.v * p.v) / den, 2.0 * p.v * p.d1 / den, 2.0 * (p.d1 * p.d1 + p.v * p.d2) / den};
}

MetricProfile profile_of(std::function<Jet(double)> W) {
  MetricProfile U;
  U.value = [W](double u) { return std::sqrt(W(u).v); };
  U.first = [W](double u) {
    const Jet w = W(u);
    return w.d1 / (2.0 * std::sqrt(w.v));
  };
  U.second = [W](double u) {
    const Jet w = W(u);
    return (2.0 * w.v * w.d2 - w.d1 * w.d1) / (4.0 * w.v * std::sqrt(w.v));
  };
  return U;
}

// y from the first integral; sqrt_delta >= 0.
double y_solution(const BcvSpace& space, double H, double c, double x2, double sqrt_delta, double eps) {
  const double k = space.kappa(), tau = space.tau();
  if (std::abs(k - 4.0 * tau * tau) <= eps) return (H * x2 + c) / (2.0 * sqrt_delta);
  return (H * sqrt_delta + c) / (4.0 * tau * tau - k);
}

bool admissible(const BcvSpace& space, double m, double a, double H, double c, const Closed& f, double u,
                const Tolerances& tol) {
  const Jet w = f.W(u);
  if (!(w.v > 0.0) || !std::isfinite(w.v) || !std::isfinite(w.d1) || !std::isfinite(w.d2)) return false;
  const double x2 = m * m * w.v;
  const double gap = x2 - a * a;
  if (gap < -16.0 * std::numeric_limits<double>::epsilon() * (x2 + a * a)) return false;
  const double tau = space.tau();
  const double one = 1.0 - 2.0 * a * tau;
  const double delta = one * one + std::max(gap, 0.0) * (4.0 * tau * tau - space.kappa());
  if (!(delta > 0.0)) return false;
  if (f.root && !(f.root(u) > 0.0)) return false;
  if (H != 0.0 && y_solution(space, H, c, x2, std::sqrt(delta), tol.case_eps) < -tol.radicand_eps) return false;
  return true;
}

Interval family_domain(const BcvSpace& space, double m, double a, double H, double c, const Closed& f,
                       const Tolerances& tol, std::optional<Interval> window) {
  Interval w = window.value_or(f.period > 0.0 ? Interval{-f.period, f.period} : Interval{-f.reach, f.reach});
  auto ok = [&](double u) { return admissible(space, m, a, H, c, f, u, tol); };
  return find_valid_interval(ok, w, 0.0, tol.domain_scan_samples, tol.bisection_tol);
}

double checked_root(double disc, double eps, const char* what) {
  if (disc < -eps) throw Error(ErrorCode::NoRealFamily, std::string(what) + " is negative: " + std::to_string(disc));
  return std::sqrt(std::max(disc, 0.0));
}

void require_m(double m) {
  if (m == 0.0 || !std::isfinite(m)) throw Error(ErrorCode::ParameterOutOfRange, "m must be finite and nonzero");
}

constexpr double two_pi = 2.0 * std::numbers::pi;
// Beyond cosh(6) the profile hugs its asymptotic circle and xi1 is a
// difference of nearly equal large numbers.
constexpr double hyperbolic_reach = 6.0;

Closed cmc_closed(const BcvSpace& space, double m, double a, CmcCase which, const CmcConstants& cc, double eps) {
  const double k = space.kappa(), tau = space.tau(), H = cc.H, c = cc.c;
  const double m2 = m * m;
  Closed f;
  switch (which) {
    case CmcCase::EuclideanMinimal: {
      const double q = a * a + c * c / 4.0;
      f.W = [=](double u) { return Jet{(u * u + q) / m2, 2.0 * u / m2, 2.0 / m2}; };
      break;
    }
    case CmcCase::SpaceFormGeneric: {
      const double w = H * H + 4.0 * tau * tau;
      const double R = checked_root(cc.c1 * cc.c1 + cc.c2 * w, eps, "c1^2 + c2 (H^2 + 4 tau^2)");
      const double om = std::sqrt(w);
      const double c1 = cc.c1;
      f.W = [=](double u) {
        const double s = std::sin(om * u), co = std::cos(om * u);
        return Jet{(c1 + R * s) / (m2 * w), R * om * co / (m2 * w), -R * s / m2};
      };
      f.period = two_pi / om;
      break;
    }
    case CmcCase::CriticalKappa: {
      if (!cc.has_b2) throw Error(ErrorCode::DegenerateFamily, "b1 = 0 leaves b2 undefined");
      const double b1 = cc.b1, b2 = cc.b2, den = m2 * (4.0 * tau * tau + H * H);
      auto p = [=](double u) { return Jet{0.5 * b1 * u * u + b2, b1 * u, b1}; };
      f.W = [=](double u) { return quadratic(cc.b3, den, p(u)); };
      f.root = [=](double u) { return p(u).v; };
      break;
    }
    case CmcCase::Oscillatory: {
      const double kp = H * H + k;
      const double R = checked_root(cc.b1 * cc.b1 + cc.b * kp, eps, "b1^2 + b (H^2 + kappa)");
      const double om = std::sqrt(kp), b1 = cc.b1;
      const double den = m2 * (4.0 * tau * tau - k) * kp * kp, A = kp * kp * cc.b3;
      auto p = [=](double u) {
        const double s = std::sin(om * u), co = std::cos(om * u);
        return Jet{b1 + R * s, R * om * co, -R * om * om * s};
      };
      f.W = [=](double u) { return quadratic(A, den, p(u)); };
      f.root = [=](double u) { return p(u).v / kp; };
      f.period = two_pi / om;
      break;
    }
    case CmcCase::HyperbolicSinh:
    case CmcCase::HyperbolicCosh: {
      const double kp = H * H + k;
      const double disc = cc.b1 * cc.b1 + cc.b * kp;
      const double om = std::sqrt(-kp), b1 = cc.b1;
      const double den = m2 * (4.0 * tau * tau - k) * kp * kp, A = kp * kp * cc.b3;
      std::function<Jet(double)> p;
      if (which == CmcCase::HyperbolicCosh) {
        const double R = std::sqrt(disc);
        p = [=](double u) {
          const double ch = std::cosh(om * u), sh = std::sinh(om * u);
          return Jet{b1 - R * ch, -R * om * sh, -R * om * om * ch};
        };
      } else {
        const double R = std::sqrt(-disc);
        p = [=](double u) {
          const double ch = std::cosh(om * u), sh = std::sinh(om * u);
          return Jet{b1 - R * sh, -R * om * ch, -R * om * om * sh};
        };
      }
      f.W = [=](double u) { return quadratic(A, den, p(u)); };
      f.root = [=](double u) { return p(u).v / kp; };
      f.reach = hyperbolic_reach / om;
      break;
    }
  }
  return f;
}

}  // namespace

CmcFamily cmc_U(const BcvSpace& space, double m, double a, double H, double c, const Tolerances& tol,
                std::optional<Interval> window) {
  require_m(m);
  const CmcCase which = select_case(space, a, H, c, tol.case_eps);
  if (which == CmcCase::SpaceFormGeneric && !(1.0 - 2.0 * a * space.tau() > 0.0)) {
    throw Error(ErrorCode::ParameterOutOfRange, "kappa = 4 tau^2 families need 1 - 2 a tau > 0");
  }
  const CmcConstants cc = cmc_constants(space, a, H, c);
  const Closed f = cmc_closed(space, std::abs(m), a, which, cc, tol.radicand_eps);
  const Interval dom = family_domain(space, std::abs(m), a, H, c, f, tol, window);
  return {BourSeed{profile_of(f.W), m, a, dom}, which, cc};
}

MetricProfile cmc_profile(const BcvSpace& space, double m, double a, CmcCase which, const CmcConstants& constants,
                          const Tolerances& tol) {
  require_m(m);
  return profile_of(cmc_closed(space, std::abs(m), a, which, constants, tol.radicand_eps).W);
}

MinimalFamily minimal_U(const BcvSpace& space, double m, double a, double c, const Tolerances& tol,
                        std::optional<Interval> window) {
  require_m(m);
  const double k = space.kappa(), tau = space.tau();
  const double m2 = m * m;
  const SpaceClass cls = classify(space, tol.case_eps);
  auto out_of_range = [](const std::string& what) { return Error(ErrorCode::ParameterOutOfRange, what); };
  Closed f;
  switch (cls) {
    case SpaceClass::Euclidean: {
      const double q = a * a + c * c / 4.0;
      f.W = [=](double u) { return Jet{(u * u + q) / m2, 2.0 * u / m2, 2.0 / m2}; };
      break;
    }
    case SpaceClass::Sphere: {
      if (!(std::abs(c) < std::abs(1.0 / tau - 2.0 * a))) throw out_of_range("|c| < |1/tau - 2a| required");
      const double one = 1.0 - 2.0 * a * tau;
      const double R = std::sqrt(one * one - tau * tau * c * c);
      const double q = one + 2.0 * a * a * tau * tau, den = 2.0 * m2 * tau * tau, om = 2.0 * tau;
      f.W = [=](double u) {
        const double s = std::sin(om * u), co = std::cos(om * u);
        return Jet{(q + R * s) / den, R * om * co / den, -R * om * om * s / den};
      };
      f.period = two_pi / std::abs(om);
      break;
    }
    case SpaceClass::SphereProduct:
    case SpaceClass::HyperbolicProduct: {
      const bool sphere = cls == SpaceClass::SphereProduct;
      if (sphere && !(std::abs(c) < std::sqrt(k))) throw out_of_range("|c| < sqrt(kappa) required");
      const double den = m2 * k * k, A = k * (a * a * k + 1.0), C = c * c - k;
      const double om = std::sqrt(std::abs(k));
      // sin^2 = (1 - cos 2x)/2 and cosh^2 = (1 + cosh 2x)/2
      f.W = [=](double u) {
        const double x = 2.0 * om * u;
        if (sphere) {
          return Jet{(A + C * 0.5 * (1.0 - std::cos(x))) / den, C * om * std::sin(x) / den,
                     2.0 * C * om * om * std::cos(x) / den};
        }
        return Jet{(A + C * 0.5 * (1.0 + std::cosh(x))) / den, C * om * std::sinh(x) / den,
                   2.0 * C * om * om * std::cosh(x) / den};
      };
      if (sphere) f.period = std::numbers::pi / om;
      else f.reach = hyperbolic_reach / om;
      break;
    }
    case SpaceClass::Heisenberg: {
      const double t2 = tau * tau;
      const double q = 1.0 - 2.0 * a * tau + c * c / (8.0 * t2);
      auto p = [=](double u) { return Jet{2.0 * t2 * u * u + q, 4.0 * t2 * u, 4.0 * t2}; };
      f.W = [=](double u) { return quadratic(4.0 * a * tau - 1.0, 4.0 * m2 * t2, p(u)); };
      f.root = [=](double u) { return p(u).v; };
      break;
    }
    case SpaceClass::SU2:
    case SpaceClass::SL2RCover: {
      const bool su2 = cls == SpaceClass::SU2;
      const double e = 4.0 * tau * tau - k;
      if (su2 && !(std::abs(c) < std::abs(e) / std::sqrt(k))) {
        throw out_of_range("|c| < |4 tau^2 - kappa| / sqrt(kappa) required");
      }
      const double R = std::sqrt(e * e - c * c * k);
      const double b1 = 4.0 * tau * tau - 2.0 * a * k * tau;
      const double om = std::sqrt(std::abs(k));
      const double A = k * k * (4.0 * a * tau - a * a * k - 1.0), den = m2 * k * k * e;
      std::function<Jet(double)> p;
      if (su2) {
        p = [=](double u) {
          const double s = std::sin(om * u), co = std::cos(om * u);
          return Jet{b1 + R * s, R * om * co, -R * om * om * s};
        };
        f.period = two_pi / om;
      } else {
        p = [=](double u) {
          const double ch = std::cosh(om * u), sh = std::sinh(om * u);
          return Jet{b1 - R * ch, -R * om * sh, -R * om * om * ch};
        };
        f.reach = hyperbolic_reach / om;
      }
      f.W = [=](double u) { return quadratic(A, den, p(u)); };
      f.root = [=](double u) { return p(u).v / k; };
      break;
    }
  }
  const Interval dom = family_domain(space, std::abs(m), a, 0.0, c, f, tol, window);
  return {BourSeed{profile_of(f.W), m, a, dom}, cls, c};
}

namespace {

struct OdeTerms {
  double U, dU, x2, delta, sqrt_delta, den;
};

OdeTerms ode_terms(const BcvSpace& space, const BourSeed& seed, double u, const Tolerances& tol) {
  require_m(seed.m);
  OdeTerms t{};
  t.U = seed.U(u);
  if (!(t.U > 0.0) || !std::isfinite(t.U)) {
    throw Error(ErrorCode::DomainError, "U must be positive at u = " + std::to_string(u));
  }
  t.dU = seed.U.d1(u, tol);
  t.x2 = seed.m * seed.m * t.U * t.U;
  t.delta = delta(space, seed, u);
  if (t.delta == 0.0) throw Error(ErrorCode::NegativeDiscriminant, "Delta = 0 at u = " + std::to_string(u));
  t.sqrt_delta = std::sqrt(t.delta);
  const double tau = space.tau();
  t.den = (1.0 + t.sqrt_delta) * (1.0 + t.sqrt_delta) - 4.0 * tau * tau * t.x2;
  if (!(t.den > 0.0)) {
    throw Error(ErrorCode::NegativeRadicand, "(1 + sqrt Delta)^2 - 4 tau^2 m^2 U^2 <= 0 at u = " + std::to_string(u));
  }
  return t;
}

}  // namespace

double cmc_residual(const BcvSpace& space, const BourSeed& seed, double H, double u, const Tolerances& tol) {
  const OdeTerms t = ode_terms(space, seed, u, tol);
  const double a = seed.pitch, tau = space.tau(), k = space.kappa();
  const double m2 = seed.m * seed.m;
  const double ddU = seed.U.d2(u, tol);
  const double B = 2.0 * (1.0 - 2.0 * a * tau + t.sqrt_delta) / t.den;

  const double gap = clamp_difference(t.x2, a * a, tol.radicand_eps, "m^2 U^2 - a^2", u);
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() * (t.x2 + a * a) / t.den;
  const double rad = clamp_difference(4.0 * gap / t.den, m2 * m2 * B * B * t.U * t.U * t.dU * t.dU / t.delta,
                                      tol.radicand_eps, "mean curvature", u, noise);
  // (U U' / sqrt Delta)'
  const double flux = (t.dU * t.dU + t.U * ddU) / t.sqrt_delta -
                      m2 * t.U * t.U * t.dU * t.dU * (4.0 * tau * tau - k) / (t.delta * t.sqrt_delta);
  return H * std::sqrt(rad) - (2.0 - B - m2 * B * flux);
}

double first_integral_check(const BcvSpace& space, const BourSeed& seed, double H, double c, double u,
                            const Tolerances& tol) {
  const OdeTerms t = ode_terms(space, seed, u, tol);
  const double a = seed.pitch, tau = space.tau();
  const double m2 = seed.m * seed.m;
  const double gap = clamp_difference(t.x2, a * a, tol.radicand_eps, "m^2 U^2 - a^2", u);
  const double q = 1.0 - 2.0 * a * tau + t.sqrt_delta;
  if (q == 0.0) throw Error(ErrorCode::DegenerateRadius, "1 - 2 a tau + sqrt Delta = 0 at u = " + std::to_string(u));
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() * (t.x2 + a * a) * t.den / (q * q);
  const double rad = clamp_difference(gap * t.den / (q * q), t.x2 * m2 * t.dU * t.dU / t.delta, tol.radicand_eps,
                                      "first integral", u, noise);
  double y = y_solution(space, H, c, t.x2, t.sqrt_delta, tol.case_eps);
  if (H == 0.0) y = std::abs(y);
  return std::sqrt(rad) - y;
}

double z_equation_residual(const BcvSpace& space, const BourSeed& seed, double H, double c, double u,
                           const Tolerances& tol) {
  const double k = space.kappa(), tau = space.tau();
  if (std::abs(k - 4.0 * tau * tau) > tol.case_eps) {
    throw Error(ErrorCode::ParameterOutOfRange, "the z equation needs kappa = 4 tau^2");
  }
  require_m(seed.m);
  const double m2 = seed.m * seed.m;
  const double U = seed.U(u), dU = seed.U.d1(u, tol);
  const CmcConstants cc = cmc_constants(space, seed.pitch, H, c);
  const double z = m2 * U * U, dz = 2.0 * m2 * U * dU;
  return dz * dz - (-(H * H + 4.0 * tau * tau) * z * z + 2.0 * cc.c1 * z + cc.c2);
}

double sqrt_delta_residual(const BcvSpace& space, const BourSeed& seed, double H, double c, double u,
                           const Tolerances& tol) {
  return sqrt_delta_residual(space, seed, cmc_constants(space, seed.pitch, H, c), u, tol);
}

double sqrt_delta_residual(const BcvSpace& space, const BourSeed& seed, const CmcConstants& cc, double u,
                           const Tolerances& tol) {
  const double k = space.kappa(), tau = space.tau(), H = cc.H;
  if (std::abs(k - 4.0 * tau * tau) <= tol.case_eps) {
    throw Error(ErrorCode::ParameterOutOfRange, "sqrt Delta is constant when kappa = 4 tau^2");
  }
  const OdeTerms t = ode_terms(space, seed, u, tol);
  const double ds = (4.0 * tau * tau - k) * seed.m * seed.m * t.U * t.dU / t.sqrt_delta;
  return ds * ds - (-(H * H + k) * t.delta + 2.0 * cc.b1 * t.sqrt_delta + cc.b);
}

}  // namespace bcv
