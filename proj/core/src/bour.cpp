#include "bcvhelix/bour.hpp"

#include "radicand.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace bcv {

double MetricProfile::d1(double u, const Tolerances& tol) const {
  if (first) return first(u);
  return diff_central(value, u, 1, tol.fd_first);
}

double MetricProfile::d2(double u, const Tolerances& tol) const {
  if (second) return second(u);
  return diff_central(value, u, 2, tol.fd_second);
}

namespace {

using detail::clamp_difference;

// Everything the helicoidal formulas share at one abscissa, with m > 0.
struct Terms {
  double U;
  double dU;
  double x2;  // m^2 U^2
  double delta;
  double sqrt_delta;
  double xi1;
  double xi1_sq_noise;  // rounding carried into xi1^2 by m^2 U^2 - a^2
  double b;             // 1 + kappa xi1^2 / 4
};

Terms terms(const BcvSpace& space, const BourSeed& seed, double u, const Tolerances& tol, bool need_dU) {
  const double m = std::abs(seed.m);
  const double a = seed.pitch;
  const double tau = space.tau();
  Terms t{};
  t.U = seed.U(u);
  if (!(t.U > 0.0) || !std::isfinite(t.U)) {
    throw Error(ErrorCode::DomainError, "U must be positive at u = " + std::to_string(u));
  }
  t.dU = need_dU ? seed.U.d1(u, tol) : 0.0;
  t.x2 = m * m * t.U * t.U;
  t.delta = delta(space, seed, u);
  t.sqrt_delta = std::sqrt(t.delta);
  const double num = clamp_difference(t.x2, a * a, tol.radicand_eps, "m^2 U^2 - a^2", u);
  const double den = (1.0 + t.sqrt_delta) * (1.0 + t.sqrt_delta) - 4.0 * tau * tau * t.x2;
  if (!(den > 0.0)) {
    if (num == 0.0) throw Error(ErrorCode::DegenerateRadius, "xi1 is 0/0 at u = " + std::to_string(u));
    throw Error(ErrorCode::NegativeRadicand, "xi1 denominator non-positive at u = " + std::to_string(u));
  }
  t.xi1 = 2.0 * std::sqrt(num / den);
  t.xi1_sq_noise = 64.0 * std::numeric_limits<double>::epsilon() * (t.x2 + a * a) / den;
  t.b = scaling_factor(space, t.xi1 * t.xi1, tol.min_scale);
  return t;
}

void require_nonzero_m(double m) {
  if (m == 0.0 || !std::isfinite(m)) throw Error(ErrorCode::ParameterOutOfRange, "m must be finite and nonzero");
}

}  // namespace

double delta(const BcvSpace& space, const BourSeed& seed, double u) {
  const double a = seed.pitch, tau = space.tau();
  const double U = seed.U(u);
  const double one = 1.0 - 2.0 * a * tau;
  const double d = one * one + (seed.m * seed.m * U * U - a * a) * (4.0 * tau * tau - space.kappa());
  if (d < 0.0) throw Error(ErrorCode::NegativeDiscriminant, "Delta < 0 at u = " + std::to_string(u));
  return d;
}

double xi1_from_seed(const BcvSpace& space, const BourSeed& seed, double u, const Tolerances& tol) {
  require_nonzero_m(seed.m);
  return terms(space, seed, u, tol, false).xi1;
}

BourLocal bour_local(const BcvSpace& space, const BourSeed& seed, double u, const Tolerances& tol) {
  require_nonzero_m(seed.m);
  const double m = std::abs(seed.m), a = seed.pitch;
  const double kappa = space.kappa(), tau = space.tau();
  const Terms t = terms(space, seed, u, tol, true);
  const double r2 = t.xi1 * t.xi1;
  const double k4 = 4.0 + kappa * r2;
  const double m2 = m * m;
  const double rad = clamp_difference(r2, m2 * m2 * t.U * t.U * t.dU * t.dU * k4 * k4 / (16.0 * t.delta),
                                      tol.radicand_eps, "xi2", u, t.xi1_sq_noise);
  BourLocal out{t.xi1, 0.0, 0.0};
  if (rad == 0.0) return out;
  const double root = std::sqrt(rad);
  out.dxi2 = m * t.U * k4 / (4.0 * r2) * root;
  out.dtheta0 = ((4.0 * tau - a * kappa) * r2 - 4.0 * a) / (4.0 * m * t.U * r2) * root;
  return out;
}

double xi1_derivative(const BcvSpace& space, const BourSeed& seed, double u, const Tolerances& tol) {
  require_nonzero_m(seed.m);
  const Terms t = terms(space, seed, u, tol, true);
  if (t.xi1 == 0.0 || t.sqrt_delta == 0.0) {
    throw Error(ErrorCode::DegenerateRadius, "xi1' undefined where xi1 = 0 (u = " + std::to_string(u) + ")");
  }
  const double m2 = seed.m * seed.m;
  return m2 * t.b * t.b * t.U * t.dU / (t.sqrt_delta * t.xi1);
}

BourLocal bour_local_euclidean(const BourSeed& seed, double u, const Tolerances& tol) {
  require_nonzero_m(seed.m);
  const double m = std::abs(seed.m), a = seed.pitch;
  const double U = seed.U(u), dU = seed.U.d1(u, tol);
  const double p = clamp_difference(m * m * U * U, a * a, tol.radicand_eps, "m^2 U^2 - a^2", u);
  const double rad = clamp_difference(p, m * m * m * m * U * U * dU * dU, tol.radicand_eps, "xi2", u);
  BourLocal out{std::sqrt(p), 0.0, 0.0};
  if (rad == 0.0) return out;
  out.dxi2 = m * U / p * std::sqrt(rad);
  out.dtheta0 = -(a / m) * std::sqrt(rad) / (U * p);
  return out;
}

namespace {

Interval scan_domain(const std::function<bool(double)>& valid, Interval window, const Tolerances& tol) {
  if (!(window.hi > window.lo)) throw Error(ErrorCode::EmptyDomain, "u_domain is empty");
  return find_valid_interval(valid, window, window.midpoint(), tol.domain_scan_samples, tol.bisection_tol);
}

bool finite_all(const BourLocal& l) {
  return std::isfinite(l.xi1) && std::isfinite(l.dxi2) && std::isfinite(l.dtheta0);
}

}  // namespace

Interval domain_of_validity(const BcvSpace& space, const BourSeed& seed, const Tolerances& tol) {
  require_nonzero_m(seed.m);
  auto valid = [&](double u) {
    try {
      return finite_all(bour_local(space, seed, u, tol));
    } catch (const Error&) {
      return false;
    }
  };
  return scan_domain(valid, seed.u_domain, tol);
}

double xi2(const BcvSpace& space, const BourSeed& seed, double u, const Tolerances& tol) {
  return build_chart(space, seed, tol).xi2(u);
}

double theta0(const BcvSpace& space, const BourSeed& seed, double u, const Tolerances& tol) {
  return build_chart(space, seed, tol).theta0(u);
}

NaturalChart::NaturalChart(BcvSpace space, MetricProfile U, double m, double pitch, Interval domain, Formulas f,
                           const Tolerances& tol)
    : space_(space), U_(std::move(U)), m_(m), pitch_(pitch), domain_(domain), f_(std::move(f)), tol_(tol) {
  require_nonzero_m(m);
}

double NaturalChart::xi2(double u) const {
  return quad_adaptive(f_.dxi2, u0(), u, tol_.quad_abs, tol_.quad_rel, tol_.quad_max_panels).value;
}

double NaturalChart::theta0(double u) const {
  return quad_adaptive(f_.dtheta0, u0(), u, tol_.quad_abs, tol_.quad_rel, tol_.quad_max_panels).value;
}

double NaturalChart::increment(const ScalarFn& f, double u, double du) const {
  if (std::abs(du) <= 1e-2) return quad_fixed(f, u, u + du);
  return quad_adaptive(f, u, u + du, tol_.quad_abs, tol_.quad_rel, tol_.quad_max_panels).value;
}

double NaturalChart::xi2_increment(double u, double du) const { return increment(f_.dxi2, u, du); }
double NaturalChart::theta0_increment(double u, double du) const { return increment(f_.dtheta0, u, du); }

std::vector<ChartRow> NaturalChart::tabulate(std::span<const double> us) const {
  const auto x2 = cumulative_quad(f_.dxi2, u0(), us, tol_.quad_abs, tol_.quad_rel, tol_.quad_max_panels);
  const auto t0 = cumulative_quad(f_.dtheta0, u0(), us, tol_.quad_abs, tol_.quad_rel, tol_.quad_max_panels);
  std::vector<ChartRow> rows(us.size());
  for (std::size_t i = 0; i < us.size(); ++i) rows[i] = {us[i], xi1(us[i]), x2[i], t0[i], U_(us[i])};
  return rows;
}

ProfileCurve NaturalChart::profile() const { return profile(domain_); }

ProfileCurve NaturalChart::profile(Interval domain) const {
  NaturalChart self = *this;
  ProfileFunctions fns{f_.xi1, f_.dxi1, f_.dxi2, [self](double u) { return self.xi2(u); }};
  return ProfileCurve::from_functions(action(), std::move(fns), domain, tol_);
}

NaturalChart build_chart(const BcvSpace& space, const BourSeed& seed, const Tolerances& tol) {
  require_nonzero_m(seed.m);
  const Interval dom = domain_of_validity(space, seed, tol);
  NaturalChart::Formulas f{
      [=](double u) { return bour_local(space, seed, u, tol).xi1; },
      [=](double u) { return xi1_derivative(space, seed, u, tol); },
      [=](double u) { return bour_local(space, seed, u, tol).dxi2; },
      [=](double u) { return bour_local(space, seed, u, tol).dtheta0; },
  };
  return NaturalChart(space, seed.U, seed.m, seed.pitch, dom, std::move(f), tol);
}

NaturalParameters natural_from_helicoidal(const HelicoidalAction& act, const ProfileCurve& curve,
                                          const Tolerances& tol) {
  const double a = act.pitch, tau = act.space.tau();
  auto omega = [=](double u) {
    const double w = volume_omega(act, curve.local(u).xi1, tol);
    if (!(w > 0.0)) throw Error(ErrorCode::DegenerateOrbit, "omega vanishes at u = " + std::to_string(u));
    return w;
  };
  auto gauge = [=](double u) {
    const ProfileSample s = curve.local(u);
    const double b = scaling_factor(act.space, s.xi1 * s.xi1, tol.min_scale);
    const double q = a * b - tau * s.xi1 * s.xi1;
    const double w2 = s.xi1 * s.xi1 + q * q;  // (B omega)^2
    if (!(w2 > 0.0)) throw Error(ErrorCode::DegenerateOrbit, "omega vanishes at u = " + std::to_string(u));
    return s.dxi2 * q * b / w2;
  };
  const double ref = curve.reference();
  ScalarFn shift = [=](double u) {
    return quad_adaptive(gauge, ref, u, tol.quad_abs, tol.quad_rel, tol.quad_max_panels).value;
  };
  return {MetricProfile{omega, {}, {}}, std::move(shift)};
}

namespace {

struct RotationLocal {
  double xi1;
  double dxi1;
  double dxi2;
  double dtheta0;
};

// One-parameter rotation family, general (kappa, tau). n > 0.
RotationLocal rotation_general(const BcvSpace& space, double n, const MetricProfile& Uf, double u,
                               const Tolerances& tol) {
  const double kappa = space.kappa(), tau = space.tau();
  const double U = Uf(u), dU = Uf.d1(u, tol);
  if (!(U > 0.0)) throw Error(ErrorCode::DomainError, "U must be positive at u = " + std::to_string(u));
  const double n2 = n * n;
  const double delta = 1.0 + (4.0 * tau * tau - kappa) * n2 * U * U;
  if (delta < 0.0) throw Error(ErrorCode::NegativeDiscriminant, "Delta < 0 at u = " + std::to_string(u));
  const double sd = std::sqrt(delta);
  const double s = 1.0 + sd;
  const double d = 2.0 * s - kappa * n2 * U * U;
  if (!(d > 0.0)) throw Error(ErrorCode::NegativeRadicand, "xi1 denominator non-positive");
  if (sd == 0.0) throw Error(ErrorCode::DegenerateRadius, "Delta = 0 at u = " + std::to_string(u));
  const double slope = n2 * s * s * dU * dU / (delta * d * d);
  const double r_xi2 = clamp_difference(s * s / d, slope * s * s, tol.radicand_eps, "xi2", u);
  const double r_th = clamp_difference(1.0 / d, slope, tol.radicand_eps, "theta", u);

  // d/du of 2 n U / sqrt(D)
  const double dsd = (4.0 * tau * tau - kappa) * n2 * U * dU / sd;
  const double dd = 2.0 * dsd - 2.0 * kappa * n2 * U * dU;
  const double dxi1 = 2.0 * n * (dU / std::sqrt(d) - 0.5 * U * dd / (d * std::sqrt(d)));

  scaling_factor(space, 4.0 * n2 * U * U / d, tol.min_scale);
  return {2.0 * n * U / std::sqrt(d), dxi1, std::sqrt(r_xi2), 2.0 * tau * std::sqrt(r_th)};
}

// Reduced forms; spaces without one use the general formulas.
RotationLocal rotation_specific(const BcvSpace& space, double n, const MetricProfile& Uf, double u,
                                const Tolerances& tol) {
  const double kappa = space.kappa(), tau = space.tau();
  const double n2 = n * n;
  const SpaceClass cls = classify(space, tol.case_eps);

  std::function<double(double)> xi1;
  double dxi2 = 0.0, dtheta0 = 0.0;
  const double U = Uf(u), dU = Uf.d1(u, tol);
  if (!(U > 0.0)) throw Error(ErrorCode::DomainError, "U must be positive at u = " + std::to_string(u));

  if (cls == SpaceClass::Sphere) {
    xi1 = [&](double v) {
      const double Uv = Uf(v);
      const double w = 1.0 - tau * tau * n2 * Uv * Uv;
      if (!(w > 0.0)) throw Error(ErrorCode::NegativeRadicand, "1 - tau^2 n^2 U^2 <= 0");
      return n * Uv / std::sqrt(w);
    };
    const double w = 1.0 - tau * tau * n2 * U * U;
    if (!(w > 0.0)) throw Error(ErrorCode::NegativeRadicand, "1 - tau^2 n^2 U^2 <= 0");
    const double r = clamp_difference(1.0, n2 * (tau * tau * U * U + dU * dU), tol.radicand_eps, "xi2", u);
    dxi2 = std::sqrt(r) / w;
    dtheta0 = tau * dxi2;
  } else if (std::abs(tau) <= tol.case_eps) {
    xi1 = [&](double v) {
      const double Uv = Uf(v);
      const double w = 1.0 - kappa * n2 * Uv * Uv;
      if (w < 0.0) throw Error(ErrorCode::NegativeDiscriminant, "1 - kappa n^2 U^2 < 0");
      return 2.0 * n * Uv / (1.0 + std::sqrt(w));
    };
    const double w = 1.0 - kappa * n2 * U * U;
    if (!(w > 0.0)) throw Error(ErrorCode::NegativeRadicand, "1 - kappa n^2 U^2 <= 0");
    const double r = clamp_difference(1.0, n2 * (kappa * U * U + dU * dU), tol.radicand_eps, "xi2", u);
    dxi2 = std::sqrt(r / w);
  } else if (cls == SpaceClass::Heisenberg) {
    xi1 = [&](double v) {
      const double Uv = Uf(v);
      const double dl = 1.0 + 4.0 * tau * tau * n2 * Uv * Uv;
      return std::sqrt(2.0) * n * Uv / std::sqrt(1.0 + std::sqrt(dl));
    };
    const double dl = 1.0 + 4.0 * tau * tau * n2 * U * U;
    const double s = 1.0 + std::sqrt(dl);
    const double r = clamp_difference(2.0 / s, n2 * dU * dU / dl, tol.radicand_eps, "xi2", u);
    dxi2 = 0.5 * s * std::sqrt(r);
    dtheta0 = tau * std::sqrt(r);
  } else {
    return rotation_general(space, n, Uf, u, tol);
  }
  const double x = xi1(u);
  scaling_factor(space, x * x, tol.min_scale);
  return {x, diff_central(xi1, u, 1, tol.fd_first), dxi2, dtheta0};
}

}  // namespace

NaturalChart rotation_chart(const BcvSpace& space, double n, const MetricProfile& U, Interval u_domain,
                            RotationFormulas which, const Tolerances& tol) {
  require_nonzero_m(n);
  const double nn = std::abs(n);
  auto local = [=](double u) {
    return which == RotationFormulas::General ? rotation_general(space, nn, U, u, tol)
                                              : rotation_specific(space, nn, U, u, tol);
  };
  auto valid = [&](double u) {
    try {
      const RotationLocal l = local(u);
      return std::isfinite(l.xi1) && std::isfinite(l.dxi2) && std::isfinite(l.dtheta0) && l.xi1 > 0.0;
    } catch (const Error&) {
      return false;
    }
  };
  const Interval dom = scan_domain(valid, u_domain, tol);
  NaturalChart::Formulas f{
      [=](double u) { return local(u).xi1; },
      [=](double u) { return local(u).dxi1; },
      [=](double u) { return local(u).dxi2; },
      [=](double u) { return local(u).dtheta0; },
  };
  return NaturalChart(space, U, n, 0.0, dom, std::move(f), tol);
}

}  // namespace bcv
