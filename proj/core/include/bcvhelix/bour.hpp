#pragma once

#include <memory>
#include <span>
#include <vector>

#include "bcvhelix/bcv_space.hpp"
#include "bcvhelix/numerics.hpp"
#include "bcvhelix/orbit_geometry.hpp"

namespace bcv {

/// Metric profile U(u) of du^2 + U^2 dt^2. Missing derivatives fall back to
/// central differences (steps tol.fd_first / tol.fd_second).
struct MetricProfile {
  ScalarFn value;
  ScalarFn first;
  ScalarFn second;

  double operator()(double u) const { return value(u); }
  double d1(double u, const Tolerances& tol = {}) const;
  double d2(double u, const Tolerances& tol = {}) const;
};

struct BourSeed {
  MetricProfile U;
  double m = 1.0;
  double pitch = 0.0;
  Interval u_domain;
};

/// (1 - 2 a tau)^2 + (m^2 U^2 - a^2)(4 tau^2 - kappa). Throws NegativeDiscriminant below 0.
double delta(const BcvSpace& space, const BourSeed& seed, double u);

double xi1_from_seed(const BcvSpace& space, const BourSeed& seed, double u, const Tolerances& tol = {});

/// xi1 and the integrands of xi2 and theta0 at u.
struct BourLocal {
  double xi1 = 0.0;
  double dxi2 = 0.0;
  double dtheta0 = 0.0;
};

BourLocal bour_local(const BcvSpace& space, const BourSeed& seed, double u, const Tolerances& tol = {});

/// xi1'(u) from m^2 B^2 U U' = sqrt(Delta) xi1 xi1'. DegenerateRadius where xi1 = 0.
double xi1_derivative(const BcvSpace& space, const BourSeed& seed, double u, const Tolerances& tol = {});

/// The kappa = tau = 0 formulas written out directly, without Delta or B.
BourLocal bour_local_euclidean(const BourSeed& seed, double u, const Tolerances& tol = {});

/// Maximal subinterval of seed.u_domain around its midpoint where the chart exists.
Interval domain_of_validity(const BcvSpace& space, const BourSeed& seed, const Tolerances& tol = {});

/// xi2 and theta0 as integrals from u0 (midpoint of the validity domain).
double xi2(const BcvSpace& space, const BourSeed& seed, double u, const Tolerances& tol = {});
double theta0(const BcvSpace& space, const BourSeed& seed, double u, const Tolerances& tol = {});

struct ChartRow {
  double u = 0.0;
  double xi1 = 0.0;
  double xi2 = 0.0;
  double theta0 = 0.0;
  double U = 0.0;
};

/// Natural parametrization psi(u, t) = (xi1(u), theta(u, t), xi2(u) + a theta(u, t)),
/// theta = t/m + theta0(u). Immutable after construction.
class NaturalChart {
 public:
  struct Formulas {
    ScalarFn xi1;
    ScalarFn dxi1;
    ScalarFn dxi2;
    ScalarFn dtheta0;
  };

  NaturalChart(BcvSpace space, MetricProfile U, double m, double pitch, Interval domain, Formulas f,
               const Tolerances& tol = {});

  const BcvSpace& space() const { return space_; }
  const MetricProfile& U() const { return U_; }
  /// Signed parameter as supplied; the formulas use |m|.
  double m() const { return m_; }
  double pitch() const { return pitch_; }
  HelicoidalAction action() const { return {space_, pitch_}; }
  Interval domain() const { return domain_; }
  double u0() const { return domain_.midpoint(); }
  const Tolerances& tolerances() const { return tol_; }

  double xi1(double u) const { return f_.xi1(u); }
  double dxi1(double u) const { return f_.dxi1(u); }
  double dxi2(double u) const { return f_.dxi2(u); }
  double dtheta0(double u) const { return f_.dtheta0(u); }
  double xi2(double u) const;
  double theta0(double u) const;
  double theta(double u, double t) const { return t / m_ + theta0(u); }

  /// Increments over [u, u + du]; fixed-order rule for short steps so that
  /// difference quotients built on them are smooth.
  double xi2_increment(double u, double du) const;
  double theta0_increment(double u, double du) const;

  /// Rows on sorted abscissae, integrals accumulated in one sweep.
  std::vector<ChartRow> tabulate(std::span<const double> us) const;

  /// The profile as an orbit-space curve over `domain` (default: whole chart).
  ProfileCurve profile() const;
  ProfileCurve profile(Interval domain) const;

 private:
  double increment(const ScalarFn& f, double u, double du) const;

  BcvSpace space_;
  MetricProfile U_;
  double m_;
  double pitch_;
  Interval domain_;
  Formulas f_;
  Tolerances tol_;
};

NaturalChart build_chart(const BcvSpace& space, const BourSeed& seed, const Tolerances& tol = {});

/// Natural parameters of an existing helicoidal surface: U = omega along the
/// profile, and t = theta + t_shift(u) with t_shift(reference) = 0.
struct NaturalParameters {
  MetricProfile U;
  ScalarFn t_shift;
};

NaturalParameters natural_from_helicoidal(const HelicoidalAction& act, const ProfileCurve& curve,
                                          const Tolerances& tol = {});

/// Which formulas rotation_chart evaluates.
enum class RotationFormulas {
  General,   // the one-parameter family for arbitrary (kappa, tau)
  Specific,  // the reduced forms for S^3, tau = 0 and Nil_3 when the space allows
};

/// Rotation surfaces (pitch 0) with metric du^2 + U^2 dt^2, written without
/// going through the helicoidal formulas.
NaturalChart rotation_chart(const BcvSpace& space, double n, const MetricProfile& U, Interval u_domain,
                            RotationFormulas which = RotationFormulas::General, const Tolerances& tol = {});

}  // namespace bcv
