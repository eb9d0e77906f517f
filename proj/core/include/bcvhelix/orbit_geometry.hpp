#pragma once

#include <memory>
#include <span>
#include <vector>

#include "bcvhelix/bcv_space.hpp"
#include "bcvhelix/numerics.hpp"

namespace bcv {

/// One-parameter group generated by X = d_theta + pitch d_z (pitch 0: rotations).
struct HelicoidalAction {
  BcvSpace space;
  double pitch = 0.0;
};

struct OrbitalMetric {
  double g11 = 0.0;
  double g22 = 0.0;
};

/// Orbit-space metric d xi1^2 / B^2 + xi1^2 d xi2^2 / (xi1^2 + (aB - tau xi1^2)^2).
OrbitalMetric orbital_metric(const HelicoidalAction& act, double xi1, const Tolerances& tol = {});

/// Length of the Killing field along the orbit through radius xi1.
double volume_omega(const HelicoidalAction& act, double xi1, const Tolerances& tol = {});

struct ProfileSample {
  double xi1 = 0.0;
  double xi2 = 0.0;
  double dxi1 = 0.0;
  double dxi2 = 0.0;
};

/// Closed-form description of a profile. When `xi2` is empty the height is
/// the integral of `dxi2` from the curve's reference abscissa.
struct ProfileFunctions {
  ScalarFn xi1;
  ScalarFn dxi1;
  ScalarFn dxi2;
  ScalarFn xi2;
};

/// Orbit-space curve (xi1(u), xi2(u)) carrying explicit derivatives, validated
/// at construction to be arc-length parametrized with xi1 > 0.
class ProfileCurve {
 public:
  /// Samples on a strictly increasing grid; positions are interpolated by
  /// cubic Hermite using the derivative samples, derivatives by cubic
  /// Hermite with finite-difference slopes.
  static ProfileCurve from_samples(const HelicoidalAction& act, std::vector<double> u, std::vector<double> xi1,
                                   std::vector<double> xi2, std::vector<double> dxi1, std::vector<double> dxi2,
                                   const Tolerances& tol = {});

  /// Function-backed curve, validated on `check_samples` uniform points.
  static ProfileCurve from_functions(const HelicoidalAction& act, ProfileFunctions fns, Interval domain,
                                     const Tolerances& tol = {}, int check_samples = 65);

  Interval domain() const { return domain_; }
  /// Abscissa where an integrated xi2 vanishes.
  double reference() const { return reference_; }
  std::span<const double> grid() const { return grid_; }

  ProfileSample at(double u) const;
  /// Like at() but without xi2 (left 0), which may cost a quadrature.
  ProfileSample local(double u) const;
  /// xi2(u + du) - xi2(u), smooth in du so finite-difference stencils built
  /// on it do not see quadrature noise.
  double xi2_increment(double u, double du) const;

 private:
  struct Impl;
  ProfileCurve(std::shared_ptr<const Impl> impl, Interval domain, double reference, std::vector<double> grid);

  std::shared_ptr<const Impl> impl_;
  Interval domain_;
  double reference_ = 0.0;
  std::vector<double> grid_;
};

struct InducedMetric {
  double E = 0.0;
  double F = 0.0;
  double G = 0.0;
};

/// Induced metric of psi(u, theta) = (xi1(u), theta, xi2(u) + a theta) in (u, theta).
InducedMetric induced_metric(const HelicoidalAction& act, const ProfileCurve& curve, double u,
                             const Tolerances& tol = {});

/// xi1'^2/B^2 + xi1^2 xi2'^2 / (xi1^2 + (aB - tau xi1^2)^2) - 1.
double arclength_residual(const HelicoidalAction& act, const ProfileSample& s, const Tolerances& tol = {});
double arclength_residual(const HelicoidalAction& act, const ProfileCurve& curve, double u,
                          const Tolerances& tol = {});

/// Angle between the profile and d/d xi1, principal value in (-pi, pi].
double sigma_angle(const HelicoidalAction& act, const ProfileCurve& curve, double u, const Tolerances& tol = {});

/// sigma along an ordered set of abscissae, with 2 pi jumps removed.
std::vector<double> sigma_unwrapped(const HelicoidalAction& act, const ProfileCurve& curve,
                                    std::span<const double> us, const Tolerances& tol = {});

/// d sigma / du by central differences of the locally unwrapped angle.
double sigma_rate(const HelicoidalAction& act, const ProfileCurve& curve, double u, const Tolerances& tol = {});

double geodesic_curvature(const HelicoidalAction& act, const ProfileCurve& curve, double u,
                          const Tolerances& tol = {});

/// sigma' + (1/xi1 - kappa xi1 / 4) sin sigma. Trace convention: the
/// Euclidean cylinder of radius R gives 1/R.
double mean_curvature_reduced(const HelicoidalAction& act, const ProfileCurve& curve, double u,
                              const Tolerances& tol = {});

/// k_g - D_n ln omega with the normal derivative taken numerically.
double mean_curvature_definitional(const HelicoidalAction& act, const ProfileCurve& curve, double u,
                                   const Tolerances& tol = {});

}  // namespace bcv
