#pragma once

#include <array>
#include <string_view>

#include <Eigen/Core>

#include "bcvhelix/numerics.hpp"

namespace bcv {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Bianchi-Cartan-Vranceanu space selected by the base curvature kappa and
/// the bundle curvature tau. The metric lives on the open set where
/// B = 1 + (kappa/4)(x^2 + y^2) is positive.
class BcvSpace {
 public:
  BcvSpace() = default;
  BcvSpace(double kappa, double tau);

  double kappa() const { return kappa_; }
  double tau() const { return tau_; }

 private:
  double kappa_ = 0.0;
  double tau_ = 0.0;
};

struct AmbientPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3 vec() const { return {x, y, z}; }
  static AmbientPoint from(const Vec3& v) { return {v.x(), v.y(), v.z()}; }
};

/// Cylindrical coordinates (r, theta, z) with x = r cos theta, y = r sin theta.
struct CylPoint {
  double r = 0.0;
  double theta = 0.0;
  double z = 0.0;

  AmbientPoint to_cartesian() const;
  /// True when the chart is singular at this point (r below r_min).
  bool near_axis(double r_min) const { return r < r_min; }
};

enum class SpaceClass {
  Euclidean,
  Sphere,
  SphereProduct,
  HyperbolicProduct,
  Heisenberg,
  SU2,
  SL2RCover,
};

std::string_view to_string(SpaceClass c);

/// B = 1 + (kappa/4) rsq. Throws DomainError when B < min_scale.
double scaling_factor(const BcvSpace& space, double rsq, double min_scale = Tolerances{}.min_scale);

/// Metric components in (x, y, z).
Mat3 metric_cartesian(const BcvSpace& space, const AmbientPoint& p,
                      double min_scale = Tolerances{}.min_scale);

/// Metric components in (r, theta, z). Defined on the axis, where g_thth = 0.
Mat3 metric_cylindrical(const BcvSpace& space, const CylPoint& p,
                        double min_scale = Tolerances{}.min_scale);

/// E1 = B d_x - tau y d_z, E2 = B d_y + tau x d_z, E3 = d_z, as coordinate components.
std::array<Vec3, 3> orthonormal_frame(const BcvSpace& space, const AmbientPoint& p,
                                      double min_scale = Tolerances{}.min_scale);

/// Killing fields X1..X4 in coordinate components. X3 generates rotations
/// about the z-axis and X4 = E3 vertical translations.
std::array<Vec3, 4> killing_basis(const BcvSpace& space, const AmbientPoint& p,
                                  double min_scale = Tolerances{}.min_scale);

/// gamma[k](i, j) = Gamma^k_{ij}.
using Christoffel = std::array<Mat3, 3>;

/// Christoffel symbols of the Cartesian metric, from Richardson-extrapolated
/// central differences of metric_cartesian (step tol.christoffel_step).
/// Independent of any closed-form connection coefficients.
Christoffel christoffels(const BcvSpace& space, const AmbientPoint& p, const Tolerances& tol = {});

/// Partial derivatives d_l g_{ij}, dg[l](i, j), by the same stencil.
std::array<Mat3, 3> metric_derivatives(const BcvSpace& space, const AmbientPoint& p,
                                       const Tolerances& tol = {});

SpaceClass classify(const BcvSpace& space, double eps = Tolerances{}.case_eps);

}  // namespace bcv
