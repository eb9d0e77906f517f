#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "bcvhelix/bcv_space.hpp"
#include "bcvhelix/bour.hpp"
#include "bcvhelix/orbit_geometry.hpp"

namespace bcv {

/// psi(u, t) = (xi1(u), theta(u, t), xi2(u) + a theta(u, t)) in cylindrical
/// coordinates, either from a natural chart (theta = t/m + theta0(u)) or from
/// a raw profile curve (theta = t).
///
/// The unit normal is oriented once per chart: at the middle of the u-range
/// and t = 0 it points away from the axis (g(n, e_r) >= 0), and the same
/// continuous branch psi_u x psi_t is used everywhere else.
class SurfaceChart {
 public:
  static SurfaceChart natural(const NaturalChart& chart, Interval t_range, const Tolerances& tol = {});
  static SurfaceChart natural(const NaturalChart& chart, Interval u_range, Interval t_range,
                              const Tolerances& tol = {});
  static SurfaceChart helicoidal(const HelicoidalAction& act, const ProfileCurve& curve, Interval t_range,
                                 const Tolerances& tol = {});

  const BcvSpace& space() const { return space_; }
  double pitch() const { return pitch_; }
  Interval u_range() const { return u_range_; }
  Interval t_range() const { return t_range_; }
  /// Where finite-difference stencils may reach; contains u_range().
  Interval stencil_range() const;
  const Tolerances& tolerances() const { return tol_; }
  /// +1 or -1 applied to psi_u x psi_t.
  double orientation() const { return orientation_; }

  CylPoint cylindrical(double u, double t) const;

  /// Evaluator of psi(u + du, t) in Cartesian coordinates whose u-dependence
  /// is smooth in du: heights and angles are base values at u plus short
  /// increments, so stencils do not pick up quadrature noise. u may be
  /// anywhere in stencil_range().
  std::function<Vec3(double du, double t)> patch(double u) const;

 private:
  struct Source;
  SurfaceChart(std::shared_ptr<const Source> src, BcvSpace space, double pitch, Interval u_range,
               Interval t_range, const Tolerances& tol);

  std::shared_ptr<const Source> src_;
  BcvSpace space_;
  double pitch_ = 0.0;
  Interval u_range_;
  Interval t_range_;
  Tolerances tol_;
  double orientation_ = 1.0;
};

AmbientPoint embed(const SurfaceChart& chart, double u, double t);

/// E, F, G from central-difference tangents and the ambient metric.
InducedMetric first_form_numeric(const SurfaceChart& chart, double u, double t);

struct SecondOrderData {
  Vec3 point;
  Vec3 psi_u;
  Vec3 psi_t;
  InducedMetric first;
  double L = 0.0, M = 0.0, N = 0.0;  // II in (u, t)
  Vec3 normal;                        // unit, contravariant Cartesian components
  double H = 0.0;                     // trace of the shape operator
  double K_extrinsic = 0.0;           // det(II) / det(I)
};

/// Tangents, unit normal and second fundamental form, with
/// II_ij = g(d_i d_j psi + Gamma(d_i psi, d_j psi), n).
SecondOrderData second_order(const SurfaceChart& chart, double u, double t);

/// Trace of the shape operator (principal curvature sum) for the chart's normal.
double mean_curvature_extrinsic(const SurfaceChart& chart, double u, double t);

/// -U''/U.
double gauss_intrinsic(const MetricProfile& U, double u, const Tolerances& tol = {});

/// Gaussian curvature from the first fundamental form alone: Brioschi's
/// formula on a 5x5 grid of numerically measured E, F, G.
double gauss_numeric(const SurfaceChart& chart, double u, double t);

/// max over the grid of max(|dE|, |dF|, |dG|) between the two charts.
double isometry_deviation(const SurfaceChart& a, const SurfaceChart& b, std::span<const double> us,
                          std::span<const double> ts);

struct MeshGrid {
  int nu = 0;
  int nt = 0;
  std::vector<double> u;  // kept rows
  std::vector<double> t;
  std::vector<Vec3> vertices;  // row-major, u slow
  std::vector<double> H_ext;   // NaN where the stencil did not fit
  std::vector<double> K;
  int dropped_rows = 0;
  int diagnostic_failures = 0;
};

/// Uniform nu x nt grid over the chart's ranges. Rows whose u the chart
/// cannot evaluate, or whose points leave the metric domain, are dropped.
MeshGrid sample_mesh(const SurfaceChart& chart, int nu, int nt);

}  // namespace bcv
