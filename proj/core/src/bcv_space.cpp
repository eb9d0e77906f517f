#include "bcvhelix/bcv_space.hpp"

#include <cmath>
#include <string>

#include <Eigen/LU>

namespace bcv {

BcvSpace::BcvSpace(double kappa, double tau) : kappa_(kappa), tau_(tau) {
  if (!std::isfinite(kappa) || !std::isfinite(tau)) {
    throw Error(ErrorCode::ParameterOutOfRange, "kappa and tau must be finite");
  }
}

AmbientPoint CylPoint::to_cartesian() const { return {r * std::cos(theta), r * std::sin(theta), z}; }

std::string_view to_string(SpaceClass c) {
  switch (c) {
    case SpaceClass::Euclidean: return "Euclidean";
    case SpaceClass::Sphere: return "Sphere";
    case SpaceClass::SphereProduct: return "SphereProduct";
    case SpaceClass::HyperbolicProduct: return "HyperbolicProduct";
    case SpaceClass::Heisenberg: return "Heisenberg";
    case SpaceClass::SU2: return "SU2";
    case SpaceClass::SL2RCover: return "SL2R-cover";
  }
  return "Unknown";
}

double scaling_factor(const BcvSpace& space, double rsq, double min_scale) {
  const double b = 1.0 + 0.25 * space.kappa() * rsq;
  if (!(b >= min_scale)) {
    throw Error(ErrorCode::DomainError,
                "point outside the metric domain (B = " + std::to_string(b) + ")");
  }
  return b;
}

Mat3 metric_cartesian(const BcvSpace& space, const AmbientPoint& p, double min_scale) {
  const double b = scaling_factor(space, p.x * p.x + p.y * p.y, min_scale);
  // g = (dx^2 + dy^2)/B^2 + w (x) w with w = dz + tau (y dx - x dy)/B.
  const Vec3 w{space.tau() * p.y / b, -space.tau() * p.x / b, 1.0};
  Mat3 g = w * w.transpose();
  g(0, 0) += 1.0 / (b * b);
  g(1, 1) += 1.0 / (b * b);
  return g;
}

Mat3 metric_cylindrical(const BcvSpace& space, const CylPoint& p, double min_scale) {
  const double r2 = p.r * p.r;
  const double b = scaling_factor(space, r2, min_scale);
  const double tau = space.tau();
  Mat3 g = Mat3::Zero();
  g(0, 0) = 1.0 / (b * b);
  g(1, 1) = r2 * (1.0 + tau * tau * r2) / (b * b);
  g(2, 2) = 1.0;
  g(1, 2) = g(2, 1) = -tau * r2 / b;
  return g;
}

std::array<Vec3, 3> orthonormal_frame(const BcvSpace& space, const AmbientPoint& p, double min_scale) {
  const double b = scaling_factor(space, p.x * p.x + p.y * p.y, min_scale);
  const double tau = space.tau();
  return {Vec3{b, 0.0, -tau * p.y}, Vec3{0.0, b, tau * p.x}, Vec3{0.0, 0.0, 1.0}};
}

std::array<Vec3, 4> killing_basis(const BcvSpace& space, const AmbientPoint& p, double min_scale) {
  const auto [e1, e2, e3] = orthonormal_frame(space, p, min_scale);
  const double b = e1.x();
  const double k = space.kappa(), tau = space.tau();
  const double x = p.x, y = p.y;

  const Vec3 x1 = (1.0 - k * y * y / (2.0 * b)) * e1 + (k * x * y / (2.0 * b)) * e2 + (2.0 * tau * y / b) * e3;
  const Vec3 x2 = (k * x * y / (2.0 * b)) * e1 + (1.0 - k * x * x / (2.0 * b)) * e2 - (2.0 * tau * x / b) * e3;
  const Vec3 x3 = (-y / b) * e1 + (x / b) * e2 - (tau * (x * x + y * y) / b) * e3;
  return {x1, x2, x3, e3};
}

std::array<Mat3, 3> metric_derivatives(const BcvSpace& space, const AmbientPoint& p, const Tolerances& tol) {
  std::array<Mat3, 3> dg;
  const Vec3 base = p.vec();
  try {
    for (int l = 0; l < 3; ++l) {
      auto shifted = [&](double s) {
        Vec3 q = base;
        q[l] += s;
        return metric_cartesian(space, AmbientPoint::from(q), tol.min_scale);
      };
      const double h = tol.christoffel_step;
      const Mat3 d_h = (shifted(h) - shifted(-h)) / (2.0 * h);
      const Mat3 d_h2 = (shifted(0.5 * h) - shifted(-0.5 * h)) / h;
      dg[l] = (4.0 * d_h2 - d_h) / 3.0;
    }
  } catch (const Error& e) {
    throw Error(ErrorCode::DomainError, std::string("finite-difference stencil leaves the domain: ") + e.what());
  }
  return dg;
}

Christoffel christoffels(const BcvSpace& space, const AmbientPoint& p, const Tolerances& tol) {
  const Mat3 g_inv = metric_cartesian(space, p, tol.min_scale).inverse();
  const auto dg = metric_derivatives(space, p, tol);

  // Lowered symbols Gamma_{l,ij} = (d_i g_jl + d_j g_il - d_l g_ij)/2.
  std::array<Mat3, 3> lowered;
  for (int l = 0; l < 3; ++l) {
    for (int i = 0; i < 3; ++i) {
      for (int j = i; j < 3; ++j) {
        const double v = 0.5 * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
        lowered[l](i, j) = v;
        lowered[l](j, i) = v;
      }
    }
  }
  Christoffel gamma;
  for (int k = 0; k < 3; ++k) {
    gamma[k] = g_inv(k, 0) * lowered[0] + g_inv(k, 1) * lowered[1] + g_inv(k, 2) * lowered[2];
  }
  return gamma;
}

SpaceClass classify(const BcvSpace& space, double eps) {
  const double k = space.kappa(), tau = space.tau();
  const bool k_zero = std::abs(k) <= eps;
  const bool t_zero = std::abs(tau) <= eps;
  if (k_zero && t_zero) return SpaceClass::Euclidean;
  if (std::abs(k - 4.0 * tau * tau) <= eps) return SpaceClass::Sphere;
  if (t_zero) return k > 0.0 ? SpaceClass::SphereProduct : SpaceClass::HyperbolicProduct;
  if (k_zero) return SpaceClass::Heisenberg;
  return k > 0.0 ? SpaceClass::SU2 : SpaceClass::SL2RCover;
}

}  // namespace bcv
