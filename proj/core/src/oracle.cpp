#include "bcvhelix/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include <Eigen/Geometry>
#include <Eigen/LU>

namespace bcv {

struct SurfaceChart::Source {
  ScalarFn xi1;
  ScalarFn xi2;
  ScalarFn theta0;
  std::function<double(double, double)> xi2_increment;
  std::function<double(double, double)> theta0_increment;
  double t_scale = 1.0;  // theta = t_scale t + theta0(u)
  Interval domain;       // where the functions can be evaluated (stencils may reach past u_range)
};

namespace {

using Patch = std::function<Vec3(double, double)>;

double fit_step(Interval r, double u, double h, double h_min) {
  const double room = std::min(u - r.lo, r.hi - u);
  const double s = std::min(h, room);
  if (!(s >= h_min)) {
    throw Error(ErrorCode::StencilOutOfDomain,
                "no room for a stencil at u = " + std::to_string(u) + " (room " + std::to_string(room) + ")");
  }
  return s;
}

// One Richardson level on each stencil, as in diff_central.
template <class F>
Vec3 d1(F&& f, double h) {
  auto d = [&](double s) -> Vec3 { return (f(s) - f(-s)) / (2.0 * s); };
  return (4.0 * d(0.5 * h) - d(h)) / 3.0;
}

template <class F>
Vec3 d2(F&& f, const Vec3& f0, double h) {
  auto d = [&](double s) -> Vec3 { return (f(s) - 2.0 * f0 + f(-s)) / (s * s); };
  return (4.0 * d(0.5 * h) - d(h)) / 3.0;
}

template <class F>
Vec3 d11(F&& f, double h) {
  auto d = [&](double s) -> Vec3 { return (f(s, s) - f(s, -s) - f(-s, s) + f(-s, -s)) / (4.0 * s * s); };
  return (4.0 * d(0.5 * h) - d(h)) / 3.0;
}

struct Tangents {
  Vec3 point, pu, pt;
};

Tangents tangents(const SurfaceChart& chart, const Patch& p, double u, double t) {
  const Tolerances& tol = chart.tolerances();
  const double hu = fit_step(chart.stencil_range(), u, tol.fd_first, tol.fd_min);
  const double ht = tol.fd_first;
  Tangents out;
  out.point = p(0.0, t);
  out.pu = d1([&](double s) { return p(s, t); }, hu);
  out.pt = d1([&](double s) { return p(0.0, t + s); }, ht);
  return out;
}

InducedMetric first_form_at(const SurfaceChart& chart, const Patch& p, double u, double t) {
  const Tangents tg = tangents(chart, p, u, t);
  const Mat3 g = metric_cartesian(chart.space(), AmbientPoint::from(tg.point), chart.tolerances().min_scale);
  return {tg.pu.dot(g * tg.pu), tg.pu.dot(g * tg.pt), tg.pt.dot(g * tg.pt)};
}

SecondOrderData second_order_at(const SurfaceChart& chart, const Patch& p, double u, double t,
                                double orientation) {
  const Tolerances& tol = chart.tolerances();
  const Tangents tg = tangents(chart, p, u, t);
  SecondOrderData out;
  out.point = tg.point;
  out.psi_u = tg.pu;
  out.psi_t = tg.pt;

  const AmbientPoint at = AmbientPoint::from(tg.point);
  const Mat3 g = metric_cartesian(chart.space(), at, tol.min_scale);
  const InducedMetric I{tg.pu.dot(g * tg.pu), tg.pu.dot(g * tg.pt), tg.pt.dot(g * tg.pt)};
  out.first = I;
  const double det = I.E * I.G - I.F * I.F;
  if (!(det > 0.0)) {
    throw Error(ErrorCode::DegenerateImmersion, "EG - F^2 = " + std::to_string(det) + " at u = " + std::to_string(u));
  }

  const double hu = fit_step(chart.stencil_range(), u, tol.fd_second, tol.fd_min);
  const double ht = tol.fd_second;
  const Vec3 puu = d2([&](double s) { return p(s, t); }, tg.point, hu);
  const Vec3 ptt = d2([&](double s) { return p(0.0, t + s); }, tg.point, ht);
  const Vec3 put = d11([&](double su, double st) { return p(su, t + st); }, std::min(hu, ht));

  // psi_u x psi_t annihilates both tangents, so it is the normal covector.
  const Vec3 nu = orientation * tg.pu.cross(tg.pt);
  const Mat3 g_inv = g.inverse();
  const double norm = std::sqrt(nu.dot(g_inv * nu));
  if (!(norm > 0.0)) throw Error(ErrorCode::DegenerateImmersion, "tangents are parallel");
  out.normal = g_inv * nu / norm;

  const Christoffel gamma = christoffels(chart.space(), at, tol);
  auto connection = [&](const Vec3& x, const Vec3& y) {
    return Vec3{x.dot(gamma[0] * y), x.dot(gamma[1] * y), x.dot(gamma[2] * y)};
  };
  out.L = nu.dot(puu + connection(tg.pu, tg.pu)) / norm;
  out.M = nu.dot(put + connection(tg.pu, tg.pt)) / norm;
  out.N = nu.dot(ptt + connection(tg.pt, tg.pt)) / norm;
  out.H = (I.G * out.L - 2.0 * I.F * out.M + I.E * out.N) / det;
  out.K_extrinsic = (out.L * out.N - out.M * out.M) / det;
  return out;
}

// Brioschi's formula; rows[i] is the patch at u + (i - 2) h.
double brioschi(const SurfaceChart& chart, const std::array<Patch, 5>& rows, double u, double h, double t) {
  std::array<std::array<InducedMetric, 5>, 5> s;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) s[i][j] = first_form_at(chart, rows[i], u + (i - 2) * h, t + (j - 2) * h);
  }
  // fourth-order stencils
  constexpr std::array<double, 5> c1{1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12};
  constexpr std::array<double, 5> c2{-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12};
  auto field = [&](double InducedMetric::*f) {
    struct D {
      double v, u, t, uu, tt, ut;
    } d{s[2][2].*f, 0, 0, 0, 0, 0};
    for (int k = 0; k < 5; ++k) {
      d.u += c1[k] * (s[k][2].*f);
      d.t += c1[k] * (s[2][k].*f);
      d.uu += c2[k] * (s[k][2].*f);
      d.tt += c2[k] * (s[2][k].*f);
      for (int l = 0; l < 5; ++l) d.ut += c1[k] * c1[l] * (s[k][l].*f);
    }
    d.u /= h;
    d.t /= h;
    d.uu /= h * h;
    d.tt /= h * h;
    d.ut /= h * h;
    return d;
  };
  const auto E = field(&InducedMetric::E);
  const auto F = field(&InducedMetric::F);
  const auto G = field(&InducedMetric::G);

  Mat3 a;
  a << -0.5 * E.tt + F.ut - 0.5 * G.uu, 0.5 * E.u, F.u - 0.5 * E.t,  //
      F.t - 0.5 * G.u, E.v, F.v,                                      //
      0.5 * G.t, F.v, G.v;
  Mat3 b;
  b << 0.0, 0.5 * E.t, 0.5 * G.u,  //
      0.5 * E.t, E.v, F.v,          //
      0.5 * G.u, F.v, G.v;
  const double det = E.v * G.v - F.v * F.v;
  if (!(det > 0.0)) throw Error(ErrorCode::DegenerateImmersion, "EG - F^2 <= 0 in the Brioschi grid");
  return (a.determinant() - b.determinant()) / (det * det);
}

double brioschi_step(const SurfaceChart& chart, double u) {
  const Tolerances& tol = chart.tolerances();
  const Interval r = chart.stencil_range();
  const double room = std::min(u - r.lo, r.hi - u);
  const double h = std::min(tol.brioschi_step, 0.5 * (room - tol.fd_first));
  if (!(h >= 0.1 * tol.brioschi_step)) {
    throw Error(ErrorCode::StencilOutOfDomain, "no room for the curvature grid at u = " + std::to_string(u));
  }
  return h;
}

std::array<Patch, 5> brioschi_rows(const SurfaceChart& chart, double u, double h) {
  std::array<Patch, 5> rows;
  for (int i = 0; i < 5; ++i) rows[i] = chart.patch(u + (i - 2) * h);
  return rows;
}

}  // namespace

SurfaceChart::SurfaceChart(std::shared_ptr<const Source> src, BcvSpace space, double pitch, Interval u_range,
                           Interval t_range, const Tolerances& tol)
    : src_(std::move(src)), space_(space), pitch_(pitch), u_range_(u_range), t_range_(t_range), tol_(tol) {
  // Orientation from the reference point; a chart too thin to carry a
  // stencil there keeps the raw cross product.
  try {
    const double u = u_range_.midpoint();
    const double t = std::clamp(0.0, t_range_.lo, t_range_.hi);
    const Tangents tg = tangents(*this, patch(u), u, t);
    const Vec3 nu = tg.pu.cross(tg.pt);
    const double radial = nu.x() * tg.point.x() + nu.y() * tg.point.y();
    if (radial < 0.0) orientation_ = -1.0;
  } catch (const Error&) {
  }
}

SurfaceChart SurfaceChart::natural(const NaturalChart& chart, Interval t_range, const Tolerances& tol) {
  return natural(chart, chart.domain(), t_range, tol);
}

SurfaceChart SurfaceChart::natural(const NaturalChart& chart, Interval u_range, Interval t_range,
                                   const Tolerances& tol) {
  const Interval d = chart.domain();
  if (u_range.lo < d.lo || u_range.hi > d.hi || !(u_range.lo < u_range.hi)) {
    throw Error(ErrorCode::DomainError, "u range must lie inside the chart domain");
  }
  auto c = std::make_shared<const NaturalChart>(chart);
  auto src = std::make_shared<Source>();
  src->xi1 = [c](double u) { return c->xi1(u); };
  src->xi2 = [c](double u) { return c->xi2(u); };
  src->theta0 = [c](double u) { return c->theta0(u); };
  src->xi2_increment = [c](double u, double du) { return c->xi2_increment(u, du); };
  src->theta0_increment = [c](double u, double du) { return c->theta0_increment(u, du); };
  src->t_scale = 1.0 / chart.m();
  src->domain = d;
  return SurfaceChart(std::move(src), chart.space(), chart.pitch(), u_range, t_range, tol);
}

SurfaceChart SurfaceChart::helicoidal(const HelicoidalAction& act, const ProfileCurve& curve, Interval t_range,
                                      const Tolerances& tol) {
  auto src = std::make_shared<Source>();
  src->xi1 = [curve](double u) { return curve.local(u).xi1; };
  src->xi2 = [curve](double u) { return curve.at(u).xi2; };
  src->theta0 = [](double) { return 0.0; };
  src->xi2_increment = [curve](double u, double du) { return curve.xi2_increment(u, du); };
  src->theta0_increment = [](double, double) { return 0.0; };
  src->domain = curve.domain();
  return SurfaceChart(std::move(src), act.space, act.pitch, curve.domain(), t_range, tol);
}

Interval SurfaceChart::stencil_range() const { return src_->domain; }

CylPoint SurfaceChart::cylindrical(double u, double t) const {
  if (!u_range_.contains(u)) throw Error(ErrorCode::DomainError, "u = " + std::to_string(u) + " outside the chart");
  const double theta = src_->t_scale * t + src_->theta0(u);
  return {src_->xi1(u), theta, src_->xi2(u) + pitch_ * theta};
}

std::function<Vec3(double, double)> SurfaceChart::patch(double u) const {
  if (!src_->domain.contains(u)) throw Error(ErrorCode::DomainError, "u = " + std::to_string(u) + " outside the chart");
  const double xi2 = src_->xi2(u);
  const double th0 = src_->theta0(u);
  return [src = src_, u, xi2, th0, a = pitch_](double du, double t) {
    const double theta = src->t_scale * t + th0 + (du == 0.0 ? 0.0 : src->theta0_increment(u, du));
    const double z = xi2 + (du == 0.0 ? 0.0 : src->xi2_increment(u, du)) + a * theta;
    const double r = src->xi1(u + du);
    return Vec3{r * std::cos(theta), r * std::sin(theta), z};
  };
}

AmbientPoint embed(const SurfaceChart& chart, double u, double t) {
  const AmbientPoint p = chart.cylindrical(u, t).to_cartesian();
  scaling_factor(chart.space(), p.x * p.x + p.y * p.y, chart.tolerances().min_scale);
  return p;
}

InducedMetric first_form_numeric(const SurfaceChart& chart, double u, double t) {
  return first_form_at(chart, chart.patch(u), u, t);
}

SecondOrderData second_order(const SurfaceChart& chart, double u, double t) {
  return second_order_at(chart, chart.patch(u), u, t, chart.orientation());
}

double mean_curvature_extrinsic(const SurfaceChart& chart, double u, double t) { return second_order(chart, u, t).H; }

double gauss_intrinsic(const MetricProfile& U, double u, const Tolerances& tol) { return -U.d2(u, tol) / U(u); }

double gauss_numeric(const SurfaceChart& chart, double u, double t) {
  const double h = brioschi_step(chart, u);
  return brioschi(chart, brioschi_rows(chart, u, h), u, h, t);
}

double isometry_deviation(const SurfaceChart& a, const SurfaceChart& b, std::span<const double> us,
                          std::span<const double> ts) {
  double worst = 0.0;
  for (double u : us) {
    const Patch pa = a.patch(u), pb = b.patch(u);
    for (double t : ts) {
      const InducedMetric x = first_form_at(a, pa, u, t), y = first_form_at(b, pb, u, t);
      worst = std::max({worst, std::abs(x.E - y.E), std::abs(x.F - y.F), std::abs(x.G - y.G)});
    }
  }
  return worst;
}

MeshGrid sample_mesh(const SurfaceChart& chart, int nu, int nt) {
  if (nu < 2 || nt < 2) throw Error(ErrorCode::ParameterOutOfRange, "mesh needs nu, nt >= 2");
  const Interval ur = chart.u_range(), tr = chart.t_range();
  MeshGrid mesh;
  mesh.nu = nu;
  mesh.nt = nt;
  for (int j = 0; j < nt; ++j) mesh.t.push_back(j == nt - 1 ? tr.hi : tr.lo + tr.width() * j / (nt - 1));
  const double nan = std::numeric_limits<double>::quiet_NaN();

  for (int i = 0; i < nu; ++i) {
    const double u = i == nu - 1 ? ur.hi : ur.lo + ur.width() * i / (nu - 1);
    std::vector<Vec3> row;
    Patch p;
    try {
      p = chart.patch(u);
      for (double t : mesh.t) {
        row.push_back(p(0.0, t));
        const Vec3& v = row.back();
        if (!v.allFinite()) throw Error(ErrorCode::DomainError, "non-finite vertex");
        scaling_factor(chart.space(), v.x() * v.x() + v.y() * v.y(), chart.tolerances().min_scale);
      }
    } catch (const Error&) {
      ++mesh.dropped_rows;
      continue;
    }
    std::optional<std::array<Patch, 5>> rows;
    double h = 0.0;
    try {
      h = brioschi_step(chart, u);
      rows = brioschi_rows(chart, u, h);
    } catch (const Error&) {
    }
    mesh.u.push_back(u);
    for (int j = 0; j < nt; ++j) {
      const double t = mesh.t[j];
      mesh.vertices.push_back(row[j]);
      double H = nan, K = nan;
      try {
        H = second_order_at(chart, p, u, t, chart.orientation()).H;
        if (rows) K = brioschi(chart, *rows, u, h, t);
      } catch (const Error&) {
      }
      if (std::isnan(H) || std::isnan(K)) ++mesh.diagnostic_failures;
      mesh.H_ext.push_back(H);
      mesh.K.push_back(K);
    }
  }
  return mesh;
}

}  // namespace bcv
