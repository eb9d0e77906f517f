#include "bcvhelix/orbit_geometry.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace bcv {

namespace {

struct OrbitTerms {
  double b;  // 1 + kappa xi1^2 / 4
  double q;  // a B - tau xi1^2
};

OrbitTerms orbit_terms(const HelicoidalAction& act, double xi1, const Tolerances& tol) {
  const double b = scaling_factor(act.space, xi1 * xi1, tol.min_scale);
  return {b, act.pitch * b - act.space.tau() * xi1 * xi1};
}

// Cubic Hermite interpolation on a strictly increasing grid.
class Hermite {
 public:
  Hermite() = default;
  Hermite(std::vector<double> x, std::vector<double> y, std::vector<double> dy)
      : x_(std::move(x)), y_(std::move(y)), dy_(std::move(dy)) {}

  // Slopes from centred finite differences of the values themselves.
  static Hermite with_fd_slopes(std::vector<double> x, std::vector<double> y) {
    const std::size_t n = x.size();
    std::vector<double> dy(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t lo = i == 0 ? 0 : i - 1;
      const std::size_t hi = i + 1 == n ? n - 1 : i + 1;
      dy[i] = (y[hi] - y[lo]) / (x[hi] - x[lo]);
    }
    return Hermite(std::move(x), std::move(y), std::move(dy));
  }

  double operator()(double u) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), u);
    std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
    i = std::min(i, x_.size() - 2);
    const double h = x_[i + 1] - x_[i];
    const double s = (u - x_[i]) / h;
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y_[i] + (s3 - 2 * s2 + s) * h * dy_[i] + (-2 * s3 + 3 * s2) * y_[i + 1] +
           (s3 - s2) * h * dy_[i + 1];
  }

 private:
  std::vector<double> x_, y_, dy_;
};

double wrap_near(double angle, double target) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  return angle + two_pi * std::round((target - angle) / two_pi);
}

// Largest step <= h whose symmetric stencil stays inside `domain`.
double fit_step(Interval domain, double u, double h, double h_min) {
  const double room = std::min(u - domain.lo, domain.hi - u);
  while (h > room && h > h_min) h *= 0.5;
  if (h > room || h < h_min) {
    throw Error(ErrorCode::StencilOutOfDomain, "no room for a difference stencil at u = " + std::to_string(u));
  }
  return h;
}

}  // namespace

OrbitalMetric orbital_metric(const HelicoidalAction& act, double xi1, const Tolerances& tol) {
  const auto [b, q] = orbit_terms(act, xi1, tol);
  return {1.0 / (b * b), xi1 * xi1 / (xi1 * xi1 + q * q)};
}

double volume_omega(const HelicoidalAction& act, double xi1, const Tolerances& tol) {
  const auto [b, q] = orbit_terms(act, xi1, tol);
  return std::sqrt(xi1 * xi1 + q * q) / b;
}

struct ProfileCurve::Impl {
  ProfileFunctions fns;
  double reference = 0.0;
  Tolerances tol;

  double xi2(double u) const {
    if (fns.xi2) return fns.xi2(u);
    return quad_adaptive(fns.dxi2, reference, u, tol.quad_abs, tol.quad_rel, tol.quad_max_panels).value;
  }
};

ProfileCurve::ProfileCurve(std::shared_ptr<const Impl> impl, Interval domain, double reference,
                           std::vector<double> grid)
    : impl_(std::move(impl)), domain_(domain), reference_(reference), grid_(std::move(grid)) {}

namespace {

void validate_sample(const HelicoidalAction& act, const ProfileSample& s, double u, const Tolerances& tol) {
  if (!(s.xi1 > 0.0)) {
    throw Error(ErrorCode::InvalidCurve, "xi1 must be positive (u = " + std::to_string(u) + ")");
  }
  const double res = arclength_residual(act, s, tol);
  if (!(std::abs(res) < tol.arclength_tol)) {
    throw Error(ErrorCode::InvalidCurve,
                "profile is not arc-length parametrized at u = " + std::to_string(u) + " (residual " +
                    std::to_string(res) + ")");
  }
}

}  // namespace

ProfileCurve ProfileCurve::from_samples(const HelicoidalAction& act, std::vector<double> u, std::vector<double> xi1,
                                        std::vector<double> xi2, std::vector<double> dxi1, std::vector<double> dxi2,
                                        const Tolerances& tol) {
  const std::size_t n = u.size();
  if (n < 2 || xi1.size() != n || xi2.size() != n || dxi1.size() != n || dxi2.size() != n) {
    throw Error(ErrorCode::InvalidCurve, "profile samples need at least two points and equal lengths");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(u[i] > u[i - 1])) throw Error(ErrorCode::InvalidCurve, "u grid must be strictly increasing");
  }
  for (std::size_t i = 0; i < n; ++i) validate_sample(act, {xi1[i], xi2[i], dxi1[i], dxi2[i]}, u[i], tol);

  Hermite p1(u, xi1, dxi1), p2(u, xi2, dxi2);
  Hermite d1 = Hermite::with_fd_slopes(u, dxi1), d2 = Hermite::with_fd_slopes(u, dxi2);
  ProfileFunctions fns{p1, d1, d2, p2};
  auto impl = std::make_shared<Impl>(Impl{std::move(fns), u.front(), tol});
  const Interval domain{u.front(), u.back()};
  return ProfileCurve(std::move(impl), domain, domain.lo, std::move(u));
}

ProfileCurve ProfileCurve::from_functions(const HelicoidalAction& act, ProfileFunctions fns, Interval domain,
                                          const Tolerances& tol, int check_samples) {
  if (!fns.xi1 || !fns.dxi1 || !fns.dxi2) {
    throw Error(ErrorCode::InvalidCurve, "xi1, xi1' and xi2' are required");
  }
  if (!(domain.hi > domain.lo)) throw Error(ErrorCode::InvalidCurve, "empty curve domain");
  check_samples = std::max(check_samples, 2);

  auto impl = std::make_shared<Impl>(Impl{std::move(fns), domain.midpoint(), tol});
  std::vector<double> grid(check_samples);
  for (int i = 0; i < check_samples; ++i) {
    grid[i] = domain.lo + domain.width() * i / (check_samples - 1);
    const double v = grid[i];
    validate_sample(act, {impl->fns.xi1(v), 0.0, impl->fns.dxi1(v), impl->fns.dxi2(v)}, v, tol);
  }
  const double ref = impl->reference;
  return ProfileCurve(std::move(impl), domain, ref, std::move(grid));
}

ProfileSample ProfileCurve::at(double u) const {
  const auto& f = impl_->fns;
  return {f.xi1(u), impl_->xi2(u), f.dxi1(u), f.dxi2(u)};
}

ProfileSample ProfileCurve::local(double u) const {
  const auto& f = impl_->fns;
  return {f.xi1(u), 0.0, f.dxi1(u), f.dxi2(u)};
}

double ProfileCurve::xi2_increment(double u, double du) const {
  const auto& f = impl_->fns;
  if (f.xi2) return f.xi2(u + du) - f.xi2(u);
  if (std::abs(du) <= 1e-2) return quad_fixed(f.dxi2, u, u + du);
  const auto& tol = impl_->tol;
  return quad_adaptive(f.dxi2, u, u + du, tol.quad_abs, tol.quad_rel, tol.quad_max_panels).value;
}

InducedMetric induced_metric(const HelicoidalAction& act, const ProfileCurve& curve, double u,
                             const Tolerances& tol) {
  const ProfileSample s = curve.local(u);
  const auto [b, q] = orbit_terms(act, s.xi1, tol);
  const double omega2 = (s.xi1 * s.xi1 + q * q) / (b * b);
  if (!(omega2 > 0.0)) throw Error(ErrorCode::DegenerateOrbit, "orbit degenerates (omega = 0)");
  const double ratio = q / (b * std::sqrt(omega2));
  return {1.0 + s.dxi2 * s.dxi2 * ratio * ratio, s.dxi2 * q / b, omega2};
}

double arclength_residual(const HelicoidalAction& act, const ProfileSample& s, const Tolerances& tol) {
  const auto [b, q] = orbit_terms(act, s.xi1, tol);
  const double r2 = s.xi1 * s.xi1;
  return s.dxi1 * s.dxi1 / (b * b) + r2 * s.dxi2 * s.dxi2 / (r2 + q * q) - 1.0;
}

double arclength_residual(const HelicoidalAction& act, const ProfileCurve& curve, double u, const Tolerances& tol) {
  return arclength_residual(act, curve.local(u), tol);
}

namespace {

double sigma_of(const HelicoidalAction& act, const ProfileSample& s, double u, const Tolerances& tol) {
  const auto [b, q] = orbit_terms(act, s.xi1, tol);
  const double cos_s = s.dxi1 / b;
  const double sin_s = s.dxi2 * s.xi1 / std::sqrt(s.xi1 * s.xi1 + q * q);
  const double mismatch = cos_s * cos_s + sin_s * sin_s - 1.0;
  if (!(std::abs(mismatch) < tol.arclength_tol)) {
    throw Error(ErrorCode::InconsistentCurve,
                "xi1' = B cos(sigma) and xi2' relation disagree at u = " + std::to_string(u));
  }
  return std::atan2(sin_s, cos_s);
}

// Tangent-direction derivatives of the profile reduced to what the orbit
// formulas need: sin(sigma), B and xi1.
struct SigmaState {
  double sigma;
  double sin_sigma;
  double b;
  double xi1;
  double q;
};

SigmaState sigma_state(const HelicoidalAction& act, const ProfileCurve& curve, double u, const Tolerances& tol) {
  const ProfileSample s = curve.local(u);
  const double sigma = sigma_of(act, s, u, tol);
  const auto [b, q] = orbit_terms(act, s.xi1, tol);
  return {sigma, std::sin(sigma), b, s.xi1, q};
}

}  // namespace

double sigma_angle(const HelicoidalAction& act, const ProfileCurve& curve, double u, const Tolerances& tol) {
  return sigma_of(act, curve.local(u), u, tol);
}

std::vector<double> sigma_unwrapped(const HelicoidalAction& act, const ProfileCurve& curve,
                                    std::span<const double> us, const Tolerances& tol) {
  std::vector<double> out;
  out.reserve(us.size());
  for (double u : us) {
    const double s = sigma_angle(act, curve, u, tol);
    out.push_back(out.empty() ? s : wrap_near(s, out.back()));
  }
  return out;
}

double sigma_rate(const HelicoidalAction& act, const ProfileCurve& curve, double u, const Tolerances& tol) {
  const double h = fit_step(curve.domain(), u, tol.fd_first, tol.fd_min);
  const double centre = sigma_angle(act, curve, u, tol);
  auto local = [&](double v) { return wrap_near(sigma_angle(act, curve, v, tol), centre); };
  return diff_central(local, u, 1, h);
}

double geodesic_curvature(const HelicoidalAction& act, const ProfileCurve& curve, double u, const Tolerances& tol) {
  const SigmaState st = sigma_state(act, curve, u, tol);
  const double h = tol.fd_first * std::max(1.0, st.xi1);
  auto g22 = [&](double r) { return orbital_metric(act, r, tol).g22; };
  const double dg22 = diff_central(g22, st.xi1, 1, h);
  const double r2 = st.xi1 * st.xi1;
  return st.b * (r2 + st.q * st.q) * dg22 / (2.0 * r2) * st.sin_sigma + sigma_rate(act, curve, u, tol);
}

double mean_curvature_reduced(const HelicoidalAction& act, const ProfileCurve& curve, double u,
                              const Tolerances& tol) {
  const SigmaState st = sigma_state(act, curve, u, tol);
  const double kappa = act.space.kappa();
  return sigma_rate(act, curve, u, tol) + (1.0 / st.xi1 - 0.25 * kappa * st.xi1) * st.sin_sigma;
}

double mean_curvature_definitional(const HelicoidalAction& act, const ProfileCurve& curve, double u,
                                   const Tolerances& tol) {
  const SigmaState st = sigma_state(act, curve, u, tol);
  // Unit normal n = (-B sin sigma, ...) and omega depends on xi1 only.
  const double h = tol.fd_first * std::max(1.0, st.xi1);
  auto log_omega = [&](double r) { return std::log(volume_omega(act, r, tol)); };
  const double dn_log_omega = -st.b * st.sin_sigma * diff_central(log_omega, st.xi1, 1, h);
  return geodesic_curvature(act, curve, u, tol) - dn_log_omega;
}

}  // namespace bcv
