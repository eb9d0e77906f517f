#include <cmath>

#include "bcvhelix/bour.hpp"
#include "doctest.h"

using namespace bcv;

namespace {

// U = sqrt(u^2 + s)
MetricProfile sqrt_quad(double s) {
  return {[s](double u) { return std::sqrt(u * u + s); }, [s](double u) { return u / std::sqrt(u * u + s); },
          [s](double u) { return s / std::pow(u * u + s, 1.5); }};
}

// U = (u^2 + 2)/2
MetricProfile nil_U() {
  return {[](double u) { return 0.5 * (u * u + 2); }, [](double u) { return u; }, [](double) { return 1.0; }};
}

double sgn(double u) { return u < 0 ? -1.0 : 1.0; }

const BcvSpace kR3{0, 0}, kNil{0, 0.5};

}  // namespace

TEST_CASE("delta") {
  BourSeed s{sqrt_quad(1), 1.3, 0.4, {-2, 2}};
  CHECK(delta(kR3, s, 0.7) == 1.0);
  BourSeed n{nil_U(), 1, 0.5, {-3, 3}};
  for (double u : {-2.0, 0.0, 1.5}) CHECK(std::abs(delta(kNil, n, u) - std::pow(0.5 * (u * u + 2), 2)) < 1e-13);
  BourSeed q{sqrt_quad(1), 1, 0.3, {-2, 2}};
  CHECK(std::abs(delta({1, 0.5}, q, 1.7) - std::pow(1 - 0.3, 2)) < 1e-15);
  CHECK_THROWS_AS(delta({4, 0}, BourSeed{sqrt_quad(1), 1, 0, {-2, 2}}, 1.0), Error);
}

TEST_CASE("xi1 examples") {
  BourSeed s{sqrt_quad(1), 1.2, 0.5, {-2, 2}};
  for (double u : {-1.0, 0.3}) {
    const double U = std::sqrt(u * u + 1);
    CHECK(std::abs(xi1_from_seed(kR3, s, u) - std::sqrt(1.44 * U * U - 0.25)) < 1e-14);
  }
  for (double a : {0.5, 0.25, 0.125, 0.0}) {
    BourSeed n{nil_U(), 1, a, {-3, 3}};
    for (double u : {-2.5, -0.5, 0.0, 1.0, 3.0}) {
      const double expect = std::sqrt(std::sqrt(u * u * u * u + 4 * u * u + 8 * (1 - a)) + 2 * (a - 1));
      CHECK(std::abs(xi1_from_seed(kNil, n, u) - expect) < 1e-12);
    }
  }
  BourSeed n{nil_U(), 1, 0.5, {-3, 3}};
  CHECK(std::abs(xi1_from_seed(kNil, n, 2.0) - std::sqrt(5.0)) < 1e-14);
}

TEST_CASE("xi1 derivative matches differences; relation B U m = sqrt(xi1^2 + q^2)") {
  const BcvSpace spaces[] = {{0, 0}, {0, 0.5}, {1, 0.5}, {-1, 0.3}, {1, 0}, {2, 0.2}};
  for (const auto& sp : spaces) {
    BourSeed s{sqrt_quad(1.5), 0.45, 0.2, {-1, 1}};
    const auto chart = build_chart(sp, s);
    for (double u : {-0.6, 0.1, 0.7}) {
      const double fd = diff_central([&](double v) { return xi1_from_seed(sp, s, v); }, u, 1, 1e-4);
      CHECK(std::abs(chart.dxi1(u) - fd) < 1e-8);
      const double x = chart.xi1(u), b = 1 + 0.25 * sp.kappa() * x * x, q = s.pitch * b - sp.tau() * x * x;
      CHECK(std::abs(b * s.U(u) * s.m - std::sqrt(x * x + q * q)) < 1e-8);
    }
  }
}

TEST_CASE("Nil_3 helicoidal catenoid reproduces the closed forms") {
  const auto chart = build_chart(kNil, {nil_U(), 1, 0.5, {-3, 3}});
  CHECK(chart.u0() == doctest::Approx(0.0).epsilon(1e-9));
  for (double u = -3; u <= 3; u += 0.25) {
    CHECK(std::abs(chart.xi1(u) - std::sqrt(u * u + 1)) < 1e-12);
    CHECK(std::abs(chart.xi2(u) - 0.5 * (u + std::atan(u))) < 1e-8);
    CHECK(std::abs(chart.theta0(u) - (-std::atan(u) + std::sqrt(2.0) * std::atan(u / std::sqrt(2.0)))) < 1e-8);
  }
  std::vector<double> us;
  for (double u = -3; u <= 3; u += 0.5) us.push_back(u);
  const auto rows = chart.tabulate(us);
  for (const auto& r : rows) {
    CHECK(std::abs(r.xi2 - 0.5 * (r.u + std::atan(r.u))) < 1e-8);
    CHECK(r.U == 0.5 * (r.u * r.u + 2));
  }
}

TEST_CASE("Euclidean catenoid, helicoid and intermediate members") {
  const double d = 1.3;
  const auto cat = build_chart(kR3, {sqrt_quad(d * d), 1, 0, {-2, 2}});
  for (double u = -2; u <= 2; u += 0.25) {
    CHECK(std::abs(cat.xi2(u) - sgn(u) * d * std::acosh(std::sqrt(u * u / (d * d) + 1))) < 1e-8);
    CHECK(cat.theta0(u) == 0.0);
  }
  BourSeed hel{sqrt_quad(d * d), 1, d, {-2, 2}};
  const Interval dom = domain_of_validity(kR3, hel);
  CHECK(dom.lo == -2.0);
  CHECK(dom.hi == 2.0);
  const auto h = build_chart(kR3, hel);
  for (double u = -2; u <= 2; u += 0.25) {
    CHECK(std::abs(h.xi1(u) - std::abs(u)) < 1e-12);
    CHECK(h.xi2(u) == 0.0);
    CHECK(h.theta(u, 0.4) == 0.4);
  }
  for (double a : {0.3, 0.8, 1.2}) {
    const auto c = build_chart(kR3, {sqrt_quad(d * d), 1, a, {-2, 2}});
    const double k = std::sqrt(d * d - a * a);
    for (double u = -2; u <= 2; u += 0.25) {
      const double at = std::atan(a * u / (k * std::sqrt(u * u + d * d)));
      CHECK(std::abs(c.xi2(u) - (sgn(u) * k * std::acosh(std::sqrt(u * u / (d * d) + 1)) + a * at)) < 1e-8);
      CHECK(std::abs(c.theta0(u) + at) < 1e-8);
    }
  }
}

TEST_CASE("Scherk family") {
  for (auto [a, c] : {std::pair{0.5, 1.0}, std::pair{1.0, 0.4}, std::pair{0.0, 1.0}}) {
    const auto chart = build_chart(kR3, {sqrt_quad(a * a + c * c), 1, a, {-2, 2}});
    for (double u = -2; u <= 2; u += 0.25) {
      const double w = std::sqrt(u * u + a * a + c * c);
      const double at = std::atan(a * u / (c * w));
      CHECK(std::abs(chart.xi1(u) - std::sqrt(u * u + c * c)) < 1e-12);
      CHECK(std::abs(chart.xi2(u) - (sgn(u) * c * std::acosh(std::sqrt(u * u / (a * a + c * c) + 1)) + a * at)) <
            1e-8);
      CHECK(std::abs(chart.theta0(u) + at) < 1e-8);
    }
  }
}

TEST_CASE("Euclidean formulas agree with the general ones") {
  for (auto [m, a] : {std::pair{1.0, 0.0}, std::pair{1.0, 0.5}, std::pair{0.8, 0.4}, std::pair{-1.1, 0.2}}) {
    BourSeed s{sqrt_quad(1), m, a, {-2, 2}};
    for (double u = -2; u <= 2; u += 0.1) {
      const auto g = bour_local(kR3, s, u), e = bour_local_euclidean(s, u);
      CHECK(std::abs(g.xi1 - e.xi1) < 1e-12);
      CHECK(std::abs(g.dxi2 - e.dxi2) < 1e-12);
      CHECK(std::abs(g.dtheta0 - e.dtheta0) < 1e-12);
    }
  }
}

TEST_CASE("negative m flips t") {
  const auto p = build_chart(kNil, {nil_U(), 1, 0.25, {-2, 2}});
  const auto n = build_chart(kNil, {nil_U(), -1, 0.25, {-2, 2}});
  CHECK(n.xi1(0.3) == p.xi1(0.3));
  CHECK(n.theta(0.3, 0.7) == p.theta(0.3, -0.7));
}

TEST_CASE("empty and degenerate domains") {
  BourSeed s{{[](double) { return 0.5; }, [](double) { return 0.0; }, {}}, 1, 1.0, {-1, 1}};
  try {
    domain_of_validity(kR3, s);
    FAIL("expected EmptyDomain");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyDomain);
  }
  CHECK_THROWS_AS(build_chart(kR3, {sqrt_quad(1), 0.0, 0.0, {-1, 1}}), Error);
  // S^2 x R with m = 1/2: Delta = 1 - (u^2 + 1)/4 vanishes at |u| = sqrt(3), and
  // the xi2 radicand turns negative before that.
  const BourSeed sph{sqrt_quad(1), 0.5, 0, {-6, 6}};
  const Interval dom = domain_of_validity({1, 0}, sph);
  CHECK(std::abs(dom.lo + dom.hi) < 1e-9);
  CHECK(dom.hi < std::sqrt(3.0));
  CHECK_NOTHROW(bour_local({1, 0}, sph, dom.hi));
  CHECK_THROWS_AS(bour_local({1, 0}, sph, dom.hi + 1e-8), Error);
  // H^2 x R: the rotation chart stays inside the metric domain for every U.
  const Interval wide = domain_of_validity({-1, 0}, {sqrt_quad(1), 1, 0, {-6, 6}});
  CHECK(wide.lo == -6.0);
  CHECK(wide.hi == 6.0);
}

TEST_CASE("missing U' falls back to differences") {
  BourSeed a{sqrt_quad(1), 1, 0.3, {-2, 2}};
  BourSeed b{{a.U.value, {}, {}}, 1, 0.3, {-2, 2}};
  const auto la = bour_local(kNil, a, 0.8), lb = bour_local(kNil, b, 0.8);
  CHECK(std::abs(la.dxi2 - lb.dxi2) < 1e-9);
}

TEST_CASE("rotation chart equals the helicoidal chart at a = 0") {
  const BcvSpace spaces[] = {{0, 0}, {0, 0.5}, {1, 0.5}, {1, 0}, {-1, 0}, {2, 0.3}, {-1, 0.3}};
  for (const auto& sp : spaces) {
    const auto U = sqrt_quad(1);
    const double n = 0.7;
    const auto rot = rotation_chart(sp, n, U, {-1, 1});
    const auto spec = rotation_chart(sp, n, U, {-1, 1}, RotationFormulas::Specific);
    const auto bour = build_chart(sp, {U, n, 0, {-1, 1}});
    CHECK(std::abs(rot.domain().lo - bour.domain().lo) < 1e-9);
    CHECK(std::abs(rot.domain().hi - bour.domain().hi) < 1e-9);
    const Interval d = bour.domain();
    for (double u = d.lo + 0.05; u <= d.hi - 0.05; u += 0.1) {
      CHECK(std::abs(rot.xi1(u) - bour.xi1(u)) < 1e-10);
      CHECK(std::abs(rot.dxi1(u) - bour.dxi1(u)) < 1e-10);
      CHECK(std::abs(rot.dxi2(u) - bour.dxi2(u)) < 1e-10);
      CHECK(std::abs(rot.dtheta0(u) - bour.dtheta0(u)) < 1e-10);
      CHECK(std::abs(spec.xi1(u) - rot.xi1(u)) < 1e-10);
      CHECK(std::abs(spec.dxi1(u) - rot.dxi1(u)) < 1e-8);
      CHECK(std::abs(spec.dxi2(u) - rot.dxi2(u)) < 1e-10);
      CHECK(std::abs(spec.dtheta0(u) - rot.dtheta0(u)) < 1e-10);
    }
  }
}

TEST_CASE("rotation chart special forms") {
  const double tau = 0.5, n = 0.8;
  const auto U = sqrt_quad(0.5);
  const auto s3 = rotation_chart({4 * tau * tau, tau}, n, U, {-0.5, 0.5}, RotationFormulas::Specific);
  for (double u : {-0.4, 0.0, 0.3}) {
    const double Uv = U(u);
    CHECK(std::abs(s3.xi1(u) - n * Uv / std::sqrt(1 - tau * tau * n * n * Uv * Uv)) < 1e-14);
  }
  const auto prod = rotation_chart({1, 0}, n, U, {-0.5, 0.5});
  for (double u : {-0.4, 0.2}) CHECK(prod.theta0(u) == 0.0);
}

TEST_CASE("natural parameters of an existing surface") {
  for (double a : {0.5, 0.25}) {
    const auto chart = build_chart(kNil, {nil_U(), 1, a, {-2, 2}});
    const auto curve = chart.profile();
    const auto np = natural_from_helicoidal(chart.action(), curve);
    for (double u = -1.8; u <= 1.8; u += 0.3) {
      CHECK(std::abs(np.U(u) - 0.5 * (u * u + 2)) < 1e-8);
      CHECK(std::abs(np.t_shift(u) + chart.theta0(u)) < 1e-8);
    }
    // Identity member: rebuilding from the recovered U gives the same profile.
    const auto again = build_chart(kNil, {np.U, 1, a, {-1.5, 1.5}});
    for (double u = -1.2; u <= 1.2; u += 0.4) {
      CHECK(std::abs(again.xi1(u) - chart.xi1(u)) < 1e-8);
      CHECK(std::abs((again.xi2(u) - again.xi2(0.0)) - (chart.xi2(u) - chart.xi2(0.0))) < 1e-7);
    }
  }
  const auto cat = build_chart(kR3, {sqrt_quad(1), 1, 0, {-2, 2}});
  const auto np = natural_from_helicoidal(cat.action(), cat.profile());
  CHECK(np.t_shift(1.3) == 0.0);
  CHECK(std::abs(np.U(1.3) - std::sqrt(1.3 * 1.3 + 1)) < 1e-12);
}
