#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "psvf/flow.hpp"

using namespace psvf;

namespace {

Vec3d x0_closed(const Vec3d& p, double t) { return {p.x(), p.y() - t, p.z() - t * t + 2 * t * p.y()}; }
Vec3d y0_closed(const Vec3d& p, double t) { return {p.x(), p.y() + t, p.z() + t * t + 2 * t * p.y()}; }

// Fixed-step classical RK4, used as an independent oracle for the scalar flow.
double rk4_scalar(double lambda, double mu, int L, double x, double T, int n) {
  auto f = [&](double v) { return lambda * product_poly(v, mu, L).value; };
  const double h = T / n;
  for (int i = 0; i < n; ++i) {
    const double k1 = f(x), k2 = f(x + 0.5 * h * k1), k3 = f(x + 0.5 * h * k2), k4 = f(x + h * k3);
    x += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return x;
}

}  // namespace

TEST_CASE("property: Z0 arcs follow the closed-form parametrizations") {
  gen::Rng rng(31);
  const Psvf z0 = make_family(FamilyTag::z0);
  for (int n = 0; n < 50; ++n) {
    const Vec3d p(rng.uniform(-2, 2), rng.uniform(-1, 1), 0);
    double worst = 0.0;
    for (const Sample& s : integrate(z0.upper, p, 2.0)) worst = std::max(worst, (s.state - x0_closed(p, s.t)).lpNorm<Eigen::Infinity>());
    for (const Sample& s : integrate(z0.lower, p, 2.0)) worst = std::max(worst, (s.state - y0_closed(p, s.t)).lpNorm<Eigen::Infinity>());
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("T = 0 returns the start point only") {
  const Psvf z = make_family(FamilyTag::z_kl);
  const auto s = integrate(z.upper, Vec3d(0.1, 0.2, 0.3), 0.0);
  REQUIRE(s.size() == 1);
  CHECK(s[0].state == Vec3d(0.1, 0.2, 0.3));
  CHECK(s[0].t == 0.0);
  CHECK_THROWS_AS(integrate(z.upper, Vec3d(0, 0, 0), -1.0), InvalidParams);
}

TEST_CASE("first crossings") {
  const Psvf z0 = make_family(FamilyTag::z0);
  SigmaHit h = first_sigma_crossing(z0.upper, Vec3d(0, 0.5, 0));
  CHECK(h.time == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((h.point - Vec3d(0, -0.5, 0)).norm() < 1e-10);
  CHECK(h.side == HitSide::from_above);

  h = first_sigma_crossing(z0.lower, Vec3d(0, -0.5, 0));
  CHECK(h.time == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((h.point - Vec3d(0, 0.5, 0)).norm() < 1e-10);
  CHECK(h.side == HitSide::from_below);

  FieldParams p;
  p.eps = 0.2;
  p.k = 3;
  const Psvf zf = make_family(FamilyTag::z_eps, p);
  h = first_sigma_crossing(zf.lower, Vec3d(0, -0.2, 0));
  CHECK(std::abs(h.point.y() - 0.2) < 1e-8);
  CHECK(h.point.x() == 0.0);
}

TEST_CASE("tangent starts") {
  // The two-fold line is invisible: the upper arc through it dips below the plane at once.
  const Psvf z0 = make_family(FamilyTag::z0);
  CHECK_THROWS_AS(first_sigma_crossing(z0.upper, Vec3d(0, 0, 0)), NoReturn);
  CHECK_THROWS_AS(first_sigma_crossing(z0.lower, Vec3d(0, 0, 0)), NoReturn);

  // A visible lower fold far outside the perturbative box: escape, then return later.
  FieldParams p;
  p.eps = 2.0;
  p.k = 3;
  const Psvf z = make_family(FamilyTag::z_eps, p);
  double lo = 0.01;
  while (z.lower.z_rate(lo + 0.01) > 0.0) lo += 0.01;
  double hi = lo + 0.01;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (z.lower.z_rate(mid) > 0.0 ? lo : hi) = mid;
  }
  REQUIRE(second_lie_derivative(z.lower, Vec3d(0, lo, 0)) < 0.0);
  const SigmaHit h = first_sigma_crossing(z.lower, Vec3d(0, lo, 0));
  CHECK(h.time > 10 * kFoldEscapeStep);
  CHECK(std::abs(h.point.z()) <= 1e-12);
  CHECK(h.point.y() > lo);
}

TEST_CASE("starts that leave the half-space have no return") {
  const Psvf z0 = make_family(FamilyTag::z0);
  CHECK_THROWS_AS(first_sigma_crossing(z0.upper, Vec3d(0, -0.5, 0)), NoReturn);
  CHECK_THROWS_AS(first_sigma_crossing(z0.lower, Vec3d(0, 0.5, 0)), NoReturn);
  CHECK_THROWS_AS(first_sigma_crossing(z0.upper, Vec3d(0, 0.5, -1)), NoReturn);
  IntegratorConfig short_cfg;
  short_cfg.max_flight_time = 0.5;
  CHECK_THROWS_AS(first_sigma_crossing(z0.upper, Vec3d(0, 0.5, 0), short_cfg), NoReturn);
}

TEST_CASE("property: X0 falls symmetrically") {
  gen::Rng rng(32);
  const Psvf z0 = make_family(FamilyTag::z0);
  for (int n = 0; n < 100; ++n) {
    const double x = rng.uniform(-3, 3), y = rng.uniform(0.01, 1.0);
    const SigmaHit h = first_sigma_crossing(z0.upper, Vec3d(x, y, 0));
    CHECK(std::abs(h.time - 2 * y) < 1e-10);
    CHECK(std::abs(h.point.x() - x) < 1e-10);
    CHECK(std::abs(h.point.y() + y) < 1e-10);
  }
}

TEST_CASE("property: hits lie on the plane and are stable under tighter tolerances") {
  gen::Rng rng(33);
  IntegratorConfig cfg, tight;
  tight.rel_tol = cfg.rel_tol / 2;
  for (FamilyTag tag : gen::all_families()) {
    const Psvf z = make_family(tag);
    for (int n = 0; n < 20; ++n) {
      const double x = rng.uniform(-0.1, 0.4), y = rng.uniform(0.05, 1.0);
      const SigmaHit up = first_sigma_crossing(z.upper, Vec3d(x, y, 0), cfg);
      const SigmaHit lo = first_sigma_crossing(z.lower, Vec3d(x, -y, 0), cfg);
      CHECK(std::abs(up.point.z()) <= cfg.event_tol);
      CHECK(std::abs(lo.point.z()) <= cfg.event_tol);
      const SigmaHit up2 = first_sigma_crossing(z.upper, Vec3d(x, y, 0), tight);
      const SigmaHit lo2 = first_sigma_crossing(z.lower, Vec3d(x, -y, 0), tight);
      CHECK((up.point - up2.point).norm() <= 10 * cfg.event_tol);
      CHECK((lo.point - lo2.point).norm() <= 10 * cfg.event_tol);
    }
  }
}

TEST_CASE("scalar flow") {
  for (int i = 0; i < 3; ++i) CHECK(scalar_flow(0.5, 0.3, 3, i * 0.3, 2.0) == i * 0.3);
  for (double x0 : {-0.5, 0.1, 0.4}) {
    CHECK(std::abs(scalar_flow(0.1, 1.0, 1, x0, 1.7) - x0 * std::exp(0.17)) < 1e-9);
  }
  const double v = scalar_flow(0.5, 0.3, 2, 0.15, 1.0);
  CHECK(v > 0.0);
  CHECK(v < 0.15);
  CHECK(v == doctest::Approx(rk4_scalar(0.5, 0.3, 2, 0.15, 1.0, 20000)).epsilon(1e-10));
  CHECK(scalar_flow(0.5, 0.3, 2, 0.15, 0.0) == 0.15);
  CHECK_THROWS_AS(scalar_flow(5.0, 0.3, 2, 0.5, 10.0), Blowup);
  CHECK_THROWS_AS(scalar_flow(0.5, 0.3, 2, 7.0, 1.0), Blowup);
}

TEST_CASE("step collapse is reported") {
  // dx/dt = x^2 from x = 1 blows up at t = 1.
  using Vec1 = Eigen::Matrix<double, 1, 1>;
  auto rhs = [](const Vec1& x) { return Vec1(x[0] * x[0]); };
  IntegratorConfig cfg;
  CHECK_THROWS_AS(detail::drive(rhs, Vec1(1.0), 2.0, 0.01, cfg, [](double, const Vec1&, double, const Vec1&, double) { return false; }),
                  StepFailure);
}

TEST_CASE("integrator settings are validated") {
  IntegratorConfig cfg;
  cfg.event_tol = 1e-9;
  CHECK_THROWS_AS(cfg.validate(), InvalidParams);
  cfg = {};
  cfg.rel_tol = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidParams);
}
