#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "psvf/return_map.hpp"

using namespace psvf;

namespace {

FieldParams fin3() {
  FieldParams p;
  p.eps = 0.2;
  p.k = 3;
  return p;
}

ReturnEngine engine(FamilyTag tag, ReturnMode mode, FieldParams p = {}) { return ReturnEngine(make_family(tag, p), mode); }

}  // namespace

TEST_CASE("primitive graph") {
  const Psvf z0 = make_family(FamilyTag::z0);
  CHECK(primitive_graph(z0.lower, 3.0) == 9.0);
  const Psvf zf = make_family(FamilyTag::z_eps, fin3());
  CHECK(primitive_graph(zf.lower, 0.2) == doctest::Approx(0.04).epsilon(1e-15));
  CHECK(primitive_graph(zf.lower, -5.0) == 25.0);
  // G' = z_rate
  for (double y : {0.15, 0.3, 0.55}) {
    const double h = 1e-6;
    CHECK((primitive_graph(zf.lower, y + h) - primitive_graph(zf.lower, y - h)) / (2 * h) ==
          doctest::Approx(zf.lower.z_rate(y)).epsilon(1e-8));
  }
}

TEST_CASE("upper half-returns") {
  for (ReturnMode m : {ReturnMode::numeric, ReturnMode::semi_analytic}) {
    const SigmaPoint a = engine(FamilyTag::z0, m).half_return_upper({1.0, 0.5});
    CHECK(a.x == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(a.y == doctest::Approx(-0.5).epsilon(1e-12));
    FieldParams pl;
    const auto zl = engine(FamilyTag::z_l, m, pl);
    const SigmaPoint b = zl.half_return_upper({0.3, 0.5});
    CHECK(b.x == 0.3);
    CHECK(b.y == doctest::Approx(-0.5).epsilon(1e-12));
    const SigmaPoint c = zl.half_return_upper({0.15, 0.5});
    CHECK(c.x > 0.0);
    CHECK(c.x < 0.15);
    CHECK(c.y == doctest::Approx(-0.5).epsilon(1e-12));
  }
  const double xn = engine(FamilyTag::z_l, ReturnMode::numeric).half_return_upper({0.15, 0.5}).x;
  const double xs = engine(FamilyTag::z_l, ReturnMode::semi_analytic).half_return_upper({0.15, 0.5}).x;
  CHECK(std::abs(xn - xs) < 1e-9);
  CHECK_THROWS_AS(engine(FamilyTag::z0, ReturnMode::semi_analytic).half_return_upper({0, -0.1}), InvalidParams);
}

TEST_CASE("lower half-returns") {
  for (ReturnMode m : {ReturnMode::numeric, ReturnMode::semi_analytic}) {
    const SigmaPoint a = engine(FamilyTag::z0, m).half_return_lower({1.0, -0.5});
    CHECK(a.x == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(a.y == doctest::Approx(0.5).epsilon(1e-12));
  }
  const auto semi = engine(FamilyTag::z_eps, ReturnMode::semi_analytic, fin3());
  const auto num = engine(FamilyTag::z_eps, ReturnMode::numeric, fin3());
  CHECK(std::abs(semi.half_return_lower({0, -0.4}).y - 0.4) < 1e-12);
  const double ys = semi.half_return_lower({0, -0.3}).y;
  const double yn = num.half_return_lower({0, -0.3}).y;
  CHECK(ys != 0.3);
  CHECK(std::abs(ys - 0.3) < 1e-3);
  CHECK(std::abs(ys - yn) < 1e-9);
}

TEST_CASE("lower half-return fails loudly outside the perturbative regime") {
  FieldParams p;
  p.eps = 2.0;
  p.k = 3;
  const auto e = engine(FamilyTag::z_eps, ReturnMode::semi_analytic, p);
  bool thrown = false;
  for (double y = 1.0; y < 3.0 && !thrown; y += 0.05) {
    try {
      (void)e.half_return_lower({0, -y});
    } catch (const RootNotBracketed&) {
      thrown = true;
    }
  }
  CHECK(thrown);
}

TEST_CASE("full returns") {
  for (ReturnMode m : {ReturnMode::numeric, ReturnMode::semi_analytic}) {
    const SigmaPoint a = engine(FamilyTag::z0, m).full_return({0.7, 0.35});
    CHECK(std::abs(a.x - 0.7) < 1e-10);
    CHECK(std::abs(a.y - 0.35) < 1e-10);
    const SigmaPoint b = engine(FamilyTag::z_eps, m, fin3()).full_return({0, 0.2});
    CHECK(std::abs(b.x) < 1e-10);
    CHECK(std::abs(b.y - 0.2) < 1e-10);
    const SigmaPoint c = engine(FamilyTag::z_kl, m).full_return({0.3, 0.4});
    CHECK(std::abs(c.x - 0.3) < 1e-8);
    CHECK(std::abs(c.y - 0.4) < 1e-8);
  }
}

TEST_CASE("property: numeric and semi-analytic maps agree") {
  gen::Rng rng(41);
  for (FamilyTag tag : gen::all_families()) {
    const auto num = engine(tag, ReturnMode::numeric);
    const auto semi = engine(tag, ReturnMode::semi_analytic);
    for (int n = 0; n < 50; ++n) {
      const SigmaPoint p{rng.uniform(-0.1, 0.4), rng.uniform(0.05, 1.0)};
      const SigmaPoint a = num.full_return(p), b = semi.full_return(p);
      CHECK(std::abs(a.x - b.x) < 1e-8);
      CHECK(std::abs(a.y - b.y) < 1e-8);
    }
  }
}

TEST_CASE("property: the upper half-map is an involution in y when lambda = 0") {
  gen::Rng rng(42);
  for (FamilyTag tag : {FamilyTag::z0, FamilyTag::z_eps}) {
    for (ReturnMode m : {ReturnMode::numeric, ReturnMode::semi_analytic}) {
      const auto e = engine(tag, m);
      for (int n = 0; n < 30; ++n) {
        const SigmaPoint p{rng.uniform(-1, 1), rng.uniform(0.05, 1.0)};
        const SigmaPoint q = e.half_return_upper(p);
        // Reading the landing point with the reflected height and applying the map again.
        const SigmaPoint r = e.half_return_upper({q.x, -q.y});
        CHECK(std::abs(r.x - p.x) < 1e-10);
        CHECK(std::abs(-r.y - p.y) < 1e-10);
      }
    }
  }
}

TEST_CASE("property: phi2 is strictly increasing") {
  for (FamilyTag tag : gen::all_families()) {
    for (Rho rho : {Rho::finite, Rho::infinite}) {
      FieldParams p;
      p.rho = rho;
      if (rho == Rho::infinite) p.eps = 0.5;
      const auto e = engine(tag, ReturnMode::semi_analytic, p);
      double prev = e.phi2(0.05);
      for (int i = 1; i <= 500; ++i) {
        const double v = e.phi2(0.05 + 0.95 * i / 500);
        CHECK(v > prev);
        prev = v;
      }
    }
  }
}

TEST_CASE("implicit residual") {
  const auto z0 = engine(FamilyTag::z0, ReturnMode::semi_analytic);
  CHECK(z0.phi2_implicit_residual(0.37, 0.37) == 0.0);
  const auto f = engine(FamilyTag::z_eps, ReturnMode::semi_analytic, fin3());
  CHECK(std::abs(f.phi2_implicit_residual(0.2, 0.2)) < 1e-15);
  const double r = f.phi2_implicit_residual(0.3, 0.3);
  CHECK(r != 0.0);
  CHECK(r == doctest::Approx(-xi_eval(BumpSpec{Rho::finite, 0.2, 3}, 0.3)).epsilon(1e-12));
}

TEST_CASE("property: residual vanishes on the graph of phi2") {
  for (FamilyTag tag : gen::all_families()) {
    for (Rho rho : {Rho::finite, Rho::infinite}) {
      FieldParams p;
      p.rho = rho;
      p.k = 3;
      if (rho == Rho::infinite) p.eps = 0.5;
      const auto semi = engine(tag, ReturnMode::semi_analytic, p);
      const auto num = engine(tag, ReturnMode::numeric, p);
      for (int i = 0; i <= 100; ++i) {
        const double y = 0.05 + 0.95 * i / 100;
        CHECK(std::abs(semi.phi2_implicit_residual(y, semi.phi2(y))) < 1e-12);
        if (i % 10 == 0) CHECK(std::abs(num.phi2_implicit_residual(y, num.phi2(y))) < 1e-8);
      }
    }
  }
}

TEST_CASE("the y-equation is unaffected by the x-perturbation") {
  FieldParams p;
  p.k = 3;
  const auto kl = engine(FamilyTag::z_kl, ReturnMode::numeric, p);
  const auto eps = engine(FamilyTag::z_eps, ReturnMode::semi_analytic, p);
  for (double y : {0.1, 0.25, 0.5, 0.9}) CHECK(std::abs(kl.full_return({0.15, y}).y - eps.phi2(y)) < 1e-9);
}

TEST_CASE("phi2 derivative") {
  CHECK(engine(FamilyTag::z0, ReturnMode::semi_analytic).phi2_derivative(0.42) == 1.0);
  const auto f = engine(FamilyTag::z_eps, ReturnMode::semi_analytic, fin3());
  CHECK(f.phi2_derivative(0.4) == doctest::Approx(0.999179823255830177).epsilon(1e-12));
  CHECK(f.phi2_derivative(0.4) < 1.0);
  CHECK(f.phi2_derivative(0.2) > 1.0);
  CHECK(f.phi2_derivative(0.6) > 1.0);
  CHECK_THROWS_AS(f.phi2_derivative(0.3), InvalidParams);
}

TEST_CASE("property: derivative matches differences of the numeric map at fixed points") {
  const auto semi = engine(FamilyTag::z_eps, ReturnMode::semi_analytic, fin3());
  const auto num = engine(FamilyTag::z_eps, ReturnMode::numeric, fin3());
  int checked = 0;
  for (const XiRoot& r : xi_root_list(BumpSpec{Rho::finite, 0.2, 3}, 3)) {
    const double d = semi.phi2_derivative(r.y);
    if (std::abs(d - 1) <= 1e-7) continue;
    const double h = 1e-5;
    const double fd = (num.phi2(r.y + h) - num.phi2(r.y - h)) / (2 * h);
    CHECK(std::abs(fd - d) <= 1e-4 * std::abs(d));
    ++checked;
  }
  CHECK(checked == 3);
  // Away from fixed points the general slope agrees with differences too.
  for (double y : {0.15, 0.33, 0.71}) {
    const double h = 1e-6;
    CHECK(semi.phi2_slope(y) == doctest::Approx((semi.phi2(y + h) - semi.phi2(y - h)) / (2 * h)).epsilon(1e-8));
  }
}

TEST_CASE("displacement keeps its sign near fixed points") {
  const auto f = engine(FamilyTag::z_eps, ReturnMode::semi_analytic, fin3());
  // Around an attracting radius the map pushes inward; around a repelling one, outward.
  CHECK(f.displacement(0.4 - 1e-4) > 0.0);
  CHECK(f.displacement(0.4 + 1e-4) < 0.0);
  CHECK(f.displacement(0.2 - 1e-4) < 0.0);
  CHECK(f.displacement(0.2 + 1e-4) > 0.0);
  CHECK(f.displacement(0.3) == doctest::Approx(f.phi2(0.3) - 0.3).epsilon(1e-6));
}
