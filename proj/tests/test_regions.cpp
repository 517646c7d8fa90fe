#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "dlab/regions.hpp"
#include "dlab/spectral.hpp"

using namespace dlab;
using namespace dlab::spectral;
using namespace dlab::regions;
using Catch::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

bool has_violation(const std::vector<Violation>& v, const std::string& what) {
  for (const auto& x : v)
    if (x.constraint == what) return true;
  return false;
}

RegionSpec zk(double b, double r) {
  RegionSpec s;
  s.family = RegionFamily::zk_box;
  s.b = b;
  s.r = r;
  return s;
}

}  // namespace

TEST_CASE("validate: box-family hypotheses") {
  CHECK(validate(zk(0.49, 1.0)).empty());
  CHECK(validate(zk(0.0, 2.9)).empty());
  // the width constraint is strict: b = 2/(3+r) exactly is out
  {
    const auto v = validate(zk(0.5, 1.0));
    REQUIRE(v.size() == 1);
    CHECK(v[0].constraint == "0≤b<2/(3+r)");
    CHECK(v[0].value == 0.5);
  }
  {
    const auto v = validate(zk(0.6, 1.0));
    REQUIRE(v.size() == 1);
    CHECK(v[0].constraint == "0≤b<2/(3+r)");
    CHECK(v[0].value == 0.6);
  }
  // aspect ratio window
  CHECK(has_violation(validate(zk(0.1, 3.0)), "1/3 < r < 3"));
  CHECK(has_violation(validate(zk(0.1, 0.2)), "1/3 < r < 3"));
  // several hypotheses can fail at once
  CHECK(validate(zk(0.9, 5.0)).size() == 2);

  RegionSpec kp;
  kp.family = RegionFamily::kp_box;
  kp.b = 0.3;
  kp.r = 1.5;
  const auto v = validate(kp);
  REQUIRE(v.size() == 1);
  CHECK(v[0].constraint == "5/3 < r < 3");
  CHECK(v[0].value == 1.5);
  kp.r = 2.0;
  CHECK(validate(kp).empty());
  kp.b = 0.0;  // kp_box needs b strictly positive
  CHECK(has_violation(validate(kp), "0 < b < 2/(3+r)"));
  kp.b = 0.3;
  kp.m1 = 0.9;  // 1 - (b/2)(r+1) = 0.55
  CHECK(has_violation(validate(kp), "0 ≤ m1 < 1−(b/2)(r+1)"));
  kp.m1 = 0.0;
  kp.m2 = 0.9;  // 1 - (b/2)(3-r) = 0.85
  CHECK(has_violation(validate(kp), "0 ≤ m2 < 1−(b/2)(3−r)"));
}

TEST_CASE("validate: 1D families and the cone") {
  RegionSpec mb;
  mb.family = RegionFamily::moving_box_1d;
  mb.b = 0.58;
  mb.n = 0.0;
  CHECK(validate(mb).empty());  // quadratic variant allows b < 2/3
  mb.quartic = true;
  CHECK(has_violation(validate(mb), "b < 4/7"));
  mb.quartic = false;
  mb.b = 0.7;
  CHECK(has_violation(validate(mb), "b < 2/3"));
  mb.b = 0.5;
  mb.n = 0.8;  // 1 - b/2 = 0.75
  CHECK(has_violation(validate(mb), "0 ≤ n ≤ 1−b/2"));
  mb.n = 0.75;
  CHECK(validate(mb).empty());
  mb.sign = 0;
  CHECK(has_violation(validate(mb), "sign ∈ {+1, −1}"));

  RegionSpec bo;
  bo.family = RegionFamily::bo_window;
  bo.a = 0.49;
  CHECK(validate(bo).empty());
  bo.a = 0.5;
  CHECK(has_violation(validate(bo), "a ∈ [0, 1/2)"));
  bo.a = 0.2;
  bo.c = 0.0;
  CHECK(has_violation(validate(bo), "c > 0"));

  RegionSpec kc;
  kc.family = RegionFamily::kdv_central;
  kc.c = -2.0;
  CHECK(has_violation(validate(kc), "c > 0"));

  RegionSpec ex;
  ex.family = RegionFamily::extreme_1d;
  ex.epsilon = 0.0;
  CHECK(has_violation(validate(ex), "ε > 0"));
  ex.epsilon = 1.0;
  ex.C0 = 0.0;
  CHECK(has_violation(validate(ex), "C0 > 0"));

  RegionSpec cone;
  cone.family = RegionFamily::kp_cone;
  cone.sigma1 = 0.0;
  cone.sigma2 = 0.0;
  CHECK(has_violation(validate(cone), "σ1, σ2 not both zero"));
  cone.sigma1 = 1.0;
  cone.epsilon = -1.0;
  CHECK(has_violation(validate(cone), "ε > 0"));

  RegionSpec hp;
  hp.family = RegionFamily::kp_halfplane;
  hp.sigma3 = -17.0;
  hp.beta = 1e9;
  CHECK(validate(hp).empty());  // unconstrained
}

TEST_CASE("validate is total on garbage input") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();
  for (int fam = 0; fam < 8; ++fam) {
    RegionSpec s;
    s.family = static_cast<RegionFamily>(fam);
    s.c = nan;
    s.a = -inf;
    s.b = nan;
    s.n = 1e300;
    s.r = -nan;
    s.epsilon = -1e308;
    s.C0 = nan;
    s.m1 = inf;
    s.m2 = -inf;
    s.sigma1 = nan;
    s.sigma2 = nan;
    CHECK_NOTHROW(validate(s));
  }
  // NaN never satisfies a hypothesis
  RegionSpec s = zk(nan, nan);
  CHECK(validate(s).size() == 2);
}

TEST_CASE("contains: reference points per family") {
  RegionSpec kc;
  kc.family = RegionFamily::kdv_central;  // |x| <= c sqrt(t)/log^2 t
  // t = 100: bound = 10/log^2(100) ~ 0.4716
  CHECK(contains(kc, 100.0, 0.4));
  CHECK_FALSE(contains(kc, 100.0, 0.5));
  CHECK(contains(kc, 100.0, -0.4));

  RegionSpec hp;
  hp.family = RegionFamily::kp_halfplane;  // x + sigma3 y >= beta t
  hp.sigma3 = 0.0;
  hp.beta = 1.0;
  CHECK(contains(hp, 10.0, 11.0, 0.0));
  CHECK_FALSE(contains(hp, 10.0, 9.0, 0.0));

  RegionSpec cone;
  cone.family = RegionFamily::kp_cone;  // sigma.|x,y| >= t log^{1+eps} t
  cone.sigma1 = 1.0;
  cone.sigma2 = 0.0;
  cone.epsilon = 1.0;
  const double e2 = std::exp(2.0);
  CHECK(contains(cone, e2, 8.0 * e2, 0.0));        // 8 >= log^2(e^2) = 4
  CHECK_FALSE(contains(cone, e2, 3.0 * e2, 0.0));  // 3 < 4

  RegionSpec mb;
  mb.family = RegionFamily::moving_box_1d;  // |x + sign t^n| <= K t^b
  mb.n = 0.5;
  mb.b = 0.0;
  mb.sign = +1;
  CHECK(contains(mb, 4.0, -1.5));  // center -2, width 1
  CHECK_FALSE(contains(mb, 4.0, -3.5));
  // sign flips the center
  mb.sign = -1;
  CHECK(contains(mb, 4.0, 1.5));

  RegionSpec ex;
  ex.family = RegionFamily::extreme_1d;
  ex.side = Side::left;  // x <= -K t log^{1+eps} t
  ex.epsilon = 1.0;
  CHECK(contains(ex, e2, -4.0 * e2 - 0.1));
  CHECK_FALSE(contains(ex, e2, -4.0 * e2 + 0.1));
  ex.side = Side::right;  // x > C0 t, strict
  ex.C0 = 2.0;
  CHECK(contains(ex, 2.0, 4.1));
  CHECK_FALSE(contains(ex, 2.0, 4.0));

  // zk_box is open, kp_box is closed
  RegionSpec z = zk(0.25, 2.0);
  CHECK_FALSE(contains(z, 16.0, 2.0, 0.0));  // t^b = 2 exactly
  CHECK(contains(z, 16.0, 1.999, 0.0));
  RegionSpec kb;
  kb.family = RegionFamily::kp_box;
  kb.b = 0.25;
  kb.r = 2.0;
  CHECK(contains(kb, 16.0, 2.0, 0.0));  // boundary included
  CHECK(contains(kb, 16.0, 0.0, 4.0));  // y bound t^{br} = 4
  CHECK_FALSE(contains(kb, 16.0, 0.0, 4.001));

  // K scales the principal bound
  CHECK(contains(kc, 100.0, 0.9, 0.0, 2.0));
  CHECK_FALSE(contains(kc, 100.0, 0.95, 0.0, 2.0));
}

TEST_CASE("regions are asymptotic objects: t <= 1 is refused") {
  RegionSpec kc;
  kc.family = RegionFamily::kdv_central;
  CHECK_THROWS_AS(contains(kc, 1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(contains(kc, 0.5, 0.0), std::domain_error);
  const Grid g = make_grid_1d(64, 16.0);
  CHECK_THROWS_AS(weights(kc, 1.0, g), std::domain_error);
  CHECK_NOTHROW(contains(kc, 1.0 + 1e-9, 0.0));
}

TEST_CASE("sharp weights equal the membership indicator on every grid point") {
  const Grid g1 = make_grid_1d(128, 64.0);
  RegionSpec kc;
  kc.family = RegionFamily::kdv_central;
  RegionSpec mb;
  mb.family = RegionFamily::moving_box_1d;
  mb.n = 0.5;
  mb.b = 0.3;
  for (const RegionSpec& s : {kc, mb}) {
    const Field w = weights(s, 7.0, g1, 0.0);
    for (int j = 0; j < g1.nx; ++j)
      CHECK(w.values[j] == (contains(s, 7.0, g1.x(j)) ? 1.0 : 0.0));
  }

  const Grid g2 = make_grid_2d(32, 32, 24.0, 24.0);
  RegionSpec hp;
  hp.family = RegionFamily::kp_halfplane;
  hp.sigma3 = 0.7;
  hp.beta = 0.5;
  RegionSpec z = zk(0.3, 1.5);
  for (const RegionSpec& s : {hp, z}) {
    const Field w = weights(s, 2.0, g2, 0.0);
    for (int jx = 0; jx < g2.nx; ++jx)
      for (int jy = 0; jy < g2.ny; ++jy)
        CHECK(w.values[g2.idx(jx, jy)] ==
              (contains(s, 2.0, g2.x(jx), g2.y(jy)) ? 1.0 : 0.0));
  }
}

TEST_CASE("smoothed weights: 0.5 on the boundary, saturation away from it") {
  // moving box at t = 2 with n = 0, b = 0, K = 2: the interval [-3, 1]
  const Grid g = make_grid_1d(16, 16.0);  // integer grid points
  RegionSpec mb;
  mb.family = RegionFamily::moving_box_1d;
  mb.n = 0.0;
  mb.b = 0.0;
  mb.sign = +1;
  const Field w = weights(mb, 2.0, g, 0.2, 2.0);
  const int at = 9;  // x = 1, the right face
  CHECK(g.x(at) == 1.0);
  CHECK(w.values[at] == Approx(0.5).margin(1e-6));
  // deep inside -> 1, deep outside -> 0
  CHECK(w.values[7] == Approx(1.0).margin(1e-6));   // x = -1
  CHECK(w.values[13] == Approx(0.0).margin(1e-6));  // x = 5

  // half-plane boundary point: ramp(0) is exactly 1/2
  const Grid g2 = make_grid_2d(16, 8, 16.0, 8.0);
  RegionSpec hp;
  hp.family = RegionFamily::kp_halfplane;
  hp.sigma3 = 2.0;
  hp.beta = 1.0;
  const Field wh = weights(hp, 2.0, g2, 0.3);
  CHECK(wh.values[g2.idx(10, 4)] == 0.5);  // x = 2, y = 0: x + 2y = beta t
}

TEST_CASE("sharp weight mass reproduces the analytic area") {
  // 1D: kdv_central at t = 100, half-width 10/log^2(100)
  const Grid g1 = make_grid_1d(4096, 64.0 * kPi);
  RegionSpec kc;
  kc.family = RegionFamily::kdv_central;
  const Field w1 = weights(kc, 100.0, g1, 0.0);
  double len = 0.0;
  for (double v : w1.values) len += v;
  len *= g1.dx();
  const double half = 10.0 / std::pow(std::log(100.0), 2);
  CHECK(std::abs(len - 2.0 * half) <= 2.5 * g1.dx());

  // 2D: zk_box at t = 5, b = 0.4, r = 1: square of half-side 5^0.4
  const Grid g2 = make_grid_2d(256, 256, 32.0, 32.0);
  const Field w2 = weights(zk(0.4, 1.0), 5.0, g2, 0.0);
  double area = 0.0;
  for (double v : w2.values) area += v;
  area *= g2.cell();
  const double hs = std::pow(5.0, 0.4);
  const double exact = 4.0 * hs * hs;
  // within one ring of boundary cells
  CHECK(std::abs(area - exact) <= 4.0 * (2.0 * hs) * g2.dx() + 4.0 * g2.cell());
}

TEST_CASE("the central window grows monotonically once t >= e^4") {
  RegionSpec kc;
  kc.family = RegionFamily::kdv_central;
  auto half_width = [&](double t) {
    double lo = 0.0, hi = 1e9;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (contains(kc, t, mid) ? lo : hi) = mid;
    }
    return lo;
  };
  const double e4 = std::exp(4.0);
  double prev = half_width(e4);
  for (double f : {2.0, 4.0, 8.0, 16.0, 64.0}) {
    const double cur = half_width(e4 * f);
    CHECK(cur > prev);
    prev = cur;
  }
}

TEST_CASE("dimension bookkeeping") {
  CHECK(dimension(RegionFamily::kdv_central) == 1);
  CHECK(dimension(RegionFamily::kp_cone) == 2);
  CHECK(std::string(family_name(RegionFamily::bo_window)) == "bo_window");
  const Grid g1 = make_grid_1d(64, 16.0);
  CHECK_THROWS_AS(weights(zk(0.3, 1.0), 2.0, g1), std::invalid_argument);
}
