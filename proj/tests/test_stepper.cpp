#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "dlab/models.hpp"
#include "dlab/solutions.hpp"
#include "dlab/spectral.hpp"
#include "dlab/stepper.hpp"

using namespace dlab;
using namespace dlab::spectral;
using namespace dlab::stepper;
using Catch::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

double sup_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i)
    m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

// independent evaluation of phi_k(z) = sum_j z^j/(j+k)! in long double,
// 10 terms (plenty for |z| <= 5e-3); used to cross-check the contour branch
std::complex<long double> phi_ld(std::complex<long double> z, int k) {
  long double fact = 1.0L;
  for (int i = 2; i <= k; ++i) fact *= i;
  std::complex<long double> term = 1.0L / fact, acc = term;
  for (int j = 1; j <= 10; ++j) {
    term *= z / static_cast<long double>(j + k);
    acc += term;
  }
  return acc;
}

}  // namespace

TEST_CASE("plan construction rejects bad steps") {
  const Grid g = make_grid_1d(64, 2.0 * kPi);
  CHECK_THROWS_AS(make_plan(models::make_gkdv(2), g, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_plan(models::make_gkdv(2), g, -1e-3),
                  std::invalid_argument);
  const Grid g2 = make_grid_2d(16, 16, 1.0, 1.0);
  CHECK_THROWS_AS(make_plan(models::make_bo(), g2, 1e-3),
                  std::invalid_argument);
}

TEST_CASE("phi functions at z = 0") {
  CHECK(stepper::detail::phi_series(cplx(0.0), 1).real() == Approx(1.0));
  CHECK(stepper::detail::phi_series(cplx(0.0), 2).real() == Approx(0.5));
  CHECK(stepper::detail::phi_series(cplx(0.0), 3).real() == Approx(1.0 / 6.0));
}

TEST_CASE("coefficients at the zero mode reduce to classical RK4 weights") {
  const Grid g = make_grid_1d(64, 2.0 * kPi);
  const double dt = 3e-3;
  const StepPlan p = make_plan(models::make_gkdv(2), g, dt);
  // mode 0 has symbol 0
  CHECK(p.E[0] == cplx(1.0));
  CHECK(p.E2[0] == cplx(1.0));
  CHECK(p.Q[0].real() == Approx(dt / 2.0).epsilon(1e-14));
  CHECK(p.f1[0].real() == Approx(dt / 6.0).epsilon(1e-12));
  CHECK(p.f2[0].real() == Approx(dt / 6.0).epsilon(1e-12));
  CHECK(p.f3[0].real() == Approx(dt / 6.0).epsilon(1e-12));
}

TEST_CASE("linear factors stay on the unit circle and halve consistently") {
  const Grid g = make_grid_1d(256, 40.0);
  const StepPlan p = make_plan(models::make_gkdv(2), g, 7e-3);
  for (std::size_t i = 0; i < p.E.size(); ++i) {
    CHECK(std::abs(std::abs(p.E[i]) - 1.0) <= 1e-14);
    CHECK(std::abs(p.E2[i] * p.E2[i] - p.E[i]) <= 1e-14);
  }
}

TEST_CASE("contour branch agrees with an independent series evaluation") {
  // dt = 2e-3 puts the xi = 1 mode at z = 2e-3*i, just past the series
  // switch, so the 32-point contour is exercised where the Taylor series is
  // still an excellent independent oracle.
  const Grid g = make_grid_1d(64, 2.0 * kPi);
  const double dt = 2e-3;
  const StepPlan p = make_plan(models::make_gkdv(2), g, dt);
  const std::complex<long double> z(0.0L, (long double)dt);  // dt * i * 1^3
  CHECK(std::abs(z) > 1e-3);

  const auto p1 = phi_ld(z, 1), p2 = phi_ld(z, 2), p3 = phi_ld(z, 3);
  const auto refQ = 0.5L * (long double)dt * phi_ld(0.5L * z, 1);
  const auto ref1 = (long double)dt * (p1 - 3.0L * p2 + 4.0L * p3);
  const auto ref2 = (long double)dt * (p2 - 2.0L * p3);
  const auto ref3 = (long double)dt * (4.0L * p3 - p2);

  auto close = [&](const cplx& got, std::complex<long double> want) {
    return std::abs(got - cplx((double)want.real(), (double)want.imag())) <=
           1e-13 * dt;
  };
  CHECK(close(p.Q[1], refQ));
  CHECK(close(p.f1[1], ref1));
  CHECK(close(p.f2[1], ref2));
  CHECK(close(p.f3[1], ref3));
}

TEST_CASE("zero field stays zero and time advances") {
  const Grid g = make_grid_1d(64, 2.0 * kPi);
  const StepPlan p = make_plan(models::make_gkdv(3), g, 1e-2);
  models::State s{Field(g), 0.25, models::make_gkdv(3)};
  const models::State s1 = step(s, p);
  CHECK(s1.t == Approx(0.26));
  for (double v : s1.field.values) CHECK(std::abs(v) <= 1e-15);
}

TEST_CASE("a single high mode rotates at the exact dispersion phase") {
  // u0 = cos(15x) on n = 64: the quadratic flux produces only modes 0 and 30,
  // both removed (mode 30 sits above the 2/3-rule cutoff 21), so the true
  // dynamics of this datum on this grid is the pure linear rotation
  // u(t) = cos(15x + 15^3 t).
  const Grid g = make_grid_1d(64, 2.0 * kPi);
  Field u0(g);
  for (int j = 0; j < g.nx; ++j) u0.values[j] = std::cos(15.0 * g.x(j));
  const double dt = 1e-4;
  const StepPlan p = make_plan(models::make_gkdv(2), g, dt);
  models::State s{u0, 0.0, models::make_gkdv(2)};
  for (int k = 0; k < 5; ++k) s = step(s, p);
  double worst = 0.0;
  for (int j = 0; j < g.nx; ++j)
    worst = std::max(worst, std::abs(s.field.values[j] -
                                     std::cos(15.0 * g.x(j) + 3375.0 * s.t)));
  CHECK(worst <= 1e-12);
}

TEST_CASE("one step tracks the translating soliton to 1e-10") {
  const Grid g = make_grid_1d(2048, 64.0 * kPi);
  const solutions::SolitonParams prm{2, 1.0, 0.0};
  const double dt = 1e-3;
  models::State s{solutions::gkdv_soliton(prm, 0.0, g), 0.0,
                  models::make_gkdv(2)};
  const StepPlan p = make_plan(s.model, g, dt);
  const models::State s1 = step(s, p);
  CHECK(sup_diff(s1.field, solutions::gkdv_soliton(prm, dt, g)) <= 1e-10);
}

TEST_CASE("evolve to the starting time leaves the state unchanged") {
  const Grid g = make_grid_1d(512, 64.0 * kPi);
  const solutions::SolitonParams prm{2, 1.0, 0.0};
  models::State s{solutions::gkdv_soliton(prm, 0.0, g), 1.5,
                  models::make_gkdv(2)};
  int called = 0;
  const models::State out =
      evolve(s, make_plan(s.model, g, 1e-2), 1.5,
             {Observer{0.0, [&](const models::State&) { ++called; }}});
  CHECK(out.t == 1.5);
  CHECK(called == 1);
  CHECK(sup_diff(out.field, s.field) <= 1e-13);
  CHECK_THROWS_AS(evolve(s, make_plan(s.model, g, 1e-2), 1.0),
                  std::invalid_argument);
}

TEST_CASE("two half-spans compose to one full span") {
  const Grid g = make_grid_1d(512, 64.0 * kPi);
  const solutions::SolitonParams prm{2, 1.0, 0.0};
  models::State s0{solutions::gkdv_soliton(prm, 0.0, g), 0.0,
                   models::make_gkdv(2)};
  const StepPlan p = make_plan(s0.model, g, 1e-3);
  const models::State full = evolve(s0, p, 0.02);
  const models::State half = evolve(evolve(s0, p, 0.01), p, 0.02);
  CHECK(sup_diff(full.field, half.field) <= 1e-12);
  CHECK(full.t == Approx(0.02));
}

TEST_CASE("observer cadence: multiples, every step, shortened tail") {
  const Grid g = make_grid_1d(64, 2.0 * kPi);
  models::State s{Field(g), 0.0, models::make_gkdv(2)};
  const StepPlan p = make_plan(s.model, g, 1e-2);

  std::vector<double> at_quarters, every_step;
  evolve(s, p, 1.0,
         {Observer{0.25, [&](const models::State& st) {
            at_quarters.push_back(st.t);
          }},
          Observer{0.0, [&](const models::State& st) {
            every_step.push_back(st.t);
          }}});
  REQUIRE(at_quarters.size() == 5);
  CHECK(at_quarters.front() == 0.0);
  CHECK(at_quarters[2] == Approx(0.5));
  CHECK(at_quarters.back() == Approx(1.0));
  CHECK(every_step.size() == 101);

  // t_end not a multiple of dt: shortened final step still lands exactly
  std::vector<double> times;
  const StepPlan ptail = make_plan(s.model, g, 0.1);
  const models::State out = evolve(
      s, ptail, 0.55,
      {Observer{0.0, [&](const models::State& st) { times.push_back(st.t); }}});
  CHECK(out.t == 0.55);
  REQUIRE(times.size() == 7);
  CHECK(times[5] == Approx(0.5));
  CHECK(times[6] == 0.55);
}

TEST_CASE("fourth-order convergence on the breather") {
  // n = 4096: on n = 2048 the dealias cutoff bites ~1e-7 of genuine cubic
  // flux (the breather's analyticity strip is narrow), leaving a
  // dt-independent floor that masks the temporal order
  const Grid g = make_grid_1d(4096, 64.0 * kPi);
  const solutions::BreatherParams prm{1.0, 1.0, 0.0, 0.0};
  const models::ModelSpec m = models::make_gkdv(3);
  const double T = 0.5;

  auto error_at = [&](double dt) {
    models::State s{solutions::mkdv_breather(prm, 0.0, g), 0.0, m};
    const models::State out = evolve(s, make_plan(m, g, dt), T);
    return sup_diff(out.field, solutions::mkdv_breather(prm, T, g));
  };
  const double e1 = error_at(1e-3);
  const double e2 = error_at(5e-4);
  CAPTURE(e1, e2, e1 / e2);
  // at least fourth order; the halved step may do better than 2^4 when the
  // leading error term happens to cancel along this trajectory
  CHECK(e1 / e2 >= std::pow(2.0, 3.8));
}

TEST_CASE("abort on non-finite values and on the blow-up threshold") {
  const Grid g = make_grid_1d(256, 64.0 * kPi);
  const StepPlan p = make_plan(models::make_gkdv(2), g, 1e-3);

  Field bad(g);
  bad.values[7] = std::nan("");
  try {
    step(models::State{bad, 2.0, models::make_gkdv(2)}, p);
    FAIL("expected AbortError");
  } catch (const AbortError& e) {
    CHECK(e.t == 2.0);
    CHECK(std::string(e.what()).find("non-finite") != std::string::npos);
  }

  Field huge(g);
  for (int j = 0; j < g.nx; ++j)
    huge.values[j] = 2e6 * std::exp(-g.x(j) * g.x(j));
  try {
    step(models::State{huge, 0.0, models::make_gkdv(2)}, p);
    FAIL("expected AbortError");
  } catch (const AbortError& e) {
    CHECK(e.t == 0.0);
    CHECK(std::string(e.what()).find("blow-up") != std::string::npos);
  }
}

TEST_CASE("quintic focusing datum above the ground state aborts the run") {
  // scale the p = 5 solitary profile by 1.3: mass exceeds the ground-state
  // mass, the solution focuses, and the run must end in an abort rather than
  // garbage output
  const Grid g = make_grid_1d(1024, 64.0 * kPi);
  const solutions::SolitonParams prm{5, 1.0, 0.0};
  Field u0 = solutions::gkdv_soliton(prm, 0.0, g);
  for (double& v : u0.values) v *= 1.3;
  models::State s{u0, 0.0, models::make_gkdv(5)};
  const StepPlan p = make_plan(s.model, g, 1e-3);
  CHECK_THROWS_AS(evolve(s, p, 50.0), AbortError);
}
