#pragma once

// Fourth-order exponential time differencing Runge-Kutta (ETDRK4) for the
// stiff evolution d/dt u_hat = L*u_hat + N(u). The linear part is integrated
// exactly by phase rotation (L is purely imaginary); the nonlinear part uses
// the standard four-stage scheme
//
//   a = E2.v + Q.N(v)
//   b = E2.v + Q.N(a)
//   c = E2.a + Q.(2 N(b) - N(v))
//   v+ = E.v + f1.N(v) + 2 f2.(N(a)+N(b)) + f3.N(c)
//
// with per-mode coefficients (z = dt*L):
//   Q  = dt (e^{z/2}-1)/z
//   f1 = dt (-4 - z + e^z(4 - 3z + z^2))/z^3
//   f2 = dt ( 2 + z + e^z(-2 + z))/z^3
//   f3 = dt (-4 - 3z - z^2 + e^z(4 - z))/z^3
//
// These removable-singularity expressions are evaluated by a 32-point
// unit-circle contour mean around each z; because L is imaginary the full
// circle is used and the mean stays complex (the half-circle/real-part
// shortcut is only valid for real symbols). Modes with |z| < 1e-3 use the
// phi-function Taylor series instead: f1 = dt(phi1 - 3 phi2 + 4 phi3),
// f2 = dt(phi2 - 2 phi3), f3 = dt(4 phi3 - phi2), Q = dt/2 phi1(z/2),
// phi_k(z) = sum_j z^j / (j+k)!.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "dlab/models.hpp"
#include "dlab/spectral.hpp"

namespace dlab::stepper {

using models::ModelSpec;
using models::State;
using spectral::cplx;
using spectral::Field;
using spectral::Grid;
using spectral::Spectrum;

// sup-norm threshold treated as blow-up (the quintic focusing family can
// blow up in finite time; runs abort rather than produce garbage)
inline constexpr double kBlowupThreshold = 1e6;

struct StepPlan {
  ModelSpec model;
  Grid grid;
  double dt = 0.0;
  Spectrum E, E2, Q, f1, f2, f3;  // per-mode coefficients, dt folded in
};

namespace detail {

inline cplx phi_series(const cplx& z, int k) {
  // sum_{j>=0} z^j/(j+k)!  truncated at j = 6 (ample for |z| < 1e-3)
  double fact = 1.0;
  for (int i = 2; i <= k; ++i) fact *= i;
  cplx term = 1.0 / fact, acc = term;
  for (int j = 1; j <= 6; ++j) {
    term *= z / static_cast<double>(j + k);
    acc += term;
  }
  return acc;
}

}  // namespace detail

inline StepPlan make_plan(const ModelSpec& model, const Grid& grid, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  models::check_grid(model, grid);

  StepPlan plan;
  plan.model = model;
  plan.grid = grid;
  plan.dt = dt;

  const Spectrum Lsym = models::linear_symbol(model, grid).symbol;
  const std::size_t n = Lsym.size();
  plan.E.resize(n);
  plan.E2.resize(n);
  plan.Q.resize(n);
  plan.f1.resize(n);
  plan.f2.resize(n);
  plan.f3.resize(n);

  constexpr int M = 32;  // contour points
  std::vector<cplx> ring(M);
  for (int j = 0; j < M; ++j) {
    const double th = 2.0 * std::numbers::pi * (j + 0.5) / M;
    ring[j] = cplx(std::cos(th), std::sin(th));
  }

  for (std::size_t i = 0; i < n; ++i) {
    const cplx z0 = dt * Lsym[i];
    plan.E[i] = std::exp(z0);
    plan.E2[i] = std::exp(0.5 * z0);
    if (std::abs(z0) < 1e-3) {
      const cplx p1 = detail::phi_series(z0, 1);
      const cplx p2 = detail::phi_series(z0, 2);
      const cplx p3 = detail::phi_series(z0, 3);
      plan.Q[i] = 0.5 * dt * detail::phi_series(0.5 * z0, 1);
      plan.f1[i] = dt * (p1 - 3.0 * p2 + 4.0 * p3);
      plan.f2[i] = dt * (p2 - 2.0 * p3);
      plan.f3[i] = dt * (4.0 * p3 - p2);
    } else {
      cplx q(0), g1(0), g2(0), g3(0);
      for (int j = 0; j < M; ++j) {
        const cplx z = z0 + ring[j];
        const cplx ez = std::exp(z);
        const cplx z2 = z * z, z3 = z2 * z;
        q += (std::exp(0.5 * z) - 1.0) / z;
        g1 += (-4.0 - z + ez * (4.0 - 3.0 * z + z2)) / z3;
        g2 += (2.0 + z + ez * (-2.0 + z)) / z3;
        g3 += (-4.0 - 3.0 * z - z2 + ez * (4.0 - z)) / z3;
      }
      const double s = dt / M;
      plan.Q[i] = s * q;
      plan.f1[i] = s * g1;
      plan.f2[i] = s * g2;
      plan.f3[i] = s * g3;
    }
  }
  return plan;
}

struct AbortError : std::runtime_error {
  double t;
  AbortError(const std::string& what, double t_) : std::runtime_error(what), t(t_) {}
};

namespace detail {

inline void check_state(const Field& u, double t) {
  double sup = 0.0;
  for (double v : u.values) {
    if (!std::isfinite(v)) throw AbortError("non-finite value in state", t);
    sup = std::max(sup, std::abs(v));
  }
  if (sup > kBlowupThreshold)
    throw AbortError("sup-norm blow-up threshold exceeded", t);
}

// one ETDRK4 update of the spectral state v (the caller tracks time)
inline void step_spectrum(const StepPlan& p, Spectrum& v, double t) {
  const Grid& g = p.grid;
  const std::size_t n = v.size();

  Field u = spectral::inverse_real(g, v);
  check_state(u, t);
  const Spectrum Nv = models::nonlinear_rhs(p.model, u);

  Spectrum ah(n), tmp(n);
  for (std::size_t i = 0; i < n; ++i) ah[i] = p.E2[i] * v[i] + p.Q[i] * Nv[i];
  const Spectrum Na =
      models::nonlinear_rhs(p.model, spectral::inverse_real(g, ah));

  for (std::size_t i = 0; i < n; ++i) tmp[i] = p.E2[i] * v[i] + p.Q[i] * Na[i];
  const Spectrum Nb =
      models::nonlinear_rhs(p.model, spectral::inverse_real(g, tmp));

  for (std::size_t i = 0; i < n; ++i)
    tmp[i] = p.E2[i] * ah[i] + p.Q[i] * (2.0 * Nb[i] - Nv[i]);
  const Spectrum Nc =
      models::nonlinear_rhs(p.model, spectral::inverse_real(g, tmp));

  for (std::size_t i = 0; i < n; ++i)
    v[i] = p.E[i] * v[i] + p.f1[i] * Nv[i] + 2.0 * p.f2[i] * (Na[i] + Nb[i]) +
           p.f3[i] * Nc[i];
  if (p.model.family == models::Family::kp) models::kp_project(g, v);
}

}  // namespace detail

inline State step(const State& s, const StepPlan& plan) {
  if (!(s.field.grid == plan.grid))
    throw std::invalid_argument("plan grid does not match state");
  if (s.model.family != plan.model.family)
    throw std::invalid_argument("plan model does not match state");
  Spectrum v = spectral::forward(s.field);
  if (s.model.family == models::Family::kp) models::kp_project(plan.grid, v);
  detail::step_spectrum(plan, v, s.t);
  return State{spectral::inverse_real(plan.grid, std::move(v)), s.t + plan.dt,
               s.model};
}

// observer fired at multiples of `every` (and at t_end); every = 0 fires at
// every step
struct Observer {
  double every = 0.0;
  std::function<void(const State&)> fn;
};

// integrate to t_end with a fixed-dt plan; the final step is shortened so the
// run lands exactly on t_end. Deterministic for identical inputs.
inline State evolve(const State& s0, const StepPlan& plan, double t_end,
                    const std::vector<Observer>& observers = {}) {
  if (t_end < s0.t) throw std::invalid_argument("t_end before state time");

  const double t0 = s0.t;
  const double dt = plan.dt;
  const double span = t_end - t0;
  const long nfull = static_cast<long>(std::floor(span / dt + 1e-9));
  const double rem = span - nfull * dt;

  const bool has_tail = rem > 1e-12 * dt;

  auto fires = [&](double t, double every, bool final_t) {
    if (final_t || every <= 0.0) return true;
    const double q = (t - t0) / every;
    return std::abs(q - std::llround(q)) < 1e-9;
  };

  Spectrum v = spectral::forward(s0.field);
  if (s0.model.family == models::Family::kp) models::kp_project(plan.grid, v);

  // materialize the field only when some observer actually fires
  auto notify = [&](double t, bool final_t) {
    bool any = false;
    for (const auto& ob : observers) any = any || fires(t, ob.every, final_t);
    if (!any) return;
    State snap{spectral::inverse_real(plan.grid, v), t, s0.model};
    for (const auto& ob : observers)
      if (fires(t, ob.every, final_t)) ob.fn(snap);
  };

  notify(t0, !has_tail && nfull == 0);
  for (long i = 1; i <= nfull; ++i) {
    detail::step_spectrum(plan, v, t0 + (i - 1) * dt);
    notify(t0 + i * dt, !has_tail && i == nfull);
  }
  double t = t0 + nfull * dt;
  if (has_tail) {
    const StepPlan tail = make_plan(plan.model, plan.grid, rem);
    detail::step_spectrum(tail, v, t);
    t = t_end;
    notify(t, true);
  }
  return State{spectral::inverse_real(plan.grid, std::move(v)), t, s0.model};
}

}  // namespace dlab::stepper
