#pragma once

// Conserved quantities, the weighted ("virial") functionals with their exact
// rate identities, localized masses over regions, and decay-trend reporting.
//
// Conventions:
//  * mass is (1/2) integral of u^2 for every model (one convention, used
//    uniformly in reports); localized masses carry no 1/2 so a whole-domain
//    localized mass equals twice the mass.
//  * energies are the conserved Hamiltonians of the implemented evolution
//    forms; conservation itself is the test (drift, not absolute values).
//  * the decay reports are finite-time proxies: the statements they stand in
//    for are liminf/limsup claims, and no asymptotic claim is made here.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dlab/models.hpp"
#include "dlab/regions.hpp"
#include "dlab/spectral.hpp"
#include "dlab/stepper.hpp"

namespace dlab::diagnostics {

using models::Family;
using models::ModelSpec;
using models::State;
using spectral::cplx;
using spectral::Field;
using spectral::Grid;
using spectral::Spectrum;

namespace detail {

inline double sech(double s) {
  const double e = std::exp(-std::abs(s));
  return 2.0 * e / (1.0 + e * e);
}

// apply a pointwise spectral symbol given as a callable (jx, jy) -> cplx
template <typename SymbolFn>
Field apply_symbol(const Field& f, SymbolFn&& sym) {
  const Grid& g = f.grid;
  Spectrum s = spectral::forward(f);
  for (int jx = 0; jx < g.nx; ++jx)
    for (int jy = 0; jy < g.ny; ++jy) s[g.idx(jx, jy)] *= sym(jx, jy);
  return spectral::inverse_real(g, std::move(s));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Conserved quantities

// M[u] = (1/2) integral u^2
inline double mass(const Field& f) {
  double acc = 0.0;
  for (double v : f.values) acc += v * v;
  return 0.5 * acc * f.grid.cell();
}

// conserved energy of the model's evolution form:
//   gkdv     int( u_x^2/2 - u^{p+1}/(p+1) )
//   gardner  int( u_x^2/2 - u^3/3 - mu u^4/4 )
//   bo       int( u.(dx H u)/2 + u^3/3 )        (soliton energy negative)
//   zk2d     int( |grad u|^2/2 - u^3/6 )
//   kp       int( u_x^2/2 - kappa w^2/2 - u^3/6 ),  w = dxinv dy u
inline double energy(const ModelSpec& m, const Field& f) {
  models::check_grid(m, f.grid);
  const Grid& g = f.grid;
  const double cell = g.cell();
  double acc = 0.0;

  switch (m.family) {
    case Family::gkdv:
    case Family::gardner: {
      Field ux = detail::apply_symbol(f, [&](int jx, int) {
        return jx == g.nx / 2 ? cplx(0, 0) : cplx(0.0, g.xi(jx));
      });
      for (std::size_t i = 0; i < f.values.size(); ++i) {
        const double u = f.values[i];
        double pot;
        if (m.family == Family::gardner)
          pot = u * u * u / 3.0 + m.mu * u * u * u * u / 4.0;
        else {
          pot = u;
          for (int k = 0; k < m.p; ++k) pot *= u;
          pot /= m.p + 1;
        }
        acc += 0.5 * ux.values[i] * ux.values[i] - pot;
      }
      return acc * cell;
    }
    case Family::bo: {
      // dx H has symbol |xi|
      Field lam = detail::apply_symbol(f, [&](int jx, int) {
        return cplx(std::abs(g.xi(jx)), 0.0);
      });
      for (std::size_t i = 0; i < f.values.size(); ++i) {
        const double u = f.values[i];
        acc += 0.5 * u * lam.values[i] + u * u * u / 3.0;
      }
      return acc * cell;
    }
    case Family::zk2d: {
      Field ux = detail::apply_symbol(f, [&](int jx, int) {
        return jx == g.nx / 2 ? cplx(0, 0) : cplx(0.0, g.xi(jx));
      });
      Field uy = detail::apply_symbol(f, [&](int, int jy) {
        return jy == g.ny / 2 ? cplx(0, 0) : cplx(0.0, g.eta(jy));
      });
      for (std::size_t i = 0; i < f.values.size(); ++i) {
        const double u = f.values[i];
        acc += 0.5 * (ux.values[i] * ux.values[i] +
                      uy.values[i] * uy.values[i]) -
               u * u * u / 6.0;
      }
      return acc * cell;
    }
    case Family::kp: {
      Field ux = detail::apply_symbol(f, [&](int jx, int) {
        return jx == g.nx / 2 ? cplx(0, 0) : cplx(0.0, g.xi(jx));
      });
      // w = dxinv dy u, symbol eta/xi with the xi = 0 plane zeroed
      Field w = detail::apply_symbol(f, [&](int jx, int jy) {
        const int kx = Grid::kindex(jx, g.nx);
        if (kx == 0 || jx == g.nx / 2 || jy == g.ny / 2) return cplx(0, 0);
        return cplx(g.eta(jy) / g.xi(jx), 0.0);
      });
      for (std::size_t i = 0; i < f.values.size(); ++i) {
        const double u = f.values[i];
        acc += 0.5 * ux.values[i] * ux.values[i] -
               0.5 * m.kappa * w.values[i] * w.values[i] - u * u * u / 6.0;
      }
      return acc * cell;
    }
  }
  return acc;
}

// P[u] = (1/2) integral u . (dxinv dy u) for the kp models; requires the
// x-mean-free constraint to hold
inline double momentum_kp(const Field& f) {
  const Grid& g = f.grid;
  if (g.ndim != 2) throw std::invalid_argument("momentum needs a 2D field");
  double sup = 0.0;
  for (double v : f.values) sup = std::max(sup, std::abs(v));
  for (int jy = 0; jy < g.ny; ++jy) {
    double mean = 0.0;
    for (int jx = 0; jx < g.nx; ++jx) mean += f.values[g.idx(jx, jy)];
    mean /= g.nx;
    if (std::abs(mean) > 1e-10 * (1.0 + sup))
      throw std::invalid_argument(
          "momentum requires x-mean-free rows (kp constraint violated)");
  }
  Field w = detail::apply_symbol(f, [&](int jx, int jy) {
    const int kx = Grid::kindex(jx, g.nx);
    if (kx == 0 || jx == g.nx / 2 || jy == g.ny / 2) return cplx(0, 0);
    return cplx(g.eta(jy) / g.xi(jx), 0.0);
  });
  double acc = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i)
    acc += f.values[i] * w.values[i];
  return 0.5 * acc * g.cell();
}

// ---------------------------------------------------------------------------
// Weighted (virial) functionals: V(t) = int psi(x/lambda(t)) q dx with
// psi = tanh and q = u or u^2

struct VirialSpec {
  enum class Law { kdv, bo, constant };
  enum class Quantity { weighted_u, weighted_u2 };
  Law law = Law::kdv;
  Quantity quantity = Quantity::weighted_u;
  double c = 1.0;       // bo law constant
  double a = 0.0;       // bo law exponent
  double lambda0 = 1.0; // constant law value
};

inline double lambda_of(const VirialSpec& s, double t) {
  switch (s.law) {
    case VirialSpec::Law::kdv: {
      const double lg = std::log(t);
      return std::sqrt(t) / (lg * lg);
    }
    case VirialSpec::Law::bo: {
      const double lg = std::log(t);
      return s.c * std::pow(t, 1.0 - s.a) / lg;
    }
    case VirialSpec::Law::constant:
      return s.lambda0;
  }
  return s.lambda0;
}

inline double lambda_prime(const VirialSpec& s, double t) {
  switch (s.law) {
    case VirialSpec::Law::kdv: {
      const double lg = std::log(t);
      return (0.5 - 2.0 / lg) / (std::sqrt(t) * lg * lg);
    }
    case VirialSpec::Law::bo: {
      const double lg = std::log(t);
      return s.c * std::pow(t, -s.a) * ((1.0 - s.a) * lg - 1.0) / (lg * lg);
    }
    case VirialSpec::Law::constant:
      return 0.0;
  }
  return 0.0;
}

inline double virial(const Field& f, const VirialSpec& spec, double t) {
  if (f.grid.ndim != 1)
    throw std::invalid_argument("virial functionals are 1D");
  if (!(t > 1.0)) throw std::domain_error("virial requires t > 1");
  const Grid& g = f.grid;
  const double lam = lambda_of(spec, t);
  double acc = 0.0;
  for (int j = 0; j < g.nx; ++j) {
    const double u = f.values[j];
    const double q =
        spec.quantity == VirialSpec::Quantity::weighted_u ? u : u * u;
    acc += std::tanh(g.x(j) / lam) * q;
  }
  return acc * g.dx();
}

// exact rate identity for the KdV flow (gkdv p=2) and quantity weighted_u.
// Integrating by parts in d/dt int psi(x/lambda) u dx along
// u_t = -(u_xx + u^2)_x gives
//   V'(t) = lambda^-3 int psi'''(x/lambda) u
//         + lambda^-1 int psi'(x/lambda) u^2
//         - (lambda'/lambda) int (x/lambda) psi'(x/lambda) u
// with psi = tanh, psi' = sech^2, psi''' = 4 sech^2 - 6 sech^4 in closed
// form. The left side is the centered difference of V over +-h with h equal
// to the step size of the supplied plan; the state at t - h is reached
// through the x -> -x time-reversal symmetry of the equation, so only
// forward stepping is used.
struct VirialRate {
  double lhs = 0.0;
  double rhs = 0.0;
  // rhs term breakdown (surfaced for reporting)
  double dispersive = 0.0;  // lambda^-3 psi''' term
  double nonlinear = 0.0;   // lambda^-1 psi' u^2 term
  double modulation = 0.0;  // -(lambda'/lambda) x psi' term
};

namespace detail {

inline Field reflect_x(const Field& f) {
  const Grid& g = f.grid;
  Field r(g);
  for (int j = 0; j < g.nx; ++j)
    r.values[j] = f.values[(g.nx - j) % g.nx];
  return r;
}

}  // namespace detail

inline VirialRate virial_rate_identity(const State& s, const VirialSpec& spec,
                                       const stepper::StepPlan& plan) {
  if (s.model.family != Family::gkdv || s.model.p != 2)
    throw std::invalid_argument(
        "the virial rate identity is implemented for the quadratic KdV flow");
  if (spec.quantity != VirialSpec::Quantity::weighted_u)
    throw std::invalid_argument("rate identity applies to weighted_u");
  if (!(s.t > 1.0)) throw std::domain_error("rate identity requires t > 1");
  const Grid& g = s.field.grid;
  const double h = plan.dt;

  // V at t + h by a forward step; V at t - h by reflect, step, reflect
  const State fwd = stepper::step(s, plan);
  State rs{detail::reflect_x(s.field), s.t, s.model};
  const Field back = detail::reflect_x(stepper::step(rs, plan).field);

  const double vp = virial(fwd.field, spec, s.t + h);
  const double vm = virial(back, spec, s.t - h);

  VirialRate out;
  out.lhs = (vp - vm) / (2.0 * h);

  const double lam = lambda_of(spec, s.t);
  const double lamp = lambda_prime(spec, s.t);
  double t1 = 0.0, t2 = 0.0, t3 = 0.0;
  for (int j = 0; j < g.nx; ++j) {
    const double z = g.x(j) / lam;
    const double s2 = detail::sech(z) * detail::sech(z);
    const double psi1 = s2;
    const double psi3 = 4.0 * s2 - 6.0 * s2 * s2;
    const double u = s.field.values[j];
    t1 += psi3 * u;
    t2 += psi1 * u * u;
    t3 += z * psi1 * u;
  }
  const double dx = g.dx();
  out.dispersive = t1 * dx / (lam * lam * lam);
  out.nonlinear = t2 * dx / lam;
  out.modulation = -(lamp / lam) * t3 * dx;
  out.rhs = out.dispersive + out.nonlinear + out.modulation;
  return out;
}

inline VirialRate virial_rate_identity(const State& s, const VirialSpec& spec,
                                       double dt) {
  return virial_rate_identity(s, spec,
                              stepper::make_plan(s.model, s.field.grid, dt));
}

// ---------------------------------------------------------------------------
// Weighted energy density used for the Benjamin-Ono window:
// int (u^2 + (D^{1/2} u)^2) / (1 + (x/lambda)^2) dx
inline double bo_weighted_energy(const Field& f, double lambda_val) {
  if (f.grid.ndim != 1)
    throw std::invalid_argument("bo weighted energy is 1D");
  if (!(lambda_val > 0))
    throw std::invalid_argument("lambda must be positive");
  const Grid& g = f.grid;
  Field dh = spectral::apply_multiplier(
      f, spectral::make_multiplier(g, spectral::MultiplierKind::dhalf));
  double acc = 0.0;
  for (int j = 0; j < g.nx; ++j) {
    const double z = g.x(j) / lambda_val;
    acc += (f.values[j] * f.values[j] + dh.values[j] * dh.values[j]) /
           (1.0 + z * z);
  }
  return acc * g.dx();
}

// ---------------------------------------------------------------------------
// Localized mass over a region: sum weight . f^power . cell  (power 2 or 4)
inline double local_mass(const Field& f, const regions::RegionSpec& rspec,
                         double t, int power = 2, double smoothing = 0.0,
                         double K = 1.0) {
  if (power != 2 && power != 4)
    throw std::invalid_argument("local mass power must be 2 or 4");
  const Field w = regions::weights(rspec, t, f.grid, smoothing, K);
  double acc = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    const double u2 = f.values[i] * f.values[i];
    acc += w.values[i] * (power == 2 ? u2 : u2 * u2);
  }
  return acc * f.grid.cell();
}

// ---------------------------------------------------------------------------
// Decay-trend report over a (t, value) series: running minimum, the ratio of
// the trailing-window minimum to the starting value, and a log-log fit
// exponent of the monotone envelope. A finite-time proxy only.
struct TrendReport {
  std::vector<double> running_min;
  double ratio = 1.0;         // min(last 10% of samples) / min(first 10%)
  double fit_exponent = 0.0;  // slope of log(running_min) vs log(t)
  bool no_decay = false;      // ratio >= 0.5
};

inline TrendReport decay_trend(const std::vector<std::pair<double, double>>& series) {
  if (series.size() < 10)
    throw std::invalid_argument("decay trend needs at least 10 samples");
  for (std::size_t i = 1; i < series.size(); ++i)
    if (!(series[i].first > series[i - 1].first))
      throw std::invalid_argument("decay trend needs increasing times");

  TrendReport rep;
  rep.running_min.reserve(series.size());
  double cur = std::numeric_limits<double>::infinity();
  for (const auto& [t, v] : series) {
    cur = std::min(cur, v);
    rep.running_min.push_back(cur);
  }

  // Compare window minima rather than raw endpoint samples so an oscillating
  // series is judged by its floor, not by whichever phase the endpoints hit.
  const std::size_t nwin = std::max<std::size_t>(1, series.size() / 10);
  double tailmin = std::numeric_limits<double>::infinity();
  for (std::size_t i = series.size() - nwin; i < series.size(); ++i)
    tailmin = std::min(tailmin, series[i].second);
  double frontmin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < nwin; ++i)
    frontmin = std::min(frontmin, series[i].second);
  if (frontmin != 0.0)
    rep.ratio = tailmin / frontmin;
  else
    rep.ratio = tailmin == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();

  // least-squares slope of log(envelope) against log(t), over usable samples
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (!(series[i].first > 0.0) || !(rep.running_min[i] > 0.0)) continue;
    const double lx = std::log(series[i].first);
    const double ly = std::log(rep.running_min[i]);
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    ++m;
  }
  if (m >= 2) {
    const double denom = m * sxx - sx * sx;
    if (denom > 0) rep.fit_exponent = (m * sxy - sx * sy) / denom;
  }
  rep.no_decay = rep.ratio >= 0.5;
  return rep;
}

}  // namespace dlab::diagnostics
