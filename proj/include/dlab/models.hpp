#pragma once

// PDE definitions in the common evolution form  d/dt u_hat = L*u_hat + N(u):
// a purely imaginary dispersion symbol L per mode, plus a nonlinear flux
// divergence N(u) = -d/dx flux(u) evaluated pseudospectrally.
//
// Families and fluxes:
//   gkdv     u_t + (u_xx + u^p)_x = 0            flux u^p        L = i xi^3
//   gardner  u_t + (u_xx + u^2 + mu u^3)_x = 0   flux u^2+mu u^3 L = i xi^3
//   bo       u_t + (Hu_x + u^2)_x = 0            flux u^2        L = -i xi|xi|
//   zk2d     u_t + (Lap u)_x + u u_x = 0         flux u^2/2      L = i xi(xi^2+eta^2)
//   kp       u_t + u_xxx + u u_x + kappa*dxinv(u_yy) = 0, flux u^2/2,
//            L = i(xi^3 - kappa*eta^2/xi), xi = 0 plane zeroed
//
// u*u_x is implemented as (u^2/2)_x (conservative form); the product is
// formed in physical space and the 2/3 rule is applied once to the result.

#include <cmath>
#include <stdexcept>

#include "dlab/spectral.hpp"

namespace dlab::models {

using spectral::cplx;
using spectral::Field;
using spectral::Grid;
using spectral::Multiplier;
using spectral::Spectrum;

enum class Family { gkdv, gardner, bo, zk2d, kp };

struct ModelSpec {
  Family family = Family::gkdv;
  int p = 2;        // gkdv flux power, 2..5
  double mu = 0.0;  // gardner cubic coefficient, >= 0
  int kappa = -1;   // kp: -1 or +1
};

inline const char* family_name(Family f) {
  switch (f) {
    case Family::gkdv: return "gkdv";
    case Family::gardner: return "gardner";
    case Family::bo: return "bo";
    case Family::zk2d: return "zk2d";
    case Family::kp: return "kp";
  }
  return "?";
}

inline int family_dim(Family f) {
  return f == Family::zk2d || f == Family::kp ? 2 : 1;
}

// family-parameter consistency; throws on violation
inline void validate(const ModelSpec& m) {
  if (m.family == Family::gkdv && (m.p < 2 || m.p > 5))
    throw std::invalid_argument("gkdv power p must be in {2,3,4,5}");
  if (m.family == Family::gardner && !(m.mu >= 0.0))
    throw std::invalid_argument("gardner mu must be >= 0");
  if (m.family == Family::kp && m.kappa != -1 && m.kappa != 1)
    throw std::invalid_argument("kp kappa must be -1 or +1");
}

inline ModelSpec make_gkdv(int p) {
  ModelSpec m{Family::gkdv, p, 0.0, -1};
  validate(m);
  return m;
}
inline ModelSpec make_gardner(double mu) {
  ModelSpec m{Family::gardner, 2, mu, -1};
  validate(m);
  return m;
}
inline ModelSpec make_bo() { return ModelSpec{Family::bo, 2, 0.0, -1}; }
inline ModelSpec make_zk() { return ModelSpec{Family::zk2d, 2, 0.0, -1}; }
inline ModelSpec make_kp(int kappa) {
  ModelSpec m{Family::kp, 2, 0.0, kappa};
  validate(m);
  return m;
}

struct State {
  Field field;
  double t = 0.0;
  ModelSpec model;
};

inline void check_grid(const ModelSpec& m, const Grid& g) {
  if (g.ndim != family_dim(m.family))
    throw std::invalid_argument("grid dimension does not match model family");
}

// dispersion symbol of the linearized equation; every entry purely imaginary
inline Multiplier linear_symbol(const ModelSpec& m, const Grid& g) {
  check_grid(m, g);
  Multiplier out;
  out.grid = g;
  out.label = std::string("L_") + family_name(m.family);
  out.symbol.assign(g.size(), cplx(0.0, 0.0));
  for (int jx = 0; jx < g.nx; ++jx) {
    const int kx = Grid::kindex(jx, g.nx);
    const bool nyq_x = (jx == g.nx / 2);
    const double xi = g.xi(jx);
    for (int jy = 0; jy < g.ny; ++jy) {
      const double eta = g.ndim == 2 ? g.eta(jy) : 0.0;
      double im = 0.0;
      switch (m.family) {
        case Family::gkdv:
        case Family::gardner:
          im = nyq_x ? 0.0 : xi * xi * xi;
          break;
        case Family::bo:
          im = nyq_x ? 0.0 : -xi * std::abs(xi);
          break;
        case Family::zk2d:
          im = nyq_x ? 0.0 : xi * (xi * xi + eta * eta);
          break;
        case Family::kp:
          im = nyq_x || kx == 0
                   ? 0.0
                   : xi * xi * xi - m.kappa * eta * eta / xi;
          break;
      }
      out.symbol[g.idx(jx, jy)] = cplx(0.0, im);
    }
  }
  return out;
}

namespace detail {

// pointwise flux for the family
inline double flux(const ModelSpec& m, double u) {
  switch (m.family) {
    case Family::gkdv: {
      double f = u;
      for (int i = 1; i < m.p; ++i) f *= u;
      return f;
    }
    case Family::gardner:
      return u * u + m.mu * u * u * u;
    case Family::bo:
      return u * u;
    case Family::zk2d:
    case Family::kp:
      return 0.5 * u * u;
  }
  return 0.0;
}

}  // namespace detail

// spectrum of N(u) = -d/dx flux(u): product in physical space, transform,
// multiply by i*xi with a sign flip, dealias once, and (kp) zero the xi = 0
// plane so the state stays x-mean free
inline Spectrum nonlinear_rhs(const ModelSpec& m, const Field& f) {
  check_grid(m, f.grid);
  const Grid& g = f.grid;
  Spectrum s(g.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    s[i] = cplx(detail::flux(m, f.values[i]), 0.0);
  spectral::forward_inplace(g, s);
  for (int jx = 0; jx < g.nx; ++jx) {
    const bool nyq_x = (jx == g.nx / 2);
    const cplx dmx = nyq_x ? cplx(0, 0) : cplx(0.0, -g.xi(jx));
    for (int jy = 0; jy < g.ny; ++jy) s[g.idx(jx, jy)] *= dmx;
  }
  spectral::dealias_spectrum(g, s);
  if (m.family == Family::kp)
    for (int jy = 0; jy < g.ny; ++jy) s[g.idx(0, jy)] = cplx(0, 0);
  return s;
}

// project a spectrum onto the kp constraint (zero the xi = 0 plane)
inline void kp_project(const Grid& g, Spectrum& s) {
  for (int jy = 0; jy < g.ny; ++jy) s[g.idx(0, jy)] = cplx(0, 0);
}

}  // namespace dlab::models
