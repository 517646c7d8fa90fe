#pragma once

// Periodic grids, discrete Fourier transforms (FFTW backend), Fourier
// multipliers, and 2/3-rule dealiasing. This is the numerical kernel shared
// by every model in the library.
//
// Conventions, fixed once and relied on everywhere:
//  * grid points:   x_j = -length_x/2 + j*length_x/n_x  (same pattern in y)
//  * wavenumbers:   xi_k = 2*pi*k/length_x with k in the symmetric integer
//                   range (k = 0..n/2, then -n/2+1..-1 in FFT storage order)
//  * spectrum:      u_hat_k = (1/N) * sum_j u_j exp(-i xi_k x_j), so that
//                   u_j = sum_k u_hat_k exp(+i xi_k x_j) and a multiplier
//                   with symbol s acts as (s(u))_hat_k = s_k * u_hat_k.
//  * storage:       2D arrays are x-major: index = ix*n_y + iy. 1D arrays
//                   have n_y = 1 and index = ix.
//  * odd symbols zero the Nyquist mode (k = n/2 has no conjugate partner on
//    an even grid; zeroing keeps multiplier outputs real).

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dlab::spectral {

using cplx = std::complex<double>;

// ---------------------------------------------------------------------------
// Grid

struct Grid {
  int ndim = 1;       // 1 or 2
  int nx = 0;         // point count in x (power of two, >= 8)
  int ny = 1;         // point count in y (1 in 1D)
  double lx = 0.0;    // domain length in x
  double ly = 0.0;    // domain length in y (0 in 1D)

  double dx() const { return lx / nx; }
  double dy() const { return ly / ny; }
  // cell measure for quadrature: dx (1D) or dx*dy (2D)
  double cell() const { return ndim == 1 ? dx() : dx() * dy(); }

  double x(int j) const { return -lx / 2.0 + j * lx / nx; }
  double y(int j) const { return -ly / 2.0 + j * ly / ny; }

  // signed integer wavenumber for FFT bin j (0..n-1 -> 0..n/2, -n/2+1..-1)
  static int kindex(int j, int n) { return j <= n / 2 ? j : j - n; }
  double xi(int jx) const {
    return 2.0 * std::numbers::pi * kindex(jx, nx) / lx;
  }
  double eta(int jy) const {
    return 2.0 * std::numbers::pi * kindex(jy, ny) / ly;
  }

  std::size_t size() const {
    return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
  }
  std::size_t idx(int jx, int jy) const {
    return static_cast<std::size_t>(jx) * ny + jy;
  }

  bool operator==(const Grid&) const = default;
};

namespace detail {
inline bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }
inline void check_axis(int n, const char* name) {
  if (n < 8 || n % 2 != 0 || !power_of_two(n))
    throw std::invalid_argument(std::string(name) +
                                " must be a power of two >= 8");
}
}  // namespace detail

inline Grid make_grid_1d(int nx, double lx) {
  detail::check_axis(nx, "n_x");
  if (!(lx > 0)) throw std::invalid_argument("length_x must be positive");
  return Grid{1, nx, 1, lx, 0.0};
}

inline Grid make_grid_2d(int nx, int ny, double lx, double ly) {
  detail::check_axis(nx, "n_x");
  detail::check_axis(ny, "n_y");
  if (!(lx > 0) || !(ly > 0))
    throw std::invalid_argument("lengths must be positive");
  return Grid{2, nx, ny, lx, ly};
}

// ---------------------------------------------------------------------------
// Field: real values on a grid

struct Field {
  Grid grid;
  std::vector<double> values;  // size grid.size(), x-major

  Field() = default;
  explicit Field(const Grid& g) : grid(g), values(g.size(), 0.0) {}
  Field(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.size())
      throw std::invalid_argument("field size does not match grid");
  }

  double& operator()(int jx, int jy = 0) { return values[grid.idx(jx, jy)]; }
  double operator()(int jx, int jy = 0) const {
    return values[grid.idx(jx, jy)];
  }
};

using Spectrum = std::vector<cplx>;

// ---------------------------------------------------------------------------
// FFT engine: cached FFTW plans per grid shape.
//
// Plan creation is serialized behind a mutex (FFTW's planner is not
// thread-safe); execution uses fftw_execute_dft on caller-owned buffers,
// which is re-entrant. Plans use FFTW_ESTIMATE so planning is deterministic
// and results are bit-reproducible run to run.

namespace detail {

struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  ~PlanPair() {
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
  }
};

inline PlanPair& plans_for(const Grid& g) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<PlanPair>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(g.nx, g.ny);
  auto it = cache.find(key);
  if (it == cache.end()) {
    auto pp = std::make_unique<PlanPair>();
    // planned in-place, because execution below is always in-place: FFTW
    // requires the new-array execute calls to match the plan's
    // in-place/out-of-place character
    std::vector<cplx> in(g.size());
    auto* fin = reinterpret_cast<fftw_complex*>(in.data());
    unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    if (g.ny == 1) {
      pp->fwd = fftw_plan_dft_1d(g.nx, fin, fin, FFTW_FORWARD, flags);
      pp->bwd = fftw_plan_dft_1d(g.nx, fin, fin, FFTW_BACKWARD, flags);
    } else {
      pp->fwd = fftw_plan_dft_2d(g.nx, g.ny, fin, fin, FFTW_FORWARD, flags);
      pp->bwd = fftw_plan_dft_2d(g.nx, g.ny, fin, fin, FFTW_BACKWARD, flags);
    }
    if (!pp->fwd || !pp->bwd)
      throw std::runtime_error("FFTW plan creation failed");
    it = cache.emplace(key, std::move(pp)).first;
  }
  return *it->second;
}

}  // namespace detail

// forward transform of a complex buffer, scaled by 1/N (in-place allowed)
inline void forward_inplace(const Grid& g, Spectrum& buf) {
  auto& pp = detail::plans_for(g);
  auto* p = reinterpret_cast<fftw_complex*>(buf.data());
  fftw_execute_dft(pp.fwd, p, p);
  const double s = 1.0 / static_cast<double>(g.size());
  for (auto& z : buf) z *= s;
}

// inverse transform (unscaled FFTW backward; exact inverse of the above)
inline void inverse_inplace(const Grid& g, Spectrum& buf) {
  auto& pp = detail::plans_for(g);
  auto* p = reinterpret_cast<fftw_complex*>(buf.data());
  fftw_execute_dft(pp.bwd, p, p);
}

inline Spectrum forward(const Field& f) {
  Spectrum s(f.values.begin(), f.values.end());
  forward_inplace(f.grid, s);
  return s;
}

// inverse transform keeping only the real part (valid for Hermitian spectra;
// the imaginary residue of a Hermitian-symmetric spectrum is rounding noise
// and is discarded)
inline Field inverse_real(const Grid& g, Spectrum s) {
  inverse_inplace(g, s);
  Field f(g);
  for (std::size_t i = 0; i < s.size(); ++i) f.values[i] = s[i].real();
  return f;
}

// largest |imaginary part| of the inverse transform, for symmetry checks
inline double inverse_imag_residue(const Grid& g, Spectrum s) {
  inverse_inplace(g, s);
  double m = 0.0;
  for (const auto& z : s) m = std::max(m, std::abs(z.imag()));
  return m;
}

// ---------------------------------------------------------------------------
// Multipliers

struct Multiplier {
  std::string label;
  Grid grid;
  Spectrum symbol;  // same layout as a Spectrum on grid
};

enum class MultiplierKind { dx, dx2, dx3, hilbert, dhalf, dx_laplacian, kp_nonlocal };

inline Multiplier make_multiplier(const Grid& g, MultiplierKind kind) {
  const bool needs_2d =
      kind == MultiplierKind::dx_laplacian || kind == MultiplierKind::kp_nonlocal;
  if (needs_2d && g.ndim != 2)
    throw std::invalid_argument("multiplier kind requires a 2D grid");

  Multiplier m;
  m.grid = g;
  m.symbol.assign(g.size(), cplx(0.0, 0.0));
  switch (kind) {
    case MultiplierKind::dx: m.label = "dx"; break;
    case MultiplierKind::dx2: m.label = "dx2"; break;
    case MultiplierKind::dx3: m.label = "dx3"; break;
    case MultiplierKind::hilbert: m.label = "hilbert"; break;
    case MultiplierKind::dhalf: m.label = "dhalf"; break;
    case MultiplierKind::dx_laplacian: m.label = "dx_laplacian"; break;
    case MultiplierKind::kp_nonlocal: m.label = "kp_nonlocal"; break;
  }

  for (int jx = 0; jx < g.nx; ++jx) {
    const int kx = Grid::kindex(jx, g.nx);
    const bool nyq_x = (g.nx % 2 == 0 && jx == g.nx / 2);
    const double xi = g.xi(jx);
    for (int jy = 0; jy < g.ny; ++jy) {
      const double eta = g.ndim == 2 ? g.eta(jy) : 0.0;
      cplx s(0.0, 0.0);
      switch (kind) {
        case MultiplierKind::dx:
          s = nyq_x ? cplx(0, 0) : cplx(0.0, xi);
          break;
        case MultiplierKind::dx2:
          s = cplx(-xi * xi, 0.0);
          break;
        case MultiplierKind::dx3:
          // (i*xi)^3 = -i*xi^3
          s = nyq_x ? cplx(0, 0) : cplx(0.0, -xi * xi * xi);
          break;
        case MultiplierKind::hilbert:
          // -i*sgn(xi), with sgn(0) = 0 (principal-value convention)
          s = nyq_x || kx == 0 ? cplx(0, 0)
                               : cplx(0.0, kx > 0 ? -1.0 : 1.0);
          break;
        case MultiplierKind::dhalf:
          s = cplx(std::sqrt(std::abs(xi)), 0.0);
          break;
        case MultiplierKind::dx_laplacian:
          s = nyq_x ? cplx(0, 0) : cplx(0.0, -xi * (xi * xi + eta * eta));
          break;
        case MultiplierKind::kp_nonlocal:
          // i*eta^2/xi with the xi = 0 plane set to zero (the antiderivative
          // in x is only defined on x-mean-zero data)
          s = nyq_x || kx == 0 ? cplx(0, 0) : cplx(0.0, eta * eta / xi);
          break;
      }
      m.symbol[g.idx(jx, jy)] = s;
    }
  }
  return m;
}

inline Field apply_multiplier(const Field& f, const Multiplier& m) {
  if (!(f.grid == m.grid))
    throw std::invalid_argument("field and multiplier grids do not match");
  Spectrum s = forward(f);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] *= m.symbol[i];
  return inverse_real(f.grid, std::move(s));
}

// ---------------------------------------------------------------------------
// Dealiasing (2/3 rule): zero every mode with |k| > floor(n/3) per direction

inline int dealias_cutoff(int n) { return n / 3; }

inline void dealias_spectrum(const Grid& g, Spectrum& s) {
  const int cx = dealias_cutoff(g.nx);
  const int cy = g.ndim == 2 ? dealias_cutoff(g.ny) : 0;
  for (int jx = 0; jx < g.nx; ++jx) {
    const bool killx = std::abs(Grid::kindex(jx, g.nx)) > cx;
    for (int jy = 0; jy < g.ny; ++jy) {
      const bool killy =
          g.ndim == 2 && std::abs(Grid::kindex(jy, g.ny)) > cy;
      if (killx || killy) s[g.idx(jx, jy)] = cplx(0.0, 0.0);
    }
  }
}

inline Field dealias(const Field& f) {
  Spectrum s = forward(f);
  dealias_spectrum(f.grid, s);
  return inverse_real(f.grid, std::move(s));
}

// ---------------------------------------------------------------------------
// Quadrature helpers

// integral of f over the periodic box (trapezoid = exact for the DFT basis)
inline double integral(const Field& f) {
  double acc = 0.0;
  for (double v : f.values) acc += v;
  return acc * f.grid.cell();
}

inline double sup_abs(const Field& f) {
  double m = 0.0;
  for (double v : f.values) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace dlab::spectral
