#pragma once

// The space-time regions Omega(t) whose localized mass the experiments
// track, with parameter validation against each family's hypotheses and
// (optionally smoothed) indicator weights for quadrature.
//
// Families and membership (natural logs; t > 1 everywhere, the bounds are
// asymptotic statements):
//   kdv_central    |x| <= K c sqrt(t)/log^2 t
//   bo_window      |x| <= c t^{1-a}/log t
//   moving_box_1d  |x + sign t^n| <= K t^b
//   extreme_1d     left:  x <= -K t log^{1+eps} t     right: x > C0 t
//   zk_box         |x| < K t^b  and  |y| < K t^{b r}
//   kp_box         |x - l1 t^{m1}| <= K t^b  and  |y - l2 t^{m2}| <= K t^{b r}
//   kp_cone        sigma1 |x| + sigma2 |y| >= K t log^{1+eps} t
//   kp_halfplane   x + sigma3 y >= beta t
//
// The size bounds above hold up to an unspecified constant; K is the
// experiment-level stand-in for it (default 1). Families whose own parameter
// already plays that role
// (bo_window's c, extreme_1d right's C0, kp_halfplane's beta) ignore K.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "dlab/spectral.hpp"

namespace dlab::regions {

using spectral::Field;
using spectral::Grid;

enum class RegionFamily {
  kdv_central,
  bo_window,
  moving_box_1d,
  extreme_1d,
  zk_box,
  kp_box,
  kp_cone,
  kp_halfplane,
};

enum class Side { left, right };

struct RegionSpec {
  RegionFamily family = RegionFamily::kdv_central;
  // family parameters (each family reads only its own subset)
  double c = 1.0;          // kdv_central scale; bo_window constant
  double a = 0.0;          // bo_window exponent
  double n = 0.0;          // moving_box_1d center exponent
  double b = 0.0;          // moving_box_1d / zk_box / kp_box width exponent
  int sign = +1;           // moving_box_1d: the +- in |x +- t^n|
  bool quartic = false;    // moving_box_1d: tighter b constraint variant
  double epsilon = 1.0;    // extreme_1d / kp_cone
  double C0 = 1.0;         // extreme_1d right-ray constant
  Side side = Side::left;  // extreme_1d
  double r = 2.0;          // zk_box / kp_box aspect exponent
  double m1 = 0.0, m2 = 0.0, l1 = 0.0, l2 = 0.0;  // kp_box center drift
  double sigma1 = 0.0, sigma2 = 0.0;              // kp_cone
  double sigma3 = 0.0, beta = 0.0;                // kp_halfplane
};

inline const char* family_name(RegionFamily f) {
  switch (f) {
    case RegionFamily::kdv_central: return "kdv_central";
    case RegionFamily::bo_window: return "bo_window";
    case RegionFamily::moving_box_1d: return "moving_box_1d";
    case RegionFamily::extreme_1d: return "extreme_1d";
    case RegionFamily::zk_box: return "zk_box";
    case RegionFamily::kp_box: return "kp_box";
    case RegionFamily::kp_cone: return "kp_cone";
    case RegionFamily::kp_halfplane: return "kp_halfplane";
  }
  return "?";
}

inline int dimension(RegionFamily f) {
  switch (f) {
    case RegionFamily::zk_box:
    case RegionFamily::kp_box:
    case RegionFamily::kp_cone:
    case RegionFamily::kp_halfplane:
      return 2;
    default:
      return 1;
  }
}

struct Violation {
  std::string constraint;  // the violated hypothesis, quoted
  double value;            // the offending parameter value
};

// check every family hypothesis; returns all violations (empty = ok).
// Total: any parameter combination yields a list, never an exception.
inline std::vector<Violation> validate(const RegionSpec& s) {
  std::vector<Violation> v;
  auto bad = [&](const char* what, double val) {
    v.push_back(Violation{what, val});
  };
  switch (s.family) {
    case RegionFamily::kdv_central:
      if (!(s.c > 0)) bad("c > 0", s.c);
      break;
    case RegionFamily::bo_window:
      if (!(s.a >= 0.0 && s.a < 0.5)) bad("a ∈ [0, 1/2)", s.a);
      if (!(s.c > 0)) bad("c > 0", s.c);
      break;
    case RegionFamily::moving_box_1d:
      if (s.quartic) {
        if (!(s.b < 4.0 / 7.0)) bad("b < 4/7", s.b);
      } else {
        if (!(s.b < 2.0 / 3.0)) bad("b < 2/3", s.b);
      }
      if (!(s.n >= 0.0 && s.n <= 1.0 - s.b / 2.0)) bad("0 ≤ n ≤ 1−b/2", s.n);
      if (s.sign != 1 && s.sign != -1) bad("sign ∈ {+1, −1}", s.sign);
      break;
    case RegionFamily::extreme_1d:
      if (!(s.epsilon > 0)) bad("ε > 0", s.epsilon);
      if (!(s.C0 > 0)) bad("C0 > 0", s.C0);
      break;
    case RegionFamily::zk_box:
      if (!(s.r > 1.0 / 3.0 && s.r < 3.0)) bad("1/3 < r < 3", s.r);
      if (!(s.b >= 0.0 && s.b < 2.0 / (3.0 + s.r))) bad("0≤b<2/(3+r)", s.b);
      break;
    case RegionFamily::kp_box:
      if (!(s.r > 5.0 / 3.0 && s.r < 3.0)) bad("5/3 < r < 3", s.r);
      if (!(s.b > 0.0 && s.b < 2.0 / (3.0 + s.r))) bad("0 < b < 2/(3+r)", s.b);
      if (!(s.m1 >= 0.0 && s.m1 < 1.0 - (s.b / 2.0) * (s.r + 1.0)))
        bad("0 ≤ m1 < 1−(b/2)(r+1)", s.m1);
      if (!(s.m2 >= 0.0 && s.m2 < 1.0 - (s.b / 2.0) * (3.0 - s.r)))
        bad("0 ≤ m2 < 1−(b/2)(3−r)", s.m2);
      break;
    case RegionFamily::kp_cone:
      if (!(s.sigma1 >= 0)) bad("σ1 ≥ 0", s.sigma1);
      if (!(s.sigma2 >= 0)) bad("σ2 ≥ 0", s.sigma2);
      if (s.sigma1 == 0 && s.sigma2 == 0)
        bad("σ1, σ2 not both zero", 0.0);
      if (!(s.epsilon > 0)) bad("ε > 0", s.epsilon);
      break;
    case RegionFamily::kp_halfplane:
      break;  // sigma3, beta unconstrained
  }
  return v;
}

namespace detail {

inline void require_time(double t) {
  if (!(t > 1.0))
    throw std::domain_error("region membership requires t > 1");
}

}  // namespace detail

// exact membership per the definitions above. K scales the principal size
// bound (see header comment). Throws for t <= 1.
inline bool contains(const RegionSpec& s, double t, double x, double y = 0.0,
                     double K = 1.0) {
  detail::require_time(t);
  const double lg = std::log(t);
  switch (s.family) {
    case RegionFamily::kdv_central:
      return std::abs(x) <= K * s.c * std::sqrt(t) / (lg * lg);
    case RegionFamily::bo_window:
      return std::abs(x) <= s.c * std::pow(t, 1.0 - s.a) / lg;
    case RegionFamily::moving_box_1d:
      return std::abs(x + s.sign * std::pow(t, s.n)) <= K * std::pow(t, s.b);
    case RegionFamily::extreme_1d:
      if (s.side == Side::left)
        return x <= -K * t * std::pow(lg, 1.0 + s.epsilon);
      return x > s.C0 * t;
    case RegionFamily::zk_box:
      return std::abs(x) < K * std::pow(t, s.b) &&
             std::abs(y) < K * std::pow(t, s.b * s.r);
    case RegionFamily::kp_box:
      return std::abs(x - s.l1 * std::pow(t, s.m1)) <= K * std::pow(t, s.b) &&
             std::abs(y - s.l2 * std::pow(t, s.m2)) <=
                 K * std::pow(t, s.b * s.r);
    case RegionFamily::kp_cone:
      return s.sigma1 * std::abs(x) + s.sigma2 * std::abs(y) >=
             K * t * std::pow(lg, 1.0 + s.epsilon);
    case RegionFamily::kp_halfplane:
      return x + s.sigma3 * y >= s.beta * t;
  }
  return false;
}

namespace detail {

// ramp factor for a one-sided constraint with signed inside-margin g:
// sharp (w = 0) gives the indicator, w > 0 a tanh ramp centered on the
// boundary (value 1/2 exactly there)
inline double ramp(double g, double w, bool sharp_in) {
  if (w <= 0.0) return sharp_in ? 1.0 : 0.0;
  return 0.5 * (1.0 + std::tanh(g / w));
}

// weight for |z - center| <= half (product of the two face ramps, written
// as a single expression that is ~1 deep inside and 0.5 on each face)
inline double interval_weight(double z, double center, double half, double w,
                              bool inside) {
  if (w <= 0.0) return inside ? 1.0 : 0.0;
  return 0.5 * (std::tanh((z - (center - half)) / w) +
                std::tanh(((center + half) - z) / w));
}

}  // namespace detail

// weights in [0,1] multiplying the quadrature rule: smoothing = 0 gives the
// sharp indicator of `contains`; smoothing = w > 0 replaces every boundary
// with a tanh ramp of width w
inline Field weights(const RegionSpec& s, double t, const Grid& g,
                     double smoothing = 0.0, double K = 1.0) {
  detail::require_time(t);
  const int need = dimension(s.family);
  if (need != g.ndim)
    throw std::invalid_argument("region/grid dimension mismatch");
  const double lg = std::log(t);
  const double w = smoothing;
  Field out(g);
  for (int jx = 0; jx < g.nx; ++jx) {
    const double x = g.x(jx);
    for (int jy = 0; jy < g.ny; ++jy) {
      const double y = g.ndim == 2 ? g.y(jy) : 0.0;
      const bool in =
          contains(s, t, x, y, K);  // sharp answer reused for w = 0
      double val = 0.0;
      switch (s.family) {
        case RegionFamily::kdv_central:
          val = detail::interval_weight(
              x, 0.0, K * s.c * std::sqrt(t) / (lg * lg), w, in);
          break;
        case RegionFamily::bo_window:
          val = detail::interval_weight(
              x, 0.0, s.c * std::pow(t, 1.0 - s.a) / lg, w, in);
          break;
        case RegionFamily::moving_box_1d:
          val = detail::interval_weight(x, -s.sign * std::pow(t, s.n),
                                        K * std::pow(t, s.b), w, in);
          break;
        case RegionFamily::extreme_1d:
          if (s.side == Side::left)
            val = detail::ramp(-K * t * std::pow(lg, 1.0 + s.epsilon) - x, w,
                               in);
          else
            val = detail::ramp(x - s.C0 * t, w, in);
          break;
        case RegionFamily::zk_box:
          val = detail::interval_weight(x, 0.0, K * std::pow(t, s.b), w, in) *
                detail::interval_weight(y, 0.0, K * std::pow(t, s.b * s.r), w,
                                        g.ndim == 2);
          if (w <= 0.0) val = in ? 1.0 : 0.0;
          break;
        case RegionFamily::kp_box:
          val = detail::interval_weight(x, s.l1 * std::pow(t, s.m1),
                                        K * std::pow(t, s.b), w, in) *
                detail::interval_weight(y, s.l2 * std::pow(t, s.m2),
                                        K * std::pow(t, s.b * s.r), w, true);
          if (w <= 0.0) val = in ? 1.0 : 0.0;
          break;
        case RegionFamily::kp_cone:
          val = detail::ramp(s.sigma1 * std::abs(x) + s.sigma2 * std::abs(y) -
                                 K * t * std::pow(lg, 1.0 + s.epsilon),
                             w, in);
          break;
        case RegionFamily::kp_halfplane:
          val = detail::ramp(x + s.sigma3 * y - s.beta * t, w, in);
          break;
      }
      out.values[g.idx(jx, jy)] = val;
    }
  }
  return out;
}

}  // namespace dlab::regions
