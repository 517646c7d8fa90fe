#pragma once

// Run orchestration: builds the initial state from a parsed configuration,
// integrates it with recording observers, and persists outputs into a
// per-run directory:
//
//   series.csv          one row per record; 17-significant-digit numbers so
//                       every binary64 value round-trips exactly
//   snapshot_NNNNNN.bin scheduled field snapshots (snapshot.hpp format)
//   manifest.txt        the fully resolved configuration plus library
//                       versions and derived diagnostics, in the same
//                       line-oriented format as the input config
//
// Region, virial and weighted-energy columns are defined through scaling
// laws that are singular at t = 1 (logarithms vanish); for records at
// t <= 1 those columns report the documented t -> 1+ limits instead:
// log-divergent windows become the whole domain, power-law boxes take
// their t = 1 shape, and the weighted functionals take their constant-
// weight (lambda -> infinity) limits.
//
// Also the sweep scheduler (many configs across a worker pool) and the
// snapshot inspector used by the command-line tool.

#include <glob.h>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <fftw3.h>

#include "dlab/config.hpp"
#include "dlab/diagnostics.hpp"
#include "dlab/models.hpp"
#include "dlab/regions.hpp"
#include "dlab/snapshot.hpp"
#include "dlab/solutions.hpp"
#include "dlab/spectral.hpp"
#include "dlab/stepper.hpp"

namespace dlab::lab {

using config::ExperimentConfig;
using models::State;
using spectral::Field;
using spectral::Grid;

inline constexpr const char* kToolVersion = "1.0.0";

// ---------------------------------------------------------------------------
// Number formatting / CSV

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Series {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

inline void write_csv(const Series& s, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (std::size_t i = 0; i < s.columns.size(); ++i)
    out << (i ? "," : "") << s.columns[i];
  out << "\n";
  for (const auto& row : s.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << format_number(row[i]);
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline Series read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  Series s;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::stringstream hdr(line);
  std::string cell;
  while (std::getline(hdr, cell, ',')) s.columns.push_back(cell);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      std::size_t comma = line.find(',', pos);
      if (comma == std::string::npos) comma = line.size();
      const std::string tok = line.substr(pos, comma - pos);
      char* end = nullptr;
      row.push_back(std::strtod(tok.c_str(), &end));
      if (end == tok.c_str() || *end != '\0')
        throw std::runtime_error("bad CSV number \"" + tok + "\" in " + path);
      pos = comma + 1;
    }
    if (row.size() != s.columns.size())
      throw std::runtime_error("ragged CSV row in " + path);
    s.rows.push_back(std::move(row));
  }
  return s;
}

// ---------------------------------------------------------------------------
// Initial data

inline Field initial_field(const ExperimentConfig& cfg, const Grid& g) {
  using config::InitialKind;
  const config::InitialConfig& ini = cfg.initial;
  const double t0 = cfg.t_start;
  Field f(g);

  switch (ini.kind) {
    case InitialKind::soliton:
      f = solutions::gkdv_soliton({cfg.model.p, ini.c, ini.x0}, t0, g);
      break;
    case InitialKind::breather:
      f = solutions::mkdv_breather({ini.alpha, ini.beta, ini.x1, ini.x2}, t0, g);
      break;
    case InitialKind::bo_soliton:
      f = solutions::bo_soliton(ini.c, t0, g, ini.x0);
      break;
    case InitialKind::lump:
      f = solutions::kp_lump({ini.c, ini.beta, ini.x0, ini.y0}, t0, g);
      break;
    case InitialKind::line_soliton:
      f = solutions::kp_line_soliton(ini.c, g, ini.x0);
      break;
    case InitialKind::gaussian:
      for (int jx = 0; jx < g.nx; ++jx) {
        const double rx = g.x(jx) - ini.center_x;
        if (g.ndim == 1) {
          const double z = rx / ini.width;
          f.values[jx] = ini.amplitude * std::exp(-z * z);
        } else {
          for (int jy = 0; jy < g.ny; ++jy) {
            const double ry = g.y(jy) - ini.center_y;
            f.values[g.idx(jx, jy)] =
                ini.amplitude *
                std::exp(-(rx * rx + ry * ry) / (ini.width * ini.width));
          }
        }
      }
      break;
    case InitialKind::file: {
      const snapshot::Snapshot snap = snapshot::read_snapshot(ini.path);
      if (static_cast<int>(snap.ndim) != g.ndim ||
          static_cast<int>(snap.dims[0]) != g.nx ||
          (g.ndim == 2 && static_cast<int>(snap.dims[1]) != g.ny) ||
          snap.lengths[0] != g.lx || (g.ndim == 2 && snap.lengths[1] != g.ly))
        throw std::invalid_argument(
            "snapshot grid does not match the configured grid: " + ini.path);
      if (snap.model_tag != static_cast<std::uint32_t>(cfg.model.family))
        throw std::invalid_argument(
            "snapshot model does not match the configured model: " + ini.path);
      f = snapshot::field_of(snap);
      break;
    }
  }

  // band-limit the datum so products of resolved modes are exact from the
  // first step (the integrator keeps the field in this subspace anyway)
  f = spectral::dealias(f);
  if (cfg.model.family == models::Family::kp) {
    spectral::Spectrum s = spectral::forward(f);
    models::kp_project(g, s);
    f = spectral::inverse_real(g, std::move(s));
  }
  return f;
}

// ---------------------------------------------------------------------------
// Record-time column evaluation, including the t <= 1 limit continuations

namespace detail {

// weights of the t -> 1+ limiting region (see the header comment)
inline Field limit_weights(const config::RegionConfig& rc, const Grid& g) {
  using regions::RegionFamily;
  const regions::RegionSpec& s = rc.spec;
  const double w = rc.smoothing;
  Field out(g);

  auto fill1d = [&](auto&& weight_at) {
    for (int jx = 0; jx < g.nx; ++jx) out.values[jx] = weight_at(g.x(jx));
  };
  auto fill2d = [&](auto&& weight_at) {
    for (int jx = 0; jx < g.nx; ++jx)
      for (int jy = 0; jy < g.ny; ++jy)
        out.values[g.idx(jx, jy)] = weight_at(g.x(jx), g.y(jy));
  };

  switch (s.family) {
    case RegionFamily::kdv_central:
    case RegionFamily::bo_window:
    case RegionFamily::kp_cone:
      // log-divergent windows cover everything in the limit
      for (double& v : out.values) v = 1.0;
      break;
    case RegionFamily::moving_box_1d:
      fill1d([&](double x) {
        return regions::detail::interval_weight(
            x, -static_cast<double>(s.sign), rc.K, w,
            std::abs(x + s.sign) <= rc.K);
      });
      break;
    case RegionFamily::extreme_1d:
      if (s.side == regions::Side::left)
        fill1d([&](double x) {
          return regions::detail::ramp(-x, w, x <= 0.0);
        });
      else
        fill1d([&](double x) {
          return regions::detail::ramp(x - s.C0, w, x > s.C0);
        });
      break;
    case RegionFamily::zk_box:
      fill2d([&](double x, double y) {
        return regions::detail::interval_weight(x, 0.0, rc.K, w,
                                                std::abs(x) < rc.K) *
               regions::detail::interval_weight(y, 0.0, rc.K, w,
                                                std::abs(y) < rc.K);
      });
      break;
    case RegionFamily::kp_box:
      fill2d([&](double x, double y) {
        return regions::detail::interval_weight(x, s.l1, rc.K, w,
                                                std::abs(x - s.l1) <= rc.K) *
               regions::detail::interval_weight(y, s.l2, rc.K, w,
                                                std::abs(y - s.l2) <= rc.K);
      });
      break;
    case RegionFamily::kp_halfplane:
      fill2d([&](double x, double y) {
        const double gval = x + s.sigma3 * y - s.beta;
        return regions::detail::ramp(gval, w, gval >= 0.0);
      });
      break;
  }
  return out;
}

inline double region_column(const config::RegionConfig& rc, const State& st,
                            int power) {
  if (st.t > 1.0)
    return diagnostics::local_mass(st.field, rc.spec, st.t, power,
                                   rc.smoothing, rc.K);
  const Field w = limit_weights(rc, st.field.grid);
  double acc = 0.0;
  for (std::size_t i = 0; i < w.values.size(); ++i) {
    const double u2 = st.field.values[i] * st.field.values[i];
    acc += w.values[i] * (power == 2 ? u2 : u2 * u2);
  }
  return acc * st.field.grid.cell();
}

inline double virial_column(const diagnostics::VirialSpec& vs, const State& st) {
  using Law = diagnostics::VirialSpec::Law;
  if (st.t > 1.0) return diagnostics::virial(st.field, vs, st.t);
  if (vs.law != Law::constant) return 0.0;  // lambda -> inf, tanh(x/lambda) -> 0
  const Grid& g = st.field.grid;
  double acc = 0.0;
  for (int j = 0; j < g.nx; ++j) {
    const double u = st.field.values[j];
    const double q =
        vs.quantity == diagnostics::VirialSpec::Quantity::weighted_u ? u : u * u;
    acc += std::tanh(g.x(j) / vs.lambda0) * q;
  }
  return acc * g.dx();
}

inline double weighted_energy_column(const diagnostics::VirialSpec& vs,
                                     const State& st) {
  using Law = diagnostics::VirialSpec::Law;
  if (vs.law == Law::constant)
    return diagnostics::bo_weighted_energy(st.field, vs.lambda0);
  if (st.t > 1.0)
    return diagnostics::bo_weighted_energy(st.field,
                                           diagnostics::lambda_of(vs, st.t));
  // lambda -> inf limit: the weight is identically 1
  return diagnostics::bo_weighted_energy(st.field,
                                         std::numeric_limits<double>::infinity());
}

inline std::string sanitize(const std::string& s) {
  std::string out;
  for (char ch : s) out += (ch == '\n' || ch == '#') ? ' ' : ch;
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Manifest

struct RunOutcome {
  int status = 0;  // 0 ok, 1 input error, 2 runtime abort
  std::string message;
  double t_reached = 0.0;
  std::size_t records = 0;
};

namespace detail {

inline void write_manifest(const ExperimentConfig& cfg, double stiffness,
                           const std::vector<std::string>& columns,
                           const RunOutcome& oc, bool wrote_last_good,
                           const std::string& path) {
  using config::InitialKind;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  auto num = [&](double v) { return format_number(v); };

  out << "[manifest]\n";
  out << "format = 1\n";
  out << "generator = dlab " << kToolVersion << "\n";
  out << "fftw = " << fftw_version << "\n";

  out << "[model]\n";
  out << "family = " << models::family_name(cfg.model.family) << "\n";
  out << "p = " << cfg.model.p << "\n";
  out << "mu = " << num(cfg.model.mu) << "\n";
  out << "kappa = " << cfg.model.kappa << "\n";

  out << "[grid]\n";
  out << "n_x = " << cfg.nx << "\n";
  out << "length_x = " << num(cfg.lx) << "\n";
  if (cfg.ny) {
    out << "n_y = " << cfg.ny << "\n";
    out << "length_y = " << num(cfg.ly) << "\n";
  }
  out << "dealias_keep_x = " << spectral::dealias_cutoff(cfg.nx) << "\n";
  if (cfg.ny)
    out << "dealias_keep_y = " << spectral::dealias_cutoff(cfg.ny) << "\n";

  out << "[time]\n";
  out << "dt = " << num(cfg.dt) << "\n";
  out << "t_start = " << num(cfg.t_start) << "\n";
  out << "t_end = " << num(cfg.t_end) << "\n";
  out << "record_every = " << num(cfg.record_every) << "\n";
  out << "snapshot_every = " << num(cfg.snapshot_every) << "\n";

  out << "[initial]\n";
  out << "kind = " << config::initial_kind_name(cfg.initial.kind) << "\n";
  const config::InitialConfig& ini = cfg.initial;
  switch (ini.kind) {
    case InitialKind::soliton:
    case InitialKind::bo_soliton:
      out << "c = " << num(ini.c) << "\n";
      out << "x0 = " << num(ini.x0) << "\n";
      break;
    case InitialKind::breather:
      out << "alpha = " << num(ini.alpha) << "\n";
      out << "beta = " << num(ini.beta) << "\n";
      out << "x1 = " << num(ini.x1) << "\n";
      out << "x2 = " << num(ini.x2) << "\n";
      break;
    case InitialKind::lump:
      out << "c = " << num(ini.c) << "\n";
      out << "beta = " << num(ini.beta) << "\n";
      out << "x0 = " << num(ini.x0) << "\n";
      out << "y0 = " << num(ini.y0) << "\n";
      break;
    case InitialKind::line_soliton:
      out << "c = " << num(ini.c) << "\n";
      out << "x0 = " << num(ini.x0) << "\n";
      break;
    case InitialKind::gaussian:
      out << "amplitude = " << num(ini.amplitude) << "\n";
      out << "width = " << num(ini.width) << "\n";
      if (cfg.ny) {
        out << "center_x = " << num(ini.center_x) << "\n";
        out << "center_y = " << num(ini.center_y) << "\n";
      } else {
        out << "center = " << num(ini.center_x) << "\n";
      }
      break;
    case InitialKind::file:
      out << "path = " << detail::sanitize(ini.path) << "\n";
      break;
  }
  out << "seed = " << cfg.seed << "\n";

  for (const auto& rc : cfg.regions) {
    using regions::RegionFamily;
    const regions::RegionSpec& s = rc.spec;
    out << "[region " << rc.id << "]\n";
    out << "family = " << regions::family_name(s.family) << "\n";
    switch (s.family) {
      case RegionFamily::kdv_central:
        out << "c = " << num(s.c) << "\n";
        break;
      case RegionFamily::bo_window:
        out << "c = " << num(s.c) << "\n";
        out << "a = " << num(s.a) << "\n";
        break;
      case RegionFamily::moving_box_1d:
        out << "n = " << num(s.n) << "\n";
        out << "b = " << num(s.b) << "\n";
        out << "sign = " << s.sign << "\n";
        out << "quartic = " << (s.quartic ? "true" : "false") << "\n";
        break;
      case RegionFamily::extreme_1d:
        out << "side = " << (s.side == regions::Side::left ? "left" : "right")
            << "\n";
        out << "epsilon = " << num(s.epsilon) << "\n";
        out << "C0 = " << num(s.C0) << "\n";
        break;
      case RegionFamily::zk_box:
        out << "b = " << num(s.b) << "\n";
        out << "r = " << num(s.r) << "\n";
        break;
      case RegionFamily::kp_box:
        out << "b = " << num(s.b) << "\n";
        out << "r = " << num(s.r) << "\n";
        out << "m1 = " << num(s.m1) << "\n";
        out << "m2 = " << num(s.m2) << "\n";
        out << "l1 = " << num(s.l1) << "\n";
        out << "l2 = " << num(s.l2) << "\n";
        break;
      case RegionFamily::kp_cone:
        out << "sigma1 = " << num(s.sigma1) << "\n";
        out << "sigma2 = " << num(s.sigma2) << "\n";
        out << "epsilon = " << num(s.epsilon) << "\n";
        break;
      case RegionFamily::kp_halfplane:
        out << "sigma3 = " << num(s.sigma3) << "\n";
        out << "beta = " << num(s.beta) << "\n";
        break;
    }
    out << "K = " << num(rc.K) << "\n";
    out << "smoothing = " << num(rc.smoothing) << "\n";
  }

  if (cfg.virial) {
    const diagnostics::VirialSpec& vs = *cfg.virial;
    out << "[virial]\n";
    const char* law = vs.law == diagnostics::VirialSpec::Law::kdv  ? "kdv"
                      : vs.law == diagnostics::VirialSpec::Law::bo ? "bo"
                                                                   : "constant";
    out << "law = " << law << "\n";
    out << "quantity = "
        << (vs.quantity == diagnostics::VirialSpec::Quantity::weighted_u
                ? "weighted_u"
                : "weighted_u2")
        << "\n";
    out << "c = " << num(vs.c) << "\n";
    out << "a = " << num(vs.a) << "\n";
    out << "lambda0 = " << num(vs.lambda0) << "\n";
  }

  out << "[derived]\n";
  out << "stiffness = " << num(stiffness) << "\n";
  out << "columns = ";
  for (std::size_t i = 0; i < columns.size(); ++i)
    out << (i ? "," : "") << columns[i];
  out << "\n";

  out << "[result]\n";
  out << "status = " << (oc.status == 0 ? "ok" : "abort") << "\n";
  out << "t_reached = " << num(oc.t_reached) << "\n";
  out << "records = " << oc.records << "\n";
  if (oc.status != 0) {
    out << "[abort]\n";
    out << "t = " << num(oc.t_reached) << "\n";
    out << "error = " << detail::sanitize(oc.message) << "\n";
    if (wrote_last_good) out << "snapshot = last_good.bin\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Run

inline RunOutcome run(const ExperimentConfig& cfg, const std::string& outdir_s) {
  namespace fs = std::filesystem;
  RunOutcome oc;
  oc.t_reached = cfg.t_start;

  const fs::path outdir(outdir_s);
  std::error_code ec;
  fs::create_directories(outdir, ec);
  if (!fs::is_directory(outdir)) {
    oc.status = 2;
    oc.message = "cannot create output directory " + outdir_s;
    return oc;
  }

  Grid g = cfg.ny ? spectral::make_grid_2d(cfg.nx, cfg.ny, cfg.lx, cfg.ly)
                  : spectral::make_grid_1d(cfg.nx, cfg.lx);

  State s0{Field(g), cfg.t_start, cfg.model};
  try {
    s0.field = initial_field(cfg, g);
  } catch (const std::exception& e) {
    oc.status = 1;
    oc.message = e.what();
    return oc;
  }

  const stepper::StepPlan plan = stepper::make_plan(cfg.model, g, cfg.dt);

  const spectral::Multiplier lin = models::linear_symbol(cfg.model, g);
  double max_sym = 0.0;
  for (const auto& z : lin.symbol) max_sym = std::max(max_sym, std::abs(z));
  const double stiffness = cfg.dt * max_sym;

  // column layout (fixed order)
  const bool is_kp = cfg.model.family == models::Family::kp;
  const bool u4_cols =
      cfg.model.family == models::Family::gkdv && cfg.model.p == 4;
  const bool virial_cols = cfg.virial.has_value();
  const bool identity_cols =
      virial_cols && cfg.model.family == models::Family::gkdv &&
      cfg.model.p == 2 &&
      cfg.virial->quantity == diagnostics::VirialSpec::Quantity::weighted_u;
  const bool weighted_energy_col =
      virial_cols && cfg.model.family == models::Family::bo;

  Series series;
  series.columns = {"t", "mass", "energy"};
  if (is_kp) series.columns.push_back("momentum");
  for (const auto& rc : cfg.regions) {
    series.columns.push_back(rc.id);
    if (u4_cols) series.columns.push_back(rc.id + "_u4");
  }
  if (virial_cols) series.columns.push_back("virial");
  if (identity_cols) {
    series.columns.push_back("virial_lhs");
    series.columns.push_back("virial_rhs");
  }
  if (weighted_energy_col) series.columns.push_back("bo_weighted_energy");

  std::optional<State> last_recorded;

  auto record = [&](const State& st) {
    std::vector<double> row;
    row.reserve(series.columns.size());
    row.push_back(st.t);
    row.push_back(diagnostics::mass(st.field));
    row.push_back(diagnostics::energy(cfg.model, st.field));
    if (is_kp) row.push_back(diagnostics::momentum_kp(st.field));
    for (const auto& rc : cfg.regions) {
      row.push_back(detail::region_column(rc, st, 2));
      if (u4_cols) row.push_back(detail::region_column(rc, st, 4));
    }
    if (virial_cols) row.push_back(detail::virial_column(*cfg.virial, st));
    if (identity_cols) {
      if (st.t > 1.0) {
        const diagnostics::VirialRate rate =
            diagnostics::virial_rate_identity(st, *cfg.virial, plan);
        row.push_back(rate.lhs);
        row.push_back(rate.rhs);
      } else {
        // t -> 1+ limit of both sides (the window dilates to the whole
        // line and the functional vanishes)
        row.push_back(0.0);
        row.push_back(0.0);
      }
    }
    if (weighted_energy_col)
      row.push_back(detail::weighted_energy_column(*cfg.virial, st));
    series.rows.push_back(std::move(row));
    last_recorded = st;

    if (cfg.snapshot_every > 0.0) {
      const double q = (st.t - cfg.t_start) / cfg.snapshot_every;
      const long qi = std::lround(q);
      if (std::abs(q - qi) < 1e-6) {
        char name[40];
        std::snprintf(name, sizeof name, "snapshot_%06ld.bin", qi);
        snapshot::write_snapshot(snapshot::snapshot_of(st),
                                 (outdir / name).string());
      }
    }
  };

  bool wrote_last_good = false;
  try {
    stepper::evolve(s0, plan, cfg.t_end,
                    {stepper::Observer{cfg.record_every, record}});
    oc.t_reached = cfg.t_end;
  } catch (const stepper::AbortError& e) {
    oc.status = 2;
    oc.message = e.what();
    oc.t_reached = e.t;
    if (last_recorded) {
      snapshot::write_snapshot(snapshot::snapshot_of(*last_recorded),
                               (outdir / "last_good.bin").string());
      wrote_last_good = true;
    }
  }

  oc.records = series.rows.size();
  write_csv(series, (outdir / "series.csv").string());
  detail::write_manifest(cfg, stiffness, series.columns, oc, wrote_last_good,
                         (outdir / "manifest.txt").string());
  return oc;
}

// ---------------------------------------------------------------------------
// Sweep

inline int default_workers() {
  if (const char* env = std::getenv("DLAB_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

inline std::optional<std::string> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// run every config matching the glob pattern, each into
// <outroot>/<config stem>/, across `workers` threads. Returns the worst
// per-run status (0 ok, 1 validation, 2 abort).
inline int sweep(const std::string& pattern, const std::string& outroot,
                 int workers, std::ostream& log) {
  namespace fs = std::filesystem;
  glob_t gl{};
  const int rc = ::glob(pattern.c_str(), 0, nullptr, &gl);
  if (rc == GLOB_NOMATCH) {
    globfree(&gl);
    log << "sweep: no configs match \"" << pattern << "\"\n";
    return 1;
  }
  if (rc != 0) {
    globfree(&gl);
    log << "sweep: glob failed for \"" << pattern << "\"\n";
    return 2;
  }
  std::vector<std::string> paths(gl.gl_pathv, gl.gl_pathv + gl.gl_pathc);
  globfree(&gl);

  // per-run output directories from the file stems; disambiguate collisions
  std::vector<std::string> outs;
  std::map<std::string, int> used;
  for (const auto& p : paths) {
    std::string stem = fs::path(p).stem().string();
    const int k = used[stem]++;
    if (k > 0) stem += "_" + std::to_string(k + 1);
    outs.push_back((fs::path(outroot) / stem).string());
  }

  std::atomic<std::size_t> next{0};
  std::atomic<int> worst{0};
  std::mutex log_mu;

  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= paths.size()) return;
      int status = 0;
      std::string note;
      const auto text = slurp(paths[i]);
      if (!text) {
        status = 1;
        note = "cannot read file";
      } else {
        const config::ParseResult pr = config::parse_config(*text);
        if (!pr.ok()) {
          status = 1;
          note = std::to_string(pr.errors.size()) + " validation error(s)";
        } else {
          const RunOutcome oc = run(*pr.config, outs[i]);
          status = oc.status;
          note = status == 0 ? "ok" : oc.message;
        }
      }
      int cur = worst.load();
      while (cur < status && !worst.compare_exchange_weak(cur, status)) {
      }
      std::lock_guard<std::mutex> lock(log_mu);
      log << paths[i] << " -> "
          << (status == 0 ? "ok" : status == 1 ? "invalid" : "abort");
      if (status != 0) log << " (" << note << ")";
      log << "\n";
    }
  };

  const int nthreads =
      std::max(1, std::min<int>(workers, static_cast<int>(paths.size())));
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return worst.load();
}

// ---------------------------------------------------------------------------
// Inspect

inline int inspect(const std::string& path, std::ostream& out) {
  snapshot::Snapshot s;
  try {
    s = snapshot::read_snapshot(path);
  } catch (const std::exception& e) {
    out << "error: " << e.what() << "\n";
    return 1;
  }
  out << "file:    " << path << "\n";
  out << "version: " << s.version << "\n";
  out << "dims:    " << s.dims[0];
  if (s.ndim == 2) out << " x " << s.dims[1];
  out << "\n";
  out << "lengths: " << format_number(s.lengths[0]);
  if (s.ndim == 2) out << " x " << format_number(s.lengths[1]);
  out << "\n";
  out << "t:       " << format_number(s.t) << "\n";
  out << "model:   "
      << models::family_name(static_cast<models::Family>(s.model_tag)) << "\n";
  double lo = std::numeric_limits<double>::infinity(), hi = -lo, sq = 0.0;
  for (double v : s.payload) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    sq += v * v;
  }
  double cell = 1.0;
  for (std::uint32_t i = 0; i < s.ndim; ++i)
    cell *= s.lengths[i] / static_cast<double>(s.dims[i]);
  out << "min/max: " << format_number(lo) << " / " << format_number(hi) << "\n";
  out << "mass:    " << format_number(0.5 * sq * cell) << "\n";
  return 0;
}

}  // namespace dlab::lab
