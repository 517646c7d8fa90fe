#pragma once

// Experiment configuration files: line-oriented UTF-8 documents with
// bracketed sections and key = value pairs, '#' starting a comment.
//
//   [model]
//   family = gkdv      # gkdv | gardner | bo | zk2d | kp
//   p = 2
//   [grid]
//   n_x = 2048
//   length_x = 201.06192982974676
//   [time]
//   dt = 1e-3
//   t_end = 10
//   record_every = 0.5
//   [initial]
//   kind = soliton     # soliton | breather | bo_soliton | lump |
//                      # line_soliton | gaussian | file
//   c = 1
//   [region central]   # one section per tracked region, any identifier
//   family = kdv_central
//   c = 1
//   K = 1
//
// Parsing never throws: the result carries either a fully validated
// ExperimentConfig or a list of errors with line numbers. Region parameter
// constraints are delegated to regions::validate and surfaced verbatim.

#include <cctype>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dlab/diagnostics.hpp"
#include "dlab/models.hpp"
#include "dlab/regions.hpp"

namespace dlab::config {

struct ConfigError {
  int line = 0;  // 1-based; 0 for document-level errors
  std::string message;
};

enum class InitialKind {
  soliton,
  breather,
  bo_soliton,
  lump,
  line_soliton,
  gaussian,
  file
};

struct InitialConfig {
  InitialKind kind = InitialKind::gaussian;
  double c = 1.0;                  // soliton / bo_soliton / lump / line_soliton
  double x0 = 0.0, y0 = 0.0;       // traveling-wave offsets
  double alpha = 1.0, beta = 0.0;  // breather parameters; beta also the lump boost
  double x1 = 0.0, x2 = 0.0;       // breather phases
  double amplitude = 1.0, width = 1.0, center_x = 0.0, center_y = 0.0;
  std::string path;                // kind == file
};

struct RegionConfig {
  std::string id;
  regions::RegionSpec spec;
  double K = 1.0;
  double smoothing = 0.0;
  int line = 0;  // section header line, cited in validation messages
};

struct ExperimentConfig {
  models::ModelSpec model;
  int nx = 0, ny = 0;
  double lx = 0.0, ly = 0.0;
  double dt = 0.0, t_start = 0.0, t_end = 0.0;
  double record_every = 0.0, snapshot_every = 0.0;
  InitialConfig initial;
  long seed = 0;
  std::vector<RegionConfig> regions;
  std::optional<diagnostics::VirialSpec> virial;
};

struct ParseResult {
  std::optional<ExperimentConfig> config;
  std::vector<ConfigError> errors;
  bool ok() const { return config.has_value() && errors.empty(); }
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

inline bool is_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
    return false;
  for (char ch : s)
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'))
      return false;
  return true;
}

struct Entry {
  std::string value;
  int line = 0;
  mutable bool used = false;
};

struct Section {
  std::string name;  // "model", "grid", ..., "region"
  std::string id;    // region identifier, empty otherwise
  int line = 0;
  std::map<std::string, Entry> entries;
};

// typed access to one section's entries, accumulating errors
class Reader {
 public:
  Reader(const Section& sec, std::vector<ConfigError>& errs)
      : sec_(sec), errs_(errs) {}

  bool has(const std::string& key) const { return sec_.entries.count(key); }

  int line_of(const std::string& key) const {
    auto it = sec_.entries.find(key);
    return it == sec_.entries.end() ? sec_.line : it->second.line;
  }

  std::string str(const std::string& key, const std::string& fallback) {
    const Entry* e = take(key);
    return e ? e->value : fallback;
  }

  double real(const std::string& key, double fallback) {
    const Entry* e = take(key);
    if (!e) return fallback;
    char* end = nullptr;
    const double v = std::strtod(e->value.c_str(), &end);
    if (end == e->value.c_str() || *end != '\0') {
      fail(e->line, "value of \"" + key + "\" is not a number: \"" + e->value + "\"");
      return fallback;
    }
    return v;
  }

  long integer(const std::string& key, long fallback) {
    const Entry* e = take(key);
    if (!e) return fallback;
    char* end = nullptr;
    const long v = std::strtol(e->value.c_str(), &end, 10);
    if (end == e->value.c_str() || *end != '\0') {
      fail(e->line, "value of \"" + key + "\" is not an integer: \"" + e->value + "\"");
      return fallback;
    }
    return v;
  }

  bool boolean(const std::string& key, bool fallback) {
    const Entry* e = take(key);
    if (!e) return fallback;
    if (e->value == "true") return true;
    if (e->value == "false") return false;
    fail(e->line, "value of \"" + key + "\" must be true or false");
    return fallback;
  }

  // value must be one of the listed words; returns its index, or -1
  int keyword(const std::string& key, const std::vector<std::string>& words,
              int fallback_index) {
    const Entry* e = take(key);
    if (!e) return fallback_index;
    for (std::size_t i = 0; i < words.size(); ++i)
      if (words[i] == e->value) return static_cast<int>(i);
    std::string allowed;
    for (const auto& w : words) allowed += (allowed.empty() ? "" : ", ") + w;
    fail(e->line, "value of \"" + key + "\" must be one of: " + allowed);
    return -1;
  }

  void require(const std::string& key) {
    if (!has(key))
      fail(sec_.line, section_label() + " is missing required key \"" + key + "\"");
  }

  // flag any keys never consumed by a typed accessor
  void finish() {
    for (const auto& [key, entry] : sec_.entries)
      if (!entry.used)
        fail(entry.line, "unknown key \"" + key + "\" in " + section_label());
  }

  void fail(int line, const std::string& msg) {
    errs_.push_back(ConfigError{line, msg});
  }

  std::string section_label() const {
    return sec_.id.empty() ? "[" + sec_.name + "]"
                           : "[" + sec_.name + " " + sec_.id + "]";
  }

 private:
  const Entry* take(const std::string& key) {
    auto it = sec_.entries.find(key);
    if (it == sec_.entries.end()) return nullptr;
    it->second.used = true;
    return &it->second;
  }

  const Section& sec_;
  std::vector<ConfigError>& errs_;
};

inline bool is_power_of_two(long n) { return n > 0 && (n & (n - 1)) == 0; }

inline bool is_multiple(double value, double base) {
  if (!(base > 0.0)) return false;
  const double q = value / base;
  return std::abs(q - std::llround(q)) <= 1e-9 * (1.0 + std::abs(q));
}

}  // namespace detail

inline const char* initial_kind_name(InitialKind k) {
  switch (k) {
    case InitialKind::soliton: return "soliton";
    case InitialKind::breather: return "breather";
    case InitialKind::bo_soliton: return "bo_soliton";
    case InitialKind::lump: return "lump";
    case InitialKind::line_soliton: return "line_soliton";
    case InitialKind::gaussian: return "gaussian";
    case InitialKind::file: return "file";
  }
  return "?";
}

inline ParseResult parse_config(const std::string& text) {
  using detail::Entry;
  using detail::Reader;
  using detail::Section;
  ParseResult out;
  auto fail = [&](int line, const std::string& msg) {
    out.errors.push_back(ConfigError{line, msg});
  };

  // ---- pass 1: lines -> sections ------------------------------------------
  static const std::set<std::string> kSectionNames = {
      "model", "grid", "time", "initial", "region", "virial"};
  std::vector<Section> sections;
  Section* cur = nullptr;
  std::map<std::string, int> singleton_lines;  // non-region sections seen
  std::map<std::string, int> region_lines;     // region ids seen

  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string line = text.substr(
        pos, nl == std::string::npos ? std::string::npos : nl - pos);
    pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
    ++lineno;

    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        fail(lineno, "unterminated section header");
        cur = nullptr;
        continue;
      }
      const std::string inner = detail::trim(line.substr(1, line.size() - 2));
      const std::size_t sp = inner.find_first_of(" \t");
      const std::string name =
          detail::trim(sp == std::string::npos ? inner : inner.substr(0, sp));
      const std::string id =
          detail::trim(sp == std::string::npos ? "" : inner.substr(sp));
      if (!kSectionNames.count(name)) {
        fail(lineno, "unknown section [" + inner + "]");
        cur = nullptr;
        continue;
      }
      if (name == "region") {
        if (!detail::is_identifier(id)) {
          fail(lineno, "region section needs an identifier: [region <id>]");
          cur = nullptr;
          continue;
        }
        auto [it, fresh] = region_lines.emplace(id, lineno);
        if (!fresh) {
          fail(lineno, "duplicate region id \"" + id + "\" (first defined at line " +
                           std::to_string(it->second) + ")");
          cur = nullptr;
          continue;
        }
      } else {
        if (!id.empty()) {
          fail(lineno, "section [" + name + "] does not take an identifier");
          cur = nullptr;
          continue;
        }
        auto [it, fresh] = singleton_lines.emplace(name, lineno);
        if (!fresh) {
          fail(lineno, "duplicate section [" + name + "] (first defined at line " +
                           std::to_string(it->second) + ")");
          cur = nullptr;
          continue;
        }
      }
      sections.push_back(Section{name, name == "region" ? id : "", lineno, {}});
      cur = &sections.back();
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      fail(lineno, "expected \"key = value\" or a [section] header");
      continue;
    }
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (!detail::is_identifier(key)) {
      fail(lineno, "invalid key name \"" + key + "\"");
      continue;
    }
    if (value.empty()) {
      fail(lineno, "key \"" + key + "\" has an empty value");
      continue;
    }
    if (!cur) {
      fail(lineno, "key \"" + key + "\" appears before any [section] header");
      continue;
    }
    auto [it, fresh] = cur->entries.emplace(key, Entry{value, lineno, false});
    if (!fresh)
      fail(lineno, "duplicate key \"" + key + "\" (previous definition at line " +
                       std::to_string(it->second.line) + ")");
  }

  // ---- pass 2: sections -> typed config -----------------------------------
  ExperimentConfig cfg;
  auto find_section = [&](const std::string& name) -> const Section* {
    for (const auto& s : sections)
      if (s.name == name) return &s;
    return nullptr;
  };
  for (const char* req : {"model", "grid", "time", "initial"})
    if (!find_section(req))
      fail(0, std::string("missing required section [") + req + "]");

  // [model]
  if (const Section* sec = find_section("model")) {
    Reader r(*sec, out.errors);
    r.require("family");
    const int fam = r.keyword("family", {"gkdv", "gardner", "bo", "zk2d", "kp"}, -1);
    if (fam >= 0) cfg.model.family = static_cast<models::Family>(fam);
    cfg.model.p = static_cast<int>(r.integer("p", 2));
    cfg.model.mu = r.real("mu", 0.0);
    const long kappa = r.integer("kappa", -1);
    cfg.model.kappa = static_cast<int>(kappa);
    if (fam >= 0) {
      if (cfg.model.family == models::Family::gkdv &&
          (cfg.model.p < 2 || cfg.model.p > 5))
        r.fail(r.line_of("p"), "p must lie in [2, 5]");
      if (cfg.model.family == models::Family::gardner && cfg.model.mu < 0)
        r.fail(r.line_of("mu"), "mu must be nonnegative");
      if (cfg.model.family == models::Family::kp && kappa != 1 && kappa != -1)
        r.fail(r.line_of("kappa"), "kappa must be +1 or -1");
    }
    r.finish();
  }
  const int dim = models::family_dim(cfg.model.family);

  // [grid]
  if (const Section* sec = find_section("grid")) {
    Reader r(*sec, out.errors);
    r.require("n_x");
    r.require("length_x");
    const long nx = r.integer("n_x", 0);
    cfg.lx = r.real("length_x", 0.0);
    if (r.has("n_x") && (!detail::is_power_of_two(nx) || nx < 8))
      r.fail(r.line_of("n_x"), "n_x must be a power of two, at least 8");
    cfg.nx = static_cast<int>(nx);
    if (r.has("length_x") && !(cfg.lx > 0.0))
      r.fail(r.line_of("length_x"), "length_x must be positive");
    if (dim == 2) {
      r.require("n_y");
      r.require("length_y");
      const long ny = r.integer("n_y", 0);
      cfg.ly = r.real("length_y", 0.0);
      if (r.has("n_y") && (!detail::is_power_of_two(ny) || ny < 8))
        r.fail(r.line_of("n_y"), "n_y must be a power of two, at least 8");
      cfg.ny = static_cast<int>(ny);
      if (r.has("length_y") && !(cfg.ly > 0.0))
        r.fail(r.line_of("length_y"), "length_y must be positive");
    } else {
      for (const char* k : {"n_y", "length_y"})
        if (r.has(k))
          r.fail(r.line_of(k),
                 std::string("key \"") + k + "\" is only valid for 2D models");
    }
    r.finish();
  }

  // [time]
  if (const Section* sec = find_section("time")) {
    Reader r(*sec, out.errors);
    r.require("dt");
    r.require("t_end");
    r.require("record_every");
    cfg.dt = r.real("dt", 0.0);
    cfg.t_start = r.real("t_start", 0.0);
    cfg.t_end = r.real("t_end", 0.0);
    cfg.record_every = r.real("record_every", 0.0);
    cfg.snapshot_every = r.real("snapshot_every", 0.0);
    if (r.has("dt") && !(cfg.dt > 0.0))
      r.fail(r.line_of("dt"), "dt must be positive");
    if (!(cfg.t_end > cfg.t_start))
      r.fail(r.line_of("t_end"), "t_end must exceed t_start");
    if (cfg.dt > 0.0) {
      if (!(cfg.record_every > 0.0) ||
          !detail::is_multiple(cfg.record_every, cfg.dt))
        r.fail(r.line_of("record_every"),
               "record_every must be a positive multiple of dt");
      if (cfg.snapshot_every < 0.0 ||
          (cfg.snapshot_every > 0.0 &&
           !detail::is_multiple(cfg.snapshot_every, cfg.record_every)))
        r.fail(r.line_of("snapshot_every"),
               "snapshot_every must be 0 or a multiple of record_every");
    }
    r.finish();
  }

  // [initial]
  if (const Section* sec = find_section("initial")) {
    Reader r(*sec, out.errors);
    r.require("kind");
    const int kind = r.keyword("kind",
                               {"soliton", "breather", "bo_soliton", "lump",
                                "line_soliton", "gaussian", "file"},
                               -1);
    InitialConfig& ini = cfg.initial;
    if (kind >= 0) ini.kind = static_cast<InitialKind>(kind);
    cfg.seed = r.integer("seed", 0);

    auto expect_family = [&](bool ok_family, const char* need) {
      if (kind >= 0 && !ok_family)
        r.fail(r.line_of("kind"),
               std::string("initial kind \"") + initial_kind_name(ini.kind) +
                   "\" requires a " + need + " model");
    };
    using models::Family;
    switch (ini.kind) {
      case InitialKind::soliton:
        expect_family(cfg.model.family == Family::gkdv, "gkdv");
        ini.c = r.real("c", 1.0);
        ini.x0 = r.real("x0", 0.0);
        if (!(ini.c > 0)) r.fail(r.line_of("c"), "c must be positive");
        break;
      case InitialKind::breather:
        expect_family(
            cfg.model.family == Family::gkdv && cfg.model.p == 3, "gkdv p=3");
        ini.alpha = r.real("alpha", 1.0);
        ini.beta = r.real("beta", 1.0);
        ini.x1 = r.real("x1", 0.0);
        ini.x2 = r.real("x2", 0.0);
        if (!(ini.alpha > 0)) r.fail(r.line_of("alpha"), "alpha must be positive");
        if (!(ini.beta > 0)) r.fail(r.line_of("beta"), "beta must be positive");
        break;
      case InitialKind::bo_soliton:
        expect_family(cfg.model.family == Family::bo, "bo");
        ini.c = r.real("c", 1.0);
        ini.x0 = r.real("x0", 0.0);
        if (!(ini.c > 0)) r.fail(r.line_of("c"), "c must be positive");
        break;
      case InitialKind::lump:
        expect_family(cfg.model.family == Family::kp && cfg.model.kappa == -1,
                      "kp kappa=-1");
        ini.c = r.real("c", 1.0);
        ini.beta = r.real("beta", 0.0);
        ini.x0 = r.real("x0", 0.0);
        ini.y0 = r.real("y0", 0.0);
        if (!(ini.c > 0)) r.fail(r.line_of("c"), "c must be positive");
        break;
      case InitialKind::line_soliton:
        expect_family(cfg.model.family == Family::kp, "kp");
        ini.c = r.real("c", 1.0);
        ini.x0 = r.real("x0", 0.0);
        if (!(ini.c > 0)) r.fail(r.line_of("c"), "c must be positive");
        break;
      case InitialKind::gaussian:
        ini.amplitude = r.real("amplitude", 1.0);
        ini.width = r.real("width", 1.0);
        ini.center_x = r.real(dim == 1 ? "center" : "center_x", 0.0);
        if (dim == 2) ini.center_y = r.real("center_y", 0.0);
        if (!(ini.width > 0)) r.fail(r.line_of("width"), "width must be positive");
        break;
      case InitialKind::file:
        r.require("path");
        ini.path = r.str("path", "");
        break;
    }
    r.finish();
  }

  // [region <id>] sections, in file order
  for (const auto& sec : sections) {
    if (sec.name != "region") continue;
    Reader r(sec, out.errors);
    RegionConfig rc;
    rc.id = sec.id;
    rc.line = sec.line;
    r.require("family");
    const int fam = r.keyword("family",
                              {"kdv_central", "bo_window", "moving_box_1d",
                               "extreme_1d", "zk_box", "kp_box", "kp_cone",
                               "kp_halfplane"},
                              -1);
    if (fam < 0) continue;  // keyword already reported
    rc.spec.family = static_cast<regions::RegionFamily>(fam);
    regions::RegionSpec& s = rc.spec;
    s.c = r.real("c", s.c);
    s.a = r.real("a", s.a);
    s.n = r.real("n", s.n);
    s.b = r.real("b", s.b);
    s.sign = static_cast<int>(r.integer("sign", s.sign));
    s.quartic = r.boolean("quartic", s.quartic);
    s.epsilon = r.real("epsilon", s.epsilon);
    s.C0 = r.real("C0", s.C0);
    const int side = r.keyword("side", {"left", "right"},
                               s.side == regions::Side::left ? 0 : 1);
    if (side >= 0) s.side = side == 0 ? regions::Side::left : regions::Side::right;
    s.r = r.real("r", s.r);
    s.m1 = r.real("m1", s.m1);
    s.m2 = r.real("m2", s.m2);
    s.l1 = r.real("l1", s.l1);
    s.l2 = r.real("l2", s.l2);
    s.sigma1 = r.real("sigma1", s.sigma1);
    s.sigma2 = r.real("sigma2", s.sigma2);
    s.sigma3 = r.real("sigma3", s.sigma3);
    s.beta = r.real("beta", s.beta);
    rc.K = r.real("K", 1.0);
    rc.smoothing = r.real("smoothing", 0.0);
    if (!(rc.K > 0)) r.fail(r.line_of("K"), "K must be positive");
    if (rc.smoothing < 0) r.fail(r.line_of("smoothing"), "smoothing must be nonnegative");
    if (regions::dimension(s.family) != dim)
      r.fail(sec.line, "region \"" + rc.id + "\" family " +
                           regions::family_name(s.family) + " is " +
                           std::to_string(regions::dimension(s.family)) +
                           "D but the model is " + std::to_string(dim) + "D");
    for (const auto& viol : regions::validate(s))
      r.fail(sec.line, "region \"" + rc.id + "\" violates " + viol.constraint +
                           " (got " + std::to_string(viol.value) + ")");
    r.finish();
    cfg.regions.push_back(std::move(rc));
  }

  // [virial]
  if (const Section* sec = find_section("virial")) {
    Reader r(*sec, out.errors);
    diagnostics::VirialSpec vs;
    r.require("law");
    const int law = r.keyword("law", {"kdv", "bo", "constant"}, -1);
    if (law >= 0) vs.law = static_cast<diagnostics::VirialSpec::Law>(law);
    const int q = r.keyword("quantity", {"weighted_u", "weighted_u2"}, 0);
    if (q >= 0) vs.quantity = static_cast<diagnostics::VirialSpec::Quantity>(q);
    vs.c = r.real("c", 1.0);
    vs.a = r.real("a", 0.0);
    vs.lambda0 = r.real("lambda0", 1.0);
    if (vs.law == diagnostics::VirialSpec::Law::bo) {
      if (!(vs.c > 0)) r.fail(r.line_of("c"), "c must be positive");
      if (!(vs.a >= 0.0 && vs.a < 1.0))
        r.fail(r.line_of("a"), "a must lie in [0, 1)");
    }
    if (vs.law == diagnostics::VirialSpec::Law::constant && !(vs.lambda0 > 0))
      r.fail(r.line_of("lambda0"), "lambda0 must be positive");
    if (dim != 1) r.fail(sec->line, "[virial] applies to 1D models only");
    r.finish();
    cfg.virial = vs;
  }

  if (out.errors.empty()) out.config = std::move(cfg);
  return out;
}

}  // namespace dlab::config
