#pragma once

// Run configuration: an INI-like key=value document parsed into a fully
// validated RunConfig, plus the shared derivation formulas (grid spacing,
// time step, box extents, harmonic count) every front-end mode uses.
//
// Document shape:
//   mode=run1d                 # top-level, the only required key
//   [packet]   shape q x0 y0 delta
//   [potential] shape v0 w
//   [evolution] mass dt t_final dx box_half r_max l_max
//   [output]   dir snapshots profiles observables profile_field seed_label
//   [analysis] prominence region_lo region_hi window_t_min window_t_max
//              input_dir compare_window
// `#` starts a comment, blank lines are skipped, unknown or duplicate keys
// are hard errors carrying the key name and line number.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "wavepacket/cayley.hpp"
#include "wavepacket/errors.hpp"
#include "wavepacket/model.hpp"
#include "wavepacket/partial_waves.hpp"

namespace wavepacket {

enum class RunMode { run1d, run2d, oracle, analyze, compare };

inline const char* to_string(RunMode m) {
  switch (m) {
    case RunMode::run1d: return "run1d";
    case RunMode::run2d: return "run2d";
    case RunMode::oracle: return "oracle";
    case RunMode::analyze: return "analyze";
    case RunMode::compare: return "compare";
  }
  return "?";
}

struct RunConfig {
  RunMode mode = RunMode::run1d;
  PacketSpec packet;
  PotentialSpec potential;
  double mass = 20.0;
  double dt = 0.0;        // 0 = derive as mass*dx^2/2
  double t_final = 200.0;
  double dx = 0.0;        // 0 = derive as min(well width, packet width)/20
  double box_half = 0.0;  // 0 = derive from launch point, drift and spread
  double r_max = 0.0;     // 0 = same derivation, radial
  int l_max = 0;          // 0 = 50, raised to 70 for impact parameter >= 2.5
  std::vector<double> snapshot_times;               // empty = {t/4, t/2, 3t/4, t}
  std::vector<std::pair<double, double>> profiles;  // (angle deg, time); empty = 0/90/180 at t_final
  bool obs_norm = true;
  bool obs_energy = true;
  bool obs_center = false;
  bool obs_per_l = false;
  ProfileField profile_field = ProfileField::sqrt_scaled;
  std::string seed_label;
  std::string output_dir = "out";
  std::vector<double> q_values;   // momentum sweep (run2d only when > 1 entry)
  std::vector<double> y0_values;  // impact-parameter sweep (run2d only)
  bool l_max_explicit = false;

  // analysis / comparison knobs
  double prominence = 0.05;
  double region_lo = std::numeric_limits<double>::quiet_NaN();  // NaN = data start
  double region_hi = std::numeric_limits<double>::quiet_NaN();  // NaN = -5 * well width
  double window_t_min = 0.0;  // 0 = pick from the data range
  double window_t_max = 0.0;
  std::string input_dir;
  double compare_window = 0.0;  // 0 = 10 * |x0|
};

// ---------------------------------------------------------------------------
// Derived quantities. Kept here so the runner, the tests, and the acceptance
// harness all agree on what "default" means.

// Width of a freely spreading gaussian packet after time t.
inline double spread_width(double delta, double mass, double t) {
  const double u = t / (2.0 * mass * delta * delta);
  return delta * std::sqrt(1.0 + u * u);
}

inline double resolved_dx(const RunConfig& c) {
  if (c.dx > 0.0) return c.dx;
  return std::min(c.potential.width, c.packet.width) / 20.0;
}

inline double resolved_dt(const RunConfig& c, double dx) {
  if (c.dt > 0.0) return c.dt;
  return 0.5 * c.mass * dx * dx;
}

// Half-width of the 1D box: far enough left to hold the launch point and far
// enough right that drift plus twenty spread widths still fit.
inline double resolved_box_half(const RunConfig& c) {
  if (c.box_half > 0.0) return c.box_half;
  const double v = std::abs(c.packet.q) / c.mass;
  const double lo = c.packet.x0 - 20.0;
  const double hi =
      v * c.t_final + 20.0 * spread_width(c.packet.width, c.mass, c.t_final);
  return std::max(std::abs(lo), std::abs(hi));
}

inline double resolved_r_max(const RunConfig& c) {
  if (c.r_max > 0.0) return c.r_max;
  const double v = std::abs(c.packet.q) / c.mass;
  const double rho0 = std::hypot(c.packet.x0, c.packet.y0);
  return rho0 + v * c.t_final +
         20.0 * spread_width(c.packet.width, c.mass, c.t_final);
}

inline int resolved_l_max(const RunConfig& c, double y0) {
  if (c.l_max_explicit) return c.l_max;
  return std::abs(y0) >= 2.5 ? 70 : 50;
}

inline double resolved_compare_window(const RunConfig& c) {
  if (c.compare_window > 0.0) return c.compare_window;
  return 10.0 * std::abs(c.packet.x0);
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

struct ConfigEntry {
  std::string value;
  int line = 0;  // 0 means supplied as a command-line override
  bool used = false;
};

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

inline std::string where(int line) {
  return line > 0 ? "(line " + std::to_string(line) + ")" : "(override)";
}

using ConfigMap = std::map<std::string, ConfigEntry>;

inline void insert_entry(ConfigMap& out, const std::string& section,
                         const std::string& line, int lineno) {
  const auto eq = line.find('=');
  if (eq == std::string::npos)
    throw ConfigError("config: expected key=value " + where(lineno));
  const std::string key = trim(line.substr(0, eq));
  const std::string value = trim(line.substr(eq + 1));
  if (key.empty())
    throw ConfigError("config: empty key name " + where(lineno));
  const std::string full = section.empty() ? key : section + "." + key;
  auto [it, fresh] = out.emplace(full, ConfigEntry{value, lineno, false});
  if (!fresh)
    throw ConfigError("config: duplicate key '" + full + "' " + where(lineno) +
                      ", first set " + where(it->second.line));
}

inline ConfigMap parse_raw(const std::string& text) {
  ConfigMap out;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config: malformed section header " + where(lineno));
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ConfigError("config: empty section name " + where(lineno));
      continue;
    }
    insert_entry(out, section, line, lineno);
  }
  return out;
}

// Typed access over the raw map; reading a key marks it consumed so leftovers
// can be reported as unknown keys afterwards.
class ConfigReader {
 public:
  explicit ConfigReader(ConfigMap& entries) : entries_(entries) {}

  const ConfigEntry* find(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return nullptr;
    it->second.used = true;
    return &it->second;
  }

  int line_of(const std::string& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second.line;
  }

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  std::optional<std::string> text(const std::string& key) {
    const ConfigEntry* e = find(key);
    if (!e) return std::nullopt;
    if (e->value.empty())
      throw ConfigError("config: empty value for key '" + key + "' " +
                        where(e->line));
    return e->value;
  }

  static double to_number(const std::string& v, const std::string& key,
                          int line) {
    const char* s = v.c_str();
    char* end = nullptr;
    const double x = std::strtod(s, &end);
    if (end == s || *end != '\0' || !std::isfinite(x))
      throw ConfigError("config: cannot parse number '" + v + "' for key '" +
                        key + "' " + where(line));
    return x;
  }

  std::optional<double> number(const std::string& key) {
    const ConfigEntry* e = find(key);
    if (!e) return std::nullopt;
    return to_number(e->value, key, e->line);
  }

  std::optional<int> integer(const std::string& key) {
    const ConfigEntry* e = find(key);
    if (!e) return std::nullopt;
    const double x = to_number(e->value, key, e->line);
    const int k = static_cast<int>(std::llround(x));
    if (std::abs(x - k) > 1e-9)
      throw ConfigError("config: expected an integer for key '" + key + "' " +
                        where(e->line));
    return k;
  }

  static std::vector<std::string> split(const std::string& v, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
      const auto pos = v.find(sep, start);
      parts.push_back(trim(v.substr(start, pos - start)));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    return parts;
  }

  std::optional<std::vector<double>> number_list(const std::string& key) {
    const ConfigEntry* e = find(key);
    if (!e) return std::nullopt;
    std::vector<double> out;
    for (const std::string& part : split(e->value, ','))
      out.push_back(to_number(part, key, e->line));
    if (out.empty())
      throw ConfigError("config: empty list for key '" + key + "' " +
                        where(e->line));
    return out;
  }

  // "angle:time" pairs, comma separated.
  std::optional<std::vector<std::pair<double, double>>> pair_list(
      const std::string& key) {
    const ConfigEntry* e = find(key);
    if (!e) return std::nullopt;
    std::vector<std::pair<double, double>> out;
    for (const std::string& part : split(e->value, ',')) {
      const auto colon = part.find(':');
      if (colon == std::string::npos)
        throw ConfigError("config: expected angle:time for key '" + key +
                          "' " + where(e->line));
      out.emplace_back(to_number(trim(part.substr(0, colon)), key, e->line),
                       to_number(trim(part.substr(colon + 1)), key, e->line));
    }
    return out;
  }

  void reject_unused() const {
    const ConfigEntry* worst = nullptr;
    std::string name;
    for (const auto& [key, entry] : entries_) {
      if (entry.used) continue;
      if (!worst || entry.line < worst->line) {
        worst = &entry;
        name = key;
      }
    }
    if (worst)
      throw ConfigError("config: unknown key '" + name + "' " +
                        where(worst->line));
  }

 private:
  ConfigMap& entries_;
};

inline PacketShape parse_packet_shape(const std::string& v, int line) {
  if (v == "gaussian") return PacketShape::gaussian;
  if (v == "square") return PacketShape::square;
  if (v == "lorentzian") return PacketShape::lorentzian;
  if (v == "exponential") return PacketShape::exponential;
  throw ConfigError("config: unknown packet shape '" + v + "' " + where(line));
}

inline PotentialShape parse_potential_shape(const std::string& v, int line) {
  if (v == "gaussian") return PotentialShape::gaussian;
  if (v == "square") return PotentialShape::square;
  if (v == "lorentzian") return PotentialShape::lorentzian;
  throw ConfigError("config: unknown potential shape '" + v + "' " +
                    where(line));
}

inline RunMode parse_run_mode(const std::string& v, int line) {
  if (v == "run1d") return RunMode::run1d;
  if (v == "run2d") return RunMode::run2d;
  if (v == "oracle") return RunMode::oracle;
  if (v == "analyze") return RunMode::analyze;
  if (v == "compare") return RunMode::compare;
  throw ConfigError("config: unknown mode '" + v + "' " + where(line));
}

}  // namespace detail

// Parse and fully validate a config document. `overrides` are key=value
// strings using the flattened section.key spelling (e.g. "packet.q=1.5");
// they replace whatever the document said.
inline RunConfig parse_config(const std::string& text,
                              const std::vector<std::string>& overrides = {}) {
  using detail::where;
  detail::ConfigMap entries = detail::parse_raw(text);
  for (const std::string& ov : overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: override must look like section.key=value: '" +
                        ov + "'");
    const std::string key = detail::trim(ov.substr(0, eq));
    if (key.empty()) throw ConfigError("config: empty override key");
    entries[key] = detail::ConfigEntry{detail::trim(ov.substr(eq + 1)), 0, false};
  }

  detail::ConfigReader r(entries);
  RunConfig c;

  // mode is the one key without a default
  {
    const detail::ConfigEntry* e = r.find("mode");
    if (!e) throw ConfigError("config: missing mode");
    c.mode = detail::parse_run_mode(e->value, e->line);
  }

  if (auto v = r.text("packet.shape"))
    c.packet.shape = detail::parse_packet_shape(*v, r.line_of("packet.shape"));
  if (auto v = r.number_list("packet.q")) {
    c.q_values = *v;
    c.packet.q = v->front();
  } else {
    c.q_values = {c.packet.q};
  }
  if (auto v = r.number("packet.x0")) c.packet.x0 = *v;
  if (auto v = r.number_list("packet.y0")) {
    c.y0_values = *v;
    c.packet.y0 = v->front();
  } else {
    c.y0_values = {c.packet.y0};
  }
  if (auto v = r.number("packet.delta")) c.packet.width = *v;

  if (auto v = r.text("potential.shape"))
    c.potential.shape =
        detail::parse_potential_shape(*v, r.line_of("potential.shape"));
  if (auto v = r.number("potential.v0")) c.potential.v0 = *v;
  if (auto v = r.number("potential.w")) c.potential.width = *v;

  if (auto v = r.number("evolution.mass")) c.mass = *v;
  if (auto v = r.number("evolution.dt")) c.dt = *v;
  if (auto v = r.number("evolution.t_final")) c.t_final = *v;
  if (auto v = r.number("evolution.dx")) c.dx = *v;
  if (auto v = r.number("evolution.box_half")) c.box_half = *v;
  if (auto v = r.number("evolution.r_max")) c.r_max = *v;
  if (auto v = r.integer("evolution.l_max")) {
    c.l_max = *v;
    c.l_max_explicit = true;
  }

  if (auto v = r.text("output.dir")) c.output_dir = *v;
  if (auto v = r.number_list("output.snapshots")) c.snapshot_times = *v;
  const bool profiles_given = r.has("output.profiles");
  if (auto v = r.pair_list("output.profiles")) c.profiles = *v;
  if (auto v = r.text("output.observables")) {
    c.obs_norm = c.obs_energy = c.obs_center = c.obs_per_l = false;
    for (const std::string& flag : detail::ConfigReader::split(*v, ',')) {
      if (flag == "norm") c.obs_norm = true;
      else if (flag == "energy") c.obs_energy = true;
      else if (flag == "center_amplitude") c.obs_center = true;
      else if (flag == "per_l_norm") c.obs_per_l = true;
      else
        throw ConfigError("config: unknown observable '" + flag +
                          "' for key 'output.observables' " +
                          where(r.line_of("output.observables")));
    }
  }
  if (auto v = r.text("output.profile_field")) {
    if (*v == "psi") c.profile_field = ProfileField::sqrt_scaled;
    else if (*v == "phi") c.profile_field = ProfileField::bare;
    else
      throw ConfigError("config: profile_field must be psi or phi " +
                        where(r.line_of("output.profile_field")));
  }
  if (auto v = r.text("output.seed_label")) c.seed_label = *v;

  if (auto v = r.number("analysis.prominence")) c.prominence = *v;
  if (auto v = r.number("analysis.region_lo")) c.region_lo = *v;
  if (auto v = r.number("analysis.region_hi")) c.region_hi = *v;
  if (auto v = r.number("analysis.window_t_min")) c.window_t_min = *v;
  if (auto v = r.number("analysis.window_t_max")) c.window_t_max = *v;
  if (auto v = r.text("analysis.input_dir")) c.input_dir = *v;
  if (auto v = r.number("analysis.compare_window")) c.compare_window = *v;

  r.reject_unused();

  // ---- cross-field validation --------------------------------------------
  auto fail = [&](const std::string& msg, const std::string& key) -> void {
    throw ConfigError("config: " + msg + " (key '" + key + "' " +
                      where(r.line_of(key)) + ")");
  };

  if (!(c.packet.width > 0.0)) fail("delta must be positive", "packet.delta");
  if (!std::isfinite(c.packet.q)) fail("q must be finite", "packet.q");
  if (!std::isfinite(c.packet.x0)) fail("x0 must be finite", "packet.x0");
  if (!std::isfinite(c.packet.y0)) fail("y0 must be finite", "packet.y0");
  if (c.potential.v0 < 0.0) fail("v0 (depth) must be non-negative", "potential.v0");
  if (!(c.potential.width > 0.0)) fail("w must be positive", "potential.w");
  if (!(c.mass > 0.0)) fail("mass must be positive", "evolution.mass");
  if (c.dt < 0.0) fail("dt must be positive", "evolution.dt");
  if (!(c.t_final > 0.0) && c.mode != RunMode::analyze)
    fail("t_final must be positive", "evolution.t_final");
  if (c.dx < 0.0) fail("dx must be positive", "evolution.dx");
  if (c.box_half < 0.0) fail("box_half must be positive", "evolution.box_half");
  if (c.r_max < 0.0) fail("r_max must be positive", "evolution.r_max");
  if (c.l_max_explicit && c.l_max < 1)
    fail("l_max must be at least 1", "evolution.l_max");
  if (!(c.prominence > 0.0 && c.prominence <= 1.0))
    fail("prominence must lie in (0, 1]", "analysis.prominence");
  if (c.compare_window < 0.0)
    fail("compare_window must be positive", "analysis.compare_window");
  if (c.window_t_min < 0.0 || c.window_t_max < 0.0 ||
      (c.window_t_max > 0.0 && c.window_t_max <= c.window_t_min))
    fail("decay window must satisfy 0 <= t_min < t_max",
         "analysis.window_t_max");

  for (double q : c.q_values)
    if (!std::isfinite(q)) fail("non-finite momentum", "packet.q");
  for (double ts : c.snapshot_times)
    if (ts < 0.0 || ts > c.t_final)
      fail("snapshot time outside [0, t_final]", "output.snapshots");
  for (const auto& [angle, ts] : c.profiles) {
    (void)angle;
    if (ts < 0.0 || ts > c.t_final)
      fail("profile time outside [0, t_final]", "output.profiles");
  }

  const bool q_sweep = c.q_values.size() > 1;
  const bool y0_sweep = c.y0_values.size() > 1;
  switch (c.mode) {
    case RunMode::run1d:
      if (c.packet.y0 != 0.0 || y0_sweep)
        fail("y0 is only meaningful for run2d", "packet.y0");
      if (q_sweep) fail("momentum sweeps are only supported in run2d", "packet.q");
      if (profiles_given)
        fail("angular profiles are only produced by run2d", "output.profiles");
      break;
    case RunMode::run2d:
      if (c.packet.shape != PacketShape::gaussian)
        fail("run2d supports gaussian packets only", "packet.shape");
      if (c.obs_center)
        fail("the center_amplitude series is 1D-only", "output.observables");
      break;
    case RunMode::oracle:
    case RunMode::compare:
      if (c.packet.shape != PacketShape::square)
        fail("this mode requires a square packet", "packet.shape");
      if (c.potential.shape != PotentialShape::square)
        fail("this mode requires a square well", "potential.shape");
      if (c.packet.y0 != 0.0 || y0_sweep || q_sweep)
        fail("this mode is strictly one-dimensional", "packet.y0");
      break;
    case RunMode::analyze:
      if (c.input_dir.empty())
        fail("analyze mode needs an input run directory",
             "analysis.input_dir");
      break;
  }

  // ---- defaults that depend on other fields ------------------------------
  if (c.snapshot_times.empty() && c.mode != RunMode::analyze)
    c.snapshot_times = {0.25 * c.t_final, 0.5 * c.t_final, 0.75 * c.t_final,
                        c.t_final};
  if (c.profiles.empty() && c.mode == RunMode::run2d)
    c.profiles = {{0.0, c.t_final}, {90.0, c.t_final}, {180.0, c.t_final}};

  return c;
}

// The resolved configuration as ordered key/value text, used for the manifest
// echo and for byte-stable round-trips.
inline std::vector<std::pair<std::string, std::string>> flatten_config(
    const RunConfig& c) {
  std::vector<std::pair<std::string, std::string>> out;
  auto num = [](double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf);
  };
  auto list = [&](const std::vector<double>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i)
      s += (i ? "," : "") + num(xs[i]);
    return s;
  };
  out.emplace_back("mode", to_string(c.mode));
  out.emplace_back("packet.shape", to_string(c.packet.shape));
  out.emplace_back("packet.q", list(c.q_values));
  out.emplace_back("packet.x0", num(c.packet.x0));
  out.emplace_back("packet.y0", list(c.y0_values));
  out.emplace_back("packet.delta", num(c.packet.width));
  out.emplace_back("potential.shape", to_string(c.potential.shape));
  out.emplace_back("potential.v0", num(c.potential.v0));
  out.emplace_back("potential.w", num(c.potential.width));
  out.emplace_back("evolution.mass", num(c.mass));
  out.emplace_back("evolution.dt", c.dt > 0.0 ? num(c.dt) : "auto");
  out.emplace_back("evolution.t_final", num(c.t_final));
  out.emplace_back("evolution.dx", c.dx > 0.0 ? num(c.dx) : "auto");
  if (c.mode == RunMode::run2d) {
    out.emplace_back("evolution.r_max",
                     c.r_max > 0.0 ? num(c.r_max) : "auto");
    out.emplace_back("evolution.l_max",
                     c.l_max_explicit ? std::to_string(c.l_max) : "auto");
  } else {
    out.emplace_back("evolution.box_half",
                     c.box_half > 0.0 ? num(c.box_half) : "auto");
  }
  out.emplace_back("output.snapshots", list(c.snapshot_times));
  if (c.mode == RunMode::run2d) {
    std::string s;
    for (std::size_t i = 0; i < c.profiles.size(); ++i)
      s += (i ? "," : "") + num(c.profiles[i].first) + ":" +
           num(c.profiles[i].second);
    out.emplace_back("output.profiles", s);
    out.emplace_back("output.profile_field",
                     c.profile_field == ProfileField::bare ? "phi" : "psi");
  }
  {
    std::string s;
    if (c.obs_norm) s += "norm";
    if (c.obs_energy) s += std::string(s.empty() ? "" : ",") + "energy";
    if (c.obs_center) s += std::string(s.empty() ? "" : ",") + "center_amplitude";
    if (c.obs_per_l) s += std::string(s.empty() ? "" : ",") + "per_l_norm";
    out.emplace_back("output.observables", s);
  }
  if (!c.seed_label.empty()) out.emplace_back("output.seed_label", c.seed_label);
  if (c.mode == RunMode::analyze || c.mode == RunMode::compare) {
    out.emplace_back("analysis.prominence", num(c.prominence));
    if (!c.input_dir.empty()) out.emplace_back("analysis.input_dir", c.input_dir);
  }
  return out;
}

}  // namespace wavepacket
