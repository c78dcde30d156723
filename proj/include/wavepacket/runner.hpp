#pragma once

// Run orchestration: dispatch a validated RunConfig to the physics modules,
// write the requested CSV artifacts, and emit a manifest whose presence marks
// a completed run. Any module error propagates after partial outputs are
// flushed; the manifest is only ever written on success.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "wavepacket/analysis.hpp"
#include "wavepacket/cayley.hpp"
#include "wavepacket/config.hpp"
#include "wavepacket/contour.hpp"
#include "wavepacket/csv.hpp"
#include "wavepacket/errors.hpp"
#include "wavepacket/grid.hpp"
#include "wavepacket/model.hpp"
#include "wavepacket/partial_waves.hpp"
#include "wavepacket/squarewell.hpp"
#include "wavepacket/version.hpp"

namespace wavepacket {

// The norm-conservation gate every evolving run must clear before its
// manifest is written.
inline constexpr double kNormDriftGate = 1e-4;

struct ExecutionReport {
  std::string dir;
  double wall_seconds = 0.0;
  double norm_drift = 0.0;
  std::vector<std::string> sub_runs;  // populated by sweep configs
};

namespace detail {

// Compact numeric tag for filenames: %g with '.' -> 'p' and '-' -> 'm', so
// "snapshot_t12.5" becomes snapshot_t12p5 only when fractional.
inline std::string file_tag(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", x);
  std::string s(buf);
  for (char& ch : s) {
    if (ch == '.') ch = 'p';
    if (ch == '-') ch = 'm';
  }
  return s;
}

inline std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return std::string(buf);
}

struct StopWatch {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  }
};

inline void append_config_echo(
    std::vector<std::pair<std::string, std::string>>& fields,
    const RunConfig& cfg) {
  fields.emplace_back("version", version_string);
  for (const auto& [k, v] : flatten_config(cfg))
    fields.emplace_back("config." + k, v);
}

// ---------------------------------------------------------------------------
// 1D runs (also the simulation half of compare mode)

struct Run1DArtifacts {
  Grid1D grid;
  double dt = 0.0;
  ComplexField1D field;  // final state
  EvolutionRecord record;
};

inline Run1DArtifacts simulate_1d(const RunConfig& cfg, RunWriter& out) {
  const double dx = resolved_dx(cfg);
  const double box = resolved_box_half(cfg);
  const Grid1D grid = make_grid(-box, box, dx);
  const double dt = resolved_dt(cfg, grid.dx());

  std::vector<double> v = sample_potential_cell_mean(cfg.potential, grid);
  ComplexField1D f = make_packet_1d(cfg.packet, grid);

  ObserverConfig obs;
  obs.sample_every = 100;
  obs.snapshot_times = cfg.snapshot_times;
  obs.record_center = cfg.obs_center;
  obs.probe_x = 0.0;

  EvolutionRecord rec =
      evolve(f, v, EvolutionParams{cfg.mass, dt}, cfg.t_final, obs);

  // requested times and recorded snapshots are both ascending, so they pair up
  std::vector<double> wanted = cfg.snapshot_times;
  std::sort(wanted.begin(), wanted.end());
  for (std::size_t i = 0; i < rec.snapshots.size(); ++i)
    out.write("snapshot_t" + file_tag(wanted[i]) + ".csv",
              snapshot_csv(rec.snapshots[i].field));

  ObservableColumns cols;
  cols.norm = true;  // norm is the health signal; always emitted
  cols.energy = cfg.obs_energy;
  cols.center_amplitude = cfg.obs_center;
  out.write("observables.csv", observables_csv(rec, cols));

  if (rec.norm_drift > kNormDriftGate)
    throw NumericError("run: norm drift " + format_number(rec.norm_drift) +
                       " exceeds the gate " + format_number(kNormDriftGate));

  return Run1DArtifacts{grid, dt, std::move(f), std::move(rec)};
}

inline void describe_run_1d(
    std::vector<std::pair<std::string, std::string>>& fields,
    const Run1DArtifacts& art) {
  fields.emplace_back("grid.dx", format_number(art.grid.dx()));
  fields.emplace_back("grid.x_min", format_number(art.grid.x_min));
  fields.emplace_back("grid.x_max", format_number(art.grid.x_max));
  fields.emplace_back("grid.nodes", std::to_string(art.grid.n));
  fields.emplace_back("grid.dt", format_number(art.dt));
  fields.emplace_back("grid.steps", std::to_string(art.record.steps));
  fields.emplace_back("result.t_final", format_number(art.record.t_final));
  fields.emplace_back("result.norm_drift",
                      format_number(art.record.norm_drift));
}

inline ExecutionReport execute_run1d(const RunConfig& cfg) {
  StopWatch watch;
  RunWriter out(cfg.output_dir);
  Run1DArtifacts art = simulate_1d(cfg, out);

  std::vector<std::pair<std::string, std::string>> fields;
  fields.emplace_back("mode", "run1d");
  fields.emplace_back("completed", "true");
  append_config_echo(fields, cfg);
  describe_run_1d(fields, art);
  ExecutionReport rep;
  rep.dir = out.dir();
  rep.norm_drift = art.record.norm_drift;
  rep.wall_seconds = watch.seconds();
  fields.emplace_back("result.wall_seconds", format_number(rep.wall_seconds));
  out.finish(fields);
  return rep;
}

// ---------------------------------------------------------------------------
// 2D runs

inline ExecutionReport execute_single_run2d(const RunConfig& cfg,
                                            const std::string& dir) {
  StopWatch watch;
  RunWriter out(dir);

  const double dx = resolved_dx(cfg);
  const double r_max = resolved_r_max(cfg);
  const Grid1D grid = make_grid(0.0, r_max, dx);
  const double dt = resolved_dt(cfg, grid.dx());
  const int l_max = resolved_l_max(cfg, cfg.packet.y0);

  PartialWaveSet set = make_packet_2d(cfg.packet, grid, l_max);
  const double captured = set.captured_fraction;
  std::vector<double> initial_norms = set.per_l_norms();

  // every profile time doubles as a snapshot time
  std::set<double> times;
  for (const auto& [angle, ts] : cfg.profiles) {
    (void)angle;
    times.insert(ts);
  }
  Observer2DConfig obs;
  obs.sample_every = 100;
  obs.snapshot_times.assign(times.begin(), times.end());

  Evolution2DRecord rec = evolve_2d(set, cfg.potential,
                                    EvolutionParams{cfg.mass, dt},
                                    cfg.t_final, obs);

  for (const auto& [angle, ts] : cfg.profiles) {
    // find the snapshot recorded for this time (ascending, unique)
    std::size_t idx = 0;
    for (std::size_t i = 0; i < obs.snapshot_times.size(); ++i)
      if (obs.snapshot_times[i] == ts) idx = i;
    const AngularProfile prof = reconstruct_profile(
        rec.snapshots[idx].set, angle, ts, cfg.profile_field);
    out.write("profile_a" + file_tag(angle) + "_t" + file_tag(ts) + ".csv",
              profile_csv(prof, cfg.profile_field));
  }

  out.write("observables.csv", norm_series_csv(rec.total_norm));
  if (cfg.obs_per_l) out.write("per_l_norm.csv", per_l_norm_csv(set));

  if (rec.norm_drift > kNormDriftGate)
    throw NumericError("run: norm drift " + format_number(rec.norm_drift) +
                       " exceeds the gate " + format_number(kNormDriftGate));

  std::vector<std::pair<std::string, std::string>> fields;
  fields.emplace_back("mode", "run2d");
  fields.emplace_back("completed", "true");
  append_config_echo(fields, cfg);
  fields.emplace_back("grid.dx", format_number(grid.dx()));
  fields.emplace_back("grid.r_max", format_number(grid.x_max));
  fields.emplace_back("grid.nodes", std::to_string(grid.n));
  fields.emplace_back("grid.dt", format_number(dt));
  fields.emplace_back("grid.steps", std::to_string(rec.steps));
  fields.emplace_back("grid.l_max", std::to_string(l_max));
  fields.emplace_back("result.t_final", format_number(rec.t_final));
  fields.emplace_back("result.captured_fraction", format_number(captured));
  fields.emplace_back("result.norm_drift", format_number(rec.norm_drift));

  ExecutionReport rep;
  rep.dir = out.dir();
  rep.norm_drift = rec.norm_drift;
  rep.wall_seconds = watch.seconds();
  fields.emplace_back("result.wall_seconds", format_number(rep.wall_seconds));
  out.finish(fields);
  return rep;
}

inline ExecutionReport execute_run2d(const RunConfig& cfg) {
  const bool q_sweep = cfg.q_values.size() > 1;
  const bool y0_sweep = cfg.y0_values.size() > 1;
  if (!q_sweep && !y0_sweep) return execute_single_run2d(cfg, cfg.output_dir);

  StopWatch watch;
  ExecutionReport rep;
  rep.dir = cfg.output_dir;
  std::vector<std::pair<std::string, std::string>> fields;
  fields.emplace_back("mode", "run2d");
  fields.emplace_back("completed", "true");
  append_config_echo(fields, cfg);

  RunWriter parent(cfg.output_dir);
  for (double q : cfg.q_values) {
    for (double y0 : cfg.y0_values) {
      std::string name;
      if (q_sweep) name += "q_" + file_tag(q);
      if (y0_sweep) name += std::string(name.empty() ? "" : "_") + "y0_" + file_tag(y0);
      RunConfig sub = cfg;
      sub.packet.q = q;
      sub.packet.y0 = y0;
      sub.q_values = {q};
      sub.y0_values = {y0};
      sub.output_dir = cfg.output_dir + "/" + name;
      ExecutionReport sub_rep = execute_single_run2d(sub, sub.output_dir);
      rep.sub_runs.push_back(name);
      rep.norm_drift = std::max(rep.norm_drift, sub_rep.norm_drift);
      fields.emplace_back("sub_run." + name, "completed");
    }
  }
  rep.wall_seconds = watch.seconds();
  fields.emplace_back("result.norm_drift", format_number(rep.norm_drift));
  fields.emplace_back("result.wall_seconds", format_number(rep.wall_seconds));
  parent.finish(fields);
  return rep;
}

// ---------------------------------------------------------------------------
// Oracle evaluation and oracle-vs-numeric comparison

inline SquareWell oracle_well(const RunConfig& cfg) {
  return SquareWell{cfg.potential.v0, cfg.potential.width, cfg.mass};
}

// Thin the sample set so a semi-analytic evaluation over a wide window stays
// affordable; the quadrature cost scales with the point count.
inline std::vector<double> comparison_points(const Grid1D& grid, double window,
                                             std::size_t max_points = 2001) {
  std::vector<std::size_t> inside;
  for (std::size_t j = 0; j < grid.n; ++j)
    if (std::abs(grid.x(j)) <= window) inside.push_back(j);
  if (inside.empty())
    throw ConfigError("compare: the window excludes every grid node");
  const std::size_t stride = 1 + (inside.size() - 1) / max_points;
  std::vector<double> xs;
  for (std::size_t i = 0; i < inside.size(); i += stride)
    xs.push_back(grid.x(inside[i]));
  return xs;
}

inline double oracle_flux_defect(const SquareWell& well, double p_max) {
  double worst = 0.0;
  for (int j = 1; j <= 400; ++j) {
    const double p = p_max * j / 400.0;
    const ScatterAmplitudes s = scatter_amplitudes(well, cplx(p, 0.0));
    worst = std::max(worst,
                     std::abs(std::norm(s.T) + std::norm(s.R) - 1.0));
  }
  return worst;
}

inline ExecutionReport execute_oracle(const RunConfig& cfg) {
  StopWatch watch;
  RunWriter out(cfg.output_dir);

  const SquareWell well = oracle_well(cfg);
  const SquareWellOracle oracle(well, cfg.packet);

  const double defect = oracle_flux_defect(well, oracle.p_max());
  if (defect > 1e-10)
    throw NumericError("oracle: flux conservation defect " +
                       format_number(defect));

  const double window = resolved_compare_window(cfg);
  const double dx = resolved_dx(cfg);
  const Grid1D grid = make_grid(-window, window, dx);
  const std::vector<double> xs = comparison_points(grid, window);

  for (double ts : cfg.snapshot_times) {
    std::vector<cplx> psi = oracle.evaluate(xs, ts);
    std::string csv = "x,re,im,abs\n";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      csv += csv_number(xs[i]);
      csv += ',';
      csv += csv_number(psi[i].real());
      csv += ',';
      csv += csv_number(psi[i].imag());
      csv += ',';
      csv += csv_number(std::abs(psi[i]));
      csv += '\n';
    }
    out.write("oracle_t" + file_tag(ts) + ".csv", csv);
  }

  std::vector<std::pair<std::string, double>> metrics;
  metrics.emplace_back("flux_defect", defect);
  metrics.emplace_back("bound_states",
                       static_cast<double>(oracle.bound_kappas().size()));
  for (std::size_t i = 0; i < oracle.bound_kappas().size(); ++i)
    metrics.emplace_back("kappa_" + std::to_string(i),
                         oracle.bound_kappas()[i]);
  out.write("metrics.csv", metrics_csv(metrics));

  std::vector<std::pair<std::string, std::string>> fields;
  fields.emplace_back("mode", "oracle");
  fields.emplace_back("completed", "true");
  append_config_echo(fields, cfg);
  fields.emplace_back("result.flux_defect", format_number(defect));
  ExecutionReport rep;
  rep.dir = out.dir();
  rep.wall_seconds = watch.seconds();
  fields.emplace_back("result.wall_seconds", format_number(rep.wall_seconds));
  out.finish(fields);
  return rep;
}

inline ExecutionReport execute_compare(const RunConfig& cfg) {
  StopWatch watch;
  RunWriter out(cfg.output_dir);
  Run1DArtifacts art = simulate_1d(cfg, out);

  const SquareWell well = oracle_well(cfg);
  const SquareWellOracle oracle(well, cfg.packet);
  const double window = resolved_compare_window(cfg);
  const std::vector<double> xs = comparison_points(art.grid, window);
  const std::vector<cplx> reference = oracle.evaluate(xs, art.record.t_final);

  double peak = 0.0, worst = 0.0, sumsq = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double sim =
        std::abs(art.field.psi[art.grid.index_near(xs[i])]);
    const double ref = std::abs(reference[i]);
    peak = std::max(peak, ref);
    const double d = std::abs(sim - ref);
    worst = std::max(worst, d);
    sumsq += d * d;
  }
  const double rms = std::sqrt(sumsq / static_cast<double>(xs.size()));

  std::string csv = "x,abs_sim,abs_oracle\n";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    csv += csv_number(xs[i]);
    csv += ',';
    csv +=
        csv_number(std::abs(art.field.psi[art.grid.index_near(xs[i])]));
    csv += ',';
    csv += csv_number(std::abs(reference[i]));
    csv += '\n';
  }
  out.write("overlay_t" + file_tag(art.record.t_final) + ".csv", csv);

  std::vector<std::pair<std::string, double>> metrics;
  metrics.emplace_back("max_abs_deviation", worst);
  metrics.emplace_back("rms_deviation", rms);
  metrics.emplace_back("window_peak", peak);
  metrics.emplace_back("max_over_peak", peak > 0.0 ? worst / peak : 0.0);
  out.write("diff.csv", metrics_csv(metrics));

  std::vector<std::pair<std::string, std::string>> fields;
  fields.emplace_back("mode", "compare");
  fields.emplace_back("completed", "true");
  append_config_echo(fields, cfg);
  describe_run_1d(fields, art);
  fields.emplace_back("result.max_abs_deviation", format_number(worst));
  fields.emplace_back("result.rms_deviation", format_number(rms));
  ExecutionReport rep;
  rep.dir = out.dir();
  rep.norm_drift = art.record.norm_drift;
  rep.wall_seconds = watch.seconds();
  fields.emplace_back("result.wall_seconds", format_number(rep.wall_seconds));
  out.finish(fields);
  return rep;
}

// ---------------------------------------------------------------------------
// Analyze mode: pure post-processing of an existing run directory.

inline std::vector<std::string> list_files(const std::string& dir,
                                           const std::string& prefix,
                                           const std::string& suffix) {
  if (!std::filesystem::is_directory(dir))
    throw ConfigError("analyze: not a directory: " + dir);
  std::vector<std::string> names;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name.rfind(prefix, 0) == 0 && name.size() > suffix.size() &&
        name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0)
      names.push_back(name);
  }
  std::sort(names.begin(), names.end());
  return names;
}

// numeric value encoded by file_tag, e.g. "t12p5" -> 12.5
inline double parse_file_tag(std::string s) {
  for (char& ch : s) {
    if (ch == 'p') ch = '.';
    if (ch == 'm') ch = '-';
  }
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (end == s.c_str()) throw ConfigError("analyze: bad file tag '" + s + "'");
  return x;
}

inline ExecutionReport execute_analyze(const RunConfig& cfg) {
  StopWatch watch;
  const std::string& src = cfg.input_dir;
  RunWriter out(cfg.output_dir);

  std::vector<FitRow> fits;
  std::vector<std::pair<std::string, std::string>> fields;
  fields.emplace_back("mode", "analyze");
  fields.emplace_back("completed", "true");
  fields.emplace_back("version", version_string);
  fields.emplace_back("analysis.input_dir", src);

  const std::vector<std::string> snaps = list_files(src, "snapshot_t", ".csv");
  const std::vector<std::string> profiles = list_files(src, "profile_a", ".csv");
  if (snaps.empty() && profiles.empty())
    throw ConfigError("analyze: no snapshot or profile files in " + src);

  if (!snaps.empty()) {
    // latest snapshot: the reflected train is the long-time structure
    std::string latest = snaps.front();
    double t_latest = parse_file_tag(
        latest.substr(std::string("snapshot_t").size(),
                      latest.size() - std::string("snapshot_t").size() - 4));
    for (const std::string& name : snaps) {
      const double t = parse_file_tag(
          name.substr(std::string("snapshot_t").size(),
                      name.size() - std::string("snapshot_t").size() - 4));
      if (t > t_latest) {
        t_latest = t;
        latest = name;
      }
    }
    const CsvTable tab = load_csv(src + "/" + latest);
    const std::vector<double>& x = tab.column("x");
    const std::vector<double>& a = tab.column("abs");

    const double lo = std::isnan(cfg.region_lo) ? x.front() : cfg.region_lo;
    const double hi =
        std::isnan(cfg.region_hi) ? -5.0 * cfg.potential.width : cfg.region_hi;
    const PeakTrain train = detect_peaks(x, a, lo, hi, cfg.prominence);
    out.write("peaks.csv", peaks_csv(train));
    fields.emplace_back("result.peak_count", std::to_string(train.count()));
    fields.emplace_back("result.analyzed_snapshot", latest);

    if (auto env = fit_envelope(x, a, lo, hi, cfg.prominence)) {
      fits.push_back({"envelope_amplitude", env->amplitude, env->residual});
      fits.push_back({"envelope_lambda", env->lambda, env->residual});
      fits.push_back({"envelope_k", env->k, env->residual});
      fits.push_back({"envelope_phase", env->phase, env->residual});
    }
    if (train.count() >= 3) {
      fits.push_back({"peak_mean_spacing", train.mean_spacing, train.spacing_cv});
    }
  }

  for (const std::string& name : profiles) {
    const CsvTable tab = load_csv(src + "/" + name);
    const std::vector<double>& r = tab.column("r");
    const std::vector<double> a = tab.has_column("abs_psi")
                                      ? tab.column("abs_psi")
                                      : tab.column("abs");
    const double lo =
        std::isnan(cfg.region_lo) ? 2.0 * cfg.potential.width : cfg.region_lo;
    const double hi = std::isnan(cfg.region_hi) ? 0.9 * r.back() : cfg.region_hi;
    const PeakTrain train = detect_peaks(r, a, lo, hi, cfg.prominence);
    const std::string stem = name.substr(0, name.size() - 4);
    out.write("peaks_" + stem + ".csv", peaks_csv(train));
    fields.emplace_back("result.peak_count." + stem,
                        std::to_string(train.count()));

    // a bare-field profile carries enough to read the interior wave
    if (tab.has_column("re") && tab.has_column("im")) {
      const std::vector<double>& re = tab.column("re");
      const std::vector<double>& im = tab.column("im");
      std::vector<cplx> phi(r.size());
      for (std::size_t i = 0; i < r.size(); ++i) phi[i] = cplx(re[i], im[i]);
      if (auto wave = interior_wavenumber(r, phi, cfg.potential.width,
                                          cfg.mass, cfg.potential.v0)) {
        fits.push_back({"interior_k_prime@" + stem, wave->k_prime, 0.0});
        fits.push_back({"interior_n@" + stem,
                        static_cast<double>(wave->n_wavelengths), 0.0});
        fits.push_back({"interior_k_squared@" + stem, wave->k_squared, 0.0});
      }
    }
  }

  // decay of the amplitude at the origin, when the run recorded it
  const std::string obs_path = src + "/observables.csv";
  if (std::filesystem::exists(obs_path)) {
    const CsvTable tab = load_csv(obs_path);
    if (tab.has_column("center_amplitude")) {
      const std::vector<double>& t = tab.column("t");
      const std::vector<double>& c = tab.column("center_amplitude");
      const double t_last = t.back();
      const double w_min =
          cfg.window_t_min > 0.0 ? cfg.window_t_min : 0.1 * t_last;
      const double w_max = cfg.window_t_max > 0.0 ? cfg.window_t_max : t_last;
      const PowerLawFit pow_fit = fit_power_law(t, c, w_min, w_max);
      const ExponentialFit exp_fit = fit_exponential(t, c, w_min, w_max);
      fits.push_back({"decay_exponent", pow_fit.exponent, pow_fit.residual});
      fits.push_back({"decay_prefactor", pow_fit.prefactor, pow_fit.residual});
      fits.push_back(
          {"exponential_rate", exp_fit.rate, exp_fit.residual});
      fields.emplace_back("result.decay_window",
                          format_number(w_min) + ".." + format_number(w_max));
    }
  }

  out.write("fits.csv", fits_csv(fits));

  ExecutionReport rep;
  rep.dir = out.dir();
  rep.wall_seconds = watch.seconds();
  fields.emplace_back("result.wall_seconds", format_number(rep.wall_seconds));
  out.finish(fields);
  return rep;
}

}  // namespace detail

inline ExecutionReport execute(const RunConfig& cfg) {
  switch (cfg.mode) {
    case RunMode::run1d: return detail::execute_run1d(cfg);
    case RunMode::run2d: return detail::execute_run2d(cfg);
    case RunMode::oracle: return detail::execute_oracle(cfg);
    case RunMode::compare: return detail::execute_compare(cfg);
    case RunMode::analyze: return detail::execute_analyze(cfg);
  }
  throw ConfigError("unreachable mode");
}

}  // namespace wavepacket
