// Acceptance gate: eleven numbered criteria, one [PASS]/[FAIL] line each,
// exit code = number of failures in the executed tier.
//
//   acceptance [--tier standard|long] [--only C<n>]
//
// The standard tier covers every criterion that finishes in minutes; the
// long tier runs the t=5000 endurance pieces (the C2 persistence variant
// and the C4 decay-law fit, about ten minutes of single-core work).
// Criteria not in the selected tier are reported as [SKIP] and do not
// count as failures. Tolerances are pinned in the checks themselves.

#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "wavepacket/analysis.hpp"
#include "wavepacket/cayley.hpp"
#include "wavepacket/config.hpp"
#include "wavepacket/contour.hpp"
#include "wavepacket/csv.hpp"
#include "wavepacket/model.hpp"
#include "wavepacket/partial_waves.hpp"
#include "wavepacket/recipes.hpp"
#include "wavepacket/runner.hpp"

namespace fs = std::filesystem;
using namespace wavepacket;
using cplx = std::complex<double>;

namespace {

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

struct Gate {
  std::string tier = "standard";
  std::string only;  // empty = all criteria in the tier
  int passed = 0, failed = 0, skipped = 0;

  bool wants(const std::string& id, bool long_tier_item) const {
    if (long_tier_item != (tier == "long")) return false;
    return only.empty() || only == id;
  }

  void pass(const std::string& id, const std::string& what) {
    std::printf("[PASS] %s %s\n", id.c_str(), what.c_str());
    std::fflush(stdout);
    ++passed;
  }
  void fail(const std::string& id, const std::string& what) {
    std::printf("[FAIL] %s %s\n", id.c_str(), what.c_str());
    std::fflush(stdout);
    ++failed;
  }
  void skip(const std::string& id, const std::string& why) {
    std::printf("[SKIP] %s %s\n", id.c_str(), why.c_str());
    std::fflush(stdout);
    ++skipped;
  }
  void check(const std::string& id, bool ok, const std::string& what) {
    ok ? pass(id, what) : fail(id, what);
  }
};

const std::string kScratch = "acceptance_scratch";

// Parse + execute a config; [output] dir is appended. Returns the run dir.
std::string run(const std::string& body, const std::string& tag,
                double* wall = nullptr) {
  const std::string dir = kScratch + "/" + tag;
  fs::remove_all(dir);
  std::string text = body;
  if (text.find("[output]") == std::string::npos) text += "[output]\n";
  text += "dir=" + dir + "\n";
  RunConfig cfg = parse_config(text);
  std::fprintf(stderr, "  ... executing %s\n", tag.c_str());
  auto t0 = std::chrono::steady_clock::now();
  execute(cfg);
  auto t1 = std::chrono::steady_clock::now();
  if (wall) *wall = std::chrono::duration<double>(t1 - t0).count();
  return dir;
}

// Execute one of the shipped figure recipes verbatim (plus the output dir).
std::string run_recipe(const std::string& name) {
  for (const Recipe& r : figure_recipes()) {
    if (r.name != name) continue;
    const std::string dir = kScratch + "/" + name;
    fs::remove_all(dir);
    RunConfig cfg = parse_config(r.text + "dir=" + dir + "\n");
    std::fprintf(stderr, "  ... executing recipe %s\n", name.c_str());
    execute(cfg);
    return dir;
  }
  throw ConfigError("acceptance: no recipe named " + name);
}

PeakTrain peaks_in(const std::string& csv_path, const std::string& ycol,
                   double lo, double hi) {
  CsvTable t = load_csv(csv_path);
  const auto& x = t.column(t.has_column("x") ? "x" : "r");
  const auto& y = t.column(ycol);
  return detect_peaks(x, y, lo, hi, 0.05);
}

PeakTrain profile_peaks(const std::string& dir, const std::string& angle,
                        const std::string& t_tag) {
  return peaks_in(dir + "/profile_a" + angle + "_t" + t_tag + ".csv",
                  "abs_psi", 0.0, 1e9);
}

// ---------------------------------------------------------------------
// C1 + C2 (standard): narrow packet on the square well, t=200, defaults.
void c1_c2(Gate& g) {
  if (!(g.wants("C1", false) || g.wants("C2", false))) return;
  double wall = 0.0;
  const std::string dir =
      run("mode=run1d\n[evolution]\nt_final=200\n", "c1_fig1_t200", &wall);
  CsvTable obs = load_csv(dir + "/observables.csv");
  const auto& norm = obs.column("norm");
  double drift = 0.0;
  for (double n : norm) drift = std::max(drift, std::abs(n - 1.0));

  if (g.wants("C1", false))
    g.check("C1", drift < 1e-4 && wall < 60.0,
            fmt("norm conservation: drift %.2e (gate 1e-4), wall %.1fs "
                "(gate 60s)",
                drift, wall));

  if (g.wants("C2", false)) {
    PeakTrain pk = peaks_in(dir + "/snapshot_t200.csv", "abs", -1e9, -5.0);
    g.check("C2", pk.count() >= 3 && pk.spacing_cv < 0.2,
            fmt("reflected train at t=200: %zu peaks in x<-5 (need >=3), "
                "spacing_cv %.3f (gate 0.2)",
                pk.count(), pk.spacing_cv));
  }
}

// C2 (long): the train is still there at t=5000. Shares the C4 run.
// C4 (long): |psi(0)| decays as a power law over t in [500, 5000].
void c2_long_c4(Gate& g) {
  if (!(g.wants("C2", true) || g.wants("C4", true))) return;
  const std::string dir = run(
      "mode=run1d\n[evolution]\nt_final=5000\nbox_half=1000\n"
      "[output]\nobservables=norm,center_amplitude\n",
      "c4_fig1_t5000");

  if (g.wants("C2", true)) {
    PeakTrain pk = peaks_in(dir + "/snapshot_t5000.csv", "abs", -1e9, -5.0);
    g.check("C2", pk.count() >= 3,
            fmt("train persists at t=5000: %zu peaks in x<-5 (need >=3), "
                "spacing_cv %.3f",
                pk.count(), pk.spacing_cv));
  }

  if (g.wants("C4", true)) {
    CsvTable obs = load_csv(dir + "/observables.csv");
    const auto& t = obs.column("t");
    const auto& c = obs.column("center_amplitude");
    PowerLawFit pw = fit_power_law(t, c, 500.0, 5000.0);
    ExponentialFit ex = fit_exponential(t, c, 500.0, 5000.0);
    g.check("C4",
            pw.exponent > 1.35 && pw.exponent < 1.75 &&
                pw.residual < ex.residual,
            fmt("decay law: |psi(0)| ~ t^-%.3f (band [1.35,1.75]), power "
                "residual %.4f < exponential residual %.4f",
                pw.exponent, pw.residual, ex.residual));
  }
}

// C3: a wide packet on a narrow well reflects as a single lump.
void c3(Gate& g) {
  if (!g.wants("C3", false)) return;
  const std::string dir =
      run("mode=run1d\n[packet]\ndelta=2\n[potential]\nw=0.5\n"
          "[evolution]\nt_final=300\n",
          "c3_wide_t300");
  PeakTrain pk = peaks_in(dir + "/snapshot_t300.csv", "abs", -1e9, -5.0);
  g.check("C3", pk.count() <= 1,
          fmt("wide-packet null: %zu peaks in x<-5 (gate <=1)", pk.count()));
}

// C5: lattice evolution vs the contour-integral closed form at t=1000,
// plus flux unitarity of the scattering amplitudes and contour
// independence of the oracle itself.
void c5(Gate& g) {
  if (!g.wants("C5", false)) return;
  PacketSpec pk;
  pk.shape = PacketShape::square;
  pk.q = 1.0;
  pk.x0 = -10.0;
  pk.width = 0.5;
  const SquareWell well{1.0, 1.0, 20.0};

  // dt is twice the parabolic step m dx^2/2; the box is sized so that no
  // wall bounce (lattice group velocity tops out near 3.4 at this dt)
  // reaches the comparison window |x| <= 100 by t=1000.
  const double t = 1000.0, dx = 0.0125, dt = 3.125e-3;
  std::fprintf(stderr, "  ... C5 lattice evolution (about 15 minutes)\n");
  Grid1D grid = make_grid(-1800.0, 1800.0, dx);
  ComplexField1D f = make_packet_1d(pk, grid);
  PotentialSpec ps{PotentialShape::square, well.v0, well.a};
  auto v = sample_potential_cell_mean(ps, grid);
  evolve(f, v, EvolutionParams{well.mass, dt}, t);

  std::fprintf(stderr, "  ... C5 oracle evaluation\n");
  SquareWellOracle oracle(well, pk);
  std::vector<double> xs(401);
  for (std::size_t k = 0; k < xs.size(); ++k)
    xs[k] = -100.0 + 0.5 * static_cast<double>(k);
  auto psi = oracle.evaluate(xs, t);
  double peak = 0.0;
  for (const cplx& z : psi) peak = std::max(peak, std::abs(z));
  double worst = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    double sim = std::abs(f.psi[grid.index_near(xs[k])]);
    worst = std::max(worst, std::abs(sim - std::abs(psi[k])));
  }

  const double defect = detail::oracle_flux_defect(well, oracle.p_max());

  // A second detour height that still clears every bound-state pole must
  // reproduce the same field.
  ContourSpec alt;
  alt.detour_height = 8.5;
  SquareWellOracle o2(well, pk, alt);
  std::vector<double> xc(17);
  for (std::size_t k = 0; k < xc.size(); ++k)
    xc[k] = -80.0 + 10.0 * static_cast<double>(k);
  auto p1 = oracle.evaluate(xc, t);
  auto p2 = o2.evaluate(xc, t);
  double cdiff = 0.0;
  for (std::size_t k = 0; k < xc.size(); ++k)
    cdiff = std::max(cdiff, std::abs(p1[k] - p2[k]));

  g.check("C5", worst < 0.02 * peak && defect < 1e-12 && cdiff < 1e-6,
          fmt("closed form at t=1000: max deviation %.4f of peak %.4f "
              "(gate 2%%), flux defect %.1e (gate 1e-12), contour "
              "independence %.1e (gate 1e-6)",
              worst, peak, defect, cdiff));
}

// Shared text for the 2D scattering family (gaussian well, v0=1, w=2,
// packet from x0=-10): the grid matches the shipped figure recipes.
std::string cfg2d(const std::string& q_list, double y0, int l_max,
                  double delta, double w, double v0, double t_final,
                  const std::string& grid_keys) {
  const std::string tf = detail::format_number(t_final);
  std::string s = "mode=run2d\n[packet]\nq=" + q_list +
                  "\ny0=" + detail::format_number(y0) +
                  "\ndelta=" + detail::format_number(delta) +
                  "\n[potential]\nshape=gaussian\nv0=" + detail::format_number(v0) +
                  "\nw=" + detail::format_number(w) + "\n[evolution]\nmass=20\n" +
                  "t_final=" + tf + "\n" + grid_keys;
  if (l_max > 0) s += "l_max=" + std::to_string(l_max) + "\n";
  s += "[output]\nprofiles=0:" + tf + ",90:" + tf + ",180:" + tf + "\n";
  return s;
}

const std::string kGrid8 = "dx=0.04\ndt=0.016\nr_max=150\n";

// The l_max=50, q=1, y0=0 run is shared by C6 (truncation reference),
// C7 (q=1 leg) and C8 (y0=0 leg).
struct TwoDShared {
  std::string dir_l50;
};

void ensure_shared(Gate& g, TwoDShared& sh) {
  if (sh.dir_l50.empty())
    sh.dir_l50 =
        run(cfg2d("1", 0.0, 50, 0.5, 2.0, 1.0, 300.0, kGrid8), "c6_q1_l50");
  (void)g;
}

// C6: angular-momentum truncation is converged (l_max 50 vs 60).
void c6(Gate& g, TwoDShared& sh) {
  if (!g.wants("C6", false)) return;
  ensure_shared(g, sh);
  const std::string d60 =
      run(cfg2d("1", 0.0, 60, 0.5, 2.0, 1.0, 300.0, kGrid8), "c6_q1_l60");
  double peak = 0.0, dev = 0.0;
  for (const char* a : {"0", "90", "180"}) {
    CsvTable p50 = load_csv(sh.dir_l50 + "/profile_a" + a + "_t300.csv");
    CsvTable p60 = load_csv(d60 + "/profile_a" + std::string(a) +
                            "_t300.csv");
    const auto& y50 = p50.column("abs_psi");
    const auto& y60 = p60.column("abs_psi");
    for (std::size_t j = 0; j < y50.size(); ++j) {
      peak = std::max(peak, y50[j]);
      dev = std::max(dev, std::abs(y50[j] - y60[j]));
    }
  }
  g.check("C6", dev < 0.01 * peak,
          fmt("harmonic truncation: l_max 50 vs 60 profile deviation %.2e "
              "of peak %.3f (gate 1%%)",
              dev, peak));
}

// C7: the backward profile carries a train (>=3 peaks) for each launch
// momentum, and is at least as oscillatory as the forward one.
void c7(Gate& g, TwoDShared& sh) {
  if (!g.wants("C7", false)) return;
  ensure_shared(g, sh);
  const std::string sweep =
      run(cfg2d("0.5,1.5", 0.0, 50, 0.5, 2.0, 1.0, 300.0, kGrid8),
          "c7_sweep");
  struct Leg {
    const char* label;
    std::string dir;
  };
  const std::vector<Leg> legs = {{"q=0.5", sweep + "/q_0p5"},
                                 {"q=1", sh.dir_l50},
                                 {"q=1.5", sweep + "/q_1p5"}};
  bool ok = true;
  std::string detail;
  for (const Leg& leg : legs) {
    PeakTrain back = profile_peaks(leg.dir, "180", "300");
    PeakTrain fwd = profile_peaks(leg.dir, "0", "300");
    const bool leg_ok = back.count() >= 3 && back.count() >= fwd.count();
    ok = ok && leg_ok;
    detail += fmt("%s%s: 180deg %zu / 0deg %zu", detail.empty() ? "" : ", ",
                  leg.label, back.count(), fwd.count());
  }
  g.check("C7", ok,
          "backward trains at t=300 (need >=3 and 180deg >= 0deg): " +
              detail);
}

// C8: the 180-degree peak spacing barely moves with the impact parameter.
void c8(Gate& g, TwoDShared& sh) {
  if (!g.wants("C8", false)) return;
  ensure_shared(g, sh);
  // y0=3 leaves l_max unset so the run exercises the derived widening
  // (|y0| >= 2.5 lifts the default 50 to 70).
  const std::string d15 =
      run(cfg2d("1", 1.5, 50, 0.5, 2.0, 1.0, 300.0, kGrid8), "c8_y1p5");
  const std::string d30 =
      run(cfg2d("1", 3.0, 0, 0.5, 2.0, 1.0, 300.0, kGrid8), "c8_y3");

  std::vector<double> spacing;
  std::string detail;
  for (const auto& [label, dir] :
       std::vector<std::pair<std::string, std::string>>{
           {"y0=0", sh.dir_l50}, {"y0=1.5", d15}, {"y0=3", d30}}) {
    PeakTrain pk = profile_peaks(dir, "180", "300");
    spacing.push_back(pk.mean_spacing);
    detail += fmt("%s%s: spacing %.3f (%zu peaks)",
                  detail.empty() ? "" : ", ", label.c_str(),
                  pk.mean_spacing, pk.count());
  }
  double lo = spacing[0], hi = spacing[0], mean = 0.0;
  for (double s : spacing) {
    lo = std::min(lo, s);
    hi = std::max(hi, s);
    mean += s / static_cast<double>(spacing.size());
  }
  const bool ok = lo > 0.0 && (hi - lo) <= 0.15 * mean;
  g.check("C8", ok,
          "impact-parameter insensitivity (gate 15% spread): " + detail);
}

// C9: standing-wave count inside the well from the shipped bare-field
// recipes: two wavelengths for m=20, one for m=5.
void c9(Gate& g) {
  if (!g.wants("C9", false)) return;
  struct Leg {
    const char* recipe;
    double mass;
    int expect;
  };
  bool ok = true;
  std::string detail;
  for (const Leg& leg : {Leg{"fig14", 20.0, 2}, Leg{"fig15", 5.0, 1}}) {
    const std::string dir = run_recipe(leg.recipe);
    CsvTable t = load_csv(dir + "/profile_a180_t150.csv");
    const auto& r = t.column("r");
    const auto& re = t.column("re");
    const auto& im = t.column("im");
    std::vector<cplx> phi(r.size());
    for (std::size_t j = 0; j < r.size(); ++j) phi[j] = cplx(re[j], im[j]);
    auto wave = interior_wavenumber(r, phi, 2.0, leg.mass, 1.0);
    const int n = wave ? wave->n_wavelengths : 0;
    ok = ok && n == leg.expect;
    detail += fmt("%sm=%g: n=%d (expect %d, k'=%.3f)",
                  detail.empty() ? "" : ", ", leg.mass, n,
                  leg.expect, wave ? wave->k_prime : 0.0);
  }
  g.check("C9", ok, "interior standing wave at t=150: " + detail);
}

// C10: wide packet in 2D gives a single backward lump at every angle for
// each momentum; a shallow well gives a single backward lump at 180.
void c10(Gate& g) {
  if (!g.wants("C10", false)) return;
  // Wide packet, narrow well: the grid follows the figs 16-18 recipes.
  const std::string wide =
      run(cfg2d("0.5,1,1.5", 0.0, 50, 2.0, 0.5, 1.0, 300.0,
                "dx=0.025\ndt=0.00625\nr_max=110\n"),
          "c10_wide");
  bool ok = true;
  std::string detail;
  for (const char* q : {"q_0p5", "q_1", "q_1p5"}) {
    for (const char* a : {"0", "90", "180"}) {
      PeakTrain pk = profile_peaks(wide + "/" + q, a, "300");
      if (pk.count() > 1) {
        ok = false;
        detail += fmt("%s%s at %sdeg: %zu peaks",
                      detail.empty() ? "" : ", ", q, a, pk.count());
      }
    }
  }
  // Shallow well: the fig 19 recipe (v0=0.03, narrow packet).
  const std::string shallow = run_recipe("fig19");
  PeakTrain pk = profile_peaks(shallow, "180", "300");
  if (pk.count() > 1) {
    ok = false;
    detail += fmt("%sshallow at 180deg: %zu peaks",
                  detail.empty() ? "" : ", ", pk.count());
  }
  if (detail.empty()) detail = "single lump everywhere";
  g.check("C10", ok, "wide-packet and shallow-well nulls (gate <=1 peak): " +
                         detail);
}

// C11: structural properties with self-evident expected values.
void c11(Gate& g) {
  if (!g.wants("C11", false)) return;
  bool ok = true;
  std::string detail;
  auto item = [&](const char* label, bool cond, const std::string& val) {
    ok = ok && cond;
    detail += fmt("%s%s %s%s", detail.empty() ? "" : ", ", label,
                  val.c_str(), cond ? "" : " [FAILED]");
  };

  // Unitarity and energy conservation over 1000 steps through the well.
  {
    Grid1D grid = make_grid(-40.0, 40.0, 0.025);
    PacketSpec pk;  // gaussian, q=1, x0=-10, delta=0.5
    ComplexField1D f = make_packet_1d(pk, grid);
    PotentialSpec well{};  // square, v0=1, w=1
    auto v = sample_potential_cell_mean(well, grid);
    const EvolutionParams ep{20.0, 6.25e-3};
    const double e0 = energy_expectation(f, v, ep.mass);
    ObserverConfig obs;
    obs.sample_every = 1;
    EvolutionRecord rec = evolve(f, v, ep, 1000 * ep.dt, obs);
    double step_drift = 0.0;
    for (std::size_t i = 1; i < rec.norm.value.size(); ++i)
      step_drift = std::max(step_drift, std::abs(rec.norm.value[i] -
                                                 rec.norm.value[i - 1]));
    const double e1 = energy_expectation(f, v, ep.mass);
    const double e_drift = std::abs(e1 - e0) / std::abs(e0);
    item("unitarity/step", step_drift < 1e-10, fmt("%.1e", step_drift));
    item("energy/1000 steps", e_drift < 1e-8, fmt("%.1e", e_drift));

    // Time reversal: conjugate, evolve the same span, conjugate again.
    ComplexField1D f0 = make_packet_1d(pk, grid);
    ComplexField1D fr = f0;
    evolve(fr, v, ep, 500 * ep.dt);
    for (auto& z : fr.psi) z = std::conj(z);
    evolve(fr, v, ep, 500 * ep.dt);
    double rt = 0.0;
    for (std::size_t j = 0; j < fr.psi.size(); ++j)
      rt = std::max(rt, std::abs(std::conj(fr.psi[j]) - f0.psi[j]));
    item("time reversal", rt < 1e-9, fmt("%.1e", rt));
  }

  // Free-particle spreading law.
  {
    Grid1D grid = make_grid(-50.0, 50.0, 0.025);
    PacketSpec pk;
    pk.x0 = -10.0;
    ComplexField1D f = make_packet_1d(pk, grid);
    std::vector<double> zero(grid.n, 0.0);
    const double t = 40.0, m = 20.0, d = 0.5;
    evolve(f, zero, EvolutionParams{m, 6.25e-3}, t);
    const double want = d * std::sqrt(1.0 + std::pow(t / (2.0 * m * d * d), 2));
    const double got = rms_width(f);
    const double rel = std::abs(got - want) / want;
    item("free spreading", rel < 0.005, fmt("%.2e", rel));
  }

  // Mirror symmetry of a y0=0 scattering setup.
  {
    Grid1D grid = make_grid(0.0, 20.0, 0.05);
    PacketSpec pk;
    pk.x0 = -8.0;
    PartialWaveSet set = make_packet_2d(pk, grid, 30);
    PotentialSpec well{PotentialShape::gaussian, 1.0, 2.0};
    evolve_2d(set, well, EvolutionParams{20.0, 0.016}, 2.0);
    double peak = 0.0, dev = 0.0;
    for (double a : {30.0, 75.0, 120.0, 165.0}) {
      AngularProfile up = reconstruct_profile(set, a, 2.0);
      AngularProfile dn = reconstruct_profile(set, -a, 2.0);
      for (std::size_t j = 0; j < up.value.size(); ++j) {
        peak = std::max(peak, std::abs(up.value[j]));
        dev = std::max(dev, std::abs(up.value[j] - dn.value[j]));
      }
    }
    item("2d mirror", dev < 1e-8 * peak, fmt("%.1e of peak", dev / peak));
  }

  // Synthetic-fit recovery: exact model data in, planted parameters out.
  {
    std::vector<double> t, y;
    for (int i = 0; i < 400; ++i) {
      t.push_back(100.0 + 10.0 * i);
      y.push_back(2.5 * std::pow(t.back(), -1.5));
    }
    PowerLawFit pw = fit_power_law(t, y, 100.0, 4090.0);
    const bool pw_ok = std::abs(pw.exponent - 1.5) < 1e-9 &&
                       std::abs(pw.prefactor - 2.5) < 1e-9;
    item("power-law recovery", pw_ok, fmt("|d|=%.1e",
                                          std::abs(pw.exponent - 1.5)));

    std::vector<double> te, ye;
    for (int i = 0; i < 400; ++i) {
      te.push_back(10.0 * i);
      ye.push_back(0.8 * std::exp(-0.002 * te.back()));
    }
    ExponentialFit ex = fit_exponential(te, ye, 0.0, 3990.0);
    const bool ex_ok = std::abs(ex.rate - 0.002) < 1e-12 &&
                       std::abs(ex.prefactor - 0.8) < 1e-9;
    item("exponential recovery", ex_ok, fmt("|d|=%.1e",
                                            std::abs(ex.rate - 0.002)));

    std::vector<double> x, env;
    for (int i = 0; i <= 6000; ++i) {
      x.push_back(-60.0 + 0.01 * i);
      env.push_back(0.7 * std::exp(-0.06 * std::abs(x.back())) *
                    std::pow(std::sin(0.9 * x.back() + 0.4), 2));
    }
    auto fit = fit_envelope(x, env, -60.0, 0.0);
    const bool env_ok = fit && std::abs(fit->lambda - 0.06) < 1e-6 &&
                        std::abs(fit->k - 0.9) < 1e-6;
    item("envelope recovery", env_ok,
         fit ? fmt("|dl|=%.1e |dk|=%.1e", std::abs(fit->lambda - 0.06),
                   std::abs(fit->k - 0.9))
             : std::string("no fit"));
  }

  g.check("C11", ok, "property suite: " + detail);
}

}  // namespace

int main(int argc, char** argv) {
  Gate g;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--tier") && i + 1 < argc)
      g.tier = argv[++i];
    else if (!std::strcmp(argv[i], "--only") && i + 1 < argc)
      g.only = argv[++i];
    else {
      std::fprintf(stderr, "acceptance: unknown argument '%s'\n", argv[i]);
      return 64;
    }
  }
  if (g.tier != "standard" && g.tier != "long") {
    std::fprintf(stderr, "acceptance: unknown tier '%s'\n", g.tier.c_str());
    return 64;
  }
  fs::create_directories(kScratch);

  struct Entry {
    std::string id;
    bool in_standard;
    bool in_long;
    const char* label;
  };
  const std::vector<Entry> plan = {
      {"C1", true, false, "norm conservation"},
      {"C2", true, true, "polychotomous train"},
      {"C3", true, false, "wide-packet null, 1D"},
      {"C4", false, true, "decay law"},
      {"C5", true, false, "closed-form corroboration"},
      {"C6", true, false, "2D truncation convergence"},
      {"C7", true, false, "2D polychotomy and angles"},
      {"C8", true, false, "impact-parameter insensitivity"},
      {"C9", true, false, "interior standing wave"},
      {"C10", true, false, "wide-packet and shallow nulls, 2D"},
      {"C11", true, false, "property suite"},
  };

  // Announce skips up front so every criterion appears exactly once.
  for (const Entry& e : plan) {
    const bool in_tier = g.tier == "long" ? e.in_long : e.in_standard;
    const bool selected = in_tier && (g.only.empty() || g.only == e.id);
    if (!selected) g.skip(e.id, std::string(e.label) + ": not in this tier");
  }

  TwoDShared sh;
  auto guard = [&](const char* id, auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      g.fail(id, fmt("threw: %s", e.what()));
    }
  };

  guard("C1", [&] { c1_c2(g); });
  guard("C3", [&] { c3(g); });
  guard("C6", [&] { c6(g, sh); });
  guard("C7", [&] { c7(g, sh); });
  guard("C8", [&] { c8(g, sh); });
  guard("C9", [&] { c9(g); });
  guard("C10", [&] { c10(g); });
  guard("C11", [&] { c11(g); });
  guard("C5", [&] { c5(g); });
  guard("C4", [&] { c2_long_c4(g); });

  std::printf("acceptance: %d passed, %d failed, %d skipped (tier %s)\n",
              g.passed, g.failed, g.skipped, g.tier.c_str());
  return g.failed;
}
